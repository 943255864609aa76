//! Library surface of the CLI crate: the instance file format and the
//! instance generators, shared by the binary and the test suites.

pub mod format;
pub mod gen;
