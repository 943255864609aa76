//! Exact algorithms for scheduling unit jobs with precedence constraints
//! on identical machines (minimum makespan).

pub mod antichain_dp;
pub mod convolution;
pub mod dispatcher;
pub mod instance;
pub mod jobset;
pub mod matching;
pub mod oracle;
pub mod poset;
pub mod schedule;
pub mod splitter;
pub mod vc;

pub use instance::{transitive_closure, Instance, InstanceError};
pub use jobset::JobSet;
pub use schedule::{validate, Schedule, Violation};
