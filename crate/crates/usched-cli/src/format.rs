//! Plain-text instance files and printed schedules.
//!
//! Instance format (DIMACS-style, 1-based):
//! ```text
//! c optional comments
//! p usched <n> <m> [T]
//! a <u> <v>        (job u precedes job v)
//! ```
//! Arcs need not be transitively closed on disk; the closure is applied at
//! load, and emission writes the closed arc set, so parse ∘ emit is the
//! identity on normalized instances.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use usched_core::{Instance, JobSet, Schedule};

/// Parses instance text, reporting the offending line number on failure.
pub fn parse_str(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, Option<usize>)> = None;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("p") => {
                if header.is_some() {
                    bail!("line {lineno}: duplicate header");
                }
                if parts.next() != Some("usched") {
                    bail!("line {lineno}: header must start with 'p usched'");
                }
                let n: usize = parts
                    .next()
                    .ok_or_else(|| anyhow!("line {lineno}: header missing n"))?
                    .parse()
                    .with_context(|| format!("line {lineno}: bad n"))?;
                let m: usize = parts
                    .next()
                    .ok_or_else(|| anyhow!("line {lineno}: header missing m"))?
                    .parse()
                    .with_context(|| format!("line {lineno}: bad m"))?;
                let t = match parts.next() {
                    Some(s) => Some(
                        s.parse::<usize>()
                            .with_context(|| format!("line {lineno}: bad deadline"))?,
                    ),
                    None => None,
                };
                if parts.next().is_some() {
                    bail!("line {lineno}: trailing tokens in header");
                }
                if m == 0 {
                    bail!("line {lineno}: m must be positive");
                }
                header = Some((n, m, t));
            }
            Some("a") => {
                let (n, _, _) =
                    header.ok_or_else(|| anyhow!("line {lineno}: arc before header"))?;
                let u: usize = parts
                    .next()
                    .ok_or_else(|| anyhow!("line {lineno}: arc missing endpoint"))?
                    .parse()
                    .with_context(|| format!("line {lineno}: bad arc endpoint"))?;
                let v: usize = parts
                    .next()
                    .ok_or_else(|| anyhow!("line {lineno}: arc missing endpoint"))?
                    .parse()
                    .with_context(|| format!("line {lineno}: bad arc endpoint"))?;
                if parts.next().is_some() {
                    bail!("line {lineno}: trailing tokens in arc");
                }
                if u == 0 || v == 0 || u > n || v > n {
                    bail!("line {lineno}: arc endpoint out of range 1..={n}");
                }
                if u == v {
                    bail!("line {lineno}: self-arc {u} -> {v}");
                }
                arcs.push((u - 1, v - 1));
            }
            Some(tok) => bail!("line {lineno}: unknown line type '{tok}'"),
            None => unreachable!("blank lines already skipped"),
        }
    }
    let (n, m, t) = header.ok_or_else(|| anyhow!("missing 'p usched' header"))?;
    Instance::new(n, m, &arcs, t).map_err(|e| anyhow!("invalid instance: {e}"))
}

pub fn parse(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Emits the normalized (transitively closed) instance.
pub fn emit_string(inst: &Instance) -> String {
    let mut out = String::new();
    match inst.deadline() {
        Some(t) => writeln!(out, "p usched {} {} {}", inst.n(), inst.m(), t).unwrap(),
        None => writeln!(out, "p usched {} {}", inst.n(), inst.m()).unwrap(),
    }
    let mut arcs = inst.arcs();
    arcs.sort_unstable();
    for (u, v) in arcs {
        writeln!(out, "a {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn emit(inst: &Instance, path: &Path) -> Result<()> {
    std::fs::write(path, emit_string(inst))
        .with_context(|| format!("writing {}", path.display()))
}

/// One line per slot: `t: j1 j2 …` (1-based jobs, slots in order).
pub fn schedule_string(sched: &Schedule) -> String {
    let mut out = String::new();
    for (i, slot) in sched.slots.iter().enumerate() {
        let jobs: Vec<String> = slot.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "{}: {}", i + 1, jobs.join(" ")).unwrap();
    }
    out
}

/// Parses the printed schedule format back; comment lines start with 'c'.
pub fn parse_schedule_str(text: &str) -> Result<Schedule> {
    let mut slots: Vec<(usize, JobSet)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| anyhow!("line {lineno}: expected 't: jobs…'"))?;
        let t: usize = head
            .trim()
            .parse()
            .with_context(|| format!("line {lineno}: bad slot number"))?;
        if t == 0 {
            bail!("line {lineno}: slots are 1-based");
        }
        let mut slot = JobSet::new();
        for tok in rest.split_whitespace() {
            let j: usize = tok
                .parse()
                .with_context(|| format!("line {lineno}: bad job '{tok}'"))?;
            if j == 0 {
                bail!("line {lineno}: jobs are 1-based");
            }
            slot.insert(j - 1);
        }
        slots.push((t, slot));
    }
    slots.sort_by_key(|&(t, _)| t);
    for (i, &(t, _)) in slots.iter().enumerate() {
        if t != i + 1 {
            bail!("slot numbers must be 1..=T without gaps (got {t})");
        }
    }
    Ok(Schedule::new(slots.into_iter().map(|(_, s)| s).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_chain() {
        let inst = parse_str("p usched 3 1\na 1 2\na 2 3\n").unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.m(), 1);
        // Closure adds 1 -> 3.
        assert!(inst.precedes(0, 2));
    }

    #[test]
    fn rejects_malformed_lines_with_numbers() {
        let err = parse_str("p usched 3 1\na 1 1\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse_str("p usched 3 1\na 1 4\n").is_err());
        assert!(parse_str("a 1 2\np usched 3 1\n").is_err());
        assert!(parse_str("p usched 2 1\na 1 2\na 2 1\n").is_err()); // cycle
        assert!(parse_str("q wrong 1 1\n").is_err());
    }

    #[test]
    fn round_trip_is_identity_on_normalized_instances() {
        let inst = parse_str("p usched 4 2 3\nc comment\na 1 2\na 2 3\n").unwrap();
        let text = emit_string(&inst);
        let again = parse_str(&text).unwrap();
        assert_eq!(emit_string(&again), text);
        assert_eq!(again.deadline(), Some(3));
    }

    #[test]
    fn round_trip_on_a_generated_corpus() {
        for seed in 0..50u64 {
            let n = 1 + (seed as usize % 12);
            let inst = crate::gen::gen_random(n, 1 + (seed as usize % 3), 0.4, 3, seed);
            let text = emit_string(&inst);
            let back = parse_str(&text).unwrap();
            assert_eq!(emit_string(&back), text, "seed {seed}");
            assert_eq!(back.arcs(), inst.arcs());
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.us");
        let inst = parse_str("p usched 5 2\na 1 3\na 2 3\na 3 5\n").unwrap();
        emit(&inst, &path).unwrap();
        let back = parse(&path).unwrap();
        assert_eq!(emit_string(&back), emit_string(&inst));
    }

    #[test]
    fn schedule_round_trip() {
        let sched = Schedule::new(vec![
            JobSet::from_iter([0, 1]),
            JobSet::from_iter([2]),
        ]);
        let text = schedule_string(&sched);
        assert_eq!(text, "1: 1 2\n2: 3\n");
        let back = parse_schedule_str(&text).unwrap();
        assert_eq!(back.slots, sched.slots);
        assert!(parse_schedule_str("1: 1\n3: 2\n").is_err());
    }
}
