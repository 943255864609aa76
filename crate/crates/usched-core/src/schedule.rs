//! Schedules and their validation.

use crate::instance::Instance;
use crate::jobset::JobSet;
use std::fmt;

/// A (partial) schedule: an ordered sequence of timeslot job-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub slots: Vec<JobSet>,
}

impl Schedule {
    pub fn new(slots: Vec<JobSet>) -> Schedule {
        Schedule { slots }
    }

    pub fn makespan(&self) -> usize {
        self.slots.len()
    }

    /// Union of all slots.
    pub fn assigned(&self) -> JobSet {
        let mut all = JobSet::new();
        for s in &self.slots {
            all.union_with(s);
        }
        all
    }

    /// Slot index (0-based) of each job, `None` if unassigned.
    pub fn slot_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (t, s) in self.slots.iter().enumerate() {
            for j in s.iter() {
                if j < n {
                    out[j] = Some(t);
                }
            }
        }
        out
    }

    /// The same schedule run backwards; feasible for the dual instance.
    pub fn reversed(&self) -> Schedule {
        let mut slots = self.slots.clone();
        slots.reverse();
        Schedule { slots }
    }
}

/// First failing constraint found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownJob { job: usize, slot: usize },
    DuplicateJob { job: usize },
    SlotOverflow { slot: usize, size: usize, m: usize },
    ArcReversed { pred: usize, succ: usize },
    MissingJob { job: usize },
    SlotNotFull { slot: usize, size: usize, m: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownJob { job, slot } => {
                write!(f, "slot {} names unknown job {}", slot + 1, job)
            }
            Violation::DuplicateJob { job } => write!(f, "job {job} assigned twice"),
            Violation::SlotOverflow { slot, size, m } => {
                write!(f, "slot {} has {} jobs, exceeds m = {}", slot + 1, size, m)
            }
            Violation::ArcReversed { pred, succ } => {
                write!(f, "arc {pred} \u{227a} {succ} scheduled in reverse")
            }
            Violation::MissingJob { job } => write!(f, "job {job} unassigned"),
            Violation::SlotNotFull { slot, size, m } => {
                write!(f, "slot {} has {} jobs, not full (m = {})", slot + 1, size, m)
            }
        }
    }
}

/// Checks a schedule against an instance. With `require_tight`, every slot
/// must contain exactly `m` jobs and all jobs must be assigned.
pub fn validate(inst: &Instance, sched: &Schedule, require_tight: bool) -> Result<(), Violation> {
    let n = inst.n();
    let m = inst.m();
    let mut seen = JobSet::new();
    for (t, s) in sched.slots.iter().enumerate() {
        let size = s.len();
        if size > m {
            return Err(Violation::SlotOverflow { slot: t, size, m });
        }
        if require_tight && size != m {
            return Err(Violation::SlotNotFull { slot: t, size, m });
        }
        for j in s.iter() {
            if j >= n {
                return Err(Violation::UnknownJob { job: j, slot: t });
            }
            if seen.contains(j) {
                return Err(Violation::DuplicateJob { job: j });
            }
            seen.insert(j);
        }
    }
    let slot = sched.slot_of(n);
    for v in 0..n {
        let Some(tv) = slot[v] else {
            if require_tight {
                return Err(Violation::MissingJob { job: v });
            }
            continue;
        };
        for u in inst.pred(v).iter() {
            if let Some(tu) = slot[u] {
                if tu >= tv {
                    return Err(Violation::ArcReversed { pred: u, succ: v });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn js(v: &[usize]) -> JobSet {
        v.iter().copied().collect()
    }

    #[test]
    fn accepts_feasible_schedule() {
        // a≺c, b≺c, d isolated; m=2: ({a,b},{c,d}) is fine, and tight.
        let inst = Instance::new(4, 2, &[(0, 2), (1, 2)], None).unwrap();
        let sched = Schedule::new(vec![js(&[0, 1]), js(&[2, 3])]);
        assert_eq!(validate(&inst, &sched, false), Ok(()));
        assert_eq!(validate(&inst, &sched, true), Ok(()));
    }

    #[test]
    fn rejects_reversed_arc() {
        let inst = Instance::new(2, 1, &[(0, 1)], None).unwrap();
        let sched = Schedule::new(vec![js(&[1]), js(&[0])]);
        assert_eq!(
            validate(&inst, &sched, false),
            Err(Violation::ArcReversed { pred: 0, succ: 1 })
        );
    }

    #[test]
    fn rejects_overflow() {
        let inst = Instance::new(2, 1, &[], None).unwrap();
        let sched = Schedule::new(vec![js(&[0, 1])]);
        assert_eq!(
            validate(&inst, &sched, false),
            Err(Violation::SlotOverflow {
                slot: 0,
                size: 2,
                m: 1
            })
        );
    }

    #[test]
    fn tightness_checks() {
        let inst = Instance::new(3, 2, &[], None).unwrap();
        let partial = Schedule::new(vec![js(&[0, 1])]);
        assert_eq!(validate(&inst, &partial, false), Ok(()));
        assert_eq!(
            validate(&inst, &partial, true),
            Err(Violation::MissingJob { job: 2 })
        );
        let slack = Schedule::new(vec![js(&[0, 1]), js(&[2])]);
        assert_eq!(
            validate(&inst, &slack, true),
            Err(Violation::SlotNotFull {
                slot: 1,
                size: 1,
                m: 2
            })
        );
    }

    #[test]
    fn duplicate_and_unknown() {
        let inst = Instance::new(2, 2, &[], None).unwrap();
        let dup = Schedule::new(vec![js(&[0]), js(&[0])]);
        assert_eq!(
            validate(&inst, &dup, false),
            Err(Violation::DuplicateJob { job: 0 })
        );
        let unk = Schedule::new(vec![js(&[5])]);
        assert_eq!(
            validate(&inst, &unk, false),
            Err(Violation::UnknownJob { job: 5, slot: 0 })
        );
    }
}
