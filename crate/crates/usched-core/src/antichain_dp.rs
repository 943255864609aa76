//! Antichain-state dynamic program: DP_t[B] = 1 iff pred[B] fits in the
//! first t slots, with the recurrence
//! DP_t[B] = max_{X ⊆ B, |X| ≤ m} DP_{t-1}[sinks(pred[B] ∖ X)].
//! States are antichains, reached lazily from B* = sinks(V).

use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::poset;
use crate::schedule::Schedule;
use std::collections::HashMap;

/// B together with everything below it.
fn pred_closure(inst: &Instance, b: &JobSet) -> JobSet {
    let mut out = b.clone();
    for v in b.iter() {
        out.union_with(inst.pred(v));
    }
    out
}

struct Dp<'a> {
    inst: &'a Instance,
    // Some(X): feasible, scheduling X last; None: infeasible at this (B,t).
    memo: HashMap<(JobSet, usize), Option<JobSet>>,
}

impl<'a> Dp<'a> {
    fn run(&mut self, b: &JobSet, t: usize) -> bool {
        if t == 0 {
            return b.is_empty();
        }
        let key = (b.clone(), t);
        if let Some(entry) = self.memo.get(&key) {
            return entry.is_some();
        }
        let closed = pred_closure(self.inst, b);
        let elems: Vec<usize> = b.iter().collect();
        let m = self.inst.m();
        // Combinations X ⊆ B by decreasing size, capped at m; X = ∅ is the
        // idle-slot move and legal.
        let mut choice = None;
        'outer: for k in (0..=m.min(elems.len())).rev() {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let x: JobSet = idx.iter().map(|&i| elems[i]).collect();
                let rest = closed.difference(&x);
                let next = poset::sinks_in(self.inst, &rest);
                debug_assert!(poset::is_antichain(self.inst, &next));
                debug_assert_eq!(pred_closure(self.inst, &next), rest);
                if self.run(&next, t - 1) {
                    choice = Some(x);
                    break 'outer;
                }
                // Next k-combination in lexicographic order.
                let mut advanced = false;
                let mut i = k;
                while i > 0 {
                    i -= 1;
                    if idx[i] != i + elems.len() - k {
                        idx[i] += 1;
                        for j in i + 1..k {
                            idx[j] = idx[j - 1] + 1;
                        }
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
        }
        let hit = choice.is_some();
        self.memo.insert(key, choice);
        hit
    }
}

/// Decision procedure: DP_T[sinks(V)].
pub fn solve_antichain_dp(inst: &Instance, t: usize) -> bool {
    let b_star = poset::sinks(inst);
    let mut dp = Dp {
        inst,
        memo: HashMap::new(),
    };
    dp.run(&b_star, t)
}

pub struct AcdpResult {
    pub makespan: usize,
    pub witness: Schedule,
    /// Distinct antichain states touched by the lazy DP.
    pub states: usize,
}

/// Smallest feasible T, scanned upward from the trivial lower bound, with
/// the witness read off the recorded per-state choices.
pub fn min_makespan_antichain_dp(inst: &Instance) -> AcdpResult {
    let n = inst.n();
    if n == 0 {
        return AcdpResult {
            makespan: 0,
            witness: Schedule::new(vec![]),
            states: 0,
        };
    }
    let b_star = poset::sinks(inst);
    let mut dp = Dp {
        inst,
        memo: HashMap::new(),
    };
    let lb = poset::makespan_lower_bound(inst);
    let makespan = (lb..=n)
        .find(|&t| dp.run(&b_star, t))
        .expect("n slots always suffice");
    let mut slots = Vec::with_capacity(makespan);
    let mut b = b_star;
    for t in (1..=makespan).rev() {
        let x = dp.memo[&(b.clone(), t)]
            .clone()
            .expect("feasible state has a recorded choice");
        let rest = pred_closure(inst, &b).difference(&x);
        slots.push(x);
        b = poset::sinks_in(inst, &rest);
    }
    slots.reverse();
    let states: std::collections::HashSet<&JobSet> = dp.memo.keys().map(|(b, _)| b).collect();
    AcdpResult {
        makespan,
        witness: Schedule::new(slots),
        states: states.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::validate;

    #[test]
    fn decision_examples() {
        let inst = Instance::new(4, 2, &[(0, 2), (1, 2)], None).unwrap();
        assert!(solve_antichain_dp(&inst, 2));
        let chain = Instance::new(3, 3, &[(0, 1), (1, 2)], None).unwrap();
        assert!(!solve_antichain_dp(&chain, 2));
        let flat = Instance::new(4, 2, &[], None).unwrap();
        assert!(solve_antichain_dp(&flat, 2));
    }

    #[test]
    fn makespan_examples() {
        let chain = Instance::new(3, 1, &[(0, 1), (1, 2)], None).unwrap();
        assert_eq!(min_makespan_antichain_dp(&chain).makespan, 3);
        let diamond = Instance::new(4, 2, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap();
        let res = min_makespan_antichain_dp(&diamond);
        assert_eq!(res.makespan, 3);
        assert_eq!(validate(&diamond, &res.witness, false), Ok(()));
        assert_eq!(res.witness.assigned(), diamond.all_jobs());
        let flat = Instance::new(6, 3, &[], None).unwrap();
        assert_eq!(min_makespan_antichain_dp(&flat).makespan, 2);
    }

    #[test]
    fn state_count_bounded_by_antichain_count() {
        let inst = Instance::new(6, 2, &[(0, 2), (1, 2), (2, 3), (4, 5)], None).unwrap();
        let res = min_makespan_antichain_dp(&inst);
        assert!(res.states as u64 <= poset::count_antichains(&inst));
    }
}
