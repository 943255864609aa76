//! Brute-force ground truth. Deliberately shares no logic with the real
//! solvers beyond the core types: sinks and antichain tests are recomputed
//! from raw arc queries here.

use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::{validate, Schedule};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle capped at n <= {cap}, got n = {n}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug)]
pub struct OracleResult {
    pub makespan: usize,
    pub witness: Schedule,
}

const ORACLE_CAP: usize = 20;
const ENUM_CAP: usize = 9;

fn mask_of(set: &JobSet) -> u32 {
    let mut m = 0u32;
    for v in set.iter() {
        m |= 1 << v;
    }
    m
}

fn set_of(mask: u32) -> JobSet {
    let mut s = JobSet::new();
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        s.insert(v);
        m &= m - 1;
    }
    s
}

struct Ctx {
    n: usize,
    m: usize,
    pred: Vec<u32>,
}

impl Ctx {
    fn new(inst: &Instance) -> Ctx {
        let n = inst.n();
        Ctx {
            n,
            m: inst.m(),
            pred: (0..n).map(|v| mask_of(inst.pred(v))).collect(),
        }
    }

    /// Jobs schedulable next: all predecessors already done.
    fn ready(&self, done: u32) -> u32 {
        let mut r = 0u32;
        for v in 0..self.n {
            if done & (1 << v) == 0 && self.pred[v] & !done == 0 {
                r |= 1 << v;
            }
        }
        r
    }

    /// Minimum remaining makespan from the completed set `done`, memoized.
    fn rem(&self, done: u32, memo: &mut HashMap<u32, usize>) -> usize {
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        if done == full {
            return 0;
        }
        if let Some(&v) = memo.get(&done) {
            return v;
        }
        let ready = self.ready(done);
        let mut best = usize::MAX;
        // Enumerate nonempty subsets of the ready set with size <= m. Two
        // ready jobs are never comparable (u ≺ v ready would put u in done),
        // so every such subset is a schedulable antichain.
        let mut sub = ready;
        loop {
            if sub != 0 && (sub.count_ones() as usize) <= self.m {
                let r = self.rem(done | sub, memo);
                if r != usize::MAX {
                    best = best.min(r + 1);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & ready;
        }
        memo.insert(done, best);
        best
    }
}

/// Exact minimum makespan by exhaustive DP over completed-job sets, with a
/// backtracked witness. Capped at n = 20.
pub fn oracle_min_makespan(inst: &Instance) -> Result<OracleResult, OracleError> {
    let n = inst.n();
    if n > ORACLE_CAP {
        return Err(OracleError::TooLarge { n, cap: ORACLE_CAP });
    }
    if n == 0 {
        return Ok(OracleResult {
            makespan: 0,
            witness: Schedule::new(vec![]),
        });
    }
    let ctx = Ctx::new(inst);
    let mut memo = HashMap::new();
    let makespan = ctx.rem(0, &mut memo);
    assert_ne!(makespan, usize::MAX, "every DAG instance is schedulable");
    // Walk the memo table greedily to extract one witness.
    let full = (1u64 << n) as u32 - 1;
    let mut done = 0u32;
    let mut slots = Vec::new();
    while done != full {
        let here = ctx.rem(done, &mut memo);
        let ready = ctx.ready(done);
        let mut sub = ready;
        let mut chosen = None;
        loop {
            if sub != 0
                && (sub.count_ones() as usize) <= ctx.m
                && ctx.rem(done | sub, &mut memo) + 1 == here
            {
                chosen = Some(sub);
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & ready;
        }
        let step = chosen.expect("optimal continuation exists");
        slots.push(set_of(step));
        done |= step;
    }
    let witness = Schedule::new(slots);
    debug_assert_eq!(witness.makespan(), makespan);
    debug_assert_eq!(validate(inst, &witness, false), Ok(()));
    Ok(OracleResult { makespan, witness })
}

/// All optimal schedules, up to `limit`. Capped at n = 9.
pub fn enumerate_optimal_schedules(
    inst: &Instance,
    limit: usize,
) -> Result<Vec<Schedule>, OracleError> {
    let n = inst.n();
    if n > ENUM_CAP {
        return Err(OracleError::TooLarge { n, cap: ENUM_CAP });
    }
    let opt = oracle_min_makespan(inst)?.makespan;
    let ctx = Ctx::new(inst);
    let mut memo = HashMap::new();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut out = Vec::new();
    let mut slots: Vec<JobSet> = Vec::new();
    fn go(
        ctx: &Ctx,
        done: u32,
        full: u32,
        left: usize,
        slots: &mut Vec<JobSet>,
        out: &mut Vec<Schedule>,
        limit: usize,
        memo: &mut HashMap<u32, usize>,
    ) {
        if out.len() >= limit {
            return;
        }
        if done == full {
            out.push(Schedule::new(slots.clone()));
            return;
        }
        if left == 0 || ctx.rem(done, memo) > left {
            return;
        }
        let ready = ctx.ready(done);
        let mut sub = ready;
        loop {
            if sub != 0 && (sub.count_ones() as usize) <= ctx.m {
                slots.push(set_of(sub));
                go(ctx, done | sub, full, left - 1, slots, out, limit, memo);
                slots.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & ready;
        }
    }
    go(&ctx, 0, full, opt, &mut slots, &mut out, limit, &mut memo);
    if n == 0 && out.is_empty() {
        out.push(Schedule::new(vec![]));
    }
    Ok(out)
}

/// Sink moments: slots t with 0 < |H_t| < m, where H_t is the set of slot-t
/// jobs that are sinks of the whole assigned set V(σ). A schedule is
/// sink-adjusted if at every sink moment t all jobs of slots t+1..T lie in
/// succ(S_t) ∪ sinks(V(σ)). Checked literally from the definition.
pub fn is_sink_adjusted(inst: &Instance, sched: &Schedule) -> bool {
    assert_eq!(validate(inst, sched, false), Ok(()), "invalid schedule");
    let assigned = sched.assigned();
    // Sinks of V(σ): no successor inside the assigned set (raw arc check).
    let mut vsinks = JobSet::new();
    for v in assigned.iter() {
        if !inst.succ(v).intersects(&assigned) {
            vsinks.insert(v);
        }
    }
    let t_count = sched.slots.len();
    for t in 0..t_count {
        let st = &sched.slots[t];
        let h = st.intersection(&vsinks);
        if h.is_empty() || h.len() >= inst.m() {
            continue;
        }
        // Clause: everything after t is a successor of S_t or a sink of V(σ).
        let mut succ_st = JobSet::new();
        for u in st.iter() {
            succ_st.union_with(inst.succ(u));
        }
        for later in &sched.slots[t + 1..] {
            for v in later.iter() {
                if !succ_st.contains(v) && !vsinks.contains(v) {
                    return false;
                }
            }
        }
    }
    true
}

/// Middle-adjusted at T': the prefix (slots 1..T') is sink-adjusted for the
/// jobs it contains, and the reversed suffix (slots T'+1..T) is
/// sink-adjusted for the dual instance.
pub fn is_middle_adjusted(inst: &Instance, sched: &Schedule, t_mid: usize) -> bool {
    assert!(t_mid <= sched.slots.len());
    let prefix = Schedule::new(sched.slots[..t_mid].to_vec());
    let mut suffix_rev: Vec<JobSet> = sched.slots[t_mid..].to_vec();
    suffix_rev.reverse();
    let suffix = Schedule::new(suffix_rev);
    is_sink_adjusted(inst, &prefix) && is_sink_adjusted(&inst.dual(), &suffix)
}

// ---------------------------------------------------------------------
// Deadline feasibility beyond the subset-DP cap.
// ---------------------------------------------------------------------

/// Failed (slot, completed-set) states are memoized up to this many
/// entries; past the cap the search still terminates, just slower.
const FEASIBLE_MEMO_CAP: usize = 1 << 20;

/// (`tail[v]`, height): `tail[v]` is the longest chain starting at v
/// including v itself; height is the maximum over all jobs. Jobs are swept
/// in increasing successor-count order, which is reverse topological on a
/// transitively closed instance (u ≺ v implies succ(u) ⊋ succ(v)).
fn chain_tails(inst: &Instance) -> (Vec<usize>, usize) {
    let n = inst.n();
    let mut tail = vec![0usize; n];
    let mut height = 0;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| inst.succ(v).len()); // sinks first
    for &v in &order {
        let mut best = 0;
        for u in inst.succ(v).iter() {
            best = best.max(tail[u]);
        }
        tail[v] = best + 1;
        height = height.max(tail[v]);
    }
    (tail, height)
}

struct FeasCtx<'a> {
    inst: &'a Instance,
    deadline: usize,
    /// tail[v] = longest chain starting at v, including v itself.
    tail: Vec<usize>,
    failed: std::collections::HashSet<(usize, JobSet)>,
}

impl FeasCtx<'_> {
    /// Fills slots `t..` given the completed set, or `None`. The branching
    /// is restricted by three exchange arguments that preserve
    /// completeness: any job can always be moved to an earlier slot it is
    /// ready for, so each slot may be assumed to hold min(m, #ready)
    /// jobs; a scheduled sink can be swapped with any later-scheduled
    /// ready non-sink, so each slot may be assumed to hold as many
    /// non-sinks as fit; and ready sinks are interchangeable, so which
    /// sinks fill the remainder never needs branching.
    fn fill(&mut self, t: usize, done: &JobSet, slots: &mut Vec<JobSet>) -> bool {
        let n = self.inst.n();
        let m = self.inst.m();
        if done.len() == n {
            return true;
        }
        let slots_left = self.deadline + 1 - t;
        if n - done.len() > m * slots_left {
            return false;
        }
        if self.failed.contains(&(t, done.clone())) {
            return false;
        }

        let mut mandatory = JobSet::new();
        let mut choice: Vec<usize> = Vec::new();
        let mut sinks: Vec<usize> = Vec::new();
        let mut ready_count = 0usize;
        for v in 0..n {
            if done.contains(v) {
                continue;
            }
            let ready = self.inst.pred(v).is_subset(done);
            if self.tail[v] >= slots_left {
                if self.tail[v] > slots_left || !ready {
                    return false; // v can no longer meet the deadline
                }
                mandatory.insert(v);
                ready_count += 1;
                continue;
            }
            if !ready {
                continue;
            }
            ready_count += 1;
            if self.inst.succ(v).is_empty() {
                sinks.push(v);
            } else {
                choice.push(v);
            }
        }
        if mandatory.len() > m {
            return false;
        }
        let take = ready_count.min(m);
        let k = (take - mandatory.len()).min(choice.len());
        // Deepest-first so the greedy completion is the first one tried.
        choice.sort_by_key(|&v| std::cmp::Reverse(self.tail[v]));
        let fill_sinks = take - mandatory.len() - k;

        if self.pick(t, done, slots, &mandatory, &choice, 0, k, fill_sinks, &sinks) {
            return true;
        }
        if self.failed.len() < FEASIBLE_MEMO_CAP {
            self.failed.insert((t, done.clone()));
        }
        false
    }

    /// Enumerates k-subsets of `choice[from..]` lexicographically and
    /// recurses on each completed slot.
    #[allow(clippy::too_many_arguments)]
    fn pick(
        &mut self,
        t: usize,
        done: &JobSet,
        slots: &mut Vec<JobSet>,
        partial: &JobSet,
        choice: &[usize],
        from: usize,
        k: usize,
        fill_sinks: usize,
        sinks: &[usize],
    ) -> bool {
        if k == 0 {
            let mut slot = partial.clone();
            for &s in sinks.iter().take(fill_sinks) {
                slot.insert(s);
            }
            let next_done = done.union(&slot);
            slots.push(slot);
            if self.fill(t + 1, &next_done, slots) {
                return true;
            }
            slots.pop();
            return false;
        }
        for i in from..=choice.len() - k {
            let mut grown = partial.clone();
            grown.insert(choice[i]);
            if self.pick(t, done, slots, &grown, choice, i + 1, k - 1, fill_sinks, sinks) {
                return true;
            }
        }
        false
    }
}

/// Decides whether the instance is schedulable within `deadline` slots and
/// returns a witness when it is. No size cap: unlike the subset DP this
/// search carries no 2^n table, but its worst-case time is still
/// exponential — it is meant for structured instances (and as a
/// cross-check, where the subset DP bounds its inputs).
pub fn deadline_feasible(inst: &Instance, deadline: usize) -> Option<Schedule> {
    let n = inst.n();
    if n == 0 {
        return Some(Schedule::new(vec![]));
    }
    if n > inst.m() * deadline {
        return None;
    }
    let (tail, _) = chain_tails(inst);
    let mut ctx = FeasCtx {
        inst,
        deadline,
        tail,
        failed: std::collections::HashSet::new(),
    };
    let mut slots = Vec::new();
    if ctx.fill(1, &JobSet::new(), &mut slots) {
        let sched = Schedule::new(slots);
        debug_assert_eq!(validate(inst, &sched, false), Ok(()));
        debug_assert!(sched.makespan() <= deadline);
        Some(sched)
    } else {
        None
    }
}

/// Minimum makespan via upward deadline scan with [`deadline_feasible`];
/// exact with no size cap, exponential worst case.
pub fn dfs_min_makespan(inst: &Instance) -> OracleResult {
    let n = inst.n();
    if n == 0 {
        return OracleResult {
            makespan: 0,
            witness: Schedule::new(vec![]),
        };
    }
    let (_, height) = chain_tails(inst);
    // Lower bound: the longest chain and ⌈n/m⌉.
    let lb = height.max(n.div_ceil(inst.m()));
    for t in lb..=n {
        if let Some(witness) = deadline_feasible(inst, t) {
            return OracleResult {
                makespan: t,
                witness,
            };
        }
    }
    unreachable!("n slots always suffice");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn js(v: &[usize]) -> JobSet {
        v.iter().copied().collect()
    }

    #[test]
    fn chain_and_empty() {
        let chain = Instance::new(3, 2, &[(0, 1), (1, 2)], None).unwrap();
        assert_eq!(oracle_min_makespan(&chain).unwrap().makespan, 3);
        let empty = Instance::new(0, 1, &[], None).unwrap();
        assert_eq!(oracle_min_makespan(&empty).unwrap().makespan, 0);
    }

    #[test]
    fn small_example() {
        // a≺c, b≺c, d isolated; m=2 → 2.
        let inst = Instance::new(4, 2, &[(0, 2), (1, 2)], None).unwrap();
        let res = oracle_min_makespan(&inst).unwrap();
        assert_eq!(res.makespan, 2);
        assert_eq!(validate(&inst, &res.witness, false), Ok(()));
    }

    #[test]
    fn cap_enforced() {
        let big = Instance::new(21, 2, &[], None).unwrap();
        assert_eq!(
            oracle_min_makespan(&big).unwrap_err(),
            OracleError::TooLarge { n: 21, cap: 20 }
        );
    }

    #[test]
    fn enumeration_counts() {
        let two = Instance::new(2, 2, &[], None).unwrap();
        assert_eq!(enumerate_optimal_schedules(&two, 100).unwrap().len(), 1);
        let one_machine = Instance::new(2, 1, &[], None).unwrap();
        assert_eq!(
            enumerate_optimal_schedules(&one_machine, 100).unwrap().len(),
            2
        );
    }

    #[test]
    fn diamond_optima_put_source_first() {
        // a≺{b,c}≺d with m=2: in every optimum, slot 1 contains a.
        let inst = Instance::new(4, 2, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap();
        let all = enumerate_optimal_schedules(&inst, 1000).unwrap();
        assert!(!all.is_empty());
        for s in &all {
            assert_eq!(s.makespan(), 3);
            assert!(s.slots[0].contains(0));
        }
    }

    #[test]
    fn sink_adjusted_examples() {
        // Sinks appear only after the jobs forcing them, so every sink
        // moment is covered by succ(S_t).
        let inst = Instance::new(6, 2, &[(0, 2), (1, 2), (2, 3), (2, 4), (2, 5)], None).unwrap();
        let good = Schedule::new(vec![js(&[0, 1]), js(&[2]), js(&[3, 4]), js(&[5])]);
        assert!(is_sink_adjusted(&inst, &good));
        // A sinks-only slot sneaking in before a non-sink breaks it.
        let inst2 = Instance::new(4, 2, &[(0, 1)], None).unwrap();
        // Slot 1 = {2} (a sink, |H|=1 < m), slot 2 holds non-sink 0.
        let bad = Schedule::new(vec![js(&[2]), js(&[0, 3]), js(&[1])]);
        assert!(!is_sink_adjusted(&inst2, &bad));
        // All-sinks instance: any packed schedule is fine.
        let flat = Instance::new(4, 2, &[], None).unwrap();
        let packed = Schedule::new(vec![js(&[0, 1]), js(&[2, 3])]);
        assert!(is_sink_adjusted(&flat, &packed));
    }

    #[test]
    fn deadline_feasible_basics() {
        // {a≺c, b≺c, d}: feasible at 2 on two machines, not at 1.
        let inst = Instance::new(4, 2, &[(0, 2), (1, 2)], None).unwrap();
        assert!(deadline_feasible(&inst, 1).is_none());
        let w = deadline_feasible(&inst, 2).unwrap();
        assert_eq!(validate(&inst, &w, false), Ok(()));
        // A 3-chain never fits in 2 slots regardless of machines.
        let chain = Instance::new(3, 5, &[(0, 1), (1, 2)], None).unwrap();
        assert!(deadline_feasible(&chain, 2).is_none());
        assert!(deadline_feasible(&chain, 3).is_some());
    }

    #[test]
    fn dfs_min_makespan_matches_subset_dp() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..120 {
            let n = rng.gen_range(1..=10);
            let m = [1usize, 2, 3, n][rng.gen_range(0..4)];
            let p: f64 = rng.gen_range(0.05..0.6);
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(p) {
                        arcs.push((u, v));
                    }
                }
            }
            let inst = Instance::new(n, m, &arcs, None).unwrap();
            let dp = oracle_min_makespan(&inst).unwrap();
            let dfs = dfs_min_makespan(&inst);
            assert_eq!(dfs.makespan, dp.makespan);
            assert_eq!(validate(&inst, &dfs.witness, false), Ok(()));
        }
    }

    #[test]
    fn middle_adjusted_on_symmetric_instance() {
        let inst = Instance::new(4, 2, &[(0, 2), (0, 3), (1, 2), (1, 3)], None).unwrap();
        let sched = Schedule::new(vec![js(&[0, 1]), js(&[2, 3])]);
        assert!(is_middle_adjusted(&inst, &sched, 1));
    }
}
