//! Divide-and-conquer solver driven by a vertex cover of the
//! comparability graph.
//!
//! The instance is first padded with isolated jobs until every slot of the
//! candidate deadline holds exactly `m` jobs ("tight"). The search then
//! guesses, for every cover job, a *fingerprint state*: whether it runs
//! before, at, or after a middle slot `T'`, whether it is a sink of its
//! half, whether it is a non-sink processed at a sink moment, and whether
//! it is early. A correct fingerprint pins down the rest of the schedule
//! up to a bipartite matching between undetermined jobs and open slot
//! positions, and the two halves recurse with covers of at most half the
//! size. Every assembled schedule is re-validated before it is returned,
//! so soundness never depends on the fingerprint deductions.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::matching::{max_matching, Bipartite, Matching};
use crate::poset;
use crate::schedule::{validate, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VcError {
    #[error("{n} unit jobs cannot meet deadline {t} on {m} machines")]
    Infeasible { n: usize, m: usize, t: usize },
}

/// Pads the instance with isolated jobs (indices `n..mT`) so that a
/// schedule meeting deadline `t` must fill every slot exactly. Isolated
/// jobs join no comparability edge, so any vertex cover of the original
/// comparability graph still covers the padded one.
pub fn make_tight(inst: &Instance, t: usize) -> Result<Instance, VcError> {
    let capacity = inst.m() * t;
    if inst.n() > capacity {
        return Err(VcError::Infeasible {
            n: inst.n(),
            m: inst.m(),
            t,
        });
    }
    Ok(inst
        .with_padding(capacity - inst.n())
        .with_deadline(Some(t)))
}

/// Where each cover job sits in a schedule split at a middle slot: the
/// halves `C_L`/`C_R` (everything else runs at the middle slot), the cover
/// sinks of each half `S_L`/`S_R`, the non-sinks processed at sink moments
/// `Q_L`/`Q_R`, and the early jobs `E_L`/`E_R`. The right half is always
/// described through the reversed (dual) instance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub c_l: JobSet,
    pub c_r: JobSet,
    pub s_l: JobSet,
    pub s_r: JobSet,
    pub q_l: JobSet,
    pub q_r: JobSet,
    pub e_l: JobSet,
    pub e_r: JobSet,
}

/// One half of a fingerprint, in the orientation of its own instance
/// (use the dual instance for the right half).
#[derive(Debug, Clone, Default)]
pub struct SideFingerprint {
    pub c: JobSet,
    pub s: JobSet,
    pub q: JobSet,
    pub e: JobSet,
}

impl Fingerprint {
    /// Cover jobs claimed for the middle slot.
    pub fn middle(&self, cover: &JobSet) -> JobSet {
        cover.difference(&self.c_l).difference(&self.c_r)
    }

    pub fn left(&self) -> SideFingerprint {
        SideFingerprint {
            c: self.c_l.clone(),
            s: self.s_l.clone(),
            q: self.q_l.clone(),
            e: self.e_l.clone(),
        }
    }

    pub fn right(&self) -> SideFingerprint {
        SideFingerprint {
            c: self.c_r.clone(),
            s: self.s_r.clone(),
            q: self.q_r.clone(),
            e: self.e_r.clone(),
        }
    }
}

// Per-job fingerprint states, encoded as base-13 digits: 0 is the middle
// slot; 1..=6 are the left half and 7..=12 the right half, each half
// ordered (plain, plain-early, Q, Q-early, S, S-early).
const STATES: u8 = 13;

fn apply_digit(fp: &mut Fingerprint, job: usize, digit: u8) {
    if digit == 0 {
        return;
    }
    let (side_l, code) = if digit <= 6 {
        (true, digit - 1)
    } else {
        (false, digit - 7)
    };
    let (c, q, s, e) = if side_l {
        (&mut fp.c_l, &mut fp.q_l, &mut fp.s_l, &mut fp.e_l)
    } else {
        (&mut fp.c_r, &mut fp.q_r, &mut fp.s_r, &mut fp.e_r)
    };
    c.insert(job);
    match code / 2 {
        1 => q.insert(job),
        2 => s.insert(job),
        _ => {}
    }
    if code % 2 == 1 {
        e.insert(job);
    }
}

fn fingerprint_from_digits(jobs: &[usize], digits: &[u8]) -> Fingerprint {
    let mut fp = Fingerprint::default();
    for (&job, &d) in jobs.iter().zip(digits) {
        apply_digit(&mut fp, job, d);
    }
    fp
}

/// Visits every fingerprint over `cover` exactly once — `13^{|cover|}`
/// in total — as a mixed-radix base-13 counter over the cover jobs in
/// increasing index order. Returns the visit count.
pub fn enumerate_fingerprints<F: FnMut(&Fingerprint)>(cover: &JobSet, mut visitor: F) -> u64 {
    let jobs: Vec<usize> = cover.iter().collect();
    let mut digits = vec![0u8; jobs.len()];
    let mut count = 0u64;
    loop {
        visitor(&fingerprint_from_digits(&jobs, &digits));
        count += 1;
        let mut i = 0;
        while i < digits.len() && digits[i] == STATES - 1 {
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            return count;
        }
        digits[i] += 1;
    }
}

/// What one half of the schedule must look like if a side fingerprint is
/// correct: sink-moment slots, block rosters and lengths, the first
/// all-sink slot, and exact slots for `Q`-jobs and early cover sinks.
/// Slots are 1-based within the half; block `i` ends at sink moment
/// `z[i]`, and the final entry of `block_len` counts the full non-sink
/// slots after the last sink moment.
#[derive(Debug, Clone)]
pub struct SinkMomentPlan {
    /// Number of sink moments ℓ.
    pub sink_moments: usize,
    /// `z[i]` is the slot of the `i`th sink moment; `z[0] = 0`.
    pub z: Vec<usize>,
    /// `rosters[i]` holds the jobs deduced into block `i+1` (including its
    /// sink moment for the first ℓ blocks).
    pub rosters: Vec<JobSet>,
    /// Lengths of blocks `1..=ℓ`, then the count of full slots after
    /// `z[ℓ]`.
    pub block_len: Vec<usize>,
    /// First slot containing only sinks of the half.
    pub first_all_sink: usize,
    /// Exact slots of `Q`-jobs and early cover sinks.
    pub fixed_slot: Vec<(usize, usize)>,
}

impl SinkMomentPlan {
    fn block_of(&self, job: usize) -> Option<usize> {
        self.rosters
            .iter()
            .position(|r| r.contains(job))
            .map(|i| i + 1)
    }

    /// Slot of the `i`th sink moment, extended so that index ℓ+1 (and
    /// beyond, when a referenced sink moment does not exist) means the
    /// first all-sink slot.
    fn z_ext(&self, i: usize) -> usize {
        if i <= self.sink_moments {
            self.z[i]
        } else {
            self.first_all_sink
        }
    }
}

/// Longest chain inside `x ∪ {v}` ending at `v`, for every `v` at once.
fn depths_wrt(inst: &Instance, x: &JobSet) -> Vec<usize> {
    let mut d = vec![0usize; inst.n()];
    for &u in inst.topo_order() {
        for p in inst.pred(u).intersection(x).iter() {
            d[u] = d[u].max(d[p] + 1);
        }
    }
    d
}

/// Deduces the forced layout of one half from its side fingerprint, or
/// `None` when the deductions contradict each other (the enclosing search
/// then discards the fingerprint). For the right half, pass the dual
/// instance.
///
/// The deductions: a `Q`-job of depth `d` (with respect to the claimed
/// `Q`) sits at sink moment `d+1` if early, else `d+2`; an early cover
/// sink sits at sink moment `d+1`; a cover job that is neither runs in
/// block `d+1` if early, else `d+2`; a non-cover predecessor of the
/// half's cover runs in block `d+1`. Block `i` then has length
/// `⌈n_i/m⌉`, and the slots between the last sink moment and the first
/// all-sink slot are filled exactly by the remaining deduced jobs.
pub fn deduce_side_plan(
    inst: &Instance,
    side: &SideFingerprint,
    m: usize,
) -> Option<SinkMomentPlan> {
    let mut preds = JobSet::new();
    for v in side.c.iter() {
        preds.union_with(inst.pred(v));
    }
    let interior = preds.difference(&side.c);
    let depth = depths_wrt(inst, &side.q);

    // (job, sink-moment index) and (job, block index) deductions.
    let mut at_sink: Vec<(usize, usize)> = Vec::new();
    let mut in_block: Vec<(usize, usize)> = Vec::new();
    for v in side.c.iter() {
        let d = depth[v];
        let early = side.e.contains(v);
        if side.q.contains(v) {
            at_sink.push((v, if early { d + 1 } else { d + 2 }));
        } else if side.s.contains(v) {
            if early {
                at_sink.push((v, d + 1));
            }
            // Late cover sinks are placed by the matching instead.
        } else {
            in_block.push((v, if early { d + 1 } else { d + 2 }));
        }
    }
    for v in interior.iter() {
        in_block.push((v, depth[v] + 1));
    }

    let ell = at_sink.iter().map(|&(_, i)| i).max().unwrap_or(0);
    if in_block.iter().any(|&(_, i)| i > ell + 1) {
        return None;
    }

    let mut rosters = vec![JobSet::new(); ell + 1];
    for &(v, i) in at_sink.iter().chain(in_block.iter()) {
        rosters[i - 1].insert(v);
    }

    let mut z = vec![0usize; ell + 1];
    let mut block_len = vec![0usize; ell + 1];
    for i in 1..=ell {
        let n_i = rosters[i - 1].len();
        if n_i == 0 {
            return None; // a referenced sink moment with no job deduced into its block
        }
        block_len[i - 1] = n_i.div_ceil(m);
        z[i] = z[i - 1] + block_len[i - 1];
    }
    // Slots after the last sink moment but before the first all-sink slot
    // hold only non-sinks, m per slot, and every such job is deduced here.
    let x = rosters[ell].len();
    if x % m != 0 {
        return None;
    }
    block_len[ell] = x / m;
    let first_all_sink = z[ell] + x / m + 1;

    let fixed_slot: Vec<(usize, usize)> = at_sink.iter().map(|&(v, i)| (v, z[i])).collect();
    // A sink moment can host at most m jobs.
    for i in 1..=ell {
        if at_sink.iter().filter(|&&(_, j)| j == i).count() > m {
            return None;
        }
    }
    // Exactly-placed jobs must respect precedence among themselves.
    for (a, &(u, su)) in fixed_slot.iter().enumerate() {
        for &(v, sv) in &fixed_slot[a + 1..] {
            if (inst.precedes(u, v) && su >= sv) || (inst.precedes(v, u) && sv >= su) {
                return None;
            }
        }
    }

    Some(SinkMomentPlan {
        sink_moments: ell,
        z,
        rosters,
        block_len,
        first_all_sink,
        fixed_slot,
    })
}

/// Admissible slot range for every job the plans leave open.
#[derive(Debug, Clone)]
pub struct IntervalAssignment {
    /// Jobs placed by the matching: the non-cover jobs away from both
    /// halves' forced interiors, plus the late cover sinks of each half.
    pub u_prime: JobSet,
    /// Inclusive lower slot bound per job (members of `u_prime` only).
    pub lo: Vec<usize>,
    /// Inclusive upper slot bound per job (members of `u_prime` only).
    pub hi: Vec<usize>,
}

fn side_pred_closure(inst: &Instance, c: &JobSet) -> JobSet {
    let mut preds = JobSet::new();
    for v in c.iter() {
        preds.union_with(inst.pred(v));
    }
    preds.difference(c)
}

/// Slot intervals constraining the matching, for a tight instance split at
/// `t_prime`. `plan_l`/`plan_r` must come from [`deduce_side_plan`] on the
/// instance and its dual respectively.
pub fn compute_intervals(
    inst: &Instance,
    t_prime: usize,
    cover: &JobSet,
    fp: &Fingerprint,
    plan_l: &SinkMomentPlan,
    plan_r: &SinkMomentPlan,
) -> IntervalAssignment {
    let dual = inst.dual();
    compute_intervals_impl(inst, &dual, t_prime, cover, fp, plan_l, plan_r)
}

fn compute_intervals_impl(
    inst: &Instance,
    dual: &Instance,
    t_prime: usize,
    cover: &JobSet,
    fp: &Fingerprint,
    plan_l: &SinkMomentPlan,
    plan_r: &SinkMomentPlan,
) -> IntervalAssignment {
    let n = inst.n();
    let t_total = n / inst.m();
    let c_m = fp.middle(cover);
    let i_l = side_pred_closure(inst, &fp.c_l);
    let i_r = side_pred_closure(dual, &fp.c_r);

    let mut u = inst.all_jobs();
    u.subtract(cover);
    u.subtract(&i_l);
    u.subtract(&i_r);
    let late_s_l = fp.s_l.difference(&fp.e_l);
    let late_s_r = fp.s_r.difference(&fp.e_r);
    let u_prime = u.union(&late_s_l).union(&late_s_r);

    let depth_l = depths_wrt(inst, &fp.q_l);
    let depth_r = depths_wrt(dual, &fp.q_r);
    let plain_l = fp.c_l.difference(&fp.q_l).difference(&fp.s_l);
    let plain_r = fp.c_r.difference(&fp.q_r).difference(&fp.s_r);
    let slot_l: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for &(j, s) in &plan_l.fixed_slot {
            v[j] = Some(s);
        }
        v
    };
    let slot_r: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for &(j, s) in &plan_r.fixed_slot {
            v[j] = Some(s);
        }
        v
    };
    // Right-half slots are mirrored: dual slot s is whole-schedule slot
    // t_total + 1 - s.
    let mirror = |s: usize| t_total + 1 - s;

    let mut lo = vec![0usize; n];
    let mut hi = vec![0usize; n];
    for v in u_prime.iter() {
        let (mut l, mut r);
        if late_s_l.contains(v) {
            // A late cover sink of the left half: after the sink moment
            // that would have made it early, and inside its own half.
            l = plan_l.z_ext(depth_l[v] + 2);
            r = t_prime.saturating_sub(1);
        } else if late_s_r.contains(v) {
            l = t_prime + 1;
            r = mirror(plan_r.z_ext(depth_r[v] + 2));
        } else {
            l = 1;
            r = t_total;
            for p in inst.pred(v).intersection(&plain_l).iter() {
                if let Some(b) = plan_l.block_of(p) {
                    l = l.max(plan_l.z_ext(b));
                }
            }
            for p in inst.pred(v).intersection(&fp.q_l).iter() {
                if let Some(s) = slot_l[p] {
                    l = l.max(s + 1);
                }
            }
            if inst.pred(v).intersects(&fp.s_l) {
                l = l.max(t_prime);
            }
            if inst.pred(v).intersects(&c_m) {
                l = l.max(t_prime + 1);
            }
            for s in inst.succ(v).intersection(&plain_r).iter() {
                if let Some(b) = plan_r.block_of(s) {
                    r = r.min(mirror(plan_r.z_ext(b)));
                }
            }
            for s in inst.succ(v).intersection(&fp.q_r).iter() {
                if let Some(slot) = slot_r[s] {
                    r = r.min(mirror(slot).saturating_sub(1));
                }
            }
            if inst.succ(v).intersects(&fp.s_r) {
                r = r.min(t_prime);
            }
            if inst.succ(v).intersects(&c_m) {
                r = r.min(t_prime.saturating_sub(1));
            }
        }
        lo[v] = l.max(1);
        hi[v] = r.min(t_total);
    }

    IntervalAssignment { u_prime, lo, hi }
}

/// The split of the non-cover jobs around the middle slot.
#[derive(Debug, Clone)]
pub struct Partition3 {
    pub x_l: JobSet,
    pub x_m: JobSet,
    pub x_r: JobSet,
}

/// Splits the non-cover jobs of a tight instance around `t_prime` as
/// dictated by the fingerprint, or `None` when the fingerprint is
/// inconsistent (no plan, or no perfect matching of open jobs to open
/// positions).
pub fn divide(
    inst: &Instance,
    t_prime: usize,
    cover: &JobSet,
    fp: &Fingerprint,
) -> Option<Partition3> {
    divide_impl(inst, &inst.dual(), t_prime, cover, fp)
}

fn divide_impl(
    inst: &Instance,
    dual: &Instance,
    t_prime: usize,
    cover: &JobSet,
    fp: &Fingerprint,
) -> Option<Partition3> {
    let m = inst.m();
    let i_l = side_pred_closure(inst, &fp.c_l);
    let i_r = side_pred_closure(dual, &fp.c_r);
    // Cover jobs placed at or right of the middle cannot precede the left
    // half, and symmetrically.
    if i_l.intersects(cover) || i_r.intersects(cover) {
        return None;
    }
    let plan_l = deduce_side_plan(inst, &fp.left(), m)?;
    let plan_r = deduce_side_plan(dual, &fp.right(), m)?;
    divide_finish(inst, dual, t_prime, cover, fp, i_l, i_r, &plan_l, &plan_r)
}

/// Completes a divide attempt once the per-side interiors and sink-moment
/// plans are known; split out so the search can cache those per side.
#[allow(clippy::too_many_arguments)]
fn divide_finish(
    inst: &Instance,
    dual: &Instance,
    t_prime: usize,
    cover: &JobSet,
    fp: &Fingerprint,
    i_l: JobSet,
    i_r: JobSet,
    plan_l: &SinkMomentPlan,
    plan_r: &SinkMomentPlan,
) -> Option<Partition3> {
    let m = inst.m();
    let t_total = inst.n() / m;
    let c_m = fp.middle(cover);
    if c_m.len() > m || t_prime < 1 || t_prime > t_total || i_l.intersects(&i_r) {
        return None;
    }
    // The middle slot is an antichain.
    for v in c_m.iter() {
        if inst.pred(v).intersects(&c_m)
            || inst.pred(v).intersects(&fp.c_r)
            || inst.succ(v).intersects(&fp.c_l)
        {
            return None;
        }
    }

    let t_left = t_prime - 1;
    let t_right = t_total - t_prime;
    if fp.c_l.len() + i_l.len() > m * t_left || fp.c_r.len() + i_r.len() > m * t_right {
        return None;
    }

    if plan_l.first_all_sink > t_left + 1 || plan_r.first_all_sink > t_right + 1 {
        return None;
    }

    let ia = compute_intervals_impl(inst, dual, t_prime, cover, fp, plan_l, plan_r);

    // Open positions, as whole-schedule slot numbers: the leftovers of
    // each sink moment, every all-sink slot, and the middle slot.
    let mut positions: Vec<usize> = Vec::new();
    fn push(positions: &mut Vec<usize>, slot: usize, count: usize) {
        positions.extend(std::iter::repeat(slot).take(count));
    }
    for i in 1..=plan_l.sink_moments {
        let open = (m - plan_l.rosters[i - 1].len() % m) % m;
        push(&mut positions, plan_l.z[i], open);
    }
    for t in plan_l.first_all_sink..=t_left {
        push(&mut positions, t, m);
    }
    push(&mut positions, t_prime, m - c_m.len());
    for i in 1..=plan_r.sink_moments {
        let open = (m - plan_r.rosters[i - 1].len() % m) % m;
        push(&mut positions, t_total + 1 - plan_r.z[i], open);
    }
    for t in plan_r.first_all_sink..=t_right {
        push(&mut positions, t_total + 1 - t, m);
    }
    positions.sort_unstable();

    let open_jobs: Vec<usize> = ia.u_prime.iter().collect();
    if open_jobs.len() != positions.len() {
        return None;
    }
    let mut graph = Bipartite::new(open_jobs.len(), positions.len());
    for (ui, &v) in open_jobs.iter().enumerate() {
        for (pi, &t) in positions.iter().enumerate() {
            if ia.lo[v] <= t && t <= ia.hi[v] {
                graph.add_edge(ui, pi);
            }
        }
    }
    let matching = max_matching(&graph);
    if matching.size != open_jobs.len() {
        return None;
    }

    let mut x_l = i_l;
    let mut x_m = JobSet::new();
    let mut x_r = i_r;
    for (ui, &v) in open_jobs.iter().enumerate() {
        if cover.contains(v) {
            continue; // late cover sinks stay cover jobs, not partition jobs
        }
        let t = positions[matching.pair_left[ui]];
        if t < t_prime {
            x_l.insert(v);
        } else if t == t_prime {
            x_m.insert(v);
        } else {
            x_r.insert(v);
        }
    }

    // The divide postconditions hold by construction for every returned
    // partition, not just for fingerprints of real schedules; keep them
    // as hard asserts.
    let non_cover = inst.all_jobs().difference(cover);
    assert_eq!(
        x_l.union(&x_m).union(&x_r),
        non_cover,
        "x_l/x_m/x_r must partition the non-cover jobs"
    );
    assert_eq!(x_l.len() + x_m.len() + x_r.len(), non_cover.len());
    assert_eq!(x_m.len() + c_m.len(), m, "the middle slot must be full");
    let left_closed = fp.c_l.union(&x_l);
    let right_closed = fp.c_r.union(&x_r);
    assert!(
        side_pred_closure(inst, &cover.difference(&fp.c_r)).is_subset(&left_closed),
        "predecessors of non-right cover jobs must land left"
    );
    assert!(
        side_pred_closure(dual, &cover.difference(&fp.c_l)).is_subset(&right_closed),
        "successors of non-left cover jobs must land right"
    );

    Some(Partition3 { x_l, x_m, x_r })
}

/// Thin wrapper building a [`Bipartite`] from an edge list and running
/// Hopcroft–Karp.
pub fn max_bipartite_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> Matching {
    let mut g = Bipartite::new(left, right);
    for &(u, v) in edges {
        g.add_edge(u, v);
    }
    max_matching(&g)
}

// ---------------------------------------------------------------------
// The recursive search.
// ---------------------------------------------------------------------

/// Per-side data that depends only on that side's digit pattern (not on
/// `t_prime` or the other side), cached across leaves of the search.
struct SideInfo {
    interior: JobSet,
    plan: SinkMomentPlan,
}

struct Search<'a> {
    inst: &'a Instance,
    dual: Instance,
    cover: &'a JobSet,
    cover_jobs: Vec<usize>,
    /// ⌊|C|/2⌋: cap on either half's cover size.
    half: usize,
    t_total: usize,
    t_prime: usize,
    digits: Vec<u8>,
    count_l: usize,
    count_r: usize,
    count_m: usize,
    /// Interior/plan per left digit pattern; `None` caches a rejection.
    left_cache: HashMap<Vec<u8>, Option<Rc<SideInfo>>>,
    right_cache: HashMap<Vec<u8>, Option<Rc<SideInfo>>>,
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Side {
    Left = 0,
    Middle = 1,
    Right = 2,
}

fn decode(digit: u8) -> (Side, u8, bool) {
    match digit {
        0 => (Side::Middle, 0, false),
        1..=6 => (Side::Left, (digit - 1) / 2, (digit - 1) % 2 == 1),
        _ => (Side::Right, (digit - 7) / 2, (digit - 7) % 2 == 1),
    }
}

impl Search<'_> {
    /// Digit-level rejections. Each rule only discards states that cannot
    /// occur in the fingerprint of a real tight schedule split at
    /// `t_prime`, so the search stays complete: precedence orders the
    /// sides; the middle slot is an antichain; a graph sink on the left is
    /// a sink of its half (and dually); a cover sink of a half has no
    /// later cover job of the same half.
    fn admissible(&self, idx: usize, digit: u8) -> bool {
        let v = self.cover_jobs[idx];
        let (side, class, _early) = decode(digit);
        match side {
            Side::Left => {
                if self.count_l >= self.half {
                    return false;
                }
                // class 2 = side sink, mandatory for graph sinks.
                if class != 2 && self.inst.succ(v).is_empty() {
                    return false;
                }
            }
            Side::Right => {
                if self.count_r >= self.half {
                    return false;
                }
                if class != 2 && self.inst.pred(v).is_empty() {
                    return false;
                }
            }
            Side::Middle => {
                if self.count_m >= self.inst.m() {
                    return false;
                }
            }
        }
        for j in 0..idx {
            let u = self.cover_jobs[j];
            let (uside, uclass, _) = decode(self.digits[j]);
            let (pside, sside, pclass, sclass) = if self.inst.precedes(u, v) {
                (uside, side, uclass, class)
            } else if self.inst.precedes(v, u) {
                (side, uside, class, uclass)
            } else {
                continue;
            };
            if pside > sside || (pside == Side::Middle && sside == Side::Middle) {
                return false;
            }
            // A claimed sink of the left half cannot precede another left
            // job; a claimed source of the right half (sink of the dual)
            // cannot follow another right job.
            if pside == Side::Left && sside == Side::Left && pclass == 2 {
                return false;
            }
            if pside == Side::Right && sside == Side::Right && sclass == 2 {
                return false;
            }
        }
        true
    }

    /// Capacity pruning: everything at or below a cover job assigned to
    /// the left or middle is forced into the left half, and dually, so a
    /// partial assignment whose forced set already overflows `m` jobs per
    /// slot can never complete. Returns the grown forced sets, or `None`
    /// to prune.
    fn forced_after(
        &self,
        v: usize,
        side: Side,
        left_forced: &JobSet,
        right_forced: &JobSet,
    ) -> Option<(JobSet, JobSet)> {
        let mut left = left_forced.clone();
        let mut right = right_forced.clone();
        match side {
            Side::Left => {
                if right.contains(v) {
                    return None;
                }
                left.insert(v);
                left.union_with(self.inst.pred(v));
            }
            Side::Middle => {
                if left.contains(v) || right.contains(v) {
                    return None;
                }
                left.union_with(self.inst.pred(v));
                right.union_with(self.inst.succ(v));
            }
            Side::Right => {
                if left.contains(v) {
                    return None;
                }
                right.insert(v);
                right.union_with(self.inst.succ(v));
            }
        }
        let m = self.inst.m();
        if left.len() > m * (self.t_prime - 1)
            || right.len() > m * (self.t_total - self.t_prime)
            || left.intersects(&right)
        {
            return None;
        }
        Some((left, right))
    }

    fn dfs(
        &mut self,
        idx: usize,
        left_forced: &JobSet,
        right_forced: &JobSet,
    ) -> Option<Vec<JobSet>> {
        if idx == self.cover_jobs.len() {
            return self.try_fingerprint();
        }
        let v = self.cover_jobs[idx];
        let mut forced: [Option<Option<(JobSet, JobSet)>>; 3] = [None, None, None];
        for digit in 0..STATES {
            if !self.admissible(idx, digit) {
                continue;
            }
            let (side, _, _) = decode(digit);
            let grown = forced[side as usize]
                .get_or_insert_with(|| self.forced_after(v, side, left_forced, right_forced));
            let Some((left, right)) = grown.clone() else {
                continue;
            };
            self.digits[idx] = digit;
            match side {
                Side::Left => self.count_l += 1,
                Side::Right => self.count_r += 1,
                Side::Middle => self.count_m += 1,
            }
            let found = self.dfs(idx + 1, &left, &right);
            match side {
                Side::Left => self.count_l -= 1,
                Side::Right => self.count_r -= 1,
                Side::Middle => self.count_m -= 1,
            }
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Cached lookup of a side's interior and sink-moment plan, keyed by
    /// the digit vector masked to that side (both are independent of
    /// `t_prime` and of the other side's digits).
    fn side_info(&mut self, right: bool) -> Option<Rc<SideInfo>> {
        let (lo, hi) = if right { (7u8, 12u8) } else { (1u8, 6u8) };
        let key: Vec<u8> = self
            .digits
            .iter()
            .map(|&d| if (lo..=hi).contains(&d) { d } else { 0 })
            .collect();
        let cache = if right {
            &self.right_cache
        } else {
            &self.left_cache
        };
        if let Some(hit) = cache.get(&key) {
            return hit.clone();
        }
        let fp = fingerprint_from_digits(&self.cover_jobs, &key);
        let (graph, side) = if right {
            (&self.dual, fp.right())
        } else {
            (self.inst, fp.left())
        };
        let info = (|| {
            let interior = side_pred_closure(graph, &side.c);
            // Cover jobs at or past the middle cannot precede this side.
            if interior.intersects(self.cover) {
                return None;
            }
            let plan = deduce_side_plan(graph, &side, self.inst.m())?;
            Some(Rc::new(SideInfo { interior, plan }))
        })();
        let cache = if right {
            &mut self.right_cache
        } else {
            &mut self.left_cache
        };
        cache.insert(key, info.clone());
        info
    }

    fn try_fingerprint(&mut self) -> Option<Vec<JobSet>> {
        let info_l = self.side_info(false)?;
        let info_r = self.side_info(true)?;
        let fp = fingerprint_from_digits(&self.cover_jobs, &self.digits);
        let part = divide_finish(
            self.inst,
            &self.dual,
            self.t_prime,
            self.cover,
            &fp,
            info_l.interior.clone(),
            info_r.interior.clone(),
            &info_l.plan,
            &info_r.plan,
        )?;
        let c_m = fp.middle(self.cover);
        let m = self.inst.m();

        let left = fp.c_l.union(&part.x_l);
        let right = fp.c_r.union(&part.x_r);
        debug_assert_eq!(left.len(), m * (self.t_prime - 1));
        debug_assert_eq!(right.len(), m * (self.t_total - self.t_prime));

        let left_slots = solve_half(self.inst, &left, &fp.c_l)?;
        let right_slots = solve_half(self.inst, &right, &fp.c_r)?;

        let mut slots = left_slots;
        slots.push(c_m.union(&part.x_m));
        slots.extend(right_slots);
        let sched = Schedule::new(slots);
        if validate(self.inst, &sched, true).is_ok() {
            Some(sched.slots)
        } else {
            None
        }
    }
}

/// Recurse on one half, translating between whole-instance and induced
/// job indices.
fn solve_half(inst: &Instance, jobs: &JobSet, half_cover: &JobSet) -> Option<Vec<JobSet>> {
    if jobs.is_empty() {
        return Some(Vec::new());
    }
    let (sub, map) = inst.induced(jobs);
    let mut inv = vec![usize::MAX; inst.n()];
    for (new, &old) in map.iter().enumerate() {
        inv[old] = new;
    }
    let sub_cover: JobSet = half_cover.iter().map(|v| inv[v]).collect();
    let sub_slots = schedule_rec(&sub, &sub_cover)?;
    Some(
        sub_slots
            .iter()
            .map(|s| s.iter().map(|v| map[v]).collect())
            .collect(),
    )
}

fn schedule_rec(inst: &Instance, cover: &JobSet) -> Option<Vec<JobSet>> {
    let n = inst.n();
    let m = inst.m();
    if n == 0 {
        return Some(Vec::new());
    }
    debug_assert_eq!(n % m, 0, "the recursion only sees tight instances");
    let t_total = n / m;
    if cover.is_empty() {
        // With an empty cover the comparability graph has no edges, so
        // any m-at-a-time fill is a tight schedule.
        if (0..n).any(|v| !inst.succ(v).is_empty()) {
            return None;
        }
        let jobs: Vec<usize> = (0..n).collect();
        return Some(
            jobs.chunks(m)
                .map(|c| c.iter().copied().collect())
                .collect(),
        );
    }
    let mut search = Search {
        inst,
        dual: inst.dual(),
        cover,
        cover_jobs: cover.iter().collect(),
        half: cover.len() / 2,
        t_total,
        t_prime: 0,
        digits: vec![0; cover.len()],
        count_l: 0,
        count_r: 0,
        count_m: 0,
        left_cache: HashMap::new(),
        right_cache: HashMap::new(),
    };
    for t_prime in 1..=t_total {
        search.t_prime = t_prime;
        if let Some(slots) = search.dfs(0, &JobSet::new(), &JobSet::new()) {
            return Some(slots);
        }
    }
    None
}

/// Finds a tight schedule of a tight instance (`n = m·T`), or `None` when
/// none exists. `cover` must be a vertex cover of the instance's
/// comparability graph.
pub fn schedule_vc(inst: &Instance, cover: &JobSet) -> Option<Schedule> {
    if inst.n() % inst.m() != 0 {
        return None;
    }
    schedule_rec(inst, cover).map(Schedule::new)
}

pub struct VcResult {
    pub makespan: usize,
    pub witness: Schedule,
    /// The vertex cover that drove the search.
    pub cover: JobSet,
}

/// Smallest feasible deadline via upward scan from the trivial lower
/// bound: each candidate is padded tight, solved, and the padding jobs
/// stripped from the witness.
pub fn min_makespan_vc(inst: &Instance) -> VcResult {
    let cert = poset::min_vertex_cover(inst);
    if inst.n() == 0 {
        return VcResult {
            makespan: 0,
            witness: Schedule::new(Vec::new()),
            cover: cert.cover,
        };
    }
    let original = inst.all_jobs();
    let lb = poset::makespan_lower_bound(inst);
    for t in lb..=inst.n() {
        let padded = make_tight(inst, t).expect("t ≥ ⌈n/m⌉ by the lower bound");
        if let Some(sched) = schedule_vc(&padded, &cert.cover) {
            let slots: Vec<JobSet> = sched
                .slots
                .iter()
                .map(|s| s.intersection(&original))
                .collect();
            return VcResult {
                makespan: t,
                witness: Schedule::new(slots),
                cover: cert.cover,
            };
        }
    }
    unreachable!("n slots always suffice");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_min_makespan;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::HashSet;

    fn inst(n: usize, m: usize, arcs: &[(usize, usize)]) -> Instance {
        Instance::new(n, m, arcs, None).unwrap()
    }

    #[test]
    fn make_tight_pads_with_isolated_jobs() {
        let base = inst(4, 2, &[(0, 1)]);
        let padded = make_tight(&base, 3).unwrap();
        assert_eq!(padded.n(), 6);
        assert_eq!(padded.arcs(), base.arcs());
        assert!(padded.pred(4).is_empty() && padded.succ(4).is_empty());

        let exact = make_tight(&base, 2).unwrap();
        assert_eq!(exact.n(), 4);

        assert_eq!(
            make_tight(&base, 1),
            Err(VcError::Infeasible { n: 4, m: 2, t: 1 })
        );
    }

    #[test]
    fn make_tight_preserves_feasibility() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(1..=3);
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.3) {
                        arcs.push((u, v));
                    }
                }
            }
            let base = inst(n, m, &arcs);
            let opt = oracle_min_makespan(&base).unwrap().makespan;
            for t in opt.saturating_sub(1).max(1)..=opt + 1 {
                if base.n() > m * t {
                    continue;
                }
                let padded = make_tight(&base, t).unwrap();
                let feasible_orig = t >= opt;
                let padded_opt = oracle_min_makespan(&padded.with_deadline(None))
                    .unwrap()
                    .makespan;
                assert_eq!(padded_opt <= t, feasible_orig, "n={n} m={m} t={t}");
            }
        }
    }

    #[test]
    fn fingerprint_counts_are_powers_of_13() {
        for (k, want) in [(0usize, 1u64), (1, 13), (2, 169)] {
            let cover: JobSet = (0..k).collect();
            let mut seen = HashSet::new();
            let count = enumerate_fingerprints(&cover, |fp| {
                seen.insert(fp.clone());
            });
            assert_eq!(count, want);
            assert_eq!(seen.len() as u64, want);
        }
    }

    #[test]
    fn side_plan_places_an_early_q_job() {
        // Chain a ≺ b; a claimed as an early non-sink at a sink moment.
        let g = inst(2, 1, &[(0, 1)]);
        let side = SideFingerprint {
            c: JobSet::singleton(0),
            s: JobSet::new(),
            q: JobSet::singleton(0),
            e: JobSet::singleton(0),
        };
        let plan = deduce_side_plan(&g, &side, 1).unwrap();
        assert_eq!(plan.sink_moments, 1);
        assert_eq!(plan.z[1], 1);
        assert_eq!(plan.rosters[0], JobSet::singleton(0));
        assert_eq!(plan.block_len[0], 1);
        assert_eq!(plan.fixed_slot, vec![(0, 1)]);
    }

    #[test]
    fn side_plan_rejects_unsupported_late_q_job() {
        // A late lone Q-job needs a second sink moment, but nothing is
        // deduced into the first one.
        let g = inst(3, 1, &[(0, 1), (1, 2)]);
        let side = SideFingerprint {
            c: JobSet::from_iter([0, 1]),
            s: JobSet::new(),
            q: JobSet::singleton(0),
            e: JobSet::new(),
        };
        assert!(deduce_side_plan(&g, &side, 1).is_none());
    }

    #[test]
    fn intervals_leave_untouched_jobs_free() {
        // Edgeless tight instance: every job is open with full range.
        let g = inst(4, 2, &[]);
        let cover = JobSet::new();
        let fp = Fingerprint::default();
        let plan_l = deduce_side_plan(&g, &fp.left(), 2).unwrap();
        let plan_r = deduce_side_plan(&g.dual(), &fp.right(), 2).unwrap();
        let ia = compute_intervals(&g, 1, &cover, &fp, &plan_l, &plan_r);
        assert_eq!(ia.u_prime, g.all_jobs());
        for v in 0..4 {
            assert_eq!((ia.lo[v], ia.hi[v]), (1, 2));
        }
    }

    #[test]
    fn divide_on_edgeless_instance() {
        let g = inst(4, 2, &[]);
        let part = divide(&g, 1, &JobSet::new(), &Fingerprint::default()).unwrap();
        assert!(part.x_l.is_empty());
        assert_eq!(part.x_m.len(), 2);
        assert_eq!(part.x_r.len(), 2);
    }

    #[test]
    fn divide_rejects_contradictory_fingerprint() {
        // 0 ≺ 1 but the fingerprint puts 0 on the right and 1 on the left.
        let g = inst(4, 2, &[(0, 1)]);
        let cover = JobSet::singleton(0);
        let mut fp = Fingerprint::default();
        fp.c_r.insert(0);
        fp.s_r.insert(0);
        assert!(divide(&g, 1, &cover, &fp).is_none());
    }

    #[test]
    fn schedule_vc_solves_spec_shapes() {
        // {a≺c, b≺c, d}, m=2, T=2: c must run in the second slot.
        let g = inst(4, 2, &[(0, 2), (1, 2)]);
        let cover = JobSet::singleton(2);
        let sched = schedule_vc(&g.with_deadline(Some(2)), &cover).unwrap();
        assert!(validate(&g, &sched, true).is_ok());
        assert!(sched.slots[1].contains(2));

        // 3-chain, m=1, with the K3 comparability cover {a,b}.
        let chain = inst(3, 1, &[(0, 1), (1, 2)]);
        let sched = schedule_vc(&chain, &JobSet::from_iter([0, 1])).unwrap();
        assert_eq!(
            sched.slots,
            vec![
                JobSet::singleton(0),
                JobSet::singleton(1),
                JobSet::singleton(2)
            ]
        );

        // Edgeless with empty cover: base case.
        let flat = inst(6, 3, &[]);
        let sched = schedule_vc(&flat, &JobSet::new()).unwrap();
        assert!(validate(&flat, &sched, true).is_ok());

        // Infeasible tight deadline: a 4-chain cannot fit 2 slots.
        let long = inst(4, 2, &[(0, 1), (1, 2), (2, 3)]);
        assert!(schedule_vc(&long, &JobSet::from_iter([0, 1, 2])).is_none());
    }

    #[test]
    fn min_makespan_examples() {
        let diamond = inst(4, 2, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let res = min_makespan_vc(&diamond);
        assert_eq!(res.makespan, 3);
        assert!(validate(&diamond, &res.witness, false).is_ok());

        let anti = inst(4, 4, &[]);
        assert_eq!(min_makespan_vc(&anti).makespan, 1);
    }

    #[test]
    fn min_makespan_matches_oracle_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(2027);
        for case in 0..60 {
            let n = rng.gen_range(1..=8);
            let m = [1, 2, 3, n][rng.gen_range(0..4)];
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        arcs.push((u, v));
                    }
                }
            }
            let g = inst(n, m, &arcs);
            let want = oracle_min_makespan(&g).unwrap().makespan;
            let res = min_makespan_vc(&g);
            assert_eq!(res.makespan, want, "case {case}: n={n} m={m} {arcs:?}");
            assert!(validate(&g, &res.witness, false).is_ok(), "case {case}");
            assert_eq!(res.witness.makespan(), want);
        }
    }
}
