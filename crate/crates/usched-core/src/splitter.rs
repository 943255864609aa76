//! Split solver: reduce the instance, then guess the slot z and its
//! antichain content S_z; everything after slot z is forced to
//! (succ(S_z) ∪ sinks(V)) ∖ S_z, so a feasibility table on G[V∖sinks]
//! plus a dual table on the reversal of G[V∖sources] decide each guess.

use crate::convolution::{self, ConvolutionError, FeasibilityTables};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::poset;
use crate::schedule::Schedule;

/// One exhaustively applied reduction, in original job ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionEvent {
    RemovedIsolated(JobSet),
    /// ≤ m sources scheduled in the first remaining slot; deadline -1.
    StrippedSources(JobSet),
    /// ≤ m sinks scheduled in the last remaining slot; deadline -1.
    StrippedSinks(JobSet),
}

#[derive(Debug)]
pub struct ReducedInstance {
    pub inst: Instance,
    /// Deadline left for the reduced instance.
    pub t: usize,
    /// Reduced index -> original index.
    pub map: Vec<usize>,
    pub events: Vec<ReductionEvent>,
    pub removed_isolated: JobSet,
    pub stripped_layers: usize,
}

#[derive(Debug)]
pub enum ReductionOutcome {
    /// n > mT at some stage: no schedule exists.
    Infeasible,
    Reduced(ReducedInstance),
}

/// Applies the two reduction rules to fixpoint: drop isolated jobs, and
/// strip a ≤ m source layer (or sink layer) into a dedicated slot,
/// decrementing the deadline.
pub fn apply_reductions(inst: &Instance, t: usize) -> ReductionOutcome {
    let mut alive = inst.all_jobs();
    let mut t_cur = t;
    let mut events = Vec::new();
    let mut removed_isolated = JobSet::new();
    let mut stripped_layers = 0;
    loop {
        if alive.len() > inst.m() * t_cur {
            return ReductionOutcome::Infeasible;
        }
        if alive.is_empty() {
            break;
        }
        let sources = poset::sources_in(inst, &alive);
        if sources.len() <= inst.m() {
            alive.subtract(&sources);
            t_cur -= 1;
            stripped_layers += 1;
            events.push(ReductionEvent::StrippedSources(sources));
            continue;
        }
        let sinks = poset::sinks_in(inst, &alive);
        if sinks.len() <= inst.m() {
            alive.subtract(&sinks);
            t_cur -= 1;
            stripped_layers += 1;
            events.push(ReductionEvent::StrippedSinks(sinks));
            continue;
        }
        let iso: JobSet = alive
            .iter()
            .filter(|&v| !inst.pred(v).intersects(&alive) && !inst.succ(v).intersects(&alive))
            .collect();
        if !iso.is_empty() {
            alive.subtract(&iso);
            removed_isolated.union_with(&iso);
            events.push(ReductionEvent::RemovedIsolated(iso));
            continue;
        }
        break;
    }
    let (reduced, map) = inst.induced(&alive);
    ReductionOutcome::Reduced(ReducedInstance {
        inst: reduced,
        t: t_cur,
        map,
        events,
        removed_isolated,
        stripped_layers,
    })
}

struct SplitTables {
    /// Prefix tables on G[V∖sinks(V)], reduced-index jobs `prefix_map`.
    prefix: FeasibilityTables,
    prefix_inv: Vec<usize>,
    /// Suffix tables on the reversal of G[V∖sources(V)].
    suffix: FeasibilityTables,
    suffix_inv: Vec<usize>,
    sinks: JobSet,
}

fn build_tables(red: &Instance, t: usize) -> Result<SplitTables, ConvolutionError> {
    let n = red.n();
    let sinks = poset::sinks(red);
    let sources = poset::sources(red);
    let depth = t.saturating_sub(1);
    let invert = |map: &[usize]| {
        let mut inv = vec![usize::MAX; n];
        for (new, &old) in map.iter().enumerate() {
            inv[old] = new;
        }
        inv
    };
    let (pre_inst, pre_map) = red.induced(&red.all_jobs().difference(&sinks));
    let (_, prefix) = convolution::solve_2n(&pre_inst, depth)?;
    let (suf_inst, suf_map) = red.induced(&red.all_jobs().difference(&sources));
    let (_, suffix) = convolution::solve_2n(&suf_inst.dual(), depth)?;
    Ok(SplitTables {
        prefix,
        prefix_inv: invert(&pre_map),
        suffix,
        suffix_inv: invert(&suf_map),
        sinks,
    })
}

fn remap_mask(set: &JobSet, inv: &[usize]) -> usize {
    let mut mask = 0usize;
    for v in set.iter() {
        debug_assert_ne!(inv[v], usize::MAX);
        mask |= 1 << inv[v];
    }
    mask
}

/// An accepted guess: slot z holds `s_z`, `prefix` fills slots 1..z-1,
/// `suffix` fills slots z+1..t. All in reduced indices.
struct Split {
    z: usize,
    s_z: JobSet,
    prefix: JobSet,
    suffix: JobSet,
}

fn find_split(red: &Instance, t: usize, tables: &SplitTables) -> Option<Split> {
    let all = red.all_jobs();
    let mut found: Option<Split> = None;
    poset::enumerate_antichains(red, |a| {
        if found.is_some() || a.len() > red.m() {
            return;
        }
        let mut suffix = tables.sinks.clone();
        for v in a.iter() {
            suffix.union_with(red.succ(v));
        }
        suffix.subtract(a);
        let mut prefix = all.difference(a);
        prefix.subtract(&suffix);
        let pmask = remap_mask(&prefix, &tables.prefix_inv);
        let smask = remap_mask(&suffix, &tables.suffix_inv);
        for z in 1..=t {
            if z - 1 <= tables.prefix.t_max()
                && t - z <= tables.suffix.t_max()
                && tables.prefix.f(z - 1, pmask)
                && tables.suffix.f(t - z, smask)
            {
                found = Some(Split {
                    z,
                    s_z: a.clone(),
                    prefix,
                    suffix,
                });
                return;
            }
        }
    });
    found
}

/// Decision procedure: is the instance schedulable within `t` slots?
pub fn solve_splitter(inst: &Instance, t: usize) -> Result<bool, ConvolutionError> {
    Ok(schedule_splitter(inst, t)?.is_some())
}

/// As the decision procedure, but also reconstructs a witness when feasible.
pub fn schedule_splitter(
    inst: &Instance,
    t: usize,
) -> Result<Option<Schedule>, ConvolutionError> {
    let red = match apply_reductions(inst, t) {
        ReductionOutcome::Infeasible => return Ok(None),
        ReductionOutcome::Reduced(r) => r,
    };
    let mut slots: Vec<JobSet>;
    if red.inst.n() == 0 {
        slots = vec![JobSet::new(); red.t];
    } else {
        let tables = build_tables(&red.inst, red.t)?;
        let Some(split) = find_split(&red.inst, red.t, &tables) else {
            return Ok(None);
        };
        // Prefix slots come straight out of the tables; suffix slots are
        // backtracked on the reversed graph, so their order flips back.
        let (pre_inst, pre_map) = red
            .inst
            .induced(&red.inst.all_jobs().difference(&tables.sinks));
        let sources = poset::sources(&red.inst);
        let (suf_inst, suf_map) = red.inst.induced(&red.inst.all_jobs().difference(&sources));
        let unmap = |local: Vec<JobSet>, map: &[usize]| -> Vec<JobSet> {
            local
                .into_iter()
                .map(|s| s.iter().map(|v| map[v]).collect())
                .collect()
        };
        let pmask = remap_mask(&split.prefix, &tables.prefix_inv);
        let smask = remap_mask(&split.suffix, &tables.suffix_inv);
        slots = unmap(
            convolution::backtrack_slots(&pre_inst, &tables.prefix, pmask, split.z - 1),
            &pre_map,
        );
        slots.push(split.s_z.clone());
        let mut suf_slots = unmap(
            convolution::backtrack_slots(
                &suf_inst.dual(),
                &tables.suffix,
                smask,
                red.t - split.z,
            ),
            &suf_map,
        );
        suf_slots.reverse();
        slots.extend(suf_slots);
    }
    // Translate reduced indices back to original ids, then undo reductions
    // in reverse: strips re-grow the schedule at the matching end, isolated
    // jobs drop into whatever spare capacity exists at that stage.
    slots = slots
        .into_iter()
        .map(|s| s.iter().map(|v| red.map[v]).collect())
        .collect();
    for event in red.events.iter().rev() {
        match event {
            ReductionEvent::StrippedSources(jobs) => slots.insert(0, jobs.clone()),
            ReductionEvent::StrippedSinks(jobs) => slots.push(jobs.clone()),
            ReductionEvent::RemovedIsolated(jobs) => {
                for v in jobs.iter() {
                    let slot = slots
                        .iter_mut()
                        .find(|s| s.len() < inst.m())
                        .expect("reduction kept n <= mT, so spare capacity exists");
                    slot.insert(v);
                }
            }
        }
    }
    debug_assert_eq!(slots.len(), t);
    Ok(Some(Schedule::new(slots)))
}

pub struct SplitterResult {
    pub makespan: usize,
    pub witness: Schedule,
}

/// Smallest feasible deadline via upward scan from the trivial lower bound.
pub fn min_makespan_splitter(inst: &Instance) -> Result<SplitterResult, ConvolutionError> {
    if inst.n() == 0 {
        return Ok(SplitterResult {
            makespan: 0,
            witness: Schedule::new(vec![]),
        });
    }
    let lb = poset::makespan_lower_bound(inst);
    for t in lb..=inst.n() {
        if let Some(witness) = schedule_splitter(inst, t)? {
            return Ok(SplitterResult {
                makespan: t,
                witness,
            });
        }
    }
    unreachable!("n slots always suffice");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::validate;

    #[test]
    fn reduction_examples() {
        // 2 isolated jobs among 6; the 2x2 bipartite core is irreducible
        // at m=1 (more than m sources and sinks), so only they disappear.
        let inst = Instance::new(6, 1, &[(0, 2), (0, 3), (1, 2), (1, 3)], None).unwrap();
        match apply_reductions(&inst, 6) {
            ReductionOutcome::Reduced(r) => {
                assert_eq!(r.removed_isolated, JobSet::from_iter([4, 5]));
                assert_eq!(r.inst.n(), 4);
            }
            ReductionOutcome::Infeasible => panic!("feasible by counting"),
        }
        // 3-chain, m=2: three source layers strip; fully reduced.
        let chain = Instance::new(3, 2, &[(0, 1), (1, 2)], None).unwrap();
        match apply_reductions(&chain, 3) {
            ReductionOutcome::Reduced(r) => {
                assert_eq!(r.inst.n(), 0);
                assert_eq!(r.stripped_layers, 3);
                assert_eq!(r.t, 0);
            }
            ReductionOutcome::Infeasible => panic!("feasible by counting"),
        }
    }

    #[test]
    fn counting_shortcut() {
        let inst = Instance::new(5, 2, &[], None).unwrap();
        assert!(matches!(
            apply_reductions(&inst, 2),
            ReductionOutcome::Infeasible
        ));
    }

    #[test]
    fn decision_examples() {
        let inst = Instance::new(4, 2, &[(0, 2), (1, 2)], None).unwrap();
        assert!(solve_splitter(&inst, 2).unwrap());
        assert!(!solve_splitter(&inst, 1).unwrap());
        let empty = Instance::new(0, 1, &[], None).unwrap();
        assert!(solve_splitter(&empty, 0).unwrap());
    }

    #[test]
    fn witnesses_validate_after_reinflation() {
        let inst = Instance::new(7, 2, &[(0, 2), (1, 2), (2, 3), (2, 4)], None).unwrap();
        let res = min_makespan_splitter(&inst).unwrap();
        assert_eq!(validate(&inst, &res.witness, false), Ok(()));
        assert_eq!(res.witness.assigned(), inst.all_jobs());
        assert_eq!(
            res.makespan,
            crate::oracle::oracle_min_makespan(&inst).unwrap().makespan
        );
    }

    #[test]
    fn agrees_with_oracle_on_mixed_instances() {
        let cases: Vec<(usize, usize, Vec<(usize, usize)>)> = vec![
            (1, 1, vec![]),
            (4, 1, vec![(0, 1), (2, 3)]),
            (5, 2, vec![(0, 1), (0, 2), (3, 4)]),
            (6, 3, vec![(0, 3), (1, 3), (2, 3), (3, 4), (3, 5)]),
            (6, 2, vec![(0, 1), (1, 2), (3, 4), (4, 5)]),
        ];
        for (n, m, arcs) in cases {
            let inst = Instance::new(n, m, &arcs, None).unwrap();
            let want = crate::oracle::oracle_min_makespan(&inst).unwrap().makespan;
            let res = min_makespan_splitter(&inst).unwrap();
            assert_eq!(res.makespan, want, "n={n} m={m}");
            assert_eq!(validate(&inst, &res.witness, false), Ok(()));
        }
    }
}
