//! Top-level solver: picks among the three algorithms by the size of the
//! comparability-graph vertex cover and the machine count, so that the
//! chosen solver's bound stays within O(1.995^n) overall. Small covers go
//! to the fingerprint search; otherwise few machines go to the antichain
//! DP, and many machines to the splitter reduction.

use thiserror::Error;

use crate::antichain_dp::min_makespan_antichain_dp;
use crate::convolution::{min_makespan_2n, ConvolutionError};
use crate::instance::Instance;
use crate::poset;
use crate::schedule::{validate, Schedule};
use crate::splitter::min_makespan_splitter;
use crate::vc::min_makespan_vc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Vc,
    AntichainDp,
    Splitter,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Vc => "vc",
            StrategyKind::AntichainDp => "acdp",
            StrategyKind::Splitter => "split",
        }
    }
}

/// Outcome of the strategy decision, with the threshold comparison that
/// produced it and the runtime bound that applies in that regime.
#[derive(Debug, Clone)]
pub struct Strategy {
    pub chosen: StrategyKind,
    pub rationale: String,
    pub bound: String,
}

/// Decision tree: the fingerprint search iff cover ≤ n/7.5; otherwise the
/// antichain DP iff m ≤ n/258; otherwise the splitter. Comparisons are
/// exact (integer cross-multiplication), so boundary cases never depend
/// on floating point.
pub fn choose_strategy(n: usize, m: usize, cover_size: usize) -> Strategy {
    if 15 * cover_size <= 2 * n {
        Strategy {
            chosen: StrategyKind::Vc,
            rationale: format!("|C| = {cover_size} ≤ n/7.5 = {}/7.5", n),
            bound: "O*(169^|C|) ⊆ O(1.995^n)".to_string(),
        }
    } else if 258 * m <= n {
        Strategy {
            chosen: StrategyKind::AntichainDp,
            rationale: format!("|C| = {cover_size} > n/7.5 and m = {m} ≤ n/258 = {n}/258"),
            bound: "O*(#AC · C(n,m)) ⊆ O*(1.9445^n · 1.0257^n)".to_string(),
        }
    } else {
        Strategy {
            chosen: StrategyKind::Splitter,
            rationale: format!("|C| = {cover_size} > n/7.5 and m = {m} > n/258 = {n}/258"),
            bound: "O*(#AC + 2^(n−m)) with #AC ≤ O(1.9445^n)".to_string(),
        }
    }
}

/// A solver that can be forced explicitly; `TwoN` is the plain subset-DP
/// baseline, never chosen automatically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Vc,
    AntichainDp,
    Splitter,
    TwoN,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Vc => "vc",
            Solver::AntichainDp => "acdp",
            Solver::Splitter => "split",
            Solver::TwoN => "2n",
        }
    }
}

#[derive(Debug, Error)]
pub enum DispatchError {
    /// The subset-convolution solvers hold 2^n-entry tables and refuse
    /// instances past their size cap.
    #[error("solver table too large: {0}")]
    TableTooLarge(#[from] ConvolutionError),
}

pub struct SolveOutcome {
    pub makespan: usize,
    pub witness: Schedule,
    /// Solver actually run (equals the strategy unless forced).
    pub solver: Solver,
    pub strategy: Strategy,
    pub cover_size: usize,
}

/// Solves the instance with the automatically chosen strategy.
pub fn solve(inst: &Instance) -> Result<SolveOutcome, DispatchError> {
    solve_with(inst, None)
}

/// Solves with an explicit solver override (for benchmarking and
/// cross-checks); `None` dispatches automatically.
pub fn solve_with(inst: &Instance, force: Option<Solver>) -> Result<SolveOutcome, DispatchError> {
    let cover_size = poset::min_vertex_cover(inst).cover.len();
    let strategy = choose_strategy(inst.n(), inst.m(), cover_size);
    let solver = force.unwrap_or(match strategy.chosen {
        StrategyKind::Vc => Solver::Vc,
        StrategyKind::AntichainDp => Solver::AntichainDp,
        StrategyKind::Splitter => Solver::Splitter,
    });
    let (makespan, witness) = match solver {
        Solver::Vc => {
            let r = min_makespan_vc(inst);
            (r.makespan, r.witness)
        }
        Solver::AntichainDp => {
            let r = min_makespan_antichain_dp(inst);
            (r.makespan, r.witness)
        }
        Solver::Splitter => {
            let r = min_makespan_splitter(inst)?;
            (r.makespan, r.witness)
        }
        Solver::TwoN => {
            let r = min_makespan_2n(inst)?;
            (r.makespan, r.witness)
        }
    };
    assert_eq!(
        validate(inst, &witness, false),
        Ok(()),
        "every dispatched witness must validate"
    );
    assert_eq!(witness.makespan(), makespan);
    Ok(SolveOutcome {
        makespan,
        witness,
        solver,
        strategy,
        cover_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_min_makespan;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn strategy_decision_tree() {
        assert_eq!(choose_strategy(75, 5, 10).chosen, StrategyKind::Vc); // 10 ≤ 10
        assert_eq!(choose_strategy(75, 5, 11).chosen, StrategyKind::Splitter);
        assert_eq!(
            choose_strategy(516, 2, 100).chosen,
            StrategyKind::AntichainDp
        );
        assert_eq!(choose_strategy(516, 3, 100).chosen, StrategyKind::Splitter);
        assert_eq!(choose_strategy(75, 40, 20).chosen, StrategyKind::Splitter);
    }

    #[test]
    fn edgeless_instances_take_the_vc_path() {
        let inst = Instance::new(12, 4, &[], None).unwrap();
        let out = solve(&inst).unwrap();
        assert_eq!(out.cover_size, 0);
        assert_eq!(out.solver, Solver::Vc);
        assert_eq!(out.makespan, 3);
    }

    #[test]
    fn strategies_agree_with_each_other_and_the_oracle() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..40 {
            let n = rng.gen_range(1..=9);
            let m = [1usize, 2, n][rng.gen_range(0..3)];
            let p: f64 = rng.gen_range(0.1..0.5);
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(p) {
                        arcs.push((u, v));
                    }
                }
            }
            let inst = Instance::new(n, m, &arcs, None).unwrap();
            let want = oracle_min_makespan(&inst).unwrap().makespan;
            assert_eq!(solve(&inst).unwrap().makespan, want);
            for s in [Solver::Vc, Solver::AntichainDp, Solver::Splitter, Solver::TwoN] {
                assert_eq!(solve_with(&inst, Some(s)).unwrap().makespan, want);
            }
        }
    }

    #[test]
    fn table_cap_is_reported() {
        let big = Instance::new(32, 2, &[], None).unwrap();
        assert!(solve_with(&big, Some(Solver::TwoN)).is_err());
    }
}
