use usched_cli::{format, gen};

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use usched_core::dispatcher::{self, Solver};
use usched_core::oracle;
use usched_core::{poset, validate, Instance, Schedule};

#[derive(Parser)]
#[command(
    name = "usched",
    about = "Exact solvers for unit-job precedence scheduling on identical machines"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Vc,
    Acdp,
    Split,
    #[value(name = "2n")]
    TwoN,
}

impl StrategyArg {
    fn force(self) -> Option<Solver> {
        match self {
            StrategyArg::Auto => None,
            StrategyArg::Vc => Some(Solver::Vc),
            StrategyArg::Acdp => Some(Solver::AntichainDp),
            StrategyArg::Split => Some(Solver::Splitter),
            StrategyArg::TwoN => Some(Solver::TwoN),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    JsonReport,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance file for the minimum makespan.
    Solve {
        file: PathBuf,
        /// Decide feasibility at this deadline instead of minimizing.
        #[arg(long)]
        deadline: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Print the witness schedule.
        #[arg(long)]
        witness: bool,
    },
    /// Check a printed schedule ("t: j1 j2 …" lines) against an instance.
    Validate {
        instance: PathBuf,
        schedule: PathBuf,
    },
    /// Count the antichains of the comparability graph, with the
    /// chain-decomposition upper bound.
    CountAntichains { file: PathBuf },
    /// Minimum vertex cover of the comparability graph with its witness
    /// antichain.
    VertexCover { file: PathBuf },
    /// Generate a seeded layered random instance (written to stdout).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 3)]
        layers: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Generate a Densest-κ-Subgraph input and emit its reduction to a
    /// deadline-3 scheduling instance (written to stdout).
    GenDks {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        #[arg(long)]
        kappa: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Brute-force ground truth (subset DP up to n = 20, branch-and-prune
    /// search beyond).
    Oracle {
        file: PathBuf,
        #[arg(long)]
        witness: bool,
    },
    /// Run a seeded instance suite through the dispatcher and print a CSV
    /// report.
    Bench {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 11)]
        max_n: usize,
        /// Also fix m (otherwise varied with the seed).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Cross-check every solver against the oracle on a seeded suite;
    /// exits nonzero on any disagreement.
    Xcheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 9)]
        max_n: usize,
    },
}

#[derive(Serialize)]
struct SolveReport {
    n: usize,
    m: usize,
    cover: usize,
    strategy: &'static str,
    rationale: String,
    bound: String,
    deadline: Option<usize>,
    feasible: Option<bool>,
    makespan: usize,
    witness: Vec<Vec<usize>>,
}

fn witness_json(sched: &Schedule) -> Vec<Vec<usize>> {
    sched
        .slots
        .iter()
        .map(|s| s.iter().map(|v| v + 1).collect())
        .collect()
}

fn cmd_solve(
    file: &Path,
    deadline: Option<usize>,
    strategy: StrategyArg,
    fmt: OutputFormat,
    witness: bool,
) -> Result<()> {
    let inst = format::parse(file)?;
    let deadline = deadline.or(inst.deadline());
    let out = dispatcher::solve_with(&inst.with_deadline(None), strategy.force())?;
    let feasible = deadline.map(|t| out.makespan <= t);
    match fmt {
        OutputFormat::Text => {
            println!(
                "n={} m={} cover={} strategy={} ({})",
                inst.n(),
                inst.m(),
                out.cover_size,
                out.solver.name(),
                out.strategy.rationale
            );
            println!("makespan: {}", out.makespan);
            if let (Some(t), Some(f)) = (deadline, feasible) {
                println!(
                    "deadline {t}: {}",
                    if f { "feasible" } else { "infeasible" }
                );
            }
            if witness {
                print!("{}", format::schedule_string(&out.witness));
            }
        }
        OutputFormat::JsonReport => {
            let report = SolveReport {
                n: inst.n(),
                m: inst.m(),
                cover: out.cover_size,
                strategy: out.solver.name(),
                rationale: out.strategy.rationale.clone(),
                bound: out.strategy.bound.clone(),
                deadline,
                feasible,
                makespan: out.makespan,
                witness: if witness {
                    witness_json(&out.witness)
                } else {
                    vec![]
                },
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    if feasible == Some(false) {
        std::process::exit(2);
    }
    Ok(())
}

fn cmd_oracle(file: &Path, witness: bool) -> Result<()> {
    let inst = format::parse(file)?;
    let plain = inst.with_deadline(None);
    let res = if plain.n() <= 20 {
        let r = oracle::oracle_min_makespan(&plain).map_err(|e| anyhow!("{e}"))?;
        oracle::OracleResult {
            makespan: r.makespan,
            witness: r.witness,
        }
    } else {
        oracle::dfs_min_makespan(&plain)
    };
    println!("makespan: {}", res.makespan);
    if let Some(t) = inst.deadline() {
        println!(
            "deadline {t}: {}",
            if res.makespan <= t {
                "feasible"
            } else {
                "infeasible"
            }
        );
    }
    if witness {
        print!("{}", format::schedule_string(&res.witness));
    }
    Ok(())
}

/// Rough size of the dominant in-memory structure per solver, for the
/// bench report: the 2^n-entry bit tables of the convolution solvers, or
/// the memoized antichain states of the DP; the fingerprint search keeps
/// no table.
fn peak_table_bytes(solver: Solver, n: usize, makespan: usize, states: usize) -> usize {
    match solver {
        Solver::TwoN | Solver::Splitter => (makespan + 1) * ((1usize << n.min(30)) / 8).max(1),
        Solver::AntichainDp => states * (n / 8 + 24),
        Solver::Vc => 0,
    }
}

fn bench_suite(seed: u64, count: usize, max_n: usize, fixed_m: Option<usize>) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            let n = 1 + (s % max_n as u64) as usize;
            let m = fixed_m.unwrap_or(1 + (s / 7 % n as u64) as usize);
            let density = 0.1 + (s % 5) as f64 * 0.1;
            let layers = 1 + (s % 3) as usize;
            gen::gen_random(n, m, density, layers, s)
        })
        .collect()
}

fn cmd_bench(seed: u64, count: usize, max_n: usize, m: Option<usize>) -> Result<()> {
    println!("instance-id,n,m,cover,ac,strategy,makespan,wall-time,peak-table-bytes");
    for (i, inst) in bench_suite(seed, count, max_n, m).iter().enumerate() {
        let ac = if inst.n() <= 20 {
            poset::count_antichains(inst).to_string()
        } else {
            poset::antichain_bound(inst).to_string()
        };
        let start = Instant::now();
        let out = dispatcher::solve(inst)?;
        let wall = start.elapsed().as_secs_f64();
        let states = if out.solver == Solver::AntichainDp {
            usched_core::antichain_dp::min_makespan_antichain_dp(inst).states
        } else {
            0
        };
        println!(
            "{},{},{},{},{},{},{},{:.6},{}",
            i,
            inst.n(),
            inst.m(),
            out.cover_size,
            ac,
            out.solver.name(),
            out.makespan,
            wall,
            peak_table_bytes(out.solver, inst.n(), out.makespan, states)
        );
    }
    Ok(())
}

fn cmd_xcheck(seed: u64, count: usize, max_n: usize) -> Result<()> {
    if max_n > 20 {
        bail!("xcheck compares against the subset-DP oracle (n ≤ 20)");
    }
    let mut bad = 0usize;
    for (i, inst) in bench_suite(seed, count, max_n, None).iter().enumerate() {
        let want = oracle::oracle_min_makespan(inst)
            .map_err(|e| anyhow!("{e}"))?
            .makespan;
        for s in [Solver::Vc, Solver::AntichainDp, Solver::Splitter, Solver::TwoN] {
            let got = dispatcher::solve_with(inst, Some(s))?;
            if got.makespan != want {
                bad += 1;
                eprintln!(
                    "instance {i} (n={}, m={}): {} returned {}, oracle {}",
                    inst.n(),
                    inst.m(),
                    s.name(),
                    got.makespan,
                    want
                );
            }
        }
    }
    if bad > 0 {
        bail!("{bad} solver/oracle disagreements");
    }
    println!("xcheck: {count} instances, all solvers agree with the oracle");
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Solve {
            file,
            deadline,
            strategy,
            format,
            witness,
        } => cmd_solve(&file, deadline, strategy, format, witness),
        Cmd::Validate { instance, schedule } => {
            let inst = format::parse(&instance)?;
            let text = std::fs::read_to_string(&schedule)?;
            let sched = format::parse_schedule_str(&text)?;
            match validate(&inst, &sched, false) {
                Ok(()) => {
                    println!("valid: {} slots", sched.makespan());
                    Ok(())
                }
                Err(v) => bail!("invalid schedule: {v}"),
            }
        }
        Cmd::CountAntichains { file } => {
            let inst = format::parse(&file)?;
            if inst.n() > 30 {
                bail!("antichain counting capped at n = 30");
            }
            println!("antichains: {}", poset::count_antichains(&inst));
            println!("bound: {}", poset::antichain_bound(&inst));
            Ok(())
        }
        Cmd::VertexCover { file } => {
            let inst = format::parse(&file)?;
            let cert = poset::min_vertex_cover(&inst);
            let show = |s: &usched_core::JobSet| {
                s.iter()
                    .map(|v| (v + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!("cover ({}): {}", cert.cover.len(), show(&cert.cover));
            println!(
                "witness antichain ({}): {}",
                cert.witness_antichain.len(),
                show(&cert.witness_antichain)
            );
            Ok(())
        }
        Cmd::Gen {
            n,
            m,
            density,
            layers,
            seed,
        } => {
            if !(0.0..=1.0).contains(&density) || m == 0 || layers == 0 {
                bail!("need 0 ≤ density ≤ 1, m ≥ 1, layers ≥ 1");
            }
            print!("{}", format::emit_string(&gen::gen_random(n, m, density, layers, seed)));
            Ok(())
        }
        Cmd::GenDks {
            vertices,
            delta,
            kappa,
            ell,
            seed,
        } => {
            let dks = gen::gen_dks(vertices, delta, kappa, ell, seed)?;
            let (inst, t) = gen::reduce_dks(&dks)?;
            println!(
                "c DkS: N={} M={} delta={} kappa={} ell={}; makespan {} iff den >= ell",
                dks.n_vertices,
                dks.edges.len(),
                dks.delta,
                dks.kappa,
                dks.ell,
                t
            );
            print!("{}", format::emit_string(&inst));
            Ok(())
        }
        Cmd::Oracle { file, witness } => cmd_oracle(&file, witness),
        Cmd::Bench {
            seed,
            count,
            max_n,
            m,
        } => cmd_bench(seed, count, max_n, m),
        Cmd::Xcheck { seed, count, max_n } => cmd_xcheck(seed, count, max_n),
    }
}
