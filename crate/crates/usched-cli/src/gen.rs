//! Instance generators: seeded layered random DAGs, and the reduction
//! from Densest-κ-Subgraph that produces deadline-3 decision instances.

use anyhow::{bail, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use usched_core::Instance;

/// Layered random DAG: jobs are split into `layers` contiguous groups and
/// each pair of jobs in strictly increasing layers gets an arc with the
/// given probability; the closure is applied by construction of
/// [`Instance`]. Fully determined by the seed.
pub fn gen_random(n: usize, m: usize, density: f64, layers: usize, seed: u64) -> Instance {
    assert!(m >= 1 && layers >= 1);
    assert!((0.0..=1.0).contains(&density));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layer_of = |v: usize| v * layers / n.max(1);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if layer_of(u) < layer_of(v) && rng.gen_bool(density) {
                arcs.push((u, v));
            }
        }
    }
    Instance::new(n, m, &arcs, None).expect("forward arcs between layers are acyclic")
}

/// A Densest-κ-Subgraph input: choose κ of the `n_vertices` vertices to
/// maximize induced edges; the decision question is whether at least
/// `ell` edges are achievable.
#[derive(Debug, Clone)]
pub struct DksInstance {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Maximum degree bound the input promises to satisfy.
    pub delta: usize,
    pub kappa: usize,
    pub ell: usize,
}

impl DksInstance {
    pub fn new(
        n_vertices: usize,
        edges: Vec<(usize, usize)>,
        delta: usize,
        kappa: usize,
        ell: usize,
    ) -> Result<DksInstance> {
        let mut degree = vec![0usize; n_vertices];
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= n_vertices || v >= n_vertices {
                bail!("edge endpoint out of range");
            }
            if u == v {
                bail!("self-loop {u}");
            }
            if !seen.insert((u.min(v), u.max(v))) {
                bail!("duplicate edge {{{u},{v}}}");
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        if let Some(v) = (0..n_vertices).find(|&v| degree[v] == 0) {
            bail!("isolated vertex {v}: out of the reduction's range");
        }
        if let Some(v) = (0..n_vertices).find(|&v| degree[v] > delta) {
            bail!("vertex {v} exceeds the degree bound {delta}");
        }
        if kappa == 0 || kappa > n_vertices {
            bail!("kappa must lie in 1..=n_vertices");
        }
        Ok(DksInstance {
            n_vertices,
            edges,
            delta,
            kappa,
            ell,
        })
    }
}

/// Exhaustive densest-κ-subgraph value: max induced edges over all
/// κ-subsets. Intended for small inputs only.
pub fn brute_force_density(dks: &DksInstance) -> usize {
    let n = dks.n_vertices;
    assert!(n <= 24, "brute force density capped at 24 vertices");
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != dks.kappa {
            continue;
        }
        let induced = dks
            .edges
            .iter()
            .filter(|&&(u, v)| mask & (1 << u) != 0 && mask & (1 << v) != 0)
            .count();
        best = best.max(induced);
    }
    best
}

/// Reduces a DkS input to a scheduling instance with 3m jobs on
/// m = 2·Δ·N + 1 machines whose optimal makespan is 3 exactly when some
/// κ vertices induce at least `ell` edges. Jobs: one per vertex, one per
/// edge (after both endpoints), and three filler layers L1 ≺ L2 ≺ L3 of
/// sizes m−κ, m+κ−ℓ−N, m+ℓ−M. Returns the instance (deadline 3 recorded)
/// and the decision deadline.
pub fn reduce_dks(dks: &DksInstance) -> Result<(Instance, usize)> {
    let n_v = dks.n_vertices;
    let n_e = dks.edges.len();
    let m = 2 * dks.delta * n_v + 1;
    let l1 = m.checked_sub(dks.kappa);
    let l2 = (m + dks.kappa).checked_sub(dks.ell + n_v);
    let l3 = (m + dks.ell).checked_sub(n_e);
    let (Some(l1), Some(l2), Some(l3)) = (l1, l2, l3) else {
        bail!("layer sizes go negative: parameters outside the reduction's range");
    };
    // Job ids: vertices, then edges, then L1, L2, L3.
    let vertex = |v: usize| v;
    let edge = |e: usize| n_v + e;
    let l1_base = n_v + n_e;
    let l2_base = l1_base + l1;
    let l3_base = l2_base + l2;
    let total = l3_base + l3;
    debug_assert_eq!(total, 3 * m);
    let mut arcs = Vec::new();
    for (e, &(u, v)) in dks.edges.iter().enumerate() {
        arcs.push((vertex(u), edge(e)));
        arcs.push((vertex(v), edge(e)));
    }
    for a in l1_base..l2_base {
        for b in l2_base..l3_base {
            arcs.push((a, b));
        }
    }
    for b in l2_base..l3_base {
        for c in l3_base..total {
            arcs.push((b, c));
        }
    }
    let inst = Instance::new(total, m, &arcs, Some(3))?;
    Ok((inst, 3))
}

/// Seeded random bounded-degree graph without isolated vertices, as a DkS
/// input: edges are sampled until every vertex has degree ≥ 1, respecting
/// the degree bound.
pub fn gen_dks(n_vertices: usize, delta: usize, kappa: usize, ell: usize, seed: u64) -> Result<DksInstance> {
    assert!(n_vertices >= 2 && delta >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n_vertices];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut present = std::collections::HashSet::new();
    // Random spanning structure first, guaranteeing no isolated vertices.
    let mut order: Vec<usize> = (0..n_vertices).collect();
    for i in (1..n_vertices).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for w in order.windows(2) {
        let (u, v) = (w[0].min(w[1]), w[0].max(w[1]));
        if degree[u] < delta && degree[v] < delta {
            edges.push((u, v));
            present.insert((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    // A few extra random edges within the degree budget.
    for _ in 0..2 * n_vertices {
        let a = rng.gen_range(0..n_vertices);
        let b = rng.gen_range(0..n_vertices);
        let (u, v) = (a.min(b), a.max(b));
        if u != v && degree[u] < delta && degree[v] < delta && !present.contains(&(u, v)) {
            edges.push((u, v));
            present.insert((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    if let Some(v) = (0..n_vertices).find(|&v| degree[v] == 0) {
        // The path sweep can skip a vertex only when both neighbors were
        // saturated; retry with a fresh seed-derived stream.
        let _ = v;
        return gen_dks(n_vertices, delta, kappa, ell, seed.wrapping_add(0x9e3779b97f4a7c15));
    }
    DksInstance::new(n_vertices, edges, delta, kappa, ell)
}
