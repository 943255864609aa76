//! Structural queries on the precedence poset: sinks/sources, heights,
//! depth, comparability graph, minimum vertex cover (via Dilworth/König),
//! and antichain enumeration, counting and bounding.

use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::matching;
use num_bigint::BigUint;

/// Jobs of `x` with no successor within `x`.
pub fn sinks_in(inst: &Instance, x: &JobSet) -> JobSet {
    let mut out = JobSet::new();
    for v in x.iter() {
        if !inst.succ(v).intersects(x) {
            out.insert(v);
        }
    }
    out
}

/// Jobs of `x` with no predecessor within `x`.
pub fn sources_in(inst: &Instance, x: &JobSet) -> JobSet {
    let mut out = JobSet::new();
    for v in x.iter() {
        if !inst.pred(v).intersects(x) {
            out.insert(v);
        }
    }
    out
}

pub fn sinks(inst: &Instance) -> JobSet {
    sinks_in(inst, &inst.all_jobs())
}

pub fn sources(inst: &Instance) -> JobSet {
    sources_in(inst, &inst.all_jobs())
}

/// Per-job height: length in arcs of the longest chain starting at the job.
pub fn heights(inst: &Instance) -> Vec<usize> {
    let mut h = vec![0usize; inst.n()];
    for &v in inst.topo_order().iter().rev() {
        for s in inst.succ(v).iter() {
            h[v] = h[v].max(h[s] + 1);
        }
    }
    h
}

/// Height of the whole poset (longest chain, in arcs); 0 for n = 0.
pub fn height(inst: &Instance) -> usize {
    heights(inst).into_iter().max().unwrap_or(0)
}

/// Trivial makespan lower bound: max(⌈n/m⌉, height + 1), 0 for n = 0.
pub fn makespan_lower_bound(inst: &Instance) -> usize {
    if inst.n() == 0 {
        return 0;
    }
    inst.n().div_ceil(inst.m()).max(height(inst) + 1)
}

/// Length in arcs of the longest chain inside `X ∪ {v}` ending at `v`.
pub fn depth_wrt(inst: &Instance, x: &JobSet, v: usize) -> usize {
    let mut d = vec![0usize; inst.n()];
    let mut best = 0;
    for &u in inst.topo_order() {
        if u == v {
            for p in inst.pred(u).intersection(x).iter() {
                best = best.max(d[p] + 1);
            }
        } else if x.contains(u) {
            for p in inst.pred(u).intersection(x).iter() {
                d[u] = d[u].max(d[p] + 1);
            }
        }
    }
    best
}

/// The comparability graph: unordered pairs {u,v} with u,v comparable.
pub struct ComparabilityGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn comparability_graph(inst: &Instance) -> ComparabilityGraph {
    let mut edges = Vec::new();
    for u in 0..inst.n() {
        for v in inst.succ(u).iter() {
            edges.push((u.min(v), u.max(v)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    ComparabilityGraph { n: inst.n(), edges }
}

pub fn is_antichain(inst: &Instance, x: &JobSet) -> bool {
    x.iter().all(|v| !inst.succ(v).intersects(x))
}

/// Minimum vertex cover of the comparability graph, certified by the
/// complementary maximum antichain.
pub struct VertexCoverCertificate {
    pub cover: JobSet,
    pub witness_antichain: JobSet,
}

/// A partition of the jobs into chains; by Dilworth the minimum number of
/// chains equals the maximum antichain size.
pub struct ChainDecomposition {
    pub chains: Vec<Vec<usize>>,
}

fn split_graph(inst: &Instance) -> matching::Bipartite {
    let n = inst.n();
    let mut g = matching::Bipartite::new(n, n);
    // Feed left vertices in topological order so chains grow along long
    // paths first; the final matching size is order-independent.
    for &u in inst.topo_order() {
        for v in inst.succ(u).iter() {
            g.add_edge(u, v);
        }
    }
    g
}

/// Minimum chain partition via maximum matching on the split graph:
/// matched arc (u,v) makes v the chain-successor of u.
pub fn chain_decomposition(inst: &Instance) -> ChainDecomposition {
    let g = split_graph(inst);
    let m = matching::max_matching(&g);
    let mut chains = Vec::new();
    for start in 0..inst.n() {
        if m.pair_right[start] != matching::Matching::UNMATCHED {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while m.pair_left[cur] != matching::Matching::UNMATCHED {
            cur = m.pair_left[cur];
            chain.push(cur);
        }
        chains.push(chain);
    }
    debug_assert_eq!(chains.iter().map(|c| c.len()).sum::<usize>(), inst.n());
    ChainDecomposition { chains }
}

/// G^comp is a comparability graph, so the complement of a maximum
/// antichain is a minimum vertex cover; the antichain comes from König's
/// construction on the split-graph matching.
pub fn min_vertex_cover(inst: &Instance) -> VertexCoverCertificate {
    let g = split_graph(inst);
    let m = matching::max_matching(&g);
    let (cover_l, cover_r) = matching::min_vertex_cover(&g, &m);
    let mut antichain = JobSet::new();
    for v in 0..inst.n() {
        if !cover_l[v] && !cover_r[v] {
            antichain.insert(v);
        }
    }
    debug_assert!(is_antichain(inst, &antichain));
    debug_assert_eq!(antichain.len(), inst.n() - m.size);
    let cover = inst.all_jobs().difference(&antichain);
    VertexCoverCertificate {
        cover,
        witness_antichain: antichain,
    }
}

/// Calls `visitor` exactly once per antichain (including ∅) and returns
/// the count. Each antichain is built in increasing index order: a job may
/// only extend antichains whose members all have smaller index, and the
/// candidate pool shrinks by comparabilities eagerly, so no duplicates.
pub fn enumerate_antichains<F: FnMut(&JobSet)>(inst: &Instance, mut visitor: F) -> u64 {
    let n = inst.n();
    let mut incomparable = Vec::with_capacity(n);
    for v in 0..n {
        let mut inc = inst.all_jobs();
        inc.subtract(inst.pred(v));
        inc.subtract(inst.succ(v));
        inc.remove(v);
        incomparable.push(inc);
    }
    fn rec<F: FnMut(&JobSet)>(
        current: &mut JobSet,
        candidates: &JobSet,
        incomparable: &[JobSet],
        visitor: &mut F,
    ) -> u64 {
        visitor(current);
        let mut count = 1;
        for c in candidates.iter() {
            let mut next = candidates.intersection(&incomparable[c]);
            // Only larger indices may follow, to keep generation canonical.
            let lows: Vec<usize> = next.iter().take_while(|&low| low < c).collect();
            for low in lows {
                next.remove(low);
            }
            current.insert(c);
            count += rec(current, &next, incomparable, visitor);
            current.remove(c);
        }
        count
    }
    let mut current = JobSet::new();
    rec(&mut current, &inst.all_jobs(), &incomparable, &mut visitor)
}

/// Number of antichains, with no visitor overhead.
pub fn count_antichains(inst: &Instance) -> u64 {
    enumerate_antichains(inst, |_| {})
}

/// Upper bound ∏(|C_i|+1) over a minimum chain decomposition; every
/// antichain picks at most one job per chain.
pub fn antichain_bound(inst: &Instance) -> BigUint {
    let dec = chain_decomposition(inst);
    let mut bound = BigUint::from(1u32);
    for chain in &dec.chains {
        bound *= BigUint::from(chain.len() as u64 + 1);
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Instance {
        Instance::new(3, 1, &[(0, 1), (1, 2)], None).unwrap()
    }

    fn diamond() -> Instance {
        Instance::new(4, 2, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap()
    }

    #[test]
    fn sinks_sources_heights_on_chain() {
        let inst = chain3();
        assert_eq!(sinks(&inst), JobSet::singleton(2));
        assert_eq!(sources(&inst), JobSet::singleton(0));
        assert_eq!(heights(&inst), vec![2, 1, 0]);
    }

    #[test]
    fn antichain_instance_is_flat() {
        let inst = Instance::new(4, 2, &[], None).unwrap();
        assert_eq!(sinks(&inst), inst.all_jobs());
        assert_eq!(sources(&inst), inst.all_jobs());
        assert_eq!(heights(&inst), vec![0; 4]);
    }

    #[test]
    fn diamond_queries() {
        let inst = diamond();
        assert_eq!(heights(&inst)[0], 2);
        let restricted = sinks_in(&inst, &JobSet::from_iter([0, 1, 2]));
        assert_eq!(restricted, JobSet::from_iter([1, 2]));
    }

    #[test]
    fn depth_examples() {
        let inst = chain3();
        assert_eq!(depth_wrt(&inst, &JobSet::new(), 2), 0);
        assert_eq!(depth_wrt(&inst, &JobSet::from_iter([0, 1]), 2), 2);
        assert_eq!(depth_wrt(&inst, &JobSet::from_iter([0]), 2), 1);
    }

    #[test]
    fn cover_sizes() {
        // 4-chain: comparability graph is K4, cover 3.
        let k4 = Instance::new(4, 1, &[(0, 1), (1, 2), (2, 3)], None).unwrap();
        assert_eq!(min_vertex_cover(&k4).cover.len(), 3);
        // 5-antichain: edgeless.
        let flat = Instance::new(5, 2, &[], None).unwrap();
        assert_eq!(min_vertex_cover(&flat).cover.len(), 0);
        // Two disjoint 2-chains.
        let two = Instance::new(4, 2, &[(0, 1), (2, 3)], None).unwrap();
        assert_eq!(min_vertex_cover(&two).cover.len(), 2);
    }

    #[test]
    fn cover_certificate_is_consistent() {
        let inst = diamond();
        let cert = min_vertex_cover(&inst);
        assert!(is_antichain(&inst, &cert.witness_antichain));
        assert_eq!(
            cert.cover.union(&cert.witness_antichain),
            inst.all_jobs()
        );
        for (u, v) in comparability_graph(&inst).edges {
            assert!(cert.cover.contains(u) || cert.cover.contains(v));
        }
    }

    #[test]
    fn antichain_counts() {
        assert_eq!(count_antichains(&chain3()), 4);
        let flat = Instance::new(3, 1, &[], None).unwrap();
        assert_eq!(count_antichains(&flat), 8);
        assert_eq!(count_antichains(&diamond()), 6);
    }

    #[test]
    fn enumeration_is_duplicate_free_and_valid() {
        let inst = diamond();
        let mut seen = std::collections::HashSet::new();
        let count = enumerate_antichains(&inst, |a| {
            assert!(is_antichain(&inst, a));
            assert!(seen.insert(a.clone()));
        });
        assert_eq!(count, seen.len() as u64);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(antichain_bound(&chain3()), BigUint::from(4u32));
        let d = diamond();
        let bound = antichain_bound(&d);
        assert!(bound >= BigUint::from(count_antichains(&d)));
        // Equal chains: k chains of length c give (c+1)^k, and the bound is
        // attained because the chains are mutually incomparable.
        let eq = Instance::new(6, 2, &[(0, 1), (1, 2), (3, 4), (4, 5)], None).unwrap();
        assert_eq!(antichain_bound(&eq), BigUint::from(16u32));
        assert_eq!(count_antichains(&eq), 16);
    }
}
