//! Problem instances: unit jobs, identical machines, precedence arcs.
//!
//! The arc relation is kept transitively closed from construction on;
//! every solver relies on that invariant.

use crate::jobset::JobSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("machine count must be positive")]
    ZeroMachines,
    #[error("job index {0} out of range for {1} jobs")]
    JobOutOfRange(usize, usize),
    #[error("self-arc on job {0}")]
    SelfArc(usize),
    #[error("precedence arcs contain a cycle")]
    Cycle,
}

/// A closed precedence instance. Jobs are `0..n`.
#[derive(Debug, Clone)]
pub struct Instance {
    n: usize,
    m: usize,
    deadline: Option<usize>,
    pred: Vec<JobSet>,
    succ: Vec<JobSet>,
    topo: Vec<usize>,
}

impl PartialEq for Instance {
    // The topological order is derived bookkeeping; equality is structural.
    fn eq(&self, other: &Instance) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.deadline == other.deadline
            && self.succ == other.succ
    }
}

impl Eq for Instance {}

impl Instance {
    /// Builds an instance from raw arcs, rejecting cycles and self-arcs and
    /// normalizing to the transitive closure.
    pub fn new(
        n: usize,
        m: usize,
        arcs: &[(usize, usize)],
        deadline: Option<usize>,
    ) -> Result<Instance, InstanceError> {
        if m == 0 {
            return Err(InstanceError::ZeroMachines);
        }
        for &(u, v) in arcs {
            if u >= n {
                return Err(InstanceError::JobOutOfRange(u, n));
            }
            if v >= n {
                return Err(InstanceError::JobOutOfRange(v, n));
            }
            if u == v {
                return Err(InstanceError::SelfArc(u));
            }
        }
        let mut direct_succ = vec![JobSet::new(); n];
        let mut indeg = vec![0usize; n];
        for &(u, v) in arcs {
            if !direct_succ[u].contains(v) {
                direct_succ[u].insert(v);
                indeg[v] += 1;
            }
        }
        // Kahn's algorithm; a shortfall in the order means a cycle.
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            topo.push(u);
            for v in direct_succ[u].iter() {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
        if topo.len() != n {
            return Err(InstanceError::Cycle);
        }
        // Close under composition in reverse topological order.
        let mut succ = direct_succ;
        for &u in topo.iter().rev() {
            let mut closed = succ[u].clone();
            for v in succ[u].iter() {
                closed.union_with(&succ[v]);
            }
            succ[u] = closed;
        }
        let mut pred = vec![JobSet::new(); n];
        for u in 0..n {
            for v in succ[u].iter() {
                pred[v].insert(u);
            }
        }
        Ok(Instance {
            n,
            m,
            deadline,
            pred,
            succ,
            topo,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn deadline(&self) -> Option<usize> {
        self.deadline
    }

    pub fn with_deadline(&self, deadline: Option<usize>) -> Instance {
        let mut inst = self.clone();
        inst.deadline = deadline;
        inst
    }

    /// All (closed) predecessors of `v`.
    pub fn pred(&self, v: usize) -> &JobSet {
        &self.pred[v]
    }

    /// All (closed) successors of `v`.
    pub fn succ(&self, v: usize) -> &JobSet {
        &self.succ[v]
    }

    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.succ[u].contains(v)
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.precedes(u, v) || self.precedes(v, u)
    }

    /// A topological order of the jobs.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    /// The closed arc set, materialized.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.succ[u].iter() {
                out.push((u, v));
            }
        }
        out
    }

    pub fn all_jobs(&self) -> JobSet {
        JobSet::full(self.n)
    }

    /// The dual instance: every arc reversed, everything else unchanged.
    pub fn dual(&self) -> Instance {
        let mut topo = self.topo.clone();
        topo.reverse();
        Instance {
            n: self.n,
            m: self.m,
            deadline: self.deadline,
            pred: self.succ.clone(),
            succ: self.pred.clone(),
            topo,
        }
    }

    /// The sub-instance induced by `jobs`, with jobs renumbered to
    /// `0..jobs.len()` in increasing original order. Returns the instance
    /// and the mapping from new index to original index.
    pub fn induced(&self, jobs: &JobSet) -> (Instance, Vec<usize>) {
        let map: Vec<usize> = jobs.iter().collect();
        let mut inv = vec![usize::MAX; self.n];
        for (new, &old) in map.iter().enumerate() {
            inv[old] = new;
        }
        let k = map.len();
        let mut pred = vec![JobSet::new(); k];
        let mut succ = vec![JobSet::new(); k];
        for (new, &old) in map.iter().enumerate() {
            for p in self.pred[old].intersection(jobs).iter() {
                pred[new].insert(inv[p]);
            }
            for s in self.succ[old].intersection(jobs).iter() {
                succ[new].insert(inv[s]);
            }
        }
        let mut topo: Vec<usize> = self
            .topo
            .iter()
            .filter(|&&v| jobs.contains(v))
            .map(|&v| inv[v])
            .collect();
        debug_assert_eq!(topo.len(), k);
        if topo.is_empty() {
            topo = Vec::new();
        }
        (
            Instance {
                n: k,
                m: self.m,
                deadline: None,
                pred,
                succ,
                topo,
            },
            map,
        )
    }

    /// Extends the instance with `extra` isolated jobs (indices `n..n+extra`).
    pub fn with_padding(&self, extra: usize) -> Instance {
        let n = self.n + extra;
        let mut pred = self.pred.clone();
        let mut succ = self.succ.clone();
        pred.resize(n, JobSet::new());
        succ.resize(n, JobSet::new());
        let mut topo = self.topo.clone();
        topo.extend(self.n..n);
        Instance {
            n,
            m: self.m,
            deadline: self.deadline,
            pred,
            succ,
            topo,
        }
    }
}

/// Closes an arc set under composition. Standalone form of the
/// normalization done by [`Instance::new`].
pub fn transitive_closure(
    arcs: &[(usize, usize)],
    n: usize,
) -> Result<Vec<(usize, usize)>, InstanceError> {
    let inst = Instance::new(n, 1, arcs, None)?;
    Ok(inst.arcs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_chain() {
        let closed = transitive_closure(&[(0, 1), (1, 2)], 3).unwrap();
        assert_eq!(closed, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn closure_empty() {
        assert_eq!(transitive_closure(&[], 4).unwrap(), vec![]);
    }

    #[test]
    fn closure_diamond_adds_single_arc() {
        let closed = transitive_closure(&[(0, 1), (0, 2), (1, 3), (2, 3)], 4).unwrap();
        let extra: Vec<_> = closed
            .iter()
            .filter(|a| ![(0, 1), (0, 2), (1, 3), (2, 3)].contains(a))
            .collect();
        assert_eq!(extra, vec![&(0, 3)]);
    }

    #[test]
    fn closure_idempotent() {
        let first = transitive_closure(&[(0, 1), (1, 2), (2, 4)], 5).unwrap();
        let second = transitive_closure(&first, 5).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn rejects_cycle_and_self_arc() {
        assert_eq!(
            Instance::new(3, 1, &[(0, 1), (1, 2), (2, 0)], None).unwrap_err(),
            InstanceError::Cycle
        );
        assert_eq!(
            Instance::new(3, 1, &[(1, 1)], None).unwrap_err(),
            InstanceError::SelfArc(1)
        );
    }

    #[test]
    fn dual_is_involutive() {
        let inst = Instance::new(4, 2, &[(0, 1), (1, 3)], Some(3)).unwrap();
        let dd = inst.dual().dual();
        assert_eq!(inst, dd);
        assert_eq!(inst.dual().arcs(), vec![(1, 0), (3, 0), (3, 1)]);
    }

    #[test]
    fn dual_of_empty_relation_is_self() {
        let inst = Instance::new(3, 2, &[], None).unwrap();
        assert_eq!(inst.dual(), inst);
    }

    #[test]
    fn induced_subinstance_renumbers() {
        let inst = Instance::new(5, 2, &[(0, 2), (2, 4), (1, 3)], None).unwrap();
        let (sub, map) = inst.induced(&JobSet::from_iter([0, 2, 4]));
        assert_eq!(map, vec![0, 2, 4]);
        assert_eq!(sub.arcs(), vec![(0, 1), (0, 2), (1, 2)]);
    }
}
