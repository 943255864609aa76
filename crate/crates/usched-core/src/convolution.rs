//! Fast subset convolution (ranked zeta/Möbius transforms) and the
//! O*(2^n) feasibility tables built on it: f_t(X) = 1 iff X is
//! downward-closed and schedulable within the first t slots, via
//! h_t = f_{t-1} ⊛ g with g the indicator of small antichains.

use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::Schedule;
use thiserror::Error;

/// Hard cap on the ground-set size: 2^26 tables are the practical memory
/// ceiling, and ranked intermediates stay comfortably inside u64.
pub const MAX_N: usize = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConvolutionError {
    #[error("subset tables capped at n <= {MAX_N}, got n = {0}")]
    TooLarge(usize),
    #[error("ground-set sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// Dense table over all subsets of an n-element ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTable {
    pub n: usize,
    pub values: Vec<u64>,
}

impl SubsetTable {
    pub fn zeros(n: usize) -> Result<SubsetTable, ConvolutionError> {
        if n > MAX_N {
            return Err(ConvolutionError::TooLarge(n));
        }
        Ok(SubsetTable {
            n,
            values: vec![0; 1 << n],
        })
    }

    /// Indicator of the empty set: the convolution identity.
    pub fn indicator_empty(n: usize) -> Result<SubsetTable, ConvolutionError> {
        let mut t = SubsetTable::zeros(n)?;
        t.values[0] = 1;
        Ok(t)
    }
}

/// zeta(f)(S) = Σ_{T ⊆ S} f(T).
pub fn zeta(tbl: &SubsetTable) -> SubsetTable {
    let mut out = tbl.clone();
    zeta_in_place(&mut out.values, tbl.n);
    out
}

/// Exact inverse of [`zeta`]. Arithmetic is wrapping mod 2^64, which is
/// still exact whenever the true values fit in 64 bits.
pub fn moebius(tbl: &SubsetTable) -> SubsetTable {
    let mut out = tbl.clone();
    moebius_in_place(&mut out.values, tbl.n);
    out
}

// The transform kernels process fixed-width block pairs so the inner loop
// is branch-free and vectorizes.
macro_rules! lattice_transform {
    ($name:ident, $ty:ty, $op:ident) => {
        fn $name(a: &mut [$ty], n: usize) {
            for b in 0..n {
                let bit = 1usize << b;
                for chunk in a.chunks_exact_mut(2 * bit) {
                    let (lo, hi) = chunk.split_at_mut(bit);
                    for i in 0..bit {
                        hi[i] = hi[i].$op(lo[i]);
                    }
                }
            }
        }
    };
}

lattice_transform!(zeta_in_place, u64, wrapping_add);
lattice_transform!(moebius_in_place, u64, wrapping_sub);
lattice_transform!(zeta_u32, u32, wrapping_add);

/// (f ⊛ g)(S) = Σ_{T ⊆ S} f(T)·g(S∖T), in 2^n·poly(n) ring operations:
/// rank-split both inputs, zeta each slice, convolve ranks pointwise,
/// Möbius the result per rank.
pub fn subset_convolve(
    f: &SubsetTable,
    g: &SubsetTable,
) -> Result<SubsetTable, ConvolutionError> {
    if f.n != g.n {
        return Err(ConvolutionError::SizeMismatch(f.n, g.n));
    }
    let n = f.n;
    if n > MAX_N {
        return Err(ConvolutionError::TooLarge(n));
    }
    let size = 1usize << n;
    let rank_split = |t: &SubsetTable| -> Vec<Vec<u64>> {
        let mut slices = vec![vec![0u64; size]; n + 1];
        for s in 0..size {
            slices[s.count_ones() as usize][s] = t.values[s];
        }
        for slice in &mut slices {
            zeta_in_place(slice, n);
        }
        slices
    };
    let fz = rank_split(f);
    let gz = rank_split(g);
    let mut out = SubsetTable::zeros(n)?;
    let mut hz = vec![0u64; size];
    for r in 0..=n {
        hz.fill(0);
        for i in 0..=r {
            let (fi, gj) = (&fz[i], &gz[r - i]);
            for s in 0..size {
                hz[s] = hz[s].wrapping_add(fi[s].wrapping_mul(gj[s]));
            }
        }
        moebius_in_place(&mut hz, n);
        for s in 0..size {
            if s.count_ones() as usize == r {
                out.values[s] = hz[s];
            }
        }
    }
    Ok(out)
}

/// Flat bit array over subsets.
#[derive(Debug, Clone)]
pub struct BitTable {
    words: Vec<u64>,
}

impl BitTable {
    fn zeros(size: usize) -> BitTable {
        BitTable {
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 != 0
    }

    fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    fn bytes(&self) -> usize {
        self.words.len() * 8
    }
}

/// The retained table family: g plus f_0..f_t, each as a bit array.
pub struct FeasibilityTables {
    pub n: usize,
    pub m: usize,
    g: BitTable,
    f: Vec<BitTable>,
    peak_bytes: usize,
}

impl FeasibilityTables {
    /// Largest t for which f_t is available.
    pub fn t_max(&self) -> usize {
        self.f.len() - 1
    }

    /// f_t(X) for X given as a bitmask.
    pub fn f(&self, t: usize, mask: usize) -> bool {
        self.f[t].get(mask)
    }

    /// g(Y): Y an antichain with |Y| ≤ m.
    pub fn g(&self, mask: usize) -> bool {
        self.g.get(mask)
    }

    /// High-water mark of table memory during construction.
    pub fn peak_table_bytes(&self) -> usize {
        self.peak_bytes
    }
}

pub fn jobset_mask(set: &JobSet) -> usize {
    let mut m = 0usize;
    for v in set.iter() {
        m |= 1 << v;
    }
    m
}

pub fn mask_jobset(mask: usize) -> JobSet {
    let mut s = JobSet::new();
    let mut m = mask;
    while m != 0 {
        s.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    s
}

struct Masks {
    pred: Vec<usize>,
    succ: Vec<usize>,
}

impl Masks {
    fn new(inst: &Instance) -> Masks {
        Masks {
            pred: (0..inst.n()).map(|v| jobset_mask(inst.pred(v))).collect(),
            succ: (0..inst.n()).map(|v| jobset_mask(inst.succ(v))).collect(),
        }
    }

    fn sinks_in(&self, x: usize) -> usize {
        let mut s = 0usize;
        let mut rest = x;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.succ[v] & x == 0 {
                s |= 1 << v;
            }
        }
        s
    }
}

fn compute_tables(
    inst: &Instance,
    t_max: usize,
    stop_when_feasible: bool,
) -> Result<FeasibilityTables, ConvolutionError> {
    let n = inst.n();
    if n > MAX_N {
        return Err(ConvolutionError::TooLarge(n));
    }
    let m = inst.m();
    let size = 1usize << n;
    let full = size - 1;
    let masks = Masks::new(inst);

    // Downward-closure: dc[X] iff pred[X] = X, built by lowest-bit DP.
    let mut dc = BitTable::zeros(size);
    {
        let mut predset = vec![0u32; size];
        for x in 1..size {
            let v = x.trailing_zeros() as usize;
            predset[x] = predset[x & (x - 1)] | masks.pred[v] as u32 | (1 << v);
            if predset[x] as usize == x {
                dc.set(x);
            }
        }
        dc.set(0);
    }

    // g[Y] iff Y is an antichain of size <= m, by the same lowest-bit DP.
    let mut g = BitTable::zeros(size);
    {
        let mut anti = BitTable::zeros(size);
        anti.set(0);
        g.set(0);
        for y in 1..size {
            let v = y.trailing_zeros() as usize;
            let rest = y & (y - 1);
            let comparable = masks.pred[v] | masks.succ[v];
            if anti.get(rest) && comparable & rest == 0 {
                anti.set(y);
                if y.count_ones() as usize <= m {
                    g.set(y);
                }
            }
        }
    }

    let mut f0 = BitTable::zeros(size);
    f0.set(0);
    let mut f = vec![f0];
    let bit_bytes = BitTable::zeros(size).bytes();

    // One unranked zeta of g, shared across rounds. Because g is monotone
    // downward (subsets of antichains are antichains), thresholding the
    // cover product moebius(zeta(f) . zeta(g)) agrees with thresholding the
    // true subset convolution: any covering pair (T, U) with T ∪ U = X
    // yields the partitioning pair (T, X∖T) with X∖T ⊆ U still in g.
    let mut wz: Vec<u32> = (0..size).map(|y| g.get(y) as u32).collect();
    zeta_u32(&mut wz, n);

    let mut uz = vec![0u32; size];
    let mut hz = vec![0u64; size];
    // Peak: dc/g/f bit tables + wz/uz (u32) + hz (u64) + transient predset.

    for t in 1..=t_max {
        let mut ft = BitTable::zeros(size);
        if t == 1 {
            // h_1 = f_0 . g = g, so thresholding reduces to g itself.
            for x in 0..size {
                if g.get(x) && dc.get(x) {
                    ft.set(x);
                }
            }
        } else {
            let prev = &f[t - 1];
            for (s, u) in uz.iter_mut().enumerate() {
                *u = prev.get(s) as u32;
            }
            zeta_u32(&mut uz, n);
            // Cover counts reach 3^n < 2^64; wrapping u64 stays exact.
            for ((h, &u), &w) in hz.iter_mut().zip(&uz).zip(&wz) {
                *h = u as u64 * w as u64;
            }
            moebius_in_place(&mut hz, n);
            for x in 0..size {
                if hz[x] > 0 && dc.get(x) {
                    ft.set(x);
                }
            }
        }
        let feasible = ft.get(full);
        f.push(ft);
        if stop_when_feasible && feasible {
            break;
        }
    }
    // Peak: dc/g/f bit tables + wz/uz (u32) + hz (u64) + transient predset.
    let peak = bit_bytes * (3 + f.len()) + size * 4 * 4;
    Ok(FeasibilityTables {
        n,
        m,
        g,
        f,
        peak_bytes: peak,
    })
}

/// Decision procedure: is the whole job set schedulable within `t` slots?
/// Returns the verdict together with the retained table family.
pub fn solve_2n(
    inst: &Instance,
    t: usize,
) -> Result<(bool, FeasibilityTables), ConvolutionError> {
    let tables = compute_tables(inst, t, false)?;
    let full = (1usize << inst.n()) - 1;
    Ok((tables.f(t, full), tables))
}

pub struct Solve2nResult {
    pub makespan: usize,
    pub witness: Schedule,
    pub tables: FeasibilityTables,
}

/// Smallest feasible deadline plus a witness backtracked through the f_t
/// tables: per slot (from the end), the largest Y ⊆ sinks(X) with |Y| ≤ m
/// and f_{t-1}(X∖Y) = 1. Sinks of a downward-closed X form an antichain,
/// so any such Y is a legal slot.
pub fn min_makespan_2n(inst: &Instance) -> Result<Solve2nResult, ConvolutionError> {
    let n = inst.n();
    let tables = compute_tables(inst, n, true)?;
    let full = (1usize << n) - 1;
    let makespan = (0..=tables.t_max())
        .find(|&t| tables.f(t, full))
        .expect("n slots always suffice");
    let slots = backtrack_slots(inst, &tables, full, makespan);
    Ok(Solve2nResult {
        makespan,
        witness: Schedule::new(slots),
        tables,
    })
}

/// Reads a t-slot schedule of `x` out of the tables (requires f_t(x) = 1):
/// per slot from the end, the largest Y ⊆ sinks(X) with |Y| ≤ m and
/// f_{t-1}(X∖Y) = 1. Y = ∅ is allowed, so slack deadlines yield idle slots.
pub fn backtrack_slots(
    inst: &Instance,
    tables: &FeasibilityTables,
    x: usize,
    t: usize,
) -> Vec<JobSet> {
    assert!(tables.f(t, x), "backtracking an infeasible entry");
    let masks = Masks::new(inst);
    let mut slots = Vec::with_capacity(t);
    let mut x = x;
    for t in (1..=t).rev() {
        let sinks = masks.sinks_in(x);
        let cap = tables.m.min(sinks.count_ones() as usize);
        let mut best: Option<usize> = None;
        let mut sub = sinks;
        loop {
            let k = sub.count_ones() as usize;
            if k <= cap
                && best.map_or(true, |b| k > b.count_ones() as usize)
                && tables.f(t - 1, x ^ sub)
            {
                best = Some(sub);
                if k == cap {
                    break;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & sinks;
        }
        let y = best.expect("feasible table entry has a feasible last slot");
        slots.push(mask_jobset(y));
        x ^= y;
    }
    debug_assert_eq!(x, 0);
    slots.reverse();
    slots
}
