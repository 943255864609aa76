//! Sets of jobs backed by machine-word bitsets.
//!
//! Jobs are dense indices `0..n`. The representation is canonical (no
//! trailing zero words), so `Eq`/`Hash`/`Ord` work structurally and the
//! type can key memoization tables.

use core::fmt;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JobSet {
    words: Vec<u64>,
}

impl JobSet {
    pub fn new() -> Self {
        JobSet { words: Vec::new() }
    }

    pub fn singleton(job: usize) -> Self {
        let mut s = JobSet::new();
        s.insert(job);
        s
    }

    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if n % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        let mut s = JobSet { words };
        s.normalize();
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = JobSet::new();
        for j in iter {
            s.insert(j);
        }
        s
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, job: usize) {
        let w = job / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << (job % 64);
    }

    pub fn remove(&mut self, job: usize) {
        let w = job / 64;
        if w < self.words.len() {
            self.words[w] &= !(1u64 << (job % 64));
            self.normalize();
        }
    }

    pub fn contains(&self, job: usize) -> bool {
        let w = job / 64;
        w < self.words.len() && self.words[w] >> (job % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn union(&self, other: &JobSet) -> JobSet {
        let mut words = vec![0u64; self.words.len().max(other.words.len())];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = JobSet { words };
        s.normalize();
        s
    }

    pub fn intersection(&self, other: &JobSet) -> JobSet {
        let mut words = vec![0u64; self.words.len().min(other.words.len())];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words[i] & other.words[i];
        }
        let mut s = JobSet { words };
        s.normalize();
        s
    }

    pub fn difference(&self, other: &JobSet) -> JobSet {
        let mut words = self.words.clone();
        for (i, w) in words.iter_mut().enumerate() {
            *w &= !other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = JobSet { words };
        s.normalize();
        s
    }

    pub fn is_subset(&self, other: &JobSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn intersects(&self, other: &JobSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &JobSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (i, w) in other.words.iter().enumerate() {
            self.words[i] |= w;
        }
    }

    pub fn subtract(&mut self, other: &JobSet) {
        for (i, w) in self.words.iter_mut().enumerate() {
            *w &= !other.words.get(i).copied().unwrap_or(0);
        }
        self.normalize();
    }

    /// Iterate set members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rem = w;
            core::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let b = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl FromIterator<usize> for JobSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        JobSet::from_iter(iter)
    }
}

impl fmt::Debug for JobSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = JobSet::new();
        a.insert(3);
        a.insert(70);
        assert!(a.contains(3) && a.contains(70) && !a.contains(4));
        assert_eq!(a.len(), 2);
        a.remove(70);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3]);
        // canonical after removing the high bit
        assert_eq!(a, JobSet::singleton(3));
    }

    #[test]
    fn set_algebra() {
        let a = JobSet::from_iter([0, 2, 5]);
        let b = JobSet::from_iter([2, 5, 9]);
        assert_eq!(a.union(&b), JobSet::from_iter([0, 2, 5, 9]));
        assert_eq!(a.intersection(&b), JobSet::from_iter([2, 5]));
        assert_eq!(a.difference(&b), JobSet::singleton(0));
        assert!(JobSet::from_iter([2, 5]).is_subset(&a));
        assert!(!a.is_subset(&b));
    }

    #[test]
    fn full_set() {
        assert_eq!(JobSet::full(0), JobSet::new());
        assert_eq!(JobSet::full(65).len(), 65);
        assert!(JobSet::full(65).contains(64));
    }
}
