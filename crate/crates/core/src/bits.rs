//! Fixed-width bitsets over indices `0..64`.

use std::fmt;

/// Hard width of every index set in the crate.
pub const WIDTH: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitSet(pub u64);

impl BitSet {
    pub const EMPTY: BitSet = BitSet(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> BitSet {
        debug_assert!(n <= WIDTH);
        if n == WIDTH {
            BitSet(u64::MAX)
        } else {
            BitSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> BitSet {
        BitSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> BitSet {
        it.into_iter().fold(BitSet::EMPTY, |acc, i| acc.with(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < WIDTH && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    #[inline]
    pub fn with(self, i: usize) -> BitSet {
        BitSet(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn union(self, other: BitSet) -> BitSet {
        BitSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: BitSet) -> BitSet {
        BitSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: BitSet) -> BitSet {
        BitSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: BitSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for BitSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        BitSet::from_indices(it)
    }
}

/// Ascending iterator over set bits.
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_iter() {
        assert_eq!(BitSet::full(0), BitSet::EMPTY);
        assert_eq!(BitSet::full(64).len(), 64);
        let s = BitSet::from_indices([3, 0, 63]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 63]);
        assert!(s.contains(63) && !s.contains(64));
        assert_eq!(s.first(), Some(0));
    }

    #[test]
    fn set_ops() {
        let a = BitSet::from_indices([1, 2, 3]);
        let b = BitSet::from_indices([2, 3, 4]);
        assert_eq!(a.intersection(b), BitSet::from_indices([2, 3]));
        assert_eq!(a.difference(b), BitSet::singleton(1));
        assert!(a.intersection(b).is_subset(a));
        assert!(!a.is_subset(b));
    }
}
