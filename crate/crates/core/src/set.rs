use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// A subset of the item universe `[n]`, `n <= 60`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const MAX_UNIVERSE: usize = 60;

    pub const fn empty() -> Self {
        IndexSet(0)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= Self::MAX_UNIVERSE, "universe of {n} items exceeds 60");
        if n == 0 {
            IndexSet(0)
        } else {
            IndexSet(u64::MAX >> (64 - n))
        }
    }

    pub fn from_mask(mask: u64) -> Self {
        assert!(mask >> Self::MAX_UNIVERSE == 0, "mask {mask:#x} has bits above 59");
        IndexSet(mask)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = IndexSet::empty();
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < Self::MAX_UNIVERSE && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < Self::MAX_UNIVERSE, "index {i} outside the universe");
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < Self::MAX_UNIVERSE {
            self.0 &= !(1 << i);
        }
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Indices {
        Indices(self.0)
    }

    /// Packs the bits of `self` that lie in `within` into the low `within.len()` bits,
    /// preserving order (a software `pext`).
    pub fn compress(self, within: IndexSet) -> u64 {
        let mut out = 0u64;
        for (pos, i) in within.iter().enumerate() {
            if self.contains(i) {
                out |= 1 << pos;
            }
        }
        out
    }

    /// Inverse of [`IndexSet::compress`]: bit `k` of `bits` selects the `k`-th element of `within`.
    pub fn expand(bits: u64, within: IndexSet) -> IndexSet {
        let mut out = IndexSet::empty();
        for (pos, i) in within.iter().enumerate() {
            if bits >> pos & 1 == 1 {
                out.insert(i);
            }
        }
        out
    }

    /// All subsets of `self`, the empty set first.
    pub fn subsets(self) -> Subsets {
        Subsets { full: self.0, next: Some(0) }
    }

    /// All `k`-element subsets of `self` in colexicographic order.
    pub fn combinations(self, k: usize) -> Combinations {
        let elems: Vec<usize> = self.iter().collect();
        let state = if k <= elems.len() { Some(if k == 0 { 0 } else { (1u64 << k) - 1 }) } else { None };
        Combinations { elems, k, state }
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl BitOr for IndexSet {
    type Output = IndexSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for IndexSet {
    type Output = IndexSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl Sub for IndexSet {
    type Output = IndexSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        IndexSet::from_indices(iter)
    }
}

pub struct Indices(u64);

impl Iterator for Indices {
    type Item = usize;
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

impl ExactSizeIterator for Indices {}

pub struct Subsets {
    full: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = IndexSet;
    fn next(&mut self) -> Option<IndexSet> {
        let cur = self.next?;
        self.next = if cur == self.full { None } else { Some((cur.wrapping_sub(self.full)) & self.full) };
        Some(IndexSet(cur))
    }
}

pub struct Combinations {
    elems: Vec<usize>,
    k: usize,
    state: Option<u64>,
}

impl Iterator for Combinations {
    type Item = IndexSet;
    fn next(&mut self) -> Option<IndexSet> {
        let cur = self.state?;
        let m = self.elems.len();
        self.state = if self.k == 0 {
            None
        } else {
            // Gosper's hack over positions 0..m
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt >> m == 0).then_some(nxt)
        };
        let mut out = IndexSet::empty();
        let mut bits = cur;
        while bits != 0 {
            out.insert(self.elems[bits.trailing_zeros() as usize]);
            bits &= bits - 1;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = IndexSet::from_indices([0, 2, 5]);
        let b = IndexSet::from_indices([2, 3]);
        assert_eq!(a.len(), 3);
        assert_eq!((a | b).iter().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
        assert_eq!((a & b).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!((a - b).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert!(!a.is_disjoint(b));
        assert!(IndexSet::from_indices([2]).is_subset(a));
        assert_eq!(IndexSet::full(60).len(), 60);
        assert_eq!(IndexSet::full(0), IndexSet::empty());
    }

    #[test]
    fn compress_round_trip() {
        let within = IndexSet::from_indices([1, 4, 7, 9]);
        let s = IndexSet::from_indices([4, 9]);
        let bits = s.compress(within);
        assert_eq!(bits, 0b1010);
        assert_eq!(IndexSet::expand(bits, within), s);
    }

    #[test]
    fn subsets_and_combinations_counts() {
        let u = IndexSet::from_indices([0, 3, 4, 8, 11]);
        let subs: Vec<_> = u.subsets().collect();
        assert_eq!(subs.len(), 32);
        assert!(subs.iter().all(|s| s.is_subset(u)));
        for k in 0..=6 {
            let combos: Vec<_> = u.combinations(k).collect();
            let expect = [1, 5, 10, 10, 5, 1, 0][k];
            assert_eq!(combos.len(), expect, "k={k}");
            assert!(combos.iter().all(|s| s.len() == k && s.is_subset(u)));
        }
        assert_eq!(IndexSet::empty().combinations(0).count(), 1);
    }
}
