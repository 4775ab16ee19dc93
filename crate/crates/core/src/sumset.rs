//! Sorted enumeration of sumsets with a priority queue, and the solvers built on it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::SolveError;
use crate::instance::{subset_sums, Solution, SubsetSumInstance};
use crate::set::IndexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// One distinct value of `A + B` with every index pair realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumGroup {
    pub value: u128,
    /// `(index into A, index into B)`, sorted.
    pub pairs: Vec<(usize, usize)>,
}

/// Emits the distinct values of `A + B` in sorted order, each with its pairs.
///
/// The heap holds one frontier entry per element of the shorter list, so its size
/// never exceeds `min(|A|, |B|)`. Group storage is metered separately because a
/// single group can hold up to `|A| * |B|` pairs on degenerate inputs.
#[derive(Debug, Clone)]
pub struct SumsetEnumerator {
    direction: Direction,
    // (value, original index), sorted in enumeration direction
    outer: Vec<(u128, usize)>,
    inner: Vec<(u128, usize)>,
    // outer holds the elements of B when B is the shorter list
    swapped: bool,
    heap: BinaryHeap<Reverse<(u128, usize, usize)>>,
    peak_heap: usize,
    peak_group: usize,
    emitted_pairs: usize,
}

impl SumsetEnumerator {
    pub fn new(a: &[u128], b: &[u128], direction: Direction) -> Result<Self, SolveError> {
        if a.is_empty() || b.is_empty() {
            return Err(SolveError::EmptyInput);
        }
        let sorted = |xs: &[u128]| {
            let mut v: Vec<(u128, usize)> = xs.iter().copied().zip(0..).collect();
            match direction {
                Direction::Increasing => v.sort_unstable(),
                Direction::Decreasing => v.sort_unstable_by_key(|&(x, i)| (Reverse(x), i)),
            }
            v
        };
        let swapped = b.len() < a.len();
        let (outer, inner) = if swapped { (sorted(b), sorted(a)) } else { (sorted(a), sorted(b)) };
        let mut e =
            SumsetEnumerator { direction, outer, inner, swapped, heap: BinaryHeap::new(), peak_heap: 0, peak_group: 0, emitted_pairs: 0 };
        for o in 0..e.outer.len() {
            let k = e.key(o, 0);
            e.heap.push(Reverse((k, o, 0)));
        }
        e.peak_heap = e.heap.len();
        Ok(e)
    }

    fn key(&self, o: usize, i: usize) -> u128 {
        let v = self.outer[o].0 + self.inner[i].0;
        match self.direction {
            Direction::Increasing => v,
            Direction::Decreasing => u128::MAX - v,
        }
    }

    fn value_of(&self, key: u128) -> u128 {
        match self.direction {
            Direction::Increasing => key,
            Direction::Decreasing => u128::MAX - key,
        }
    }

    /// Largest heap size seen so far.
    pub fn peak_heap(&self) -> usize {
        self.peak_heap
    }

    /// Largest group handed out so far.
    pub fn peak_group(&self) -> usize {
        self.peak_group
    }

    /// Live entries: both sorted inputs plus the heap at its peak.
    pub fn peak_payload(&self) -> usize {
        self.outer.len() + self.inner.len() + self.peak_heap
    }

    pub fn emitted_pairs(&self) -> usize {
        self.emitted_pairs
    }

    pub fn len_a(&self) -> usize {
        if self.swapped {
            self.inner.len()
        } else {
            self.outer.len()
        }
    }

    pub fn len_b(&self) -> usize {
        if self.swapped {
            self.outer.len()
        } else {
            self.inner.len()
        }
    }
}

impl SumsetEnumerator {
    /// Like `next`, writing the sorted pairs into `pairs` and returning the value.
    pub fn next_into(&mut self, pairs: &mut Vec<(usize, usize)>) -> Option<u128> {
        let &Reverse((key, _, _)) = self.heap.peek()?;
        pairs.clear();
        while let Some(&Reverse((k, o, i))) = self.heap.peek() {
            if k != key {
                break;
            }
            let (oi, ii) = (self.outer[o].1, self.inner[i].1);
            pairs.push(if self.swapped { (ii, oi) } else { (oi, ii) });
            if i + 1 < self.inner.len() {
                let nk = self.key(o, i + 1);
                self.heap.peek_mut().expect("peeked").0 = (nk, o, i + 1);
            } else {
                self.heap.pop();
            }
        }
        pairs.sort_unstable();
        self.peak_group = self.peak_group.max(pairs.len());
        self.emitted_pairs += pairs.len();
        Some(self.value_of(key))
    }
}

impl Iterator for SumsetEnumerator {
    type Item = SumGroup;

    fn next(&mut self) -> Option<SumGroup> {
        let mut pairs = Vec::new();
        let value = self.next_into(&mut pairs)?;
        Some(SumGroup { value, pairs })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourSumOutcome {
    /// Indices into `A, B, C, D`.
    pub witness: Option<[usize; 4]>,
    pub peak_payload: usize,
    pub peak_group: usize,
}

/// Finds `a + b + c + d = t` by walking `inc(A, B)` against `dec(C, D)`.
pub fn four_sum(a: &[u128], b: &[u128], c: &[u128], d: &[u128], t: u128) -> Result<FourSumOutcome, SolveError> {
    let lists = [a, b, c, d];
    if lists.iter().any(|l| l.is_empty()) {
        return Err(SolveError::EmptyInput);
    }
    let lo: u128 = lists.iter().map(|l| *l.iter().min().expect("non-empty")).sum();
    let hi: u128 = lists.iter().map(|l| *l.iter().max().expect("non-empty")).sum();
    if t < lo || t > hi {
        return Ok(FourSumOutcome { witness: None, peak_payload: 0, peak_group: 0 });
    }
    let mut inc = SumsetEnumerator::new(a, b, Direction::Increasing)?;
    let mut dec = SumsetEnumerator::new(c, d, Direction::Decreasing)?;
    let (mut lp, mut rp) = (Vec::new(), Vec::new());
    let mut right = dec.next_into(&mut rp);
    let mut witness = None;
    'search: while let Some(lv) = inc.next_into(&mut lp) {
        let rv = loop {
            match right {
                None => break 'search,
                Some(r) if lv + r > t => right = dec.next_into(&mut rp),
                Some(r) => break r,
            }
        };
        if lv + rv == t {
            let (ia, ib) = lp[0];
            let (ic, id) = rp[0];
            assert_eq!(a[ia] + b[ib] + c[ic] + d[id], t, "four_sum witness must hit the target");
            witness = Some([ia, ib, ic, id]);
            break;
        }
    }
    Ok(FourSumOutcome {
        witness,
        peak_payload: inc.peak_payload() + dec.peak_payload(),
        peak_group: inc.peak_group().max(dec.peak_group()),
    })
}

/// Result of a deterministic solver with its memory meter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOutcome {
    pub solution: Option<Solution>,
    /// Largest number of simultaneously live list and heap entries.
    pub peak_payload: usize,
}

fn checked(instance: &SubsetSumInstance, subset: IndexSet) -> Solution {
    let s = Solution::new(instance, subset);
    assert!(s.solves(instance), "solver produced {subset:?} with sum {} != {}", s.achieved_sum, instance.target());
    s
}

/// Horowitz-Sahni: all sums of each half, sorted, then a two-pointer sweep.
pub fn mitm_solve(instance: &SubsetSumInstance) -> Result<SolverOutcome, SolveError> {
    let n = instance.n();
    if n > 40 {
        return Err(SolveError::TooLarge { what: "n", value: n, limit: 40 });
    }
    let t = instance.target();
    let half = n / 2;
    let lo = IndexSet::full(half);
    let hi = instance.universe() - lo;
    let mut left = subset_sums(instance, lo);
    let mut right = subset_sums(instance, hi);
    let peak = left.len() + right.len();
    left.sort_unstable();
    right.sort_unstable_by(|x, y| y.cmp(x));
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        let s = left[i].0 + right[j].0;
        if s == t {
            return Ok(SolverOutcome { solution: Some(checked(instance, left[i].1 | right[j].1)), peak_payload: peak });
        }
        if s < t {
            i += 1;
        } else {
            j += 1;
        }
    }
    Ok(SolverOutcome { solution: None, peak_payload: peak })
}

/// Splits `[n]` into four consecutive blocks of sizes `ceil(n/4)` / `floor(n/4)`.
pub fn quarter_blocks(n: usize) -> [IndexSet; 4] {
    let mut out = [IndexSet::empty(); 4];
    let mut start = 0;
    for (k, slot) in out.iter_mut().enumerate() {
        let len = n / 4 + usize::from(k < n % 4);
        *slot = IndexSet::from_indices(start..start + len);
        start += len;
    }
    out
}

/// Schroeppel-Shamir: four quarter lists fed to [`four_sum`].
pub fn schroeppel_shamir_solve(instance: &SubsetSumInstance) -> Result<SolverOutcome, SolveError> {
    let n = instance.n();
    if n > 48 {
        return Err(SolveError::TooLarge { what: "n", value: n, limit: 48 });
    }
    let lists: Vec<Vec<(u128, IndexSet)>> = quarter_blocks(n).iter().map(|&q| subset_sums(instance, q)).collect();
    let vals: Vec<Vec<u128>> = lists.iter().map(|l| l.iter().map(|p| p.0).collect()).collect();
    let out = four_sum(&vals[0], &vals[1], &vals[2], &vals[3], instance.target())?;
    let solution = out.witness.map(|w| {
        let s = (0..4).fold(IndexSet::empty(), |acc, k| acc | lists[k][w[k]].1);
        checked(instance, s)
    });
    Ok(SolverOutcome { solution, peak_payload: out.peak_payload })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::brute_force_solve;
    use crate::rng::Rng;

    fn groups(a: &[u128], b: &[u128], dir: Direction) -> Vec<SumGroup> {
        SumsetEnumerator::new(a, b, dir).unwrap().collect()
    }

    #[test]
    fn hand_enumeration() {
        // A=[1,3], B=[2,4] as index pairs
        let g = groups(&[1, 3], &[2, 4], Direction::Increasing);
        let expect = vec![
            SumGroup { value: 3, pairs: vec![(0, 0)] },
            SumGroup { value: 5, pairs: vec![(0, 1), (1, 0)] },
            SumGroup { value: 7, pairs: vec![(1, 1)] },
        ];
        assert_eq!(g, expect);
        let mut e = SumsetEnumerator::new(&[1, 3], &[2, 4], Direction::Increasing).unwrap();
        for _ in 0..3 {
            e.next();
        }
        assert_eq!(e.next(), None);
        assert_eq!(e.next(), None);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(groups(&[0], &[0], Direction::Increasing), vec![SumGroup { value: 0, pairs: vec![(0, 0)] }]);
        let g = groups(&[5, 5, 5], &[5, 5, 5], Direction::Increasing);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].value, 10);
        assert_eq!(g[0].pairs.len(), 9);
        assert!(matches!(SumsetEnumerator::new(&[], &[1], Direction::Increasing), Err(SolveError::EmptyInput)));
    }

    #[test]
    fn decreasing_is_reverse() {
        let mut rng = Rng::new(4);
        let a: Vec<u128> = (0..17).map(|_| rng.below(50) as u128).collect();
        let b: Vec<u128> = (0..9).map(|_| rng.below(50) as u128).collect();
        let mut inc = groups(&a, &b, Direction::Increasing);
        inc.reverse();
        assert_eq!(inc, groups(&a, &b, Direction::Decreasing));
    }

    #[test]
    fn four_sum_examples() {
        let out = four_sum(&[1, 2], &[3, 4], &[5], &[7], 17).unwrap();
        assert_eq!(out.witness, Some([0, 1, 0, 0]));
        assert_eq!(four_sum(&[1, 2], &[3, 4], &[5], &[7], 100).unwrap().witness, None);
    }

    #[test]
    fn four_sum_matches_quadruple_loop() {
        let mut rng = Rng::new(12);
        for _ in 0..200 {
            let mut list = || (0..32).map(|_| rng.below(1000) as u128).collect::<Vec<_>>();
            let (a, b, c, d) = (list(), list(), list(), list());
            let t = rng.below(4000) as u128;
            let got = four_sum(&a, &b, &c, &d, t).unwrap().witness;
            let exists = a.iter().any(|x| b.iter().any(|y| c.iter().any(|z| d.iter().any(|w| x + y + z + w == t))));
            assert_eq!(got.is_some(), exists);
            if let Some([i, j, k, l]) = got {
                assert_eq!(a[i] + b[j] + c[k] + d[l], t);
            }
        }
    }

    fn inst(ws: &[u64], t: u64) -> SubsetSumInstance {
        SubsetSumInstance::new(ws.to_vec(), t).unwrap()
    }

    #[test]
    fn solver_examples() {
        let i = inst(&[3, 5, 7, 11], 12);
        assert_eq!(mitm_solve(&i).unwrap().solution.unwrap().subset, IndexSet::from_indices([1, 2]));
        assert!(mitm_solve(&inst(&[3, 5, 7, 11], 1)).unwrap().solution.is_none());
        let full = schroeppel_shamir_solve(&inst(&[3, 5, 7, 11], 26)).unwrap();
        assert_eq!(full.solution.unwrap().subset, IndexSet::full(4));
        let pow: Vec<u64> = (0..8).map(|i| 1 << i).collect();
        let s = schroeppel_shamir_solve(&inst(&pow, 170)).unwrap().solution.unwrap();
        assert_eq!(s.subset, IndexSet::from_indices([1, 3, 5, 7]));
        assert!(mitm_solve(&SubsetSumInstance::new(vec![1; 41], 3).unwrap()).is_err());
    }

    #[test]
    fn mitm_matches_brute_force() {
        let mut rng = Rng::new(20);
        for _ in 0..500 {
            let ws: Vec<u64> = (0..20).map(|_| rng.range_u64(1, 1 << 12)).collect();
            let i = inst(&ws, rng.range_u64(0, 20 << 11));
            let bf = brute_force_solve(&i);
            let mm = mitm_solve(&i).unwrap().solution;
            assert_eq!(bf.is_some(), mm.is_some());
        }
    }

    #[test]
    fn schroeppel_shamir_matches_mitm() {
        let mut rng = Rng::new(24);
        for _ in 0..500 {
            let ws: Vec<u64> = (0..24).map(|_| rng.range_u64(1, 1 << 16)).collect();
            let i = inst(&ws, rng.range_u64(0, 24 << 15));
            let ss = schroeppel_shamir_solve(&i).unwrap();
            assert_eq!(ss.solution.is_some(), mitm_solve(&i).unwrap().solution.is_some());
            assert!(ss.peak_payload <= 8 << 6);
        }
    }

    #[test]
    fn quarters_partition() {
        for n in 1..=48 {
            let q = quarter_blocks(n);
            let u = q.iter().fold(IndexSet::empty(), |acc, &s| acc | s);
            assert_eq!(u, IndexSet::full(n));
            assert!(q.iter().all(|s| s.len() == n / 4 || s.len() == n.div_ceil(4)));
        }
    }
}
