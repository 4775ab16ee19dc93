use std::fmt;

use thiserror::Error;

use crate::set::IndexSet;

/// Exclusive upper bound on every weight and on the target.
pub const VALUE_LIMIT: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("item count {0} outside 1..=60")]
    ItemCount(usize),
    #[error("weight {index} = {value} is not below 2^63")]
    WeightTooLarge { index: usize, value: u64 },
    #[error("target {0} is not below 2^63")]
    TargetTooLarge(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: value does not fit below 2^63")]
    Overflow { line: usize, column: usize },
    #[error("expected {expected} weights, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] InstanceError),
}

/// Weights `w_1..w_n` and a target `t`.
///
/// Totals are computed in `u128`, so every subset sum is exact. The target is
/// kept as `u128` because complementing an instance (looking for `[n] \ S`)
/// produces `w([n]) - t`, which can exceed `2^63`; [`SubsetSumInstance::new`]
/// and the parser still enforce `t < 2^63` for user-supplied instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    weights: Vec<u64>,
    target: u128,
    total: u128,
}

impl SubsetSumInstance {
    pub fn new(weights: Vec<u64>, target: u64) -> Result<Self, InstanceError> {
        if target >= VALUE_LIMIT {
            return Err(InstanceError::TargetTooLarge(target));
        }
        Self::with_target(weights, target as u128)
    }

    fn with_target(weights: Vec<u64>, target: u128) -> Result<Self, InstanceError> {
        if weights.is_empty() || weights.len() > IndexSet::MAX_UNIVERSE {
            return Err(InstanceError::ItemCount(weights.len()));
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, &w)| w >= VALUE_LIMIT) {
            return Err(InstanceError::WeightTooLarge { index, value });
        }
        let total = weights.iter().map(|&w| w as u128).sum();
        Ok(SubsetSumInstance { weights, target, total })
    }

    /// Same weights, different target. Any `u128` target is accepted.
    pub fn retarget(&self, target: u128) -> Self {
        SubsetSumInstance { weights: self.weights.clone(), target, total: self.total }
    }

    /// The instance asking for the complement of a solution: target `w([n]) - t`.
    /// `None` when `t > w([n])`.
    pub fn complemented(&self) -> Option<Self> {
        self.total.checked_sub(self.target).map(|t| self.retarget(t))
    }

    /// The instance restricted to the first `k` items with target `target`.
    pub fn prefix(&self, k: usize, target: u128) -> Result<Self, InstanceError> {
        Self::with_target(self.weights[..k].to_vec(), target)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    pub fn target(&self) -> u128 {
        self.target
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn universe(&self) -> IndexSet {
        IndexSet::full(self.n())
    }

    pub fn weight_of(&self, s: IndexSet) -> u128 {
        debug_assert!(s.is_subset(self.universe()), "{s:?} outside [n]");
        s.iter().map(|i| self.weights[i] as u128).sum()
    }

    /// Text form: `"n t\nw1 .. wn\n"`.
    pub fn to_text(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        format!("{} {}\n{}\n", self.n(), self.target, ws.join(" "))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((hline, header)) = lines.next() else {
            return Err(ParseError::Syntax { line: 1, column: 1, message: "missing header line \"n t\"".into() });
        };
        let htoks = tokens(header);
        if htoks.len() != 2 {
            let column = htoks.get(2).map_or(header.len() + 1, |t| t.0);
            return Err(ParseError::Syntax {
                line: hline + 1,
                column,
                message: format!("header needs exactly two integers, found {}", htoks.len()),
            });
        }
        let n = parse_value(htoks[0], hline + 1)?;
        let t = parse_value(htoks[1], hline + 1)?;
        let n = usize::try_from(n).ok().filter(|&n| (1..=IndexSet::MAX_UNIVERSE).contains(&n));
        let Some(n) = n else {
            return Err(InstanceError::ItemCount(parse_value(htoks[0], hline + 1)? as usize).into());
        };
        let mut weights = Vec::with_capacity(n);
        for (lno, line) in lines {
            for tok in tokens(line) {
                weights.push(parse_value(tok, lno + 1)?);
            }
        }
        if weights.len() != n {
            return Err(ParseError::CountMismatch { expected: n, found: weights.len() });
        }
        Ok(Self::new(weights, t)?)
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_value((column, tok): (usize, &str), line: usize) -> Result<u64, ParseError> {
    if let Some(bad) = tok.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        return Err(ParseError::Syntax { line, column: column + bad.0, message: format!("unexpected character {:?} in {tok:?}", bad.1) });
    }
    match tok.parse::<u64>() {
        Ok(v) if v < VALUE_LIMIT => Ok(v),
        _ => Err(ParseError::Overflow { line, column }),
    }
}

/// A subset together with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub subset: IndexSet,
    pub achieved_sum: u128,
}

impl Solution {
    pub fn new(instance: &SubsetSumInstance, subset: IndexSet) -> Self {
        Solution { subset, achieved_sum: instance.weight_of(subset) }
    }

    pub fn solves(&self, instance: &SubsetSumInstance) -> bool {
        self.subset.is_subset(instance.universe())
            && instance.weight_of(self.subset) == self.achieved_sum
            && self.achieved_sum == instance.target()
    }

    /// `"indices: 1 2\nsum: 12\n"`.
    pub fn to_text(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.subset.iter().map(|i| i.to_string()).collect();
        writeln!(f, "indices: {}", idx.join(" "))?;
        writeln!(f, "sum: {}", self.achieved_sum)
    }
}

/// Every subset of `universe` with its weight, in submask order (the empty set first).
pub fn subset_sums(instance: &SubsetSumInstance, universe: IndexSet) -> Vec<(u128, IndexSet)> {
    let mut out = Vec::with_capacity(1 << universe.len());
    out.push((0u128, IndexSet::empty()));
    for i in universe.iter() {
        let w = instance.weight(i) as u128;
        for j in 0..out.len() {
            let (s, set) = out[j];
            let mut with = set;
            with.insert(i);
            out.push((s + w, with));
        }
    }
    out
}

/// Every `k`-subset of `universe` with its weight.
pub fn fixed_size_sums(instance: &SubsetSumInstance, universe: IndexSet, k: usize) -> Vec<(u128, IndexSet)> {
    universe.combinations(k).map(|s| (instance.weight_of(s), s)).collect()
}

/// Exhaustive search over all `2^n` subsets in increasing mask order.
pub fn brute_force_solve(instance: &SubsetSumInstance) -> Option<Solution> {
    assert!(instance.n() <= 32, "brute force limited to n <= 32");
    let t = instance.target();
    if t > instance.total() {
        return None;
    }
    instance.universe().subsets().find(|&s| instance.weight_of(s) == t).map(|s| Solution::new(instance, s))
}
