//! Mixer detection and the two preprocessing solvers: one for instances with
//! additive structure, one for small solutions.

use crate::error::SolveError;
use crate::instance::{fixed_size_sums, subset_sums, Solution, SubsetSumInstance};
use crate::rng::Rng;
use crate::set::IndexSet;
use crate::sumset::four_sum;

/// How many distinct sums the subsets of `set` generate.
///
/// `epsilon` satisfies `distinct_sums = 2^((1 - epsilon) |set|)`; a perfect mixer
/// has `epsilon = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixerReport {
    pub set: IndexSet,
    pub distinct_sums: usize,
    pub epsilon: f64,
}

pub fn compute_mixer(instance: &SubsetSumInstance, set: IndexSet) -> Result<MixerReport, SolveError> {
    if set.len() > 24 {
        return Err(SolveError::TooLarge { what: "|M|", value: set.len(), limit: 24 });
    }
    let mut sums: Vec<u128> = subset_sums(instance, set).into_iter().map(|p| p.0).collect();
    sums.sort_unstable();
    sums.dedup();
    let m = set.len();
    let epsilon = if m == 0 { 0.0 } else { (1.0 - (sums.len() as f64).log2() / m as f64).clamp(0.0, 1.0) };
    Ok(MixerReport { set, distinct_sums: sums.len(), epsilon })
}

/// Searched lists and result of [`win_win_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct WinWinOutcome {
    pub solution: Option<Solution>,
    /// `|L1|, |L2|, |R1|, |R2|` after rounding.
    pub part_sizes: [usize; 4],
    /// Lengths of the four lists; the last one is deduplicated by sum.
    pub list_sizes: [usize; 4],
    pub peak_payload: usize,
}

/// Part sizes `|L1| = n/4 - m(1 - 3 eps0/4)`, `|L2| = |R1| = |R2| = (n - eps0 m)/4`,
/// rounded to integers summing to `n - m`.
pub fn win_win_part_sizes(n: usize, m: usize, epsilon0: f64) -> Result<[usize; 4], SolveError> {
    let side = (n as f64 - epsilon0 * m as f64) / 4.0;
    let mut s = side.round().max(0.0) as usize;
    // repair: shrink the three equal parts until L1 is non-negative
    while 3 * s > n - m {
        if s == 0 {
            break;
        }
        s -= 1;
    }
    if 3 * s > n - m {
        return Err(SolveError::Infeasible(format!("win-win parts: 3 * {s} > n - |M| = {}", n - m)));
    }
    Ok([n - m - 3 * s, s, s, s])
}

/// Four-list search with the structured set `M` folded into the first list.
///
/// Exact: the lists `w(2^{L2}), w(2^{R1}), w(2^{R2}), w(2^{L1 ∪ M})` cover every
/// subset of `[n]`. The gain is that the last list has only `|w(2^{L1 ∪ M})|`
/// entries after deduplication, which is small when `M` generates few sums.
pub fn win_win_solve(instance: &SubsetSumInstance, set: IndexSet, epsilon0: f64, mu: f64) -> Result<WinWinOutcome, SolveError> {
    let n = instance.n();
    let m = set.len();
    if !(mu > 0.0 && mu < 0.25) {
        return Err(SolveError::Infeasible(format!("mu = {mu} outside (0, 1/4)")));
    }
    if (m as f64 - mu * n as f64).abs() > 1.0 {
        return Err(SolveError::Infeasible(format!("|M| = {m} but mu n = {}", mu * n as f64)));
    }
    if m > 24 {
        return Err(SolveError::TooLarge { what: "|M|", value: m, limit: 24 });
    }
    let sizes = win_win_part_sizes(n, m, epsilon0)?;
    let rest: Vec<usize> = (instance.universe() - set).iter().collect();
    let mut parts = [IndexSet::empty(); 4];
    let mut at = 0;
    for (k, &len) in sizes.iter().enumerate() {
        parts[k] = rest[at..at + len].iter().copied().collect();
        at += len;
    }
    let [l1, l2, r1, r2] = parts;
    let a = subset_sums(instance, l2);
    let b = subset_sums(instance, r1);
    let c = subset_sums(instance, r2);
    let mut d = subset_sums(instance, l1 | set);
    d.sort_unstable_by_key(|p| p.0);
    d.dedup_by_key(|p| p.0);
    let vals = |l: &[(u128, IndexSet)]| l.iter().map(|p| p.0).collect::<Vec<_>>();
    let out = four_sum(&vals(&a), &vals(&b), &vals(&c), &vals(&d), instance.target())?;
    let solution = out.witness.map(|[i, j, k, l]| {
        let s = Solution::new(instance, a[i].1 | b[j].1 | c[k].1 | d[l].1);
        assert!(s.solves(instance), "win-win witness misses the target");
        s
    });
    let list_sizes = [a.len(), b.len(), c.len(), d.len()];
    Ok(WinWinOutcome { solution, part_sizes: sizes, list_sizes, peak_payload: list_sizes.iter().sum::<usize>() + out.peak_payload })
}

/// Splits `k` over parts proportionally to their sizes, by largest remainder with
/// ties broken at random.
fn spread(rng: &mut Rng, k: usize, parts: &[usize]) -> Vec<usize> {
    let n: usize = parts.iter().sum();
    let mut out: Vec<usize> = parts.iter().map(|&p| k * p / n.max(1)).collect();
    let mut order: Vec<usize> = (0..parts.len()).collect();
    rng.shuffle(&mut order);
    order.sort_by_key(|&i| std::cmp::Reverse((k * parts[i]) % n.max(1)));
    let mut left = k - out.iter().sum::<usize>();
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        if out[i] < parts[i] {
            out[i] += 1;
            left -= 1;
        }
    }
    out
}

/// Outcome of [`small_lambda_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SmallLambdaOutcome {
    pub solution: Option<Solution>,
    pub trials_run: usize,
    pub peak_payload: usize,
}

/// Looks for a solution of exactly `solution_size` items: a random 4-partition,
/// the sums of fixed-size subsets of each part, then four-list search. Repeats
/// `trials` times (default `10 n^2`). One-sided: a hit is always correct.
pub fn small_lambda_solve(
    rng: &mut Rng,
    instance: &SubsetSumInstance,
    solution_size: usize,
    trials: Option<usize>,
) -> Result<SmallLambdaOutcome, SolveError> {
    let n = instance.n();
    if n > 40 {
        return Err(SolveError::TooLarge { what: "n", value: n, limit: 40 });
    }
    if solution_size > n {
        return Err(SolveError::TooLarge { what: "solution size", value: solution_size, limit: n });
    }
    if solution_size == 0 {
        let solution = (instance.target() == 0).then(|| Solution::new(instance, IndexSet::empty()));
        return Ok(SmallLambdaOutcome { solution, trials_run: 0, peak_payload: 0 });
    }
    let trials = trials.unwrap_or(10 * n * n);
    let part_lens: Vec<usize> = (0..4).map(|k| n / 4 + usize::from(k < n % 4)).collect();
    let mut peak = 0;
    let mut order: Vec<usize> = (0..n).collect();
    for trial in 0..trials {
        rng.shuffle(&mut order);
        let mut parts = [IndexSet::empty(); 4];
        let mut at = 0;
        for (k, &len) in part_lens.iter().enumerate() {
            parts[k] = order[at..at + len].iter().copied().collect();
            at += len;
        }
        let sizes = spread(rng, solution_size, &part_lens);
        let lists: Vec<Vec<(u128, IndexSet)>> = (0..4).map(|k| fixed_size_sums(instance, parts[k], sizes[k])).collect();
        if lists.iter().any(Vec::is_empty) {
            continue;
        }
        let vals: Vec<Vec<u128>> = lists.iter().map(|l| l.iter().map(|p| p.0).collect()).collect();
        let out = four_sum(&vals[0], &vals[1], &vals[2], &vals[3], instance.target())?;
        peak = peak.max(lists.iter().map(Vec::len).sum::<usize>() + out.peak_payload);
        if let Some(w) = out.witness {
            let set = (0..4).fold(IndexSet::empty(), |acc, k| acc | lists[k][w[k]].1);
            let s = Solution::new(instance, set);
            assert!(s.solves(instance) && set.len() == solution_size, "small-solution witness is wrong");
            return Ok(SmallLambdaOutcome { solution: Some(s), trials_run: trial + 1, peak_payload: peak });
        }
    }
    Ok(SmallLambdaOutcome { solution: None, trials_run: trials, peak_payload: peak })
}
