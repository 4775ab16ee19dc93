//! Binary entropy, binomials, primes, and numeric checks of the entropy bounds
//! used in the runtime analysis.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::SolveError;
use crate::instance::SubsetSumInstance;
use crate::rng::{random_subset, Rng};
use crate::set::IndexSet;

/// `h(x) = -x log2 x - (1-x) log2 (1-x)`, with `h(0) = h(1) = 0`.
pub fn entropy(x: f64) -> Result<f64, SolveError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(SolveError::Domain(format!("entropy argument {x} outside [0, 1]")));
    }
    Ok(h(x))
}

pub(crate) fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// The `x` in `[0, 1/2]` with `h(x) = y`, by bisection.
pub fn entropy_inverse(y: f64) -> Result<f64, SolveError> {
    if !(0.0..=1.0).contains(&y) {
        return Err(SolveError::Domain(format!("entropy_inverse argument {y} outside [0, 1]")));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(match y {
        0.0 => 0.0,
        1.0 => 0.5,
        _ => 0.5 * (lo + hi),
    })
}

/// Exact binomial coefficient; `None` on `u128` overflow. `C(n, k) = 0` for `k > n`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (n - i) is divisible by (i + 1); divide by the gcd first to delay overflow
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(c, den);
        c = (c / g).checked_mul(num / (den / g))?;
    }
    Some(c)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `log2 C(n, k)`; `-inf` when `k > n`.
pub fn log2_binom(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if let Some(c) = binomial(n, k) {
        return (c as f64).log2();
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).log2() - ((i + 1) as f64).log2()).sum()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin; exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeSample {
    pub p: u64,
    pub range_lo: u64,
    pub range_hi: u64,
}

/// Uniform prime in `[r, 2r]` by rejection sampling.
pub fn random_prime(rng: &mut Rng, r: u64) -> Result<PrimeSample, SolveError> {
    if !(2..1 << 62).contains(&r) {
        return Err(SolveError::Domain(format!("prime range start {r} outside [2, 2^62)")));
    }
    let hi = 2 * r;
    loop {
        let p = rng.range_u64(r, hi);
        if is_prime(p) {
            return Ok(PrimeSample { p, range_lo: r, range_hi: hi });
        }
    }
}

/// Number of distinct residues `w(X) mod p` over `X ⊆ Q` with `size_lo <= |X| <= size_hi`.
pub fn residue_coverage(instance: &SubsetSumInstance, q: IndexSet, p: u64, size_lo: usize, size_hi: usize) -> Result<usize, SolveError> {
    if q.len() > 24 {
        return Err(SolveError::TooLarge { what: "|Q|", value: q.len(), limit: 24 });
    }
    if size_lo > size_hi || size_hi > q.len() {
        return Err(SolveError::Infeasible(format!("size range [{size_lo}, {size_hi}] for |Q| = {}", q.len())));
    }
    let residues = q.subsets().filter(|s| (size_lo..=size_hi).contains(&s.len())).map(|s| (instance.weight_of(s) % p as u128) as u64);
    if p <= 1 << 24 {
        let mut seen = vec![false; p as usize];
        let mut count = 0;
        for r in residues {
            if !seen[r as usize] {
                seen[r as usize] = true;
                count += 1;
            }
        }
        Ok(count)
    } else {
        Ok(residues.collect::<HashSet<_>>().len())
    }
}

/// Smallest `s` with `C(|Q|, s) >= distinct / |Q|`.
pub fn coverage_size_floor(q_len: usize, distinct_sums: usize) -> usize {
    let need = distinct_sums as f64 / q_len.max(1) as f64;
    (0..=q_len).find(|&s| binomial(q_len as u64, s as u64).unwrap_or(u128::MAX) as f64 >= need).unwrap_or(q_len)
}

/// Monte Carlo estimate of `Pr[|A ∩ B| = ab/d]` for a fixed `a`-subset `A` and a
/// uniformly random `b`-subset `B` of `[d]`.
pub fn concentration_estimate(rng: &mut Rng, d: usize, a: usize, b: usize, trials: usize) -> Result<f64, SolveError> {
    if d > 40 || d == 0 {
        return Err(SolveError::TooLarge { what: "d", value: d, limit: 40 });
    }
    if a > d || b > d {
        return Err(SolveError::Infeasible(format!("set sizes {a}, {b} exceed d = {d}")));
    }
    if !(a * b).is_multiple_of(d) {
        return Err(SolveError::Domain(format!("a*b = {} not divisible by d = {d}", a * b)));
    }
    let want = a * b / d;
    let fixed = IndexSet::full(a);
    let universe = IndexSet::full(d);
    let mut hits = 0usize;
    for _ in 0..trials {
        if random_subset(rng, universe, b)?.intersection(fixed).len() == want {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials.max(1) as f64)
}

/// Per-item exponent of `C(a n, b n)`, i.e. `a h(b/a)`; `None` when `b ∉ [0, a]`.
fn binom_exponent(a: f64, b: f64) -> Option<f64> {
    const EPS: f64 = 1e-12;
    if b < -EPS || b > a + EPS {
        return None;
    }
    if a <= 0.0 {
        return Some(0.0);
    }
    Some(a * h((b / a).clamp(0.0, 1.0)))
}

/// The exponent ratio minimised over `x` when bounding the cover sparsity:
/// `max(e(1-λσ, x-λσ), e(1-(1-σ)λ, x)) - e(1-λ, x-λσ)` with `e(a, b) = a h(b/a)`.
pub fn ov_exponent(lambda: f64, sigma: f64, x: f64) -> Option<f64> {
    let den = binom_exponent(1.0 - lambda, x - lambda * sigma)?;
    let n1 = binom_exponent(1.0 - lambda * sigma, x - lambda * sigma);
    let n2 = binom_exponent(1.0 - (1.0 - sigma) * lambda, x);
    let num = match (n1, n2) {
        (Some(a), Some(b)) => a.max(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return None,
    };
    Some(num - den)
}

/// The closed-form minimiser `1/2 + (σ-1/2) log2(3)/2 + (1/2-σ)(1/2-λ)`.
pub fn ov_closed_form_x(lambda: f64, sigma: f64) -> f64 {
    0.5 + (sigma - 0.5) * 3f64.log2() / 2.0 + (0.5 - sigma) * (0.5 - lambda)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OvInequalityRow {
    pub lambda: f64,
    pub sigma: f64,
    pub x_star: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tight: bool,
}

#[derive(Debug, Clone, Default)]
pub struct OvInequalityReport {
    pub rows: Vec<OvInequalityRow>,
    pub violations: Vec<OvInequalityRow>,
    pub slack: f64,
}

impl OvInequalityReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,sigma,x_star,lhs_exponent,rhs_exponent,margin,tight\n");
        for r in &self.rows {
            writeln!(s, "{:.4},{:.4},{:.6},{:.9},{:.9},{:.9},{}", r.lambda, r.sigma, r.x_star, r.lhs, r.rhs, r.margin, r.tight).unwrap();
        }
        s
    }

    pub fn row(&self, lambda: f64, sigma: f64) -> Option<&OvInequalityRow> {
        self.rows.iter().find(|r| (r.lambda - lambda).abs() < 1e-9 && (r.sigma - sigma).abs() < 1e-9)
    }
}

/// Minimum over `x ∈ [0, 1]` of [`ov_exponent`]: a scan of the grid with the given
/// step, then a ternary refinement inside the two cells around the best grid point
/// (the objective has a kink between grid points near `σ = 1/2`).
pub fn minimize_ov_exponent(lambda: f64, sigma: f64, step: f64) -> Option<(f64, f64)> {
    let f = |x: f64| ov_exponent(lambda, sigma, x).unwrap_or(f64::INFINITY);
    let cells = (1.0 / step).round() as usize;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..=cells {
        let x = (k as f64 * step).min(1.0);
        let e = f(x);
        if e.is_finite() && best.is_none_or(|(_, b)| e < b) {
            best = Some((x, e));
        }
    }
    let (bx, be) = best?;
    let (mut lo, mut hi) = ((bx - step).max(0.0), (bx + step).min(1.0));
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let rx = 0.5 * (lo + hi);
    let re = f(rx);
    Some(if re < be { (rx, re) } else { (bx, be) })
}

/// Checks `min_x E(x) <= 1/2 + λ - h(λ/2) + 1e-9` at every grid point.
pub fn verify_ov_inequality(lambda_grid: &[f64], sigma_grid: &[f64], x_grid_step: f64) -> OvInequalityReport {
    const SLACK: f64 = 1e-9;
    let mut report = OvInequalityReport { slack: SLACK, ..Default::default() };
    for &lambda in lambda_grid {
        for &sigma in sigma_grid {
            let rhs = 0.5 + lambda - h(lambda / 2.0);
            let (x_star, lhs) = minimize_ov_exponent(lambda, sigma, x_grid_step).unwrap_or((f64::NAN, f64::INFINITY));
            let margin = rhs - lhs;
            let row = OvInequalityRow { lambda, sigma, x_star, lhs, rhs, margin, tight: margin.abs() <= 1e-6 };
            // written negated so a NaN margin counts as a violation
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(margin >= -SLACK) {
                report.violations.push(row.clone());
            }
            report.rows.push(row);
        }
    }
    report
}

/// `lo, lo+step, .., hi`, computed by index to avoid drift.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let k = ((hi - lo) / step).round() as usize;
    (0..=k).map(|i| lo + i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityRow {
    pub label: &'static str,
    pub param: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Default)]
pub struct InequalityReport {
    pub rows: Vec<InequalityRow>,
    pub violations: Vec<InequalityRow>,
    pub checked: usize,
}

impl InequalityReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("inequality,param,lhs,rhs,slack\n");
        for r in &self.rows {
            writeln!(s, "{},{},{:.12},{:.12},{:.3e}", r.label, r.param, r.lhs, r.rhs, r.slack).unwrap();
        }
        s
    }
}

/// Sweeps the three entropy inequalities at step `1e-3`:
/// `1 - 4α² <= h(1/2 - α)`, `h(1/4 + α) <= h(1/4) + α log2 3` for `α ∈ [0, 1/2]`, and
/// `h(σλ) + h((1-σ)λ) <= 2 h(λ/2)` over `σ, λ ∈ [0, 1]`.
///
/// The third family has `10^6` points; the report keeps one row per `λ` holding the
/// worst `σ`, but every point is checked.
pub fn entropy_inequality_suite() -> InequalityReport {
    const TOL: f64 = -1e-12;
    let mut rep = InequalityReport::default();
    let push = |rep: &mut InequalityReport, row: InequalityRow| {
        if row.slack < TOL {
            rep.violations.push(row.clone());
        }
        rep.rows.push(row);
    };
    let alphas = grid(0.0, 0.5, 1e-3);
    for &a in &alphas {
        let (lhs, rhs) = (1.0 - 4.0 * a * a, h(0.5 - a));
        push(&mut rep, InequalityRow { label: "quadratic-lower", param: format!("alpha={a:.3}"), lhs, rhs, slack: rhs - lhs });
        let (lhs, rhs) = (h(0.25 + a), h(0.25) + a * 3f64.log2());
        push(&mut rep, InequalityRow { label: "tangent-quarter", param: format!("alpha={a:.3}"), lhs, rhs, slack: rhs - lhs });
        rep.checked += 2;
    }
    let unit = grid(0.0, 1.0, 1e-3);
    for &lambda in &unit {
        let rhs = 2.0 * h(lambda / 2.0);
        let mut worst: Option<InequalityRow> = None;
        for &sigma in &unit {
            let lhs = h(sigma * lambda) + h((1.0 - sigma) * lambda);
            let row = InequalityRow {
                label: "split-concavity",
                param: format!("lambda={lambda:.3};sigma={sigma:.3}"),
                lhs,
                rhs,
                slack: rhs - lhs,
            };
            rep.checked += 1;
            if row.slack < TOL {
                rep.violations.push(row.clone());
            }
            if worst.as_ref().is_none_or(|w| row.slack < w.slack) {
                worst = Some(row);
            }
        }
        rep.rows.extend(worst);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        let closed = 2.0 - 0.75 * 3f64.log2();
        assert!((entropy(0.25).unwrap() - closed).abs() <= 1e-12);
        assert!(entropy(-0.1).is_err());
        assert!(entropy(1.5).is_err());
    }

    #[test]
    fn entropy_inverse_examples() {
        assert!((entropy_inverse(1.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(entropy_inverse(0.0).unwrap(), 0.0);
        assert!((entropy_inverse(entropy(0.25).unwrap()).unwrap() - 0.25).abs() < 1e-8);
        // the 7-digit decimal sits 2.4e-8 below h(1/4), and h' = log2 3 there
        assert!((entropy_inverse(0.8112781).unwrap() - 0.25).abs() < 2e-8);
        for y in [0.01, 0.3, 0.9, 0.999999] {
            assert!((h(entropy_inverse(y).unwrap()) - y).abs() <= 1e-10);
        }
        assert!(entropy_inverse(2.0).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(60, 30), Some(118264581564861424));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert!(binomial(120, 60).is_some());
        assert!((log2_binom(16, 4) - 1820f64.log2()).abs() < 1e-12);
        assert!((log2_binom(500, 250) - 495.1906).abs() < 1e-3);
    }

    fn sieve(hi: u64) -> Vec<bool> {
        let mut p = vec![true; hi as usize + 1];
        p[0] = false;
        p[1] = false;
        let mut i = 2;
        while i * i <= hi {
            if p[i as usize] {
                let mut j = i * i;
                while j <= hi {
                    p[j as usize] = false;
                    j += i;
                }
            }
            i += 1;
        }
        p
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let s = sieve(100_000);
        for n in 0..=100_000u64 {
            assert_eq!(is_prime(n), s[n as usize], "n={n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
        assert!(!is_prime(18446744073709551557 / 3 * 3));
    }

    #[test]
    fn random_prime_examples() {
        let mut rng = Rng::new(3);
        for _ in 0..200 {
            let p = random_prime(&mut rng, 10).unwrap();
            assert!([11, 13, 17, 19].contains(&p.p));
            assert_eq!((p.range_lo, p.range_hi), (10, 20));
            assert!([2, 3].contains(&random_prime(&mut rng, 2).unwrap().p));
        }
        assert!(random_prime(&mut rng, 1).is_err());
    }

    #[test]
    fn random_prime_is_uniform() {
        let s = sieve(2000);
        let primes: Vec<u64> = (1000..=2000).filter(|&i| s[i as usize]).collect();
        assert_eq!(primes.len(), 135);
        let mut rng = Rng::new(11);
        let draws = 10_000usize;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            *counts.entry(random_prime(&mut rng, 1000).unwrap().p).or_insert(0usize) += 1;
        }
        let f = 1.0 / 135.0;
        let sd = (f * (1.0 - f) / draws as f64).sqrt();
        for p in primes {
            let got = *counts.get(&p).unwrap_or(&0) as f64 / draws as f64;
            assert!((got - f).abs() <= 4.0 * sd, "prime {p} frequency {got}");
        }
    }

    #[test]
    fn residue_coverage_examples() {
        let i = SubsetSumInstance::new(vec![1, 2, 4, 8], 0).unwrap();
        let q3 = IndexSet::from_indices([0, 1, 2]);
        assert_eq!(residue_coverage(&i, q3, 5, 0, 3).unwrap(), 5);
        assert_eq!(residue_coverage(&i, i.universe(), 13, 2, 2).unwrap(), 6);
        let z = SubsetSumInstance::new(vec![0, 0, 0], 0).unwrap();
        assert_eq!(residue_coverage(&z, z.universe(), 7, 0, 3).unwrap(), 1);
        assert!(residue_coverage(&i, i.universe(), 13, 3, 2).is_err());
    }

    #[test]
    fn coverage_floor() {
        assert_eq!(coverage_size_floor(12, 4096), 4);
        assert_eq!(coverage_size_floor(4, 1), 0);
    }

    #[test]
    fn concentration_examples() {
        let mut rng = Rng::new(5);
        assert_eq!(concentration_estimate(&mut rng, 4, 4, 2, 1000).unwrap(), 1.0);
        let e = concentration_estimate(&mut rng, 4, 2, 2, 10_000).unwrap();
        assert!((e - 2.0 / 3.0).abs() <= 0.05, "{e}");
        let e = concentration_estimate(&mut rng, 8, 4, 4, 10_000).unwrap();
        assert!((e - 36.0 / 70.0).abs() <= 0.05, "{e}");
        assert!(concentration_estimate(&mut rng, 5, 2, 2, 10).is_err());
    }

    #[test]
    fn ov_inequality_examples() {
        let rep = verify_ov_inequality(&[0.5, 0.4], &[0.5, 0.6], 1e-3);
        let tight = rep.row(0.5, 0.5).unwrap();
        assert!(tight.margin.abs() <= 1e-6 && tight.tight);
        assert!(rep.row(0.4, 0.5).unwrap().margin > 0.0);
        let x = ov_closed_form_x(0.5, 0.6);
        let closed = ov_exponent(0.5, 0.6, x).unwrap();
        let grid_min = minimize_ov_exponent(0.5, 0.6, 1e-3).unwrap().1;
        assert!((closed - grid_min).abs() <= 1e-3);
        assert!(rep.to_csv().lines().count() == 5);
    }

    #[test]
    fn entropy_suite_is_clean() {
        let rep = entropy_inequality_suite();
        assert!(rep.violations.is_empty(), "{:?}", &rep.violations[..rep.violations.len().min(3)]);
        assert_eq!(rep.checked, 2 * 501 + 1001 * 1001);
        let first = &rep.rows[0];
        assert!(first.slack.abs() < 1e-12);
        let quarter = rep.rows.iter().find(|r| r.label == "quadratic-lower" && r.param == "alpha=0.250").unwrap();
        assert!((quarter.lhs - 0.75).abs() < 1e-12 && (quarter.rhs - 0.8112781244591328).abs() < 1e-12);
    }
}
