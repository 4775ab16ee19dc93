//! Orthogonal Vectors through sparse 1-covers of the disjointness matrix.
//!
//! A certificate `S ⊆ [d]` of size `x` induces the rectangle
//! `X = {A : |A| = p, A ⊆ S}` by `Y = {B : |B| = q, B ∩ S = ∅}`, which is all ones in
//! the disjointness matrix. A random family of certificates covers every disjoint
//! pair with high probability; the OV search then only meets `A` and `B` inside
//! the rectangles that contain them.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::SolveError;
use crate::numerics::{binomial, h, ov_closed_form_x};
use crate::rng::Rng;
use crate::set::IndexSet;

const PASCAL_N: usize = 65;

fn pascal() -> &'static [[u64; PASCAL_N]; PASCAL_N] {
    static TABLE: OnceLock<[[u64; PASCAL_N]; PASCAL_N]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u64; PASCAL_N]; PASCAL_N];
        for n in 0..PASCAL_N {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1].saturating_add(if k < n { t[n - 1][k] } else { 0 });
            }
        }
        t
    })
}

fn choose(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        pascal()[n][k]
    }
}

/// Colexicographic rank of a `k`-subset given as a bitmask.
pub fn colex_rank(mask: u64) -> usize {
    let mut r = 0u64;
    let mut bits = mask;
    let mut i = 1;
    while bits != 0 {
        let pos = bits.trailing_zeros() as usize;
        r += choose(pos, i);
        i += 1;
        bits &= bits - 1;
    }
    r as usize
}

/// Inverse of [`colex_rank`] for `k`-subsets of `[d]`.
pub fn colex_unrank(mut r: u64, k: usize, d: usize) -> u64 {
    let mut mask = 0u64;
    let mut c = d;
    for i in (1..=k).rev() {
        loop {
            c -= 1;
            if choose(c, i) <= r {
                break;
            }
        }
        mask |= 1 << c;
        r -= choose(c, i);
    }
    mask
}

fn combos(mask: u64, k: usize) -> impl Iterator<Item = u64> {
    IndexSet::from_mask(mask).combinations(k).map(IndexSet::mask)
}

/// A family of certificates with residency lists: for every `p`-subset `Q` of `[d]`
/// the certificates containing it, and for every `q`-subset the certificates
/// avoiding it.
#[derive(Debug, Clone)]
pub struct OneCover {
    pub d: usize,
    pub p: usize,
    pub q: usize,
    pub x: usize,
    pub certificates: Vec<u32>,
    pub inclusion_probability: f64,
    /// Set when `p + q > d/2`, outside the range where the sparsity bound is proven.
    pub relaxed: bool,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
}

/// Entry budget for the residency lists.
const RESIDENCY_BUDGET: u128 = 1 << 26;

impl OneCover {
    /// Builds a cover from explicit certificates.
    pub fn from_certificates(d: usize, p: usize, q: usize, x: usize, certificates: Vec<u32>) -> Result<Self, SolveError> {
        check_dims(d, p, q)?;
        if certificates.iter().any(|&s| s.count_ones() as usize != x || (d < 32 && s >> d != 0)) {
            return Err(SolveError::Infeasible(format!("certificates must be {x}-subsets of [{d}]")));
        }
        let mut c = OneCover {
            d,
            p,
            q,
            x,
            certificates,
            inclusion_probability: f64::NAN,
            relaxed: 2 * (p + q) > d,
            left: Vec::new(),
            right: Vec::new(),
        };
        c.index()?;
        Ok(c)
    }

    /// Every `x`-subset of `[d]` as a certificate.
    pub fn complete(d: usize, p: usize, q: usize, x: usize) -> Result<Self, SolveError> {
        let all = combos(full32(d), x).map(|m| m as u32).collect();
        Self::from_certificates(d, p, q, x, all)
    }

    fn index(&mut self) -> Result<(), SolveError> {
        let (d, p, q, x) = (self.d, self.p, self.q, self.x);
        let z = self.certificates.len() as u128;
        let entries = z * (choose(x, p) as u128 + choose(d - x, q) as u128);
        if entries > RESIDENCY_BUDGET {
            return Err(SolveError::Budget { cells: entries, budget: RESIDENCY_BUDGET });
        }
        let mut left = vec![Vec::new(); choose(d, p) as usize];
        let mut right = vec![Vec::new(); choose(d, q) as usize];
        for (j, &s) in self.certificates.iter().enumerate() {
            for a in combos(s as u64, p) {
                left[colex_rank(a)].push(j as u32);
            }
            for b in combos(full32(d) & !(s as u64), q) {
                right[colex_rank(b)].push(j as u32);
            }
        }
        self.left = left;
        self.right = right;
        Ok(())
    }

    pub fn z(&self) -> usize {
        self.certificates.len()
    }

    /// Certificates `j` with `a ⊆ S_j`; `a` must be a `p`-subset of `[d]`.
    pub fn left_residency(&self, a: u64) -> &[u32] {
        &self.left[colex_rank(a)]
    }

    /// Certificates `j` with `b ∩ S_j = ∅`; `b` must be a `q`-subset of `[d]`.
    pub fn right_residency(&self, b: u64) -> &[u32] {
        &self.right[colex_rank(b)]
    }
}

fn full32(d: usize) -> u64 {
    if d == 0 {
        0
    } else {
        u64::MAX >> (64 - d)
    }
}

fn check_dims(d: usize, p: usize, q: usize) -> Result<(), SolveError> {
    if d == 0 || d > 32 {
        return Err(SolveError::TooLarge { what: "d", value: d, limit: 32 });
    }
    if p + q > d {
        return Err(SolveError::Infeasible(format!("p + q = {} exceeds d = {d}", p + q)));
    }
    Ok(())
}

/// Inclusion probability `min(1, 2d / C(d - p - q, x - p))`.
pub fn inclusion_probability(d: usize, p: usize, q: usize, x: usize) -> f64 {
    let c = choose(d - p - q, x - p) as f64;
    (2.0 * d as f64 / c).min(1.0)
}

/// Expected sparsity of a random cover with certificate size `x`.
pub fn expected_sparsity(d: usize, p: usize, q: usize, x: usize) -> f64 {
    let z = inclusion_probability(d, p, q, x) * choose(d, x) as f64;
    z * rectangle_share(d, p, q, x)
}

fn rectangle_share(d: usize, p: usize, q: usize, x: usize) -> f64 {
    choose(x, p) as f64 / choose(d, p) as f64 + choose(d - x, q) as f64 / choose(d, q) as f64
}

/// The certificate size from the closed-form minimiser with `σ = p/(p+q)`, `λ = (p+q)/d`.
pub fn auto_certificate_size(d: usize, p: usize, q: usize) -> usize {
    let l = p + q;
    let x = if l == 0 { d as f64 / 2.0 } else { d as f64 * ov_closed_form_x(l as f64 / d as f64, p as f64 / l as f64) };
    (x.round().max(p as f64) as usize).min(d - q)
}

fn sample_certificates(rng: &mut Rng, d: usize, x: usize, prob: f64) -> Vec<u32> {
    let total = choose(d, x);
    if prob >= 1.0 {
        return (0..total).map(|r| colex_unrank(r, x, d) as u32).collect();
    }
    let mut out = Vec::new();
    let log_miss = (1.0 - prob).ln();
    let mut r: u64 = 0;
    loop {
        // geometric gap between included ranks
        let u = rng.unit();
        let gap = ((1.0 - u).ln() / log_miss).floor();
        if !gap.is_finite() || gap >= (total - r) as f64 {
            break;
        }
        r += gap as u64;
        out.push(colex_unrank(r, x, d) as u32);
        r += 1;
        if r >= total {
            break;
        }
    }
    out
}

/// Random 1-cover of the `(p, q, d)` disjointness matrix: each `x`-subset of `[d]`
/// becomes a certificate independently with probability `min(1, 2d/C(d-p-q, x-p))`.
///
/// With `x = None` the size comes from the closed-form minimiser; the five sizes
/// within 2 of it are sampled and the cover with the smallest measured sparsity
/// is kept.
pub fn build_cover(rng: &mut Rng, d: usize, p: usize, q: usize, x: Option<usize>) -> Result<OneCover, SolveError> {
    check_dims(d, p, q)?;
    let candidates: Vec<usize> = match x {
        Some(x) => {
            if x < p || x > d - q {
                return Err(SolveError::Infeasible(format!("certificate size {x} outside [{p}, {}]", d - q)));
            }
            vec![x]
        }
        None => {
            let x0 = auto_certificate_size(d, p, q) as i64;
            (x0 - 2..=x0 + 2).filter(|&x| x >= p as i64 && x <= (d - q) as i64).map(|x| x as usize).collect()
        }
    };
    let mut best: Option<(f64, usize, Vec<u32>, f64)> = None;
    for &x in &candidates {
        let prob = inclusion_probability(d, p, q, x);
        let certs = sample_certificates(rng, d, x, prob);
        let sparsity = certs.len() as f64 * rectangle_share(d, p, q, x);
        if best.as_ref().is_none_or(|b| sparsity < b.0) {
            best = Some((sparsity, x, certs, prob));
        }
    }
    let (_, x, certificates, prob) = best.expect("at least one certificate size");
    let mut cover = OneCover::from_certificates(d, p, q, x, certificates)?;
    cover.inclusion_probability = prob;
    Ok(cover)
}

/// Exhaustive check that every disjoint `(A, B)` lies in some rectangle.
pub fn cover_validity(cover: &OneCover) -> Result<bool, SolveError> {
    let (d, p, q) = (cover.d, cover.p, cover.q);
    if d > 16 {
        return Err(SolveError::TooLarge { what: "d", value: d, limit: 16 });
    }
    let cols = choose(d, q) as usize;
    let mut covered = vec![false; choose(d, p) as usize * cols];
    for &s in &cover.certificates {
        let rest = full32(d) & !(s as u64);
        let bs: Vec<usize> = combos(rest, q).map(colex_rank).collect();
        for a in combos(s as u64, p) {
            let row = colex_rank(a) * cols;
            for &b in &bs {
                covered[row + b] = true;
            }
        }
    }
    for a in combos(full32(d), p) {
        let row = colex_rank(a) * cols;
        for b in combos(full32(d) & !a, q) {
            if !covered[row + colex_rank(b)] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsityReport {
    pub d: usize,
    pub p: usize,
    pub q: usize,
    pub x: usize,
    pub z: usize,
    pub sparsity: f64,
    /// `2^{d/2 + p + q - d h((p+q)/(2d))}`.
    pub bound: f64,
    /// `2^d / C(d, d/4)` when `4 | d`.
    pub floor: Option<f64>,
    /// `|X_j| = C(x, p)` and `|Y_j| = C(d - x, q)`.
    pub rect_rows: u64,
    pub rect_cols: u64,
    /// `(Σ|X_j|, Σ|Y_j|)` by explicit enumeration, for `d <= 12`.
    pub recount: Option<(u64, u64)>,
}

impl SparsityReport {
    pub const CSV_HEADER: &'static str = "d,p,q,x,z,sparsity,analytic_bound,floor_value,ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{},{:.6}",
            self.d,
            self.p,
            self.q,
            self.x,
            self.z,
            self.sparsity,
            self.bound,
            self.floor.map_or(String::new(), |f| format!("{f:.6}")),
            self.sparsity / self.bound
        )
    }
}

pub fn sparsity_bound(d: usize, p: usize, q: usize) -> f64 {
    let (d, l) = (d as f64, (p + q) as f64);
    (d / 2.0 + l - d * h(l / (2.0 * d))).exp2()
}

pub fn measure_sparsity(cover: &OneCover) -> SparsityReport {
    let (d, p, q, x) = (cover.d, cover.p, cover.q, cover.x);
    let z = cover.z();
    let rect_rows = choose(x, p);
    let rect_cols = choose(d - x, q);
    let sparsity = z as f64 * rect_rows as f64 / choose(d, p) as f64 + z as f64 * rect_cols as f64 / choose(d, q) as f64;
    let recount = (d <= 12).then(|| {
        let rows = combos(full32(d), p).map(|a| cover.certificates.iter().filter(|&&s| a & !(s as u64) == 0).count() as u64).sum();
        let cols = combos(full32(d), q).map(|b| cover.certificates.iter().filter(|&&s| b & s as u64 == 0).count() as u64).sum();
        (rows, cols)
    });
    SparsityReport { d, p, q, x, z, sparsity, bound: sparsity_bound(d, p, q), floor: sparsity_floor(d).ok(), rect_rows, rect_cols, recount }
}

/// `2^d / C(d, d/4)`.
pub fn sparsity_floor(d: usize) -> Result<f64, SolveError> {
    if !d.is_multiple_of(4) || d == 0 {
        return Err(SolveError::Domain(format!("d = {d} is not a positive multiple of 4")));
    }
    let c = binomial(d as u64, d as u64 / 4).expect("binomial fits") as f64;
    Ok((d as f64).exp2() / c)
}

/// Exact double loop.
pub fn ov_naive(a: &[u64], b: &[u64]) -> Option<(usize, usize)> {
    for (i, &x) in a.iter().enumerate() {
        if let Some(j) = b.iter().position(|&y| x & y == 0) {
            return Some((i, j));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct OvOptions {
    /// Number of blocks the universe is split into.
    pub blocks: usize,
    /// Multiplier on the affordability cutoff `(4cΨ)^c`.
    pub cutoff_multiplier: f64,
    /// Largest admissible `z^c` for the table.
    pub table_budget: u128,
}

impl Default for OvOptions {
    fn default() -> Self {
        OvOptions { blocks: 1, cutoff_multiplier: 1.0, table_budget: 1 << 26 }
    }
}

/// Families lifted so that `c` divides the dimension and both set sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedFamilies {
    pub d: usize,
    pub p: usize,
    pub q: usize,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

/// Adds fresh coordinates to every `A` and every `B` (never shared, so
/// disjointness is unchanged), then unused coordinates until `c | d`.
pub fn pad_families(d: usize, p: usize, q: usize, c: usize, a: &[u64], b: &[u64]) -> Result<PaddedFamilies, SolveError> {
    let pp = p.div_ceil(c) * c;
    let qq = q.div_ceil(c) * c;
    let used = d + (pp - p) + (qq - q);
    let dd = used.div_ceil(c) * c;
    if dd > 64 {
        return Err(SolveError::TooLarge { what: "padded d", value: dd, limit: 64 });
    }
    let span = |from: usize, len: usize| if len == 0 { 0 } else { (u64::MAX >> (64 - len)) << from };
    let pad_a = span(d, pp - p);
    let pad_b = span(d + pp - p, qq - q);
    Ok(PaddedFamilies { d: dd, p: pp, q: qq, a: a.iter().map(|&x| x | pad_a).collect(), b: b.iter().map(|&y| y | pad_b).collect() })
}

/// Sparsity-parameterized OV: a random permutation splits `[c d]` into `c` blocks,
/// each identified with the cover's universe `[d]`. Every affordable `A` marks the
/// rectangle tuples it lies in; every affordable `B` probes the tuples it lies in.
///
/// One-sided: a returned pair is always disjoint; `None` can be a miss. Returns
/// indices into `a` and `b`.
pub fn ov_by_sparsity(
    rng: &mut Rng,
    cover: &OneCover,
    a: &[u64],
    b: &[u64],
    opts: &OvOptions,
) -> Result<Option<(usize, usize)>, SolveError> {
    let c = opts.blocks.max(1);
    let (d, p, q) = (cover.d, cover.p, cover.q);
    let dd = c * d;
    if dd > 64 {
        return Err(SolveError::TooLarge { what: "c * d", value: dd, limit: 64 });
    }
    let bad = |fam: &[u64], k: usize| fam.iter().any(|&m| m.count_ones() as usize != c * k || (dd < 64 && m >> dd != 0));
    if bad(a, p) || bad(b, q) {
        return Err(SolveError::Infeasible(format!("families must hold {}- and {}-subsets of [{dd}]", c * p, c * q)));
    }
    let z = cover.z() as u128;
    let cells = z.checked_pow(c as u32).unwrap_or(u128::MAX);
    if cells > opts.table_budget {
        return Err(SolveError::Budget { cells, budget: opts.table_budget });
    }
    if a.is_empty() || b.is_empty() || z == 0 {
        return Ok(None);
    }
    let psi = measure_sparsity(cover).sparsity;
    let cutoff = opts.cutoff_multiplier * (4.0 * c as f64 * psi).powi(c as i32);

    let mut perm: Vec<usize> = (0..dd).collect();
    rng.shuffle(&mut perm);
    // element -> (block, local coordinate)
    let mut place = vec![(0usize, 0usize); dd];
    for (pos, &e) in perm.iter().enumerate() {
        place[e] = (pos / d, pos % d);
    }
    let split = |m: u64| {
        let mut parts = vec![0u64; c];
        let mut bits = m;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            let (blk, loc) = place[e];
            parts[blk] |= 1 << loc;
            bits &= bits - 1;
        }
        parts
    };

    if c == 1 {
        let mut table: Vec<Option<u32>> = vec![None; z as usize];
        for (i, &x) in a.iter().enumerate() {
            let part = split(x)[0];
            let res = cover.left_residency(part);
            if res.len() as f64 <= cutoff {
                for &j in res {
                    table[j as usize].get_or_insert(i as u32);
                }
            }
        }
        for (k, &y) in b.iter().enumerate() {
            let part = split(y)[0];
            let res = cover.right_residency(part);
            if res.len() as f64 <= cutoff {
                if let Some(i) = res.iter().find_map(|&j| table[j as usize]) {
                    let i = i as usize;
                    assert_eq!(a[i] & y, 0, "rectangles are monochromatic");
                    return Ok(Some((i, k)));
                }
            }
        }
        return Ok(None);
    }

    let mut table: HashMap<Vec<u32>, u32> = HashMap::new();
    let lists = |m: u64, k: usize, left: bool| -> Option<Vec<&[u32]>> {
        let parts = split(m);
        if parts.iter().any(|x| x.count_ones() as usize != k) {
            return None;
        }
        let ls: Vec<&[u32]> = parts.iter().map(|&x| if left { cover.left_residency(x) } else { cover.right_residency(x) }).collect();
        let prod: f64 = ls.iter().map(|l| l.len() as f64).product();
        (prod <= cutoff && prod > 0.0).then_some(ls)
    };
    for (i, &x) in a.iter().enumerate() {
        if let Some(ls) = lists(x, p, true) {
            for_each_tuple(&ls, |t| {
                table.entry(t.to_vec()).or_insert(i as u32);
                false
            });
        }
    }
    for (k, &y) in b.iter().enumerate() {
        if let Some(ls) = lists(y, q, false) {
            let mut hit = None;
            for_each_tuple(&ls, |t| {
                hit = table.get(t).copied();
                hit.is_some()
            });
            if let Some(i) = hit {
                let i = i as usize;
                assert_eq!(a[i] & y, 0, "rectangles are monochromatic");
                return Ok(Some((i, k)));
            }
        }
    }
    Ok(None)
}

/// Visits the cartesian product of `lists`; stops when `f` returns true.
fn for_each_tuple(lists: &[&[u32]], mut f: impl FnMut(&[u32]) -> bool) {
    let c = lists.len();
    let mut idx = vec![0usize; c];
    let mut tuple: Vec<u32> = lists.iter().map(|l| l[0]).collect();
    loop {
        if f(&tuple) {
            return;
        }
        let mut k = c;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                tuple[k] = lists[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = lists[k][0];
        }
    }
}
