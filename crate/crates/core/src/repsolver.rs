//! Representation-technique solver.
//!
//! The single-level reduction turns Subset Sum into a weighted OV instance over a
//! mixer `M`. The two-level algorithm uses three disjoint mixers `M_L, M, M_R`,
//! builds four residue-filtered lists and searches them with sorted sumset
//! enumerators, calling OV on the `M`-supports of weight-matched groups.
//! [`solve`] wraps everything with the solution-size loop, the small-solution and
//! win-win branches, and outer repetitions.

use std::collections::HashMap;

use crate::error::SolveError;
use crate::instance::{fixed_size_sums, subset_sums, Solution, SubsetSumInstance};
use crate::mixer::{compute_mixer, small_lambda_solve, win_win_solve};
use crate::numerics::{h, random_prime};
use crate::ov::{build_cover, ov_by_sparsity, ov_naive, pad_families, OvOptions};
use crate::rng::{random_subset, Rng};
use crate::set::IndexSet;
use crate::sumset::{Direction, SumsetEnumerator};

/// One member of a weighted OV family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WovMember {
    /// `witness ∩ M`.
    pub support: IndexSet,
    pub weight: u128,
    pub witness: IndexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WovInstance {
    pub left: Vec<WovMember>,
    pub right: Vec<WovMember>,
    pub target: u128,
    pub mixer: IndexSet,
    pub prime: u64,
    pub residue: u64,
}

impl WovInstance {
    /// Quadratic scan for a pair with disjoint supports and weights summing to the target.
    pub fn naive_solve(&self) -> Option<(usize, usize)> {
        let mut by_weight: HashMap<u128, Vec<usize>> = HashMap::new();
        for (j, r) in self.right.iter().enumerate() {
            by_weight.entry(r.weight).or_default().push(j);
        }
        for (i, l) in self.left.iter().enumerate() {
            let Some(need) = self.target.checked_sub(l.weight) else { continue };
            if let Some(js) = by_weight.get(&need) {
                if let Some(&j) = js.iter().find(|&&j| self.right[j].support.is_disjoint(l.support)) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

fn modp(v: u128, p: u64) -> u64 {
    (v % p as u128) as u64
}

fn sub_mod(a: u128, b: u64, p: u64) -> u64 {
    ((modp(a, p) as u128 + p as u128 - (b % p) as u128) % p as u128) as u64
}

/// All `X ∪ Y` with `X` from `first`, `Y` from `second` and `w(X ∪ Y) ≡ residue (mod p)`.
/// `second` is tabled by residue, `first` is streamed.
fn residue_join(first: &[(u128, IndexSet)], second: &[(u128, IndexSet)], p: u64, residue: u64) -> Vec<(IndexSet, u128)> {
    let mut keyed: Vec<(u64, u32)> = second.iter().enumerate().map(|(j, &(w, _))| (modp(w, p), j as u32)).collect();
    keyed.sort_unstable();
    let mut out = Vec::new();
    for &(w, x) in first {
        let need = sub_mod(residue as u128, modp(w, p), p);
        let start = keyed.partition_point(|e| e.0 < need);
        for &(r, j) in &keyed[start..] {
            if r != need {
                break;
            }
            let (v, y) = second[j as usize];
            out.push((x | y, w + v));
        }
    }
    out
}

fn check_subset(instance: &SubsetSumInstance, s: IndexSet, what: &str) -> Result<(), SolveError> {
    if !s.is_subset(instance.universe()) {
        return Err(SolveError::Infeasible(format!("{what} is not a subset of [n]")));
    }
    Ok(())
}

/// Single-level reduction: a random prime `p ≈ 2^{|M|/2}` and residue `x` filter
/// `ℒ = {A ⊆ L ∪ M : |A ∩ M| = |M|/4, w(A) ≡ x}` and
/// `ℛ = {B ⊆ R ∪ M : |B ∩ M| = |M|/4, w(B) ≡ t - x}`.
pub fn rep_reduce_single_level(rng: &mut Rng, instance: &SubsetSumInstance, mixer: IndexSet) -> Result<WovInstance, SolveError> {
    check_subset(instance, mixer, "M")?;
    let m = mixer.len();
    if m > 24 {
        return Err(SolveError::TooLarge { what: "|M|", value: m, limit: 24 });
    }
    if !m.is_multiple_of(4) {
        return Err(SolveError::Infeasible(format!("|M| = {m} is not divisible by 4")));
    }
    let rest: Vec<usize> = (instance.universe() - mixer).iter().collect();
    let half = rest.len() / 2;
    let l: IndexSet = rest[..half].iter().copied().collect();
    let r: IndexSet = rest[half..].iter().copied().collect();
    let p = random_prime(rng, (1u64 << (m / 2)).max(2))?.p;
    let x = rng.range_u64(0, p - 1);
    let quarter = fixed_size_sums(instance, mixer, m / 4);
    let t = instance.target();
    let family = |side: IndexSet, residue: u64| -> Vec<WovMember> {
        residue_join(&subset_sums(instance, side), &quarter, p, residue)
            .into_iter()
            .map(|(witness, weight)| WovMember { support: witness & mixer, weight, witness })
            .collect()
    };
    Ok(WovInstance { left: family(l, x), right: family(r, sub_mod(t, x, p)), target: t, mixer, prime: p, residue: x })
}

/// Primes and residues of one iteration of the two-level algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueDraw {
    pub p_l: u64,
    pub p_r: u64,
    pub p_prime: u64,
    pub x: u64,
    pub x_l: u64,
    pub x_r: u64,
    /// A prime range rounded below 2 and the prime was set to 2.
    pub prime_fallback: bool,
}

/// `p_R ≈ scale · 2^{k - ε_R m}`, `p' ≈ 2^{(ε_R - ε_L) m}`, `p_L = p' p_R`, and uniform
/// `x, x_L ∈ Z_{p_L}`, `x_R ∈ Z_{p_R}`.
pub fn draw_residues(
    rng: &mut Rng,
    lambda_count: usize,
    m: usize,
    eps_l: f64,
    eps_r: f64,
    prime_scale: f64,
) -> Result<ResidueDraw, SolveError> {
    let mut fallback = false;
    let mut prime = |rng: &mut Rng, raw: f64| -> Result<u64, SolveError> {
        if raw < 2.0 {
            fallback = true;
            return Ok(2);
        }
        let r = raw.min((1u64 << 40) as f64) as u64;
        Ok(random_prime(rng, r)?.p)
    };
    let p_r = prime(rng, prime_scale * (lambda_count as f64 - eps_r * m as f64).exp2())?;
    let p_prime = prime(rng, ((eps_r - eps_l).max(0.0) * m as f64).exp2().round())?;
    let p_l = p_prime * p_r;
    let x_l = rng.range_u64(0, p_l - 1);
    let x = rng.range_u64(0, p_l - 1);
    let x_r = rng.range_u64(0, p_r - 1);
    Ok(ResidueDraw { p_l, p_r, p_prime, x, x_l, x_r, prime_fallback: fallback })
}

/// Subset sizes `(s, s_L, s_R)`: `|S₄| = s`, `|S₂| = s_L`, `|S₇| = s_R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SigmaSizes {
    pub s: usize,
    pub s_l: usize,
    pub s_r: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    pub l: IndexSet,
    pub m_l: IndexSet,
    pub m: IndexSet,
    pub m_r: IndexSet,
    pub r: IndexSet,
}

/// Members are `(witness, weight)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTwoLists {
    pub l1: Vec<(IndexSet, u128)>,
    pub l2: Vec<(IndexSet, u128)>,
    pub r1: Vec<(IndexSet, u128)>,
    pub r2: Vec<(IndexSet, u128)>,
    pub parts: Partition,
    pub residues: ResidueDraw,
    pub lambda_count: usize,
    pub sizes: SigmaSizes,
    pub beta: f64,
    pub target: u128,
    /// `w([n])` of the instance the lists come from.
    pub total: u128,
    pub peak_payload: usize,
}

impl LevelTwoLists {
    pub fn sizes_of_lists(&self) -> [usize; 4] {
        [self.l1.len(), self.l2.len(), self.r1.len(), self.r2.len()]
    }
}

/// `β = h(s/m) - h((k - s)/m)`.
pub fn balance(m: usize, lambda_count: usize, s: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    h(s as f64 / m as f64) - h((lambda_count - s) as f64 / m as f64)
}

/// `|L| = (n - 3m - βm)/2` rounded and clamped, `|R|` the rest.
pub fn side_sizes(n: usize, m: usize, beta: f64) -> (usize, usize) {
    let rest = n - 3 * m;
    let l = ((rest as f64 - beta * m as f64) / 2.0).round().clamp(0.0, rest as f64) as usize;
    (l, rest - l)
}

/// Admissible integer sizes `{s : h(s/k) >= 1 - ε/λ - log₂n/n}` with `λ = k/m`;
/// `{⌊k/2⌋, ⌈k/2⌉}` when the band is empty.
pub fn sigma_band(n: usize, m: usize, lambda_count: usize, eps: f64) -> Vec<usize> {
    let k = lambda_count;
    if k == 0 || m == 0 {
        return vec![0];
    }
    let lambda = k as f64 / m as f64;
    let threshold = 1.0 - eps / lambda - (n as f64).log2() / n as f64;
    let band: Vec<usize> = (0..=k).filter(|&s| h(s as f64 / k as f64) >= threshold).collect();
    if band.is_empty() {
        let mut v = vec![k / 2, k.div_ceil(2)];
        v.dedup();
        v
    } else {
        band
    }
}

type SumList = Vec<(u128, IndexSet)>;

/// Residue-independent sums for fixed mixers: every subset sum of each mixer
/// bucketed by size, and the subset sums of `L` and `R` per split point.
pub struct ListContext<'a> {
    instance: &'a SubsetSumInstance,
    mixers: [IndexSet; 3],
    by_size: [Vec<Vec<(u128, IndexSet)>>; 3],
    rest: Vec<usize>,
    sides: Vec<Option<[SumList; 2]>>,
}

impl<'a> ListContext<'a> {
    pub fn new(instance: &'a SubsetSumInstance, m_l: IndexSet, m: IndexSet, m_r: IndexSet) -> Result<Self, SolveError> {
        for (s, name) in [(m_l, "M_L"), (m, "M"), (m_r, "M_R")] {
            check_subset(instance, s, name)?;
            if s.len() > 20 {
                return Err(SolveError::TooLarge { what: "mixer size", value: s.len(), limit: 20 });
            }
        }
        if !m_l.is_disjoint(m) || !m.is_disjoint(m_r) || !m_l.is_disjoint(m_r) {
            return Err(SolveError::Infeasible("mixers must be pairwise disjoint".into()));
        }
        if m_l.len() != m.len() || m_r.len() != m.len() {
            return Err(SolveError::Infeasible("mixers must have equal size".into()));
        }
        let bucket = |set: IndexSet| {
            let mut b = vec![Vec::new(); set.len() + 1];
            for (w, x) in subset_sums(instance, set) {
                b[x.len()].push((w, x));
            }
            b
        };
        let rest: Vec<usize> = (instance.universe() - (m_l | m | m_r)).iter().collect();
        Ok(ListContext {
            instance,
            mixers: [m_l, m, m_r],
            by_size: [bucket(m_l), bucket(m), bucket(m_r)],
            sides: vec![None; rest.len() + 1],
            rest,
        })
    }

    /// Builds the four lists for fixed primes and residues.
    ///
    /// `ℒ₁ = S₁ ∪ S₂` with `S₁ ⊆ L`, `S₂ ∈ C(M_L, s_L)`, `≡ x_L (mod p_L)`;
    /// `ℒ₂ = S₃ ∪ S₄` with `S₃ ∈ C(M_L, k - s_L)`, `S₄ ∈ C(M, s)`, `≡ x - x_L (mod p_L)`;
    /// `ℛ₂ = S₅ ∪ S₆` with `S₅ ∈ C(M, k - s)`, `S₆ ∈ C(M_R, k - s_R)`, `≡ x_R (mod p_R)`;
    /// `ℛ₁ = S₇ ∪ S₈` with `S₇ ∈ C(M_R, s_R)`, `S₈ ⊆ R`, `≡ t - x - x_R (mod p_R)`.
    pub fn assemble(&mut self, lambda_count: usize, sizes: SigmaSizes, residues: &ResidueDraw) -> Result<LevelTwoLists, SolveError> {
        let [m_l, m, m_r] = self.mixers;
        let mu = m.len();
        let k = lambda_count;
        let SigmaSizes { s, s_l, s_r } = sizes;
        if k > mu || s > k || s_l > k || s_r > k {
            return Err(SolveError::Infeasible(format!("split sizes {sizes:?} with k = {k}, |M| = {mu}")));
        }
        let ResidueDraw { p_l, p_r, x, x_l, x_r, .. } = *residues;
        assert_eq!(p_l % p_r, 0, "p_R must divide p_L");

        let instance = self.instance;
        let beta = balance(mu, k, s);
        let (l_len, _) = side_sizes(instance.n(), mu, beta);
        let l: IndexSet = self.rest[..l_len].iter().copied().collect();
        let r: IndexSet = self.rest[l_len..].iter().copied().collect();
        let [sl, sr] = self.sides[l_len].get_or_insert_with(|| [subset_sums(instance, l), subset_sums(instance, r)]);
        let [bl, bm, br] = &self.by_size;

        let t = instance.target();
        let l1 = residue_join(sl, &bl[s_l], p_l, x_l);
        let l2 = residue_join(&bl[k - s_l], &bm[s], p_l, sub_mod(x as u128, x_l, p_l));
        let r2 = residue_join(&bm[k - s], &br[k - s_r], p_r, x_r);
        let r1 = residue_join(&br[s_r], sr, p_r, sub_mod(sub_mod(t, x, p_r) as u128, x_r, p_r));
        let peak_payload = l1.len() + l2.len() + r1.len() + r2.len();
        Ok(LevelTwoLists {
            l1,
            l2,
            r1,
            r2,
            parts: Partition { l, m_l, m, m_r, r },
            residues: *residues,
            lambda_count: k,
            sizes,
            beta,
            target: t,
            total: instance.total(),
            peak_payload,
        })
    }
}

/// See [`ListContext::assemble`].
pub fn assemble_level_two_lists(
    instance: &SubsetSumInstance,
    m_l: IndexSet,
    m: IndexSet,
    m_r: IndexSet,
    lambda_count: usize,
    sizes: SigmaSizes,
    residues: &ResidueDraw,
) -> Result<LevelTwoLists, SolveError> {
    ListContext::new(instance, m_l, m, m_r)?.assemble(lambda_count, sizes, residues)
}

/// Draws primes and residues, then assembles the lists.
#[allow(clippy::too_many_arguments)]
pub fn build_level_two_lists(
    rng: &mut Rng,
    instance: &SubsetSumInstance,
    m_l: IndexSet,
    m: IndexSet,
    m_r: IndexSet,
    lambda_count: usize,
    sizes: SigmaSizes,
    eps_l: f64,
    eps_r: f64,
    prime_scale: f64,
) -> Result<LevelTwoLists, SolveError> {
    let residues = draw_residues(rng, lambda_count, m.len(), eps_l, eps_r, prime_scale)?;
    assemble_level_two_lists(instance, m_l, m, m_r, lambda_count, sizes, &residues)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WovOptions {
    /// Below `|ℒ(a)|·|ℛ(b)|` of this size the naive OV scan is used.
    pub crossover: usize,
    /// A weight-matched cell whose member cross product exceeds this is skipped.
    pub product_cap: usize,
    /// Blocks `c` of the sparsity OV engine.
    pub blocks: usize,
}

impl Default for WovOptions {
    fn default() -> Self {
        WovOptions { crossover: 1 << 10, product_cap: 1 << 22, blocks: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedOvOutcome {
    /// `(A₁, A₂, A₃, A₄)` from `ℒ₁, ℒ₂, ℛ₂, ℛ₁`.
    pub witness: Option<[IndexSet; 4]>,
    pub peak_payload: usize,
    pub matched_cells: usize,
    pub aborted_cells: usize,
    pub sparse_ov_calls: usize,
}

/// Distinct weights with their members, stored flat.
struct Grouped {
    weights: Vec<u128>,
    offsets: Vec<u32>,
    order: Vec<u32>,
}

impl Grouped {
    fn members(&self, g: usize) -> &[u32] {
        &self.order[self.offsets[g] as usize..self.offsets[g + 1] as usize]
    }
}

fn group_by_weight(list: &[(IndexSet, u128)]) -> Grouped {
    let mut order: Vec<u32> = (0..list.len() as u32).collect();
    order.sort_unstable_by_key(|&i| (list[i as usize].1, i));
    let mut weights = Vec::new();
    let mut offsets = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let w = list[i as usize].1;
        if weights.last() != Some(&w) {
            weights.push(w);
            offsets.push(pos as u32);
        }
    }
    offsets.push(order.len() as u32);
    Grouped { weights, offsets, order }
}

/// `{Y ∩ M}` over disjoint `(X, Y)` realising the weight pairs; `None` when the cap is hit.
fn supports(
    xs: &[(IndexSet, u128)],
    ys: &[(IndexSet, u128)],
    gx: &Grouped,
    gy: &Grouped,
    pairs: &[(usize, usize)],
    m: IndexSet,
    cap: usize,
) -> Option<Vec<(u64, usize, usize)>> {
    let mut out: Vec<(u64, usize, usize)> = Vec::new();
    let mut work = 0usize;
    for &(i, j) in pairs {
        for &x in gx.members(i) {
            for &y in gy.members(j) {
                let (x, y) = (x as usize, y as usize);
                work += 1;
                if work > cap {
                    return None;
                }
                if xs[x].0.is_disjoint(ys[y].0) {
                    out.push(((ys[y].0 & m).compress(m), x, y));
                }
            }
        }
    }
    // keep the first realisation of every support
    out.sort_by_key(|e| e.0);
    out.dedup_by_key(|e| e.0);
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn ov_cell(
    rng: &mut Rng,
    a: &[u64],
    b: &[u64],
    d: usize,
    p: usize,
    q: usize,
    opts: &WovOptions,
    calls: &mut usize,
) -> Option<(usize, usize)> {
    if a.len().saturating_mul(b.len()) < opts.crossover {
        return ov_naive(a, b);
    }
    *calls += 1;
    let mut sparse = || -> Result<Option<(usize, usize)>, SolveError> {
        let c = opts.blocks.max(1);
        if c == 1 {
            let cover = build_cover(rng, d, p, q, None)?;
            return ov_by_sparsity(rng, &cover, a, b, &OvOptions::default());
        }
        let padded = pad_families(d, p, q, c, a, b)?;
        let cover = build_cover(rng, padded.d / c, padded.p / c, padded.q / c, None)?;
        ov_by_sparsity(rng, &cover, &padded.a, &padded.b, &OvOptions { blocks: c, ..Default::default() })
    };
    match sparse() {
        Ok(found) => found,
        Err(_) => ov_naive(a, b),
    }
}

/// Inc over `(w(ℒ₁), w(ℒ₂))` against dec over `(w(ℛ₁), w(ℛ₂))`; at every `a + b = t`
/// the `M`-supports of both sides go through OV.
pub fn weighted_ov(rng: &mut Rng, lists: &LevelTwoLists, opts: &WovOptions) -> WeightedOvOutcome {
    let mut out = WeightedOvOutcome::default();
    let t = lists.target;
    let m = lists.parts.m;
    let all = [&lists.l1, &lists.l2, &lists.r1, &lists.r2];
    if all.iter().any(|l| l.is_empty()) {
        out.peak_payload = lists.peak_payload;
        return out;
    }
    let lo: u128 = all.iter().map(|l| l.iter().map(|e| e.1).min().expect("non-empty")).sum();
    let hi: u128 = all.iter().map(|l| l.iter().map(|e| e.1).max().expect("non-empty")).sum();
    if t < lo || t > hi {
        out.peak_payload = lists.peak_payload;
        return out;
    }
    let (g1, g2, gr1, gr2) =
        (group_by_weight(&lists.l1), group_by_weight(&lists.l2), group_by_weight(&lists.r1), group_by_weight(&lists.r2));
    let mut inc = SumsetEnumerator::new(&g1.weights, &g2.weights, Direction::Increasing).expect("non-empty lists");
    let mut dec = SumsetEnumerator::new(&gr1.weights, &gr2.weights, Direction::Decreasing).expect("non-empty lists");
    let base = lists.peak_payload;
    let p = lists.sizes.s;
    let q = lists.lambda_count - lists.sizes.s;
    let (mut lp, mut rp) = (Vec::new(), Vec::new());
    let mut right = dec.next_into(&mut rp);
    let mut peak_cell = 0;
    'search: while let Some(lv) = inc.next_into(&mut lp) {
        let rv = loop {
            match right {
                None => break 'search,
                Some(r) if lv + r > t => right = dec.next_into(&mut rp),
                Some(r) => break r,
            }
        };
        if lv + rv != t {
            continue;
        }
        out.matched_cells += 1;
        let (Some(la), Some(rb)) = (
            supports(&lists.l1, &lists.l2, &g1, &g2, &lp, m, opts.product_cap),
            supports(&lists.r1, &lists.r2, &gr1, &gr2, &rp, m, opts.product_cap),
        ) else {
            out.aborted_cells += 1;
            continue;
        };
        peak_cell = peak_cell.max(la.len() + rb.len());
        let a: Vec<u64> = la.iter().map(|e| e.0).collect();
        let b: Vec<u64> = rb.iter().map(|e| e.0).collect();
        if let Some((i, j)) = ov_cell(rng, &a, &b, m.len(), p, q, opts, &mut out.sparse_ov_calls) {
            let (_, x1, y1) = la[i];
            let (_, x4, y3) = rb[j];
            let quad = [lists.l1[x1], lists.l2[y1], lists.r2[y3], lists.r1[x4]];
            let ResidueDraw { p_l, p_r, x, .. } = lists.residues;
            assert_eq!(modp(quad[0].1 + quad[1].1, p_l), x, "left half leaves its residue class");
            assert_eq!(modp(quad[2].1 + quad[3].1, p_r), sub_mod(t, x, p_r), "right half leaves its residue class");
            for u in 0..4 {
                for v in u + 1..4 {
                    assert!(quad[u].0.is_disjoint(quad[v].0), "witness parts overlap");
                }
            }
            assert_eq!(quad.iter().map(|e| e.1).sum::<u128>(), t);
            out.witness = Some(quad.map(|e| e.0));
            break 'search;
        }
    }
    out.peak_payload = base + inc.peak_payload() + dec.peak_payload() + peak_cell;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Detector {
    #[default]
    WeightedOv,
    /// Exact node-weighted P4 search in the layered graph of the four lists.
    P4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MainLemmaOptions {
    pub prime_scale: f64,
    pub wov: WovOptions,
    pub detector: Detector,
}

impl Default for MainLemmaOptions {
    fn default() -> Self {
        SolverConfig::desk().main_lemma_options()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MainLemmaOutcome {
    pub solution: Option<Solution>,
    pub residues: ResidueDraw,
    /// List sizes of the last iteration run.
    pub list_sizes: [usize; 4],
    pub iterations: usize,
    pub peak_payload: usize,
}

/// The two-level algorithm for one choice of mixers and `k = |S ∩ M|`: one draw of
/// primes and residues, then every admissible `(s, s_L, s_R)`.
#[allow(clippy::too_many_arguments)]
pub fn main_lemma_solve(
    rng: &mut Rng,
    instance: &SubsetSumInstance,
    m_l: IndexSet,
    m: IndexSet,
    m_r: IndexSet,
    lambda_count: usize,
    eps_l: f64,
    eps_r: f64,
    opts: &MainLemmaOptions,
) -> Result<MainLemmaOutcome, SolveError> {
    let mut ctx = ListContext::new(instance, m_l, m, m_r)?;
    main_lemma_in(rng, &mut ctx, lambda_count, eps_l, eps_r, opts)
}

fn main_lemma_in(
    rng: &mut Rng,
    ctx: &mut ListContext,
    lambda_count: usize,
    eps_l: f64,
    eps_r: f64,
    opts: &MainLemmaOptions,
) -> Result<MainLemmaOutcome, SolveError> {
    let instance = ctx.instance;
    let [m_l, m, m_r] = ctx.mixers;
    let mu = m.len();
    let residues = draw_residues(rng, lambda_count, mu, eps_l, eps_r, opts.prime_scale)?;
    let band = sigma_band(instance.n(), mu, lambda_count, eps_r);
    let mut out = MainLemmaOutcome { solution: None, residues, list_sizes: [0; 4], iterations: 0, peak_payload: 0 };
    for &s in &band {
        for &s_l in &band {
            for &s_r in &band {
                let sizes = SigmaSizes { s, s_l, s_r };
                let lists = ctx.assemble(lambda_count, sizes, &residues)?;
                out.iterations += 1;
                out.list_sizes = lists.sizes_of_lists();
                let mut child = rng.split();
                let (witness, peak) = match opts.detector {
                    Detector::WeightedOv => {
                        let w = weighted_ov(&mut child, &lists, &opts.wov);
                        (w.witness, w.peak_payload)
                    }
                    Detector::P4 => {
                        let d = crate::p4::p4_detect(&lists)?;
                        (d.witness, d.peak_payload)
                    }
                };
                out.peak_payload = out.peak_payload.max(peak);
                if let Some(quad) = witness {
                    let set = quad.iter().fold(IndexSet::empty(), |acc, &x| acc | x);
                    let sol = Solution::new(instance, set);
                    assert!(sol.solves(instance), "assembled witness misses the target");
                    for part in [m_l, m, m_r] {
                        assert_eq!((set & part).len(), lambda_count, "witness is unbalanced on a mixer");
                    }
                    out.solution = Some(sol);
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Paper,
    Desk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub preset: Preset,
    /// Mixer size as a fraction of `n`.
    pub mu: f64,
    /// Solution densities below this go to the small-solution branch.
    pub lambda0: f64,
    /// Mixer quality at which the win-win branch takes over.
    pub eps0: f64,
    /// Blocks of the sparsity OV engine.
    pub blocks: usize,
    /// Space exponent used by the trade-off.
    pub gamma: f64,
    pub repetitions: usize,
    pub crossover: usize,
    pub product_cap: usize,
    /// Constant in front of the `p_R` magnitude.
    pub prime_scale: f64,
    /// Independent prime and residue draws per mixer sample.
    pub residue_trials: usize,
    /// Trials of the small-solution branch; `None` means `10 n²`.
    pub small_lambda_trials: Option<usize>,
    pub detector: Detector,
}

impl SolverConfig {
    pub fn paper() -> Self {
        SolverConfig {
            preset: Preset::Paper,
            mu: 0.217,
            lambda0: 0.495,
            eps0: 0.00002,
            blocks: 20,
            gamma: 0.249999,
            repetitions: 100,
            crossover: 1 << 10,
            product_cap: 1 << 22,
            prime_scale: 1.0,
            residue_trials: 1,
            small_lambda_trials: None,
            detector: Detector::WeightedOv,
        }
    }

    pub fn desk() -> Self {
        SolverConfig {
            preset: Preset::Desk,
            mu: 0.2,
            lambda0: 0.3,
            eps0: 0.15,
            blocks: 1,
            gamma: 0.25,
            prime_scale: 0.5,
            residue_trials: 6,
            ..Self::paper()
        }
    }

    pub fn main_lemma_options(&self) -> MainLemmaOptions {
        MainLemmaOptions {
            prime_scale: self.prime_scale,
            wov: WovOptions { crossover: self.crossover, product_cap: self.product_cap, blocks: self.blocks },
            detector: self.detector,
        }
    }

    /// `round(μ n)`, reduced until three mixers fit.
    pub fn mixer_size(&self, n: usize) -> usize {
        let mut m = (self.mu * n as f64).round() as usize;
        while 3 * m > n {
            m -= 1;
        }
        m
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |what: &str| Err(SolveError::Domain(format!("{what} out of range")));
        if !(self.mu > 0.0 && self.mu < 0.25) {
            return bad("mu");
        }
        if !(0.0..=0.5).contains(&self.lambda0) {
            return bad("lambda0");
        }
        if !(self.eps0 > 0.0 && self.eps0 <= 1.0) {
            return bad("eps0");
        }
        if self.blocks == 0 || self.blocks > 32 {
            return bad("blocks");
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad("gamma");
        }
        if self.repetitions == 0 || self.residue_trials == 0 {
            return bad("repetitions");
        }
        if !(self.prime_scale > 0.0 && self.prime_scale.is_finite()) {
            return bad("prime_scale");
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::desk()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `t = 0` or `t > w([n])`.
    Trivial,
    SmallLambda,
    WinWin,
    MainLemma,
    /// Every size guess ran out of repetitions.
    Exhausted,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Trivial => "trivial",
            Branch::SmallLambda => "small-lambda",
            Branch::WinWin => "win-win",
            Branch::MainLemma => "main-lemma",
            Branch::Exhausted => "exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveStats {
    /// `(ε, ε_L, ε_R)` of the last mixer sample, after sorting.
    pub mixer_epsilons: Option<[f64; 3]>,
    /// Primes and residues of the last main-lemma call.
    pub residues: Option<ResidueDraw>,
    pub list_sizes: Option<[usize; 4]>,
    pub peak_payload: usize,
    pub repetitions: usize,
    pub main_lemma_calls: usize,
    pub small_lambda_calls: usize,
    /// Size guess `|S|` of the answer, in the original instance.
    pub solution_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Option<Solution>,
    pub branch: Branch,
    pub stats: SolveStats,
}

fn sample_mixers(rng: &mut Rng, universe: IndexSet, m: usize) -> Result<[IndexSet; 3], SolveError> {
    let a = random_subset(rng, universe, m)?;
    let b = random_subset(rng, universe - a, m)?;
    let c = random_subset(rng, universe - a - b, m)?;
    Ok([a, b, c])
}

fn lambda_counts(size: usize, m: usize, n: usize) -> Vec<usize> {
    let lo = size * m / n;
    let hi = (size * m).div_ceil(n);
    let mut v: Vec<usize> = [lo, hi].into_iter().filter(|&k| k <= m).collect();
    v.dedup();
    v
}

/// Full driver; see [`solve`].
pub fn solve_detailed(rng: &mut Rng, instance: &SubsetSumInstance, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    config.validate()?;
    let n = instance.n();
    if n > 40 {
        return Err(SolveError::TooLarge { what: "n", value: n, limit: 40 });
    }
    let mut stats = SolveStats::default();
    let t = instance.target();
    if t == 0 {
        stats.solution_size = Some(0);
        return Ok(SolveReport { solution: Some(Solution::new(instance, IndexSet::empty())), branch: Branch::Trivial, stats });
    }
    if t > instance.total() {
        return Ok(SolveReport { solution: None, branch: Branch::Trivial, stats });
    }
    let complement = instance.complemented();
    let m = config.mixer_size(n);
    let opts = config.main_lemma_options();
    let finish = |sub: IndexSet, flipped: bool| {
        let set = if flipped { instance.universe() - sub } else { sub };
        let s = Solution::new(instance, set);
        assert!(s.solves(instance), "driver returns a wrong subset");
        s
    };
    for size in 1..=n {
        let flipped = 2 * size > n;
        let (work, k_size) = match (flipped, &complement) {
            (true, Some(c)) => (c, n - size),
            (true, None) => continue,
            (false, _) => (instance, size),
        };
        if k_size == 0 {
            if work.target() == 0 {
                stats.solution_size = Some(size);
                return Ok(SolveReport { solution: Some(finish(IndexSet::empty(), flipped)), branch: Branch::Trivial, stats });
            }
            continue;
        }
        if (k_size as f64) < config.lambda0 * n as f64 {
            stats.small_lambda_calls += 1;
            let out = small_lambda_solve(rng, work, k_size, config.small_lambda_trials)?;
            stats.peak_payload = stats.peak_payload.max(out.peak_payload);
            if let Some(s) = out.solution {
                stats.solution_size = Some(size);
                return Ok(SolveReport { solution: Some(finish(s.subset, flipped)), branch: Branch::SmallLambda, stats });
            }
            continue;
        }
        for _ in 0..config.repetitions {
            stats.repetitions += 1;
            let mixers = sample_mixers(rng, work.universe(), m)?;
            let mut reports = Vec::with_capacity(3);
            for &s in &mixers {
                reports.push(compute_mixer(work, s)?);
            }
            let worst = (0..3).max_by(|&a, &b| reports[a].epsilon.total_cmp(&reports[b].epsilon)).expect("three mixers");
            if reports[worst].epsilon >= config.eps0 {
                let out = win_win_solve(work, mixers[worst], config.eps0, config.mu)?;
                stats.peak_payload = stats.peak_payload.max(out.peak_payload);
                let solution = out.solution.map(|s| finish(s.subset, flipped));
                stats.solution_size = solution.as_ref().map(|s| s.subset.len());
                return Ok(SolveReport { solution, branch: Branch::WinWin, stats });
            }
            let mut order = [0usize, 1, 2];
            order.sort_by(|&a, &b| reports[a].epsilon.total_cmp(&reports[b].epsilon));
            let [mid, left, right] = order;
            let (eps, eps_l, eps_r) = (reports[mid].epsilon, reports[left].epsilon, reports[right].epsilon);
            stats.mixer_epsilons = Some([eps, eps_l, eps_r]);
            let mut ctx = ListContext::new(work, mixers[left], mixers[mid], mixers[right])?;
            for k in lambda_counts(k_size, m, n) {
                for _ in 0..config.residue_trials {
                    stats.main_lemma_calls += 1;
                    let out = main_lemma_in(rng, &mut ctx, k, eps_l, eps_r, &opts)?;
                    stats.peak_payload = stats.peak_payload.max(out.peak_payload);
                    stats.residues = Some(out.residues);
                    stats.list_sizes = Some(out.list_sizes);
                    if let Some(s) = out.solution {
                        stats.solution_size = Some(size);
                        return Ok(SolveReport { solution: Some(finish(s.subset, flipped)), branch: Branch::MainLemma, stats });
                    }
                }
            }
        }
    }
    Ok(SolveReport { solution: None, branch: Branch::Exhausted, stats })
}

/// One-sided Monte Carlo Subset Sum: a returned solution is always correct.
pub fn solve(rng: &mut Rng, instance: &SubsetSumInstance, config: &SolverConfig) -> Result<Option<Solution>, SolveError> {
    Ok(solve_detailed(rng, instance, config)?.solution)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetOutcome {
    pub solution: Option<Solution>,
    /// Number `b` of top indices enumerated exhaustively.
    pub high_indices: usize,
    pub subproblems: usize,
    pub peak_payload: usize,
    /// `2^{budget exponent}`.
    pub payload_cap: f64,
}

/// Time-space trade-off: with `b = n - budget/γ` every subset of the top `b`
/// indices is fixed and the remaining prefix instance goes to [`solve`].
pub fn solve_with_space_budget(
    rng: &mut Rng,
    instance: &SubsetSumInstance,
    budget_exponent: f64,
    config: &SolverConfig,
) -> Result<BudgetOutcome, SolveError> {
    config.validate()?;
    if !(budget_exponent >= 0.0 && budget_exponent.is_finite()) {
        return Err(SolveError::Domain(format!("budget exponent {budget_exponent} must be non-negative")));
    }
    let n = instance.n();
    let b = (n as f64 - budget_exponent / config.gamma).round().clamp(0.0, n as f64) as usize;
    let high = instance.universe() - IndexSet::full(n - b);
    let mut out = BudgetOutcome { solution: None, high_indices: b, subproblems: 0, peak_payload: 0, payload_cap: budget_exponent.exp2() };
    let t = instance.target();
    for fixed in high.subsets() {
        let w = instance.weight_of(fixed);
        if w > t {
            continue;
        }
        out.subproblems += 1;
        let found = if b == n {
            (w == t).then_some(IndexSet::empty())
        } else {
            let residual = instance.prefix(n - b, t - w).map_err(|e| SolveError::Infeasible(e.to_string()))?;
            let report = solve_detailed(rng, &residual, config)?;
            out.peak_payload = out.peak_payload.max(report.stats.peak_payload);
            report.solution.map(|s| s.subset)
        };
        if let Some(sub) = found {
            let s = Solution::new(instance, sub | fixed);
            assert!(s.solves(instance), "trade-off returns a wrong subset");
            out.solution = Some(s);
            return Ok(out);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::brute_force_solve;

    fn powers(n: usize) -> Vec<u64> {
        (0..n).map(|i| 1u64 << i).collect()
    }

    fn planted_powers(rng: &mut Rng, n: usize, size: usize) -> (SubsetSumInstance, IndexSet) {
        let s = random_subset(rng, IndexSet::full(n), size).unwrap();
        let w = powers(n);
        let t: u64 = s.iter().map(|i| w[i]).sum();
        (SubsetSumInstance::new(w, t).unwrap(), s)
    }

    #[test]
    fn single_level_members_obey_constraints() {
        let mut rng = Rng::new(4);
        let (inst, _) = planted_powers(&mut rng, 12, 6);
        let m = IndexSet::from_indices([0, 3, 6, 9]);
        let wov = rep_reduce_single_level(&mut rng, &inst, m).unwrap();
        for e in &wov.left {
            assert_eq!(modp(e.weight, wov.prime), wov.residue);
            assert_eq!(e.support.len(), 1);
            assert_eq!(e.support, e.witness & m);
            assert_eq!(inst.weight_of(e.witness), e.weight);
        }
        for e in &wov.right {
            assert_eq!(modp(e.weight, wov.prime), sub_mod(inst.target(), wov.residue, wov.prime));
        }
        assert!(rep_reduce_single_level(&mut rng, &inst, IndexSet::from_indices([0, 1])).is_err());
    }

    #[test]
    fn single_level_success_rate() {
        let n = 12;
        let m = IndexSet::from_indices([0, 1, 2, 3]);
        let mut yes = 0;
        for seed in 0..400 {
            let mut rng = Rng::new(seed);
            let mut s = random_subset(&mut rng, IndexSet::full(n) - m, 4).unwrap();
            s = s | random_subset(&mut rng, m, 2).unwrap();
            let t = s.iter().map(|i| 1u64 << i).sum();
            let inst = SubsetSumInstance::new(powers(n), t).unwrap();
            if rep_reduce_single_level(&mut rng, &inst, m).unwrap().naive_solve().is_some() {
                yes += 1;
            }
        }
        assert!(yes as f64 >= 400.0 / (4.0 * n as f64), "{yes}");
    }

    #[test]
    fn single_level_no_instance() {
        let inst = SubsetSumInstance::new(vec![3, 5, 7, 11, 13, 17, 19, 23], 1000).unwrap();
        for seed in 0..50 {
            let wov = rep_reduce_single_level(&mut Rng::new(seed), &inst, IndexSet::from_indices([0, 2, 4, 6])).unwrap();
            assert!(wov.naive_solve().is_none());
        }
    }

    #[test]
    fn level_two_lists_obey_constraints() {
        let mut rng = Rng::new(11);
        let (inst, _) = planted_powers(&mut rng, 20, 10);
        let [a, b, c] = sample_mixers(&mut rng, inst.universe(), 4).unwrap();
        let sizes = SigmaSizes { s: 1, s_l: 1, s_r: 1 };
        let lists = build_level_two_lists(&mut rng, &inst, a, b, c, 2, sizes, 0.0, 0.0, 1.0).unwrap();
        let Partition { l, m_l, m, m_r, r } = lists.parts;
        assert_eq!(l.len() + r.len() + 12, 20);
        assert_eq!((l | m_l | m | m_r | r), inst.universe());
        let ResidueDraw { p_l, p_r, x, x_l, x_r, .. } = lists.residues;
        assert_eq!(p_l % p_r, 0);
        let t = inst.target();
        for &(s, w) in &lists.l1 {
            assert_eq!(inst.weight_of(s), w);
            assert!(s.is_subset(l | m_l) && (s & m_l).len() == 1);
            assert_eq!(modp(w, p_l), x_l);
        }
        for &(s, w) in &lists.l2 {
            assert!(s.is_subset(m_l | m) && (s & m_l).len() == 1 && (s & m).len() == 1);
            assert_eq!(modp(w, p_l), sub_mod(x as u128, x_l, p_l));
        }
        for &(s, w) in &lists.r2 {
            assert!(s.is_subset(m | m_r) && (s & m).len() == 1 && (s & m_r).len() == 1);
            assert_eq!(modp(w, p_r), x_r);
        }
        for &(s, w) in &lists.r1 {
            assert!(s.is_subset(m_r | r) && (s & m_r).len() == 1);
            assert_eq!(modp(w, p_r), sub_mod(sub_mod(t, x, p_r) as u128, x_r, p_r));
        }
    }

    #[test]
    fn vacuous_residue_empties_lists() {
        let inst = SubsetSumInstance::new(vec![1, 1], 1).unwrap();
        let empty = IndexSet::empty();
        let residues = ResidueDraw { p_l: 6, p_r: 3, p_prime: 2, x: 0, x_l: 5, x_r: 0, prime_fallback: false };
        let lists = assemble_level_two_lists(&inst, empty, empty, empty, 0, SigmaSizes { s: 0, s_l: 0, s_r: 0 }, &residues).unwrap();
        assert!(lists.l1.is_empty());
    }

    #[test]
    fn weighted_ov_hand_built() {
        // one element per part: A1 = {0}, A2 = {1}, A3 = {2}, A4 = {3}, weights 1, 2, 4, 8
        let inst = SubsetSumInstance::new(vec![1, 2, 4, 8], 15).unwrap();
        let set = |i: usize| IndexSet::from_indices([i]);
        let residues = ResidueDraw { p_l: 1, p_r: 1, p_prime: 1, x: 0, x_l: 0, x_r: 0, prime_fallback: false };
        let lists = LevelTwoLists {
            l1: vec![(set(0), 1), (IndexSet::empty(), 0)],
            l2: vec![(set(1), 2)],
            r1: vec![(set(3), 8)],
            r2: vec![(set(2), 4), (set(1), 2)],
            parts: Partition { l: set(0), m_l: IndexSet::empty(), m: set(1) | set(2), m_r: IndexSet::empty(), r: set(3) },
            residues,
            lambda_count: 2,
            sizes: SigmaSizes { s: 1, s_l: 0, s_r: 0 },
            beta: 0.0,
            target: 15,
            total: inst.total(),
            peak_payload: 0,
        };
        let out = weighted_ov(&mut Rng::new(0), &lists, &WovOptions::default());
        assert_eq!(out.witness, Some([set(0), set(1), set(2), set(3)]));

        let far = LevelTwoLists { target: 100, ..lists.clone() };
        assert_eq!(weighted_ov(&mut Rng::new(0), &far, &WovOptions::default()).witness, None);

        // the only weight match reuses element 1 in A2 and A3
        let clash = LevelTwoLists { r2: vec![(set(1), 4)], ..lists };
        assert_eq!(weighted_ov(&mut Rng::new(0), &clash, &WovOptions::default()).witness, None);
    }

    #[test]
    fn band_examples() {
        assert_eq!(sigma_band(20, 4, 2, 0.0), vec![1]);
        assert_eq!(sigma_band(20, 4, 1, 0.0), vec![0, 1]);
        assert_eq!(sigma_band(20, 4, 0, 0.0), vec![0]);
        assert_eq!(side_sizes(20, 4, 0.0), (4, 4));
    }

    #[test]
    fn main_lemma_recovers_planted() {
        let n = 20;
        let mut hits = 0;
        for seed in 0..40 {
            let mut rng = Rng::new(seed);
            let m = random_subset(&mut rng, IndexSet::full(n), 4).unwrap();
            let ml = random_subset(&mut rng, IndexSet::full(n) - m, 4).unwrap();
            let mr = random_subset(&mut rng, IndexSet::full(n) - m - ml, 4).unwrap();
            let rest = IndexSet::full(n) - m - ml - mr;
            let mut s = random_subset(&mut rng, rest, 4).unwrap();
            for part in [m, ml, mr] {
                s = s | random_subset(&mut rng, part, 2).unwrap();
            }
            let t = s.iter().map(|i| 1u64 << i).sum();
            let inst = SubsetSumInstance::new(powers(n), t).unwrap();
            let cfg = SolverConfig::desk();
            let opts = cfg.main_lemma_options();
            // an outer repetition is one mixer sample with `residue_trials` draws
            'reps: for _ in 0..50 {
                for _ in 0..cfg.residue_trials {
                    let out = main_lemma_solve(&mut rng, &inst, ml, m, mr, 2, 0.0, 0.0, &opts).unwrap();
                    if let Some(sol) = out.solution {
                        assert_eq!(sol.subset, s);
                        hits += 1;
                        break 'reps;
                    }
                }
            }
        }
        assert!(hits >= 36, "{hits}/40");
    }

    #[test]
    fn main_lemma_sound_on_no_instances() {
        let mut rng = Rng::new(77);
        let mut checked = 0;
        while checked < 100 {
            let w: Vec<u64> = (0..16).map(|_| rng.range_u64(1, 1 << 20)).collect();
            let inst = SubsetSumInstance::new(w, rng.range_u64(1, 1 << 22)).unwrap();
            if brute_force_solve(&inst).is_some() {
                continue;
            }
            checked += 1;
            let [a, b, c] = sample_mixers(&mut rng, inst.universe(), 3).unwrap();
            for k in 0..=3 {
                let out = main_lemma_solve(&mut rng, &inst, a, b, c, k, 0.0, 0.0, &MainLemmaOptions::default()).unwrap();
                assert!(out.solution.is_none());
            }
        }
    }

    #[test]
    fn driver_examples() {
        let cfg = SolverConfig::desk();
        let zero = SubsetSumInstance::new(vec![5, 6, 7], 0).unwrap();
        let r = solve_detailed(&mut Rng::new(0), &zero, &cfg).unwrap();
        assert_eq!((r.branch, r.solution.map(|s| s.subset)), (Branch::Trivial, Some(IndexSet::empty())));

        let equal = SubsetSumInstance::new(vec![7; 16], 56).unwrap();
        let r = solve_detailed(&mut Rng::new(0), &equal, &cfg).unwrap();
        assert_eq!(r.branch, Branch::WinWin);
        assert!(r.solution.unwrap().solves(&equal));
        let odd = equal.retarget(57);
        let r = solve_detailed(&mut Rng::new(0), &odd, &cfg).unwrap();
        assert!(r.solution.is_none());
    }

    #[test]
    fn driver_agrees_with_brute_force() {
        let cfg = SolverConfig::desk();
        let mut rng = Rng::new(2024);
        let (mut yes, mut found) = (0, 0);
        for _ in 0..60 {
            let w: Vec<u64> = (0..16).map(|_| rng.range_u64(1, 1 << 20)).collect();
            let size = 1 + rng.below(15);
            let pick = random_subset(&mut rng, IndexSet::full(16), size).unwrap();
            let t = if rng.below(2) == 0 { pick.iter().map(|i| w[i]).sum() } else { rng.range_u64(1, 1 << 22) };
            let inst = SubsetSumInstance::new(w, t).unwrap();
            let oracle = brute_force_solve(&inst);
            let got = solve(&mut rng, &inst, &cfg).unwrap();
            if let Some(s) = &got {
                assert!(s.solves(&inst));
            }
            if oracle.is_some() {
                yes += 1;
                found += usize::from(got.is_some());
            } else {
                assert!(got.is_none());
            }
        }
        assert!(found as f64 >= 0.95 * yes as f64, "{found}/{yes}");
    }

    #[test]
    fn budget_extremes() {
        let cfg = SolverConfig::desk();
        let mut rng = Rng::new(5);
        for _ in 0..20 {
            let w: Vec<u64> = (0..12).map(|_| rng.range_u64(1, 1000)).collect();
            let t = rng.range_u64(1, 6000);
            let inst = SubsetSumInstance::new(w, t).unwrap();
            let out = solve_with_space_budget(&mut rng, &inst, 0.0, &cfg).unwrap();
            assert_eq!(out.high_indices, 12);
            assert_eq!(out.solution.is_some(), brute_force_solve(&inst).is_some());
            let a = solve_with_space_budget(&mut Rng::new(9), &inst, 100.0, &cfg).unwrap();
            let b = solve(&mut Rng::new(9), &inst, &cfg).unwrap();
            assert_eq!(a.high_indices, 0);
            assert_eq!(a.solution, b);
        }
    }
}
