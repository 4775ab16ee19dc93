//! Reduction of the four representation lists to Exact Node Weighted P4.
//!
//! Layer weights are `M + w(A)`, `2M + w(B)`, `4M + w(C)` and `-7M - t + w(D)` with
//! `M = 100 w([n])`. Among coefficient multisets from `{1, 2, 4, -7}` only one of
//! each sums to zero, so a zero-weight 4-path uses one vertex per layer.

use std::collections::HashMap;

use crate::error::SolveError;
use crate::instance::{Solution, SubsetSumInstance};
use crate::repsolver::{solve_detailed, Detector, LevelTwoLists, SolveReport, SolverConfig};
use crate::rng::Rng;
use crate::set::IndexSet;

/// Where a vertex of a built graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Origin {
    /// 0..4 for `ℒ₁, ℒ₂, ℛ₂, ℛ₁`.
    pub layer: u8,
    pub member: usize,
    pub set: IndexSet,
}

pub const LAYER_COEFFICIENTS: [i128; 4] = [1, 2, 4, -7];

/// Undirected node-weighted graph with bitset adjacency rows.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeightedGraph {
    weights: Vec<i128>,
    origins: Vec<Option<Origin>>,
    rows: Vec<Vec<u64>>,
    edges: usize,
    /// The big constant of a built graph.
    pub big: i128,
}

pub const MAX_VERTICES: usize = 4000;

impl NodeWeightedGraph {
    pub fn new(weights: Vec<i128>) -> Self {
        let n = weights.len();
        let words = n.div_ceil(64);
        NodeWeightedGraph { origins: vec![None; n], rows: vec![vec![0; words]; n], weights, edges: 0, big: 0 }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn weight(&self, v: usize) -> i128 {
        self.weights[v]
    }

    pub fn origin(&self, v: usize) -> Option<Origin> {
        self.origins[v]
    }

    /// Self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v || self.has_edge(u, v) {
            return;
        }
        self.rows[u][v / 64] |= 1 << (v % 64);
        self.rows[v][u / 64] |= 1 << (u % 64);
        self.edges += 1;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let i = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + i)
            })
        })
    }

    /// `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }
}

/// Layered graph of the four lists; edges join consecutive layers on disjoint sets.
pub fn build_p4_graph(lists: &LevelTwoLists) -> Result<NodeWeightedGraph, SolveError> {
    let layers = [&lists.l1, &lists.l2, &lists.r2, &lists.r1];
    let count: usize = layers.iter().map(|l| l.len()).sum();
    if count > MAX_VERTICES {
        return Err(SolveError::TooLarge { what: "|V|", value: count, limit: MAX_VERTICES });
    }
    let big = 100 * lists.total as i128;
    let t = lists.target as i128;
    let mut weights = Vec::with_capacity(count);
    let mut origins = Vec::with_capacity(count);
    let mut starts = [0usize; 5];
    for (k, layer) in layers.iter().enumerate() {
        starts[k] = weights.len();
        for (i, &(set, w)) in layer.iter().enumerate() {
            let shift = if k == 3 { -t } else { 0 };
            weights.push(LAYER_COEFFICIENTS[k] * big + w as i128 + shift);
            origins.push(Some(Origin { layer: k as u8, member: i, set }));
        }
    }
    starts[4] = weights.len();
    let mut g = NodeWeightedGraph::new(weights);
    g.origins = origins;
    g.big = big;
    for k in 0..3 {
        for u in starts[k]..starts[k + 1] {
            let su = g.origins[u].expect("built vertex").set;
            for v in starts[k + 1]..starts[k + 2] {
                if su.is_disjoint(g.origins[v].expect("built vertex").set) {
                    g.add_edge(u, v);
                }
            }
        }
    }
    Ok(g)
}

/// Exact search over middle edges `(v2, v3)`: the weight needed at `v4` is looked up
/// among the neighbours of `v3`.
pub fn naive_p4_solve(g: &NodeWeightedGraph) -> Option<[usize; 4]> {
    let n = g.len();
    let by_weight: Vec<HashMap<i128, Vec<usize>>> = (0..n)
        .map(|v| {
            let mut m: HashMap<i128, Vec<usize>> = HashMap::new();
            for u in g.neighbors(v) {
                m.entry(g.weight(u)).or_default().push(u);
            }
            m
        })
        .collect();
    for v2 in 0..n {
        for v3 in g.neighbors(v2) {
            let partial = g.weight(v2) + g.weight(v3);
            for v1 in g.neighbors(v2) {
                if v1 == v3 {
                    continue;
                }
                let need = -(partial + g.weight(v1));
                if let Some(cands) = by_weight[v3].get(&need) {
                    if let Some(&v4) = cands.iter().find(|&&v4| v4 != v2 && v4 != v1) {
                        return Some([v1, v2, v3, v4]);
                    }
                }
            }
        }
    }
    None
}

/// Outcome of running the P4 detector on one set of lists.
#[derive(Debug, Clone, PartialEq)]
pub struct P4Detection {
    /// `(A₁, A₂, A₃, A₄)` from `ℒ₁, ℒ₂, ℛ₂, ℛ₁`.
    pub witness: Option<[IndexSet; 4]>,
    pub vertices: usize,
    pub edges: usize,
    pub peak_payload: usize,
}

/// Maps a zero-weight path back to a list quadruple, checking the decoding.
pub fn decode_path(g: &NodeWeightedGraph, path: [usize; 4], target: u128) -> Result<[IndexSet; 4], SolveError> {
    let mut quad = [IndexSet::empty(); 4];
    let mut seen = [false; 4];
    for &v in &path {
        let o = g.origin(v).ok_or_else(|| SolveError::Infeasible("vertex without origin".into()))?;
        let k = o.layer as usize;
        if seen[k] {
            return Err(SolveError::Infeasible(format!("path visits layer {k} twice")));
        }
        seen[k] = true;
        quad[k] = o.set;
    }
    for u in 0..4 {
        for v in u + 1..4 {
            if !quad[u].is_disjoint(quad[v]) {
                return Err(SolveError::Infeasible("decoded sets overlap".into()));
            }
        }
    }
    // vertex weight minus its layer constant is w(set), and -t on the last layer
    let base: i128 = path.iter().map(|&v| g.weight(v) - LAYER_COEFFICIENTS[g.origin(v).expect("checked").layer as usize] * g.big).sum();
    if base != 0 {
        return Err(SolveError::Infeasible(format!("decoded weights miss the target {target} by {base}")));
    }
    Ok(quad)
}

pub fn p4_detect(lists: &LevelTwoLists) -> Result<P4Detection, SolveError> {
    let g = build_p4_graph(lists)?;
    let witness = match naive_p4_solve(&g) {
        Some(path) => {
            let quad = decode_path(&g, path, lists.target)?;
            Some(quad)
        }
        None => None,
    };
    Ok(P4Detection { witness, vertices: g.len(), edges: g.edge_count(), peak_payload: g.len() + g.edge_count() })
}

/// The full driver with the P4 detector in place of weighted OV.
pub fn solve_via_p4(rng: &mut Rng, instance: &SubsetSumInstance, config: &SolverConfig) -> Result<Option<Solution>, SolveError> {
    Ok(solve_via_p4_detailed(rng, instance, config)?.solution)
}

pub fn solve_via_p4_detailed(rng: &mut Rng, instance: &SubsetSumInstance, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    let cfg = SolverConfig { detector: Detector::P4, ..config.clone() };
    solve_detailed(rng, instance, &cfg)
}

/// Vertex lines `id layer weight` (layer `-` when unknown), then edge lines `u v`.
pub fn dump_edge_list(g: &NodeWeightedGraph) -> String {
    let mut out = String::new();
    for v in 0..g.len() {
        let layer = g.origin(v).map_or("-".to_string(), |o| (o.layer + 1).to_string());
        out.push_str(&format!("{v} {layer} {}\n", g.weight(v)));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    /// Layer multisets of size 4 other than one-per-layer.
    pub multisets: usize,
    /// Smallest `|total weight|` over all vertex quadruples that are not one-per-layer.
    pub min_abs_total: Option<i128>,
    /// `M - w([n]) - t`.
    pub bound: i128,
    pub holds: bool,
}

/// Exact minimum of `|Σ weight|` over 4 distinct vertices whose layers are not one
/// of each. Within a multiset the coefficient part is fixed, so the minimum sits at
/// an extreme of the base weights: the smallest ones when the coefficients sum
/// above zero, the largest ones otherwise.
pub fn group_separation(g: &NodeWeightedGraph, total: u128, target: u128) -> SeparationReport {
    let mut by_layer: [Vec<i128>; 4] = Default::default();
    for v in 0..g.len() {
        if let Some(o) = g.origin(v) {
            let k = o.layer as usize;
            by_layer[k].push(g.weight(v));
        }
    }
    for l in &mut by_layer {
        l.sort_unstable();
    }
    let bound = g.big - total as i128 - target as i128;
    let mut multisets = 0;
    let mut best: Option<i128> = None;
    for a in 0..4 {
        for b in a..4 {
            for c in b..4 {
                for d in c..4 {
                    let ms = [a, b, c, d];
                    if ms == [0, 1, 2, 3] {
                        continue;
                    }
                    multisets += 1;
                    let mut count = [0usize; 4];
                    for &k in &ms {
                        count[k] += 1;
                    }
                    if (0..4).any(|k| by_layer[k].len() < count[k]) {
                        continue;
                    }
                    let coeff: i128 = ms.iter().map(|&k| LAYER_COEFFICIENTS[k]).sum();
                    assert_ne!(coeff, 0, "only one coefficient multiset sums to zero");
                    let mut pick_low = 0i128;
                    let mut pick_high = 0i128;
                    for k in 0..4 {
                        let l = &by_layer[k];
                        pick_low += l[..count[k]].iter().sum::<i128>();
                        pick_high += l[l.len() - count[k]..].iter().sum::<i128>();
                    }
                    let v = if coeff > 0 { pick_low.abs() } else { pick_high.abs() };
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
    }
    SeparationReport { multisets, min_abs_total: best, bound, holds: best.is_none_or(|b| b >= bound) && bound > 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repsolver::{Partition, ResidueDraw, SigmaSizes};

    fn lists(sets: [IndexSet; 4], weights: [u128; 4], target: u128, total: u128) -> LevelTwoLists {
        let e = IndexSet::empty();
        LevelTwoLists {
            l1: vec![(sets[0], weights[0])],
            l2: vec![(sets[1], weights[1])],
            r2: vec![(sets[2], weights[2])],
            r1: vec![(sets[3], weights[3])],
            parts: Partition { l: e, m_l: e, m: e, m_r: e, r: e },
            residues: ResidueDraw { p_l: 1, p_r: 1, p_prime: 1, x: 0, x_l: 0, x_r: 0, prime_fallback: false },
            lambda_count: 0,
            sizes: SigmaSizes { s: 0, s_l: 0, s_r: 0 },
            beta: 0.0,
            target,
            total,
            peak_payload: 0,
        }
    }

    fn one(i: usize) -> IndexSet {
        IndexSet::from_indices([i])
    }

    #[test]
    fn singleton_lists() {
        let l = lists([one(0), one(1), one(2), one(3)], [1, 2, 4, 8], 15, 15);
        let g = build_p4_graph(&l).unwrap();
        assert_eq!(g.big, 1500);
        assert_eq!(g.edge_count(), 3);
        let path = naive_p4_solve(&g).unwrap();
        assert_eq!(path.iter().map(|&v| g.weight(v)).sum::<i128>(), 0);
        assert_eq!(p4_detect(&l).unwrap().witness, Some([one(0), one(1), one(2), one(3)]));

        let clash = lists([one(0), one(0), one(2), one(3)], [1, 1, 4, 8], 14, 15);
        let g = build_p4_graph(&clash).unwrap();
        assert!(!g.has_edge(0, 1));
        assert_eq!(naive_p4_solve(&g), None);
    }

    #[test]
    fn small_graphs() {
        let mut g = NodeWeightedGraph::new(vec![1, -1, 2, -2]);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        assert!(naive_p4_solve(&g).is_some());
        let mut tri = NodeWeightedGraph::new(vec![0, 0, 0]);
        tri.add_edge(0, 1);
        tri.add_edge(1, 2);
        tri.add_edge(2, 0);
        assert_eq!(naive_p4_solve(&tri), None);
        tri.add_edge(1, 1);
        assert_eq!(tri.edge_count(), 3);
    }

    fn brute(g: &NodeWeightedGraph) -> bool {
        let n = g.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                        if distinct
                            && g.has_edge(a, b)
                            && g.has_edge(b, c)
                            && g.has_edge(c, d)
                            && g.weight(a) + g.weight(b) + g.weight(c) + g.weight(d) == 0
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn random_graphs_match_brute_force() {
        let mut rng = Rng::new(8);
        let mut yes = 0;
        for _ in 0..100 {
            let w: Vec<i128> = (0..12).map(|_| rng.range_u64(0, 12) as i128 - 6).collect();
            let mut g = NodeWeightedGraph::new(w);
            for u in 0..12 {
                for v in u + 1..12 {
                    if rng.below(4) == 0 {
                        g.add_edge(u, v);
                    }
                }
            }
            let got = naive_p4_solve(&g);
            assert_eq!(got.is_some(), brute(&g));
            if let Some([a, b, c, d]) = got {
                yes += 1;
                assert!(g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(c, d));
            }
        }
        assert!(yes > 0);
    }

    #[test]
    fn dump_format() {
        let mut g = NodeWeightedGraph::new(vec![3, -3]);
        g.add_edge(0, 1);
        assert_eq!(dump_edge_list(&g), "0 - 3\n1 - -3\n0 1\n");
    }

    #[test]
    fn separation_on_singletons() {
        let l = lists([one(0), one(1), one(2), one(3)], [1, 2, 4, 8], 15, 15);
        let g = build_p4_graph(&l).unwrap();
        let r = group_separation(&g, 15, 15);
        assert_eq!(r.multisets, 34);
        assert!(r.holds);
    }
}
