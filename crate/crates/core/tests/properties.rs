//! Randomized laws of the public API, checked against direct computations.

use proptest::prelude::*;
use ssum_core::mixer::{compute_mixer, small_lambda_solve, win_win_solve};
use ssum_core::numerics::{binomial, entropy, entropy_inverse, is_prime, log2_binom, random_prime};
use ssum_core::ov::{build_cover, colex_rank, colex_unrank, ov_by_sparsity, OvOptions};
use ssum_core::repsolver::{rep_reduce_single_level, sigma_band, solve, SolverConfig};
use ssum_core::sumset::{four_sum, mitm_solve, schroeppel_shamir_solve, Direction, SumsetEnumerator};
use ssum_core::{brute_force_solve, random_subset, IndexSet, Rng, SubsetSumInstance};

fn instance(max_n: usize, max_w: u64) -> impl Strategy<Value = SubsetSumInstance> {
    (1..=max_n)
        .prop_flat_map(move |n| (prop::collection::vec(0..=max_w, n), 0..=max_w.saturating_mul(n as u64).min((1 << 63) - 1)))
        .prop_map(|(w, t)| SubsetSumInstance::new(w, t).unwrap())
}

/// Targets that are subset sums half of the time.
fn mixed_instance(max_n: usize, max_w: u64) -> impl Strategy<Value = SubsetSumInstance> {
    (instance(max_n, max_w), any::<u64>(), any::<bool>()).prop_map(|(inst, mask, planted)| {
        if planted {
            let s = IndexSet::from_mask(mask & inst.universe().mask());
            inst.retarget(inst.weight_of(s))
        } else {
            inst
        }
    })
}

fn set_of(n: usize) -> impl Strategy<Value = IndexSet> {
    any::<u64>().prop_map(move |m| IndexSet::from_mask(m & IndexSet::full(n).mask()))
}

proptest! {
    #[test]
    fn set_ops_are_bit_ops(a in set_of(60), b in set_of(60)) {
        let (x, y) = (a.mask(), b.mask());
        prop_assert_eq!((a | b).mask(), x | y);
        prop_assert_eq!((a & b).mask(), x & y);
        prop_assert_eq!((a - b).mask(), x & !y);
        prop_assert_eq!(a.len(), x.count_ones() as usize);
        prop_assert_eq!(a.is_disjoint(b), x & y == 0);
        prop_assert_eq!(a.is_subset(b), x & !y == 0);
        let idx: Vec<usize> = a.iter().collect();
        prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(IndexSet::from_indices(idx), a);
    }

    #[test]
    fn weight_is_additive(inst in instance(40, u64::MAX >> 2), m in any::<u64>()) {
        let a = IndexSet::from_mask(m & inst.universe().mask());
        let b = inst.universe() - a;
        prop_assert_eq!(inst.weight_of(a) + inst.weight_of(b), inst.total());
        prop_assert_eq!(inst.weight_of(IndexSet::empty()), 0);
    }

    #[test]
    fn text_round_trip(inst in instance(60, (1 << 62) - 1)) {
        prop_assert_eq!(SubsetSumInstance::parse(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn enumerator_emits_sorted_sumset(
        a in prop::collection::vec(0u128..50, 1..40),
        b in prop::collection::vec(0u128..50, 1..40),
    ) {
        let mut brute: Vec<u128> = a.iter().flat_map(|&x| b.iter().map(move |&y| x + y)).collect();
        for dir in [Direction::Increasing, Direction::Decreasing] {
            let mut e = SumsetEnumerator::new(&a, &b, dir).unwrap();
            let mut got = Vec::new();
            for g in e.by_ref() {
                for &(i, j) in &g.pairs {
                    prop_assert_eq!(a[i] + b[j], g.value);
                    got.push(g.value);
                }
            }
            brute.sort_unstable();
            if dir == Direction::Decreasing {
                brute.reverse();
            }
            prop_assert_eq!(&got, &brute);
            prop_assert!(e.peak_heap() <= a.len().min(b.len()) + 1);
        }
    }

    #[test]
    fn four_sum_matches_brute_force(
        lists in prop::collection::vec(prop::collection::vec(0u128..30, 1..8), 4),
        t in 0u128..120,
    ) {
        let out = four_sum(&lists[0], &lists[1], &lists[2], &lists[3], t).unwrap();
        let exists = lists[0].iter().any(|&a| {
            lists[1].iter().any(|&b| lists[2].iter().any(|&c| lists[3].iter().any(|&d| a + b + c + d == t)))
        });
        prop_assert_eq!(out.witness.is_some(), exists);
        if let Some([i, j, k, l]) = out.witness {
            prop_assert_eq!(lists[0][i] + lists[1][j] + lists[2][k] + lists[3][l], t);
        }
    }

    #[test]
    fn baselines_agree_with_brute_force(inst in mixed_instance(14, 40)) {
        let oracle = brute_force_solve(&inst).is_some();
        let mitm = mitm_solve(&inst).unwrap().solution;
        let ss = schroeppel_shamir_solve(&inst).unwrap().solution;
        prop_assert_eq!(mitm.is_some(), oracle);
        prop_assert_eq!(ss.is_some(), oracle);
        for s in mitm.iter().chain(ss.iter()) {
            prop_assert!(s.solves(&inst));
        }
    }

    #[test]
    fn mixer_epsilon_matches_its_definition(inst in instance(14, 20), m in any::<u64>()) {
        let set = IndexSet::from_mask(m & inst.universe().mask());
        prop_assume!(!set.is_empty());
        let rep = compute_mixer(&inst, set).unwrap();
        let mut sums: Vec<u128> = set.subsets().map(|s| inst.weight_of(s)).collect();
        sums.sort_unstable();
        sums.dedup();
        prop_assert_eq!(rep.distinct_sums, sums.len());
        let eps = 1.0 - (sums.len() as f64).log2() / set.len() as f64;
        prop_assert!((rep.epsilon - eps).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&rep.epsilon));
    }

    #[test]
    fn colex_round_trip(d in 1usize..=24, m in any::<u64>()) {
        let mask = m & ((1u64 << d) - 1);
        let k = mask.count_ones() as usize;
        let r = colex_rank(mask);
        prop_assert!((r as u128) < binomial(d as u64, k as u64).unwrap());
        prop_assert_eq!(colex_unrank(r as u64, k, d), mask);
    }

    #[test]
    fn random_primes_land_in_range(r in 2u64..1 << 40, seed in any::<u64>()) {
        let s = random_prime(&mut Rng::new(seed), r).unwrap();
        prop_assert!(is_prime(s.p));
        prop_assert!(r <= s.p && s.p <= 2 * r);
    }

    #[test]
    fn entropy_is_symmetric_and_invertible(x in 0.0f64..=1.0) {
        let hx = entropy(x).unwrap();
        prop_assert!((0.0..=1.0).contains(&hx));
        prop_assert!((hx - entropy(1.0 - x).unwrap()).abs() < 1e-12);
        let back = entropy_inverse(hx).unwrap();
        prop_assert!((back - x.min(1.0 - x)).abs() < 1e-6);
    }

    #[test]
    fn log_binomial_matches_exact(n in 0u64..=120, k in 0u64..=120) {
        prop_assume!(k <= n);
        let exact = binomial(n, k).unwrap() as f64;
        prop_assert!((log2_binom(n, k) - exact.log2()).abs() < 1e-6);
    }

    #[test]
    fn random_subsets_have_the_requested_size(u in set_of(60), k in 0usize..60, seed in any::<u64>()) {
        prop_assume!(k <= u.len());
        let a = random_subset(&mut Rng::new(seed), u, k).unwrap();
        let b = random_subset(&mut Rng::new(seed), u, k).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.len(), k);
        prop_assert!(a.is_subset(u));
    }

    #[test]
    fn sigma_band_is_within_range(n in 4usize..40, m in 0usize..10, k in 0usize..10, eps in 0.0f64..1.0) {
        prop_assume!(k <= m);
        let band = sigma_band(n, m, k, eps);
        prop_assert!(!band.is_empty());
        prop_assert!(band.iter().all(|&s| s <= k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sparse_ov_never_reports_intersecting_pairs(
        a in prop::collection::vec((0u32..8, 1u32..8), 1..6),
        b in prop::collection::vec((0u32..8, 1u32..8), 1..6),
        seed in any::<u64>(),
    ) {
        // 2-subsets {i, i + s mod 8} of [8]
        let pairs = |v: &[(u32, u32)]| -> Vec<u64> { v.iter().map(|&(i, s)| (1u64 << i) | (1u64 << ((i + s) % 8))).collect() };
        let (a, b) = (pairs(&a), pairs(&b));
        let mut rng = Rng::new(seed);
        let cover = build_cover(&mut rng, 8, 2, 2, None).unwrap();
        if let Some((i, j)) = ov_by_sparsity(&mut rng, &cover, &a, &b, &OvOptions::default()).unwrap() {
            prop_assert_eq!(a[i] & b[j], 0);
        }
    }

    #[test]
    fn single_level_pairs_are_solutions(inst in mixed_instance(12, 1000), seed in any::<u64>()) {
        prop_assume!(inst.n() >= 4);
        let mut rng = Rng::new(seed);
        let m = random_subset(&mut rng, inst.universe(), 4).unwrap();
        let wov = rep_reduce_single_level(&mut rng, &inst, m).unwrap();
        for side in [&wov.left, &wov.right] {
            prop_assert!(side.iter().all(|x| x.support == x.witness & m && x.support.len() == 1));
            prop_assert!(side.iter().all(|x| inst.weight_of(x.witness) == x.weight));
        }
        if let Some((i, j)) = wov.naive_solve() {
            let (l, r) = (wov.left[i].witness, wov.right[j].witness);
            prop_assert!(l.is_disjoint(r));
            prop_assert_eq!(inst.weight_of(l | r), inst.target());
        }
    }

    #[test]
    fn win_win_is_exact(inst in mixed_instance(16, 8)) {
        prop_assume!(inst.n() >= 8);
        let m = (0.2 * inst.n() as f64).round() as usize;
        let out = win_win_solve(&inst, IndexSet::full(m), 0.15, 0.2).unwrap();
        prop_assert_eq!(out.solution.is_some(), brute_force_solve(&inst).is_some());
    }

    #[test]
    fn small_solution_search_is_one_sided(inst in mixed_instance(12, 50), k in 0usize..6, seed in any::<u64>()) {
        prop_assume!(k <= inst.n());
        let out = small_lambda_solve(&mut Rng::new(seed), &inst, k, Some(20)).unwrap();
        if let Some(s) = out.solution {
            prop_assert!(s.solves(&inst));
            prop_assert_eq!(s.subset.len(), k);
        }
    }

    #[test]
    fn driver_is_sound_and_reproducible(inst in mixed_instance(12, 200), seed in any::<u64>()) {
        let cfg = SolverConfig { repetitions: 5, ..SolverConfig::desk() };
        let got = solve(&mut Rng::new(seed), &inst, &cfg).unwrap();
        if let Some(s) = &got { prop_assert!(s.solves(&inst)) }
        if brute_force_solve(&inst).is_none() {
            prop_assert!(got.is_none());
        }
        prop_assert_eq!(solve(&mut Rng::new(seed), &inst, &cfg).unwrap(), got);
    }

    #[test]
    fn complement_maps_solutions(inst in mixed_instance(14, 100)) {
        if let (Some(c), Some(s)) = (inst.complemented(), brute_force_solve(&inst)) {
            prop_assert_eq!(c.weight_of(inst.universe() - s.subset), c.target());
        }
    }
}
