use clap::ValueEnum;
use ssum_core::{random_subset, IndexSet, Rng, SubsetSumInstance};

use crate::CliError;

const VALUE_LIMIT: u128 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InstanceKind {
    /// iid weights in `[1, 2^bits]`, target uniform in `[1, w([n])]`.
    Uniform,
    /// Uniform weights, target the weight of a random `⌊n/2⌋`-subset.
    Planted,
    /// Every weight is `0` or one shared value `a`, so a set's sums depend only
    /// on how many copies of `a` it holds.
    LowMixing,
    /// `w_i = 2^i`; every set is a perfect mixer.
    Powers,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 4] = [InstanceKind::Uniform, InstanceKind::Planted, InstanceKind::LowMixing, InstanceKind::Powers];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Uniform => "uniform",
            InstanceKind::Planted => "planted",
            InstanceKind::LowMixing => "low-mixing",
            InstanceKind::Powers => "powers",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub instance: SubsetSumInstance,
    /// The hidden solution of a planted instance.
    pub planted: Option<IndexSet>,
}

pub fn generate_instance(rng: &mut Rng, kind: InstanceKind, n: usize, bit_width: u32) -> Result<SubsetSumInstance, CliError> {
    Ok(generate(rng, kind, n, bit_width)?.instance)
}

pub fn generate(rng: &mut Rng, kind: InstanceKind, n: usize, bit_width: u32) -> Result<Generated, CliError> {
    if !(1..=60).contains(&n) {
        return Err(CliError::Usage(format!("n = {n} outside [1, 60]")));
    }
    if !(1..=62).contains(&bit_width) {
        return Err(CliError::Usage(format!("bit width {bit_width} outside [1, 62]")));
    }
    let top = 1u64 << bit_width;
    let uniform = |rng: &mut Rng| (0..n).map(|_| rng.range_u64(1, top)).collect::<Vec<u64>>();
    let capped = |x: u128| x.min(VALUE_LIMIT - 1) as u64;
    let mut planted = None;
    let (weights, target) = match kind {
        InstanceKind::Uniform => {
            let w = uniform(rng);
            let total: u128 = w.iter().map(|&x| x as u128).sum();
            let t = rng.range_u64(1, capped(total));
            (w, t)
        }
        InstanceKind::Planted => {
            let w = uniform(rng);
            let s = random_subset(rng, IndexSet::full(n), n / 2)?;
            let t: u128 = s.iter().map(|i| w[i] as u128).sum();
            if t >= VALUE_LIMIT {
                return Err(CliError::Usage(format!("planted target overflows at n = {n}, bits = {bit_width}")));
            }
            planted = Some(s);
            (w, t as u64)
        }
        InstanceKind::LowMixing => {
            let a = rng.range_u64(1, top);
            let w: Vec<u64> = (0..n).map(|_| if rng.below(2) == 0 { 0 } else { a }).collect();
            let copies = w.iter().filter(|&&x| x != 0).count() as u64;
            // Half the targets are multiples of a (YES when j ≤ copies), half sit one above.
            let j = rng.range_u64(1, copies.max(1)) as u128;
            let off = rng.below(2) as u128;
            (w, capped(a as u128 * j + off))
        }
        InstanceKind::Powers => {
            let w: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
            let t = rng.range_u64(1, (1u64 << n) - 1);
            (w, t)
        }
    };
    Ok(Generated { instance: SubsetSumInstance::new(weights, target)?, planted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ssum_core::brute_force_solve;
    use ssum_core::mixer::compute_mixer;

    #[test]
    fn powers_are_perfect_mixers() {
        let inst = generate_instance(&mut Rng::new(1), InstanceKind::Powers, 8, 20).unwrap();
        let mut sums: Vec<u128> = inst.universe().subsets().map(|s| inst.weight_of(s)).collect();
        sums.sort_unstable();
        sums.dedup();
        assert_eq!(sums.len(), 256);
        let mut rng = Rng::new(2);
        for _ in 0..20 {
            let size = 1 + rng.below(8);
            let m = random_subset(&mut rng, inst.universe(), size).unwrap();
            assert_eq!(compute_mixer(&inst, m).unwrap().epsilon, 0.0);
        }
    }

    #[test]
    fn planted_is_yes() {
        for seed in 0..30 {
            let g = generate(&mut Rng::new(seed), InstanceKind::Planted, 14, 20).unwrap();
            let s = g.planted.unwrap();
            assert_eq!(s.len(), 7);
            assert_eq!(g.instance.weight_of(s), g.instance.target());
            assert!(brute_force_solve(&g.instance).is_some());
        }
    }

    #[test]
    fn low_mixing_sets_have_few_sums() {
        let bound = 1.0 - 9f64.log2() / 8.0;
        for seed in 0..30 {
            let mut rng = Rng::new(seed);
            let inst = generate_instance(&mut rng, InstanceKind::LowMixing, 16, 20).unwrap();
            let m = random_subset(&mut rng, inst.universe(), 8).unwrap();
            let rep = compute_mixer(&inst, m).unwrap();
            assert!(rep.distinct_sums <= 9, "{} sums", rep.distinct_sums);
            assert!(rep.epsilon >= bound - 1e-12);
        }
    }

    #[test]
    fn ranges_are_enforced() {
        let mut rng = Rng::new(0);
        assert!(generate_instance(&mut rng, InstanceKind::Uniform, 61, 20).is_err());
        assert!(generate_instance(&mut rng, InstanceKind::Uniform, 0, 20).is_err());
        assert!(generate_instance(&mut rng, InstanceKind::Uniform, 10, 63).is_err());
        assert!(generate_instance(&mut rng, InstanceKind::Planted, 60, 62).is_err());
        assert!(generate_instance(&mut rng, InstanceKind::Uniform, 60, 62).is_ok());
    }

    #[test]
    fn same_seed_same_instance() {
        for kind in InstanceKind::ALL {
            let a = generate_instance(&mut Rng::new(9), kind, 20, 30).unwrap();
            let b = generate_instance(&mut Rng::new(9), kind, 20, 30).unwrap();
            assert_eq!(a, b);
        }
    }
}
