//! Seeded random inputs shared by the verification suites and experiments.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contraction::{Fold, FoldChain};
use crate::interval::IntervalUnion;
use crate::nd::Ball;
use crate::rearrange::{GridFunction1D, StepFunction};
use crate::scalar::q;
use crate::setmap::{MapKind, Orientation, SetMap1D};
use crate::Rational;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of cell `index` derived from a run seed (SplitMix64 step).
pub fn cell_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform rational on the grid `(1/den) Z` within `[lo, hi]`.
pub fn rational_in(rng: &mut Rng8, lo: i64, hi: i64, den: i64) -> Rational {
    q(rng.gen_range(lo * den..=hi * den), den)
}

/// Union of up to `max_components` random intervals with endpoints on
/// `(1/den) Z ∩ [lo, hi]`; never empty.
pub fn random_union(
    rng: &mut Rng8,
    lo: i64,
    hi: i64,
    max_components: usize,
    den: i64,
) -> IntervalUnion<Rational> {
    loop {
        let k = rng.gen_range(1..=max_components);
        let pairs: Vec<_> = (0..k)
            .map(|_| {
                let a = rational_in(rng, lo, hi, den);
                let b = rational_in(rng, lo, hi, den);
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        let u = IntervalUnion::from_pairs(pairs);
        if !u.is_empty() {
            return u;
        }
    }
}

/// `(A, B)` with `A ⊂ B`.
pub fn random_nested_pair(rng: &mut Rng8) -> (IntervalUnion<Rational>, IntervalUnion<Rational>) {
    let a = random_union(rng, -4, 4, 4, 8);
    let extra = random_union(rng, -5, 5, 3, 8);
    let b = a.union(&extra);
    (a, b)
}

pub fn random_orientation(rng: &mut Rng8) -> Orientation {
    if rng.gen_bool(0.5) {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

/// Random map of the given kind with center in `[-3, 3]`; Brock factors
/// lie in `{1/8, …, 7/8}`.
pub fn random_setmap(rng: &mut Rng8, kind: MapKind) -> SetMap1D<Rational> {
    let c = rational_in(rng, -3, 3, 4);
    match kind {
        MapKind::Reflection => SetMap1D::reflection(c),
        MapKind::Polarization => SetMap1D::polarization(c, random_orientation(rng)),
        MapKind::Steiner => SetMap1D::steiner(c),
        MapKind::Solynin => SetMap1D::solynin(c, random_orientation(rng)),
        MapKind::Brock => SetMap1D::brock(c, q(rng.gen_range(1..8), 8)).expect("b in (0, 1)"),
    }
}

pub const ALL_KINDS: [MapKind; 5] = [
    MapKind::Reflection,
    MapKind::Polarization,
    MapKind::Steiner,
    MapKind::Solynin,
    MapKind::Brock,
];

/// Kinds whose action is defined on arbitrary interval unions.
pub fn kind_accepts_unions(kind: MapKind) -> bool {
    kind != MapKind::Brock
}

/// Random step function with up to `max_levels` levels, positive integer
/// levels and nested interval-union superlevel sets. With `convex`, every
/// superlevel set is a single interval.
pub fn random_step_function(
    rng: &mut Rng8,
    max_levels: usize,
    convex: bool,
) -> StepFunction<Rational, IntervalUnion<Rational>> {
    let m = rng.gen_range(1..=max_levels);
    let mut levels: Vec<i64> = (1..=8).collect();
    levels.shuffle(rng);
    let mut levels: Vec<Rational> = levels[..m].iter().map(|&k| q(k, 1)).collect();
    levels.sort_by(|a, b| b.cmp(a));
    let mut sets = Vec::with_capacity(m);
    let mut current = if convex {
        random_union(rng, -3, 3, 1, 8)
    } else {
        random_union(rng, -3, 3, 3, 8)
    };
    for _ in 0..m {
        sets.push(current.clone());
        let grow = if convex {
            let (lo, hi) = (
                current.inf().cloned().expect("nonempty"),
                current.sup().cloned().expect("nonempty"),
            );
            IntervalUnion::interval(
                lo - rational_in(rng, 0, 1, 8),
                hi + rational_in(rng, 0, 1, 8),
            )
        } else {
            random_union(rng, -4, 4, 2, 8)
        };
        current = current.union(&grow);
    }
    StepFunction::new(levels, sets).expect("nested by construction")
}

/// Random nonnegative integer-valued grid function on a half-integer grid.
pub fn random_grid_function(rng: &mut Rng8, max_len: usize) -> GridFunction1D<Rational> {
    let n = rng.gen_range(1..=max_len);
    let origin = q(rng.gen_range(-12..=0), 2);
    let values = (0..n).map(|_| q(rng.gen_range(0..=6), 1)).collect();
    GridFunction1D::new(origin, q(1, 2), values).expect("valid grid")
}

/// Polarization center on the half-grid of a grid with step `h = 1/2`.
pub fn random_grid_center(rng: &mut Rng8) -> Rational {
    q(rng.gen_range(-16..=16), 4)
}

/// Fold with a small integer normal and a rational level.
pub fn random_fold(rng: &mut Rng8, dim: usize) -> Fold<Rational> {
    loop {
        let normal: Vec<Rational> = (0..dim).map(|_| q(rng.gen_range(-2..=2), 1)).collect();
        if normal.iter().all(|x| x.is_zero()) {
            continue;
        }
        let level = rational_in(rng, -2, 2, 4);
        return Fold::new(normal, level, random_orientation(rng)).expect("nonzero normal");
    }
}

pub fn random_fold_chain(rng: &mut Rng8, dim: usize, max_len: usize) -> FoldChain<Rational> {
    let len = rng.gen_range(1..=max_len);
    FoldChain::new((0..len).map(|_| random_fold(rng, dim)).collect())
}

/// Chain of folds with normals `±u` (a parallel-fold composition).
pub fn random_parallel_chain(
    rng: &mut Rng8,
    u: &[Rational],
    max_len: usize,
) -> FoldChain<Rational> {
    let len = rng.gen_range(1..=max_len);
    let folds = (0..len)
        .map(|_| {
            let normal = if rng.gen_bool(0.5) {
                u.to_vec()
            } else {
                u.iter().map(|x| -x.clone()).collect()
            };
            Fold::new(normal, rational_in(rng, -3, 3, 4), random_orientation(rng))
                .expect("nonzero normal")
        })
        .collect();
    FoldChain::new(folds)
}

pub fn random_ball(rng: &mut Rng8, dim: usize) -> Ball<Rational> {
    let center = (0..dim).map(|_| rational_in(rng, -3, 3, 8)).collect();
    Ball::new(center, q(rng.gen_range(1..=8), 4)).expect("positive radius")
}

/// Uniform point of the unit ball in `R^n` (rejection sampling).
pub fn point_in_unit_ball(rng: &mut Rng8, n: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return x;
        }
    }
}

/// Unit vector uniform on `S^{n-1}`.
pub fn unit_vector(rng: &mut Rng8, n: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 > 1e-6 && r2 <= 1.0 {
            let r = r2.sqrt();
            return x.iter().map(|v| v / r).collect();
        }
    }
}

/// `a₁ e^{-(x-μ₁)²/2σ₁²} + a₂ e^{-(x-μ₂)²/2σ₂²}` with bumps on both
/// sides of the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPair {
    pub amplitude: [f64; 2],
    pub mean: [f64; 2],
    pub sigma: [f64; 2],
}

impl GaussianPair {
    pub fn random(rng: &mut Rng8) -> Self {
        GaussianPair {
            amplitude: [rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)],
            mean: [rng.gen_range(-2.5..-0.5), rng.gen_range(0.5..2.5)],
            sigma: [rng.gen_range(0.4..1.0), rng.gen_range(0.4..1.0)],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (0..2)
            .map(|k| {
                self.amplitude[k]
                    * (-(x - self.mean[k]).powi(2) / (2.0 * self.sigma[k].powi(2))).exp()
            })
            .sum()
    }

    /// Samples on `[-6, 6]` with step `h` (which should divide 6, so that
    /// the origin is a grid point).
    pub fn sample(&self, h: f64) -> GridFunction1D<f64> {
        let n = (12.0 / h).round() as usize + 1;
        let values = (0..n).map(|i| self.eval(-6.0 + i as f64 * h)).collect();
        GridFunction1D::new(-6.0, h, values).expect("valid grid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_are_reproducible() {
        let a = random_union(&mut rng(3), -4, 4, 4, 8);
        let b = random_union(&mut rng(3), -4, 4, 4, 8);
        assert_eq!(a, b);
        assert_ne!(cell_seed(1, 0), cell_seed(1, 1));
    }

    #[test]
    fn nested_pairs_are_nested() {
        let mut r = rng(5);
        for _ in 0..50 {
            let (a, b) = random_nested_pair(&mut r);
            assert!(a.is_essential_subset(&b));
        }
    }

    #[test]
    fn convex_step_functions_have_interval_level_sets() {
        let mut r = rng(9);
        for _ in 0..50 {
            let f = random_step_function(&mut r, 4, true);
            assert!(f.sets().iter().all(|s| s.len() == 1));
        }
    }
}
