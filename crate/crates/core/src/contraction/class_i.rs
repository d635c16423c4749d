//! Membership in the class of contractions that are affine with slope ±1 on
//! every interval mapped strictly inside its endpoint-value interval.
//!
//! A pair `a < b` *triggers* when `φ(a) ≠ φ(b)` and `φ(s)` lies strictly
//! between `φ(a)` and `φ(b)` for every `s ∈ (a, b)`. It is a *witness*
//! against membership when it triggers and `|φ(b) − φ(a)| ≠ b − a`.
//!
//! For a piecewise-linear `φ` a pair triggers exactly when every breakpoint
//! inside `(a, b)` has its value strictly inside the endpoint interval, so
//! both tests are exact. The search over pairs is heuristic: candidates are
//! the domain endpoints, breakpoints, midpoints and preimages of breakpoint
//! values inside the domain, tail pairs for tails of slope outside
//! `{-1, 0, 1}`, and finally seeded random pairs. Maps with flat segments
//! are not known to be covered completely by this family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pl::PlContraction;
use crate::scalar::Scalar;

/// Outcome of [`class_i_decide`].
#[derive(Debug, Clone, PartialEq)]
pub enum ClassIVerdict<S> {
    /// No candidate pair is a witness.
    Member,
    /// An exactly re-verified witness pair `a < b`.
    Witness { a: S, b: S },
}

impl<S> ClassIVerdict<S> {
    pub fn is_member(&self) -> bool {
        matches!(self, ClassIVerdict::Member)
    }
}

/// Number of random pairs tried after the structured candidates.
pub const RANDOM_PAIRS: usize = 1000;

/// Does `(a, b)` satisfy the strict-inside condition?
pub fn triggers<S: Scalar>(f: &PlContraction<S>, a: &S, b: &S) -> bool {
    if a >= b {
        return false;
    }
    let fa = f.eval(a);
    let fb = f.eval(b);
    if fa == fb {
        return false;
    }
    let lo = S::min_of(&fa, &fb);
    let hi = S::max_of(&fa, &fb);
    f.breakpoints()
        .iter()
        .zip(f.values())
        .filter(|(x, _)| *x > a && *x < b)
        .all(|(_, y)| y > &lo && y < &hi)
}

pub fn is_witness<S: Scalar>(f: &PlContraction<S>, a: &S, b: &S) -> bool {
    triggers(f, a, b) && (f.eval(b) - f.eval(a)).abs() != b.clone() - a.clone()
}

fn candidates<S: Scalar>(f: &PlContraction<S>, lo: &S, hi: &S) -> Vec<S> {
    let inside = |x: &S| x >= lo && x <= hi;
    let mut pts: Vec<S> = vec![lo.clone(), hi.clone()];
    pts.extend(f.breakpoints().iter().filter(|x| inside(x)).cloned());
    for y in f.values() {
        pts.extend(f.preimages(y).into_iter().filter(|x| inside(x)));
    }
    pts.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
    pts.dedup();
    let mids: Vec<S> = pts
        .windows(2)
        .map(|w| (w[0].clone() + w[1].clone()).half())
        .collect();
    pts.extend(mids);
    pts.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
    pts.dedup();
    pts
}

fn tail_pairs<S: Scalar>(f: &PlContraction<S>) -> Vec<(S, S)> {
    let special = |s: &S| s.is_zero() || s.abs() == S::one();
    let bps = f.breakpoints();
    let mut out = Vec::new();
    if !special(f.left_slope()) {
        let x0 = bps[0].clone();
        out.push((x0.clone() - S::one(), x0));
    }
    if !special(f.right_slope()) {
        let x1 = bps[bps.len() - 1].clone();
        out.push((x1.clone(), x1 + S::one()));
    }
    out
}

/// Decides membership of `f` restricted to `[lo, hi]` (plus tail screening).
///
/// The pair `(lo, hi)` is tried first, then all ordered candidate pairs,
/// then [`RANDOM_PAIRS`] random pairs drawn from a grid of `2^-10`-spaced
/// rationals in the domain with the given seed.
pub fn class_i_decide<S: Scalar>(
    f: &PlContraction<S>,
    lo: &S,
    hi: &S,
    seed: u64,
) -> ClassIVerdict<S> {
    assert!(lo < hi, "domain must be a nondegenerate interval");
    let found = |a: S, b: S| ClassIVerdict::Witness { a, b };
    if is_witness(f, lo, hi) {
        return found(lo.clone(), hi.clone());
    }
    for (a, b) in tail_pairs(f) {
        if is_witness(f, &a, &b) {
            return found(a, b);
        }
    }
    let pts = candidates(f, lo, hi);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if is_witness(f, &pts[i], &pts[j]) {
                return found(pts[i].clone(), pts[j].clone());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = hi.clone() - lo.clone();
    let denom = 1i64 << 10;
    let mut draw = || lo.clone() + width.clone() * S::from_ratio(rng.gen_range(0..=denom), denom);
    for _ in 0..RANDOM_PAIRS {
        let (x, y) = (draw(), draw());
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        if is_witness(f, &a, &b) {
            return found(a, b);
        }
    }
    ClassIVerdict::Member
}
