//! Set maps acting on 1-D sets, i.e. on a single fiber orthogonal to the
//! distinguished hyperplane, together with the dyadic polarization chain and
//! the exact smoothing / distribution checkers built on top of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Reflection,
    Polarization,
    Steiner,
    Solynin,
    Brock,
}

impl MapKind {
    pub const ALL: [MapKind; 5] = [
        MapKind::Reflection,
        MapKind::Polarization,
        MapKind::Steiner,
        MapKind::Solynin,
        MapKind::Brock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Reflection => "reflection",
            MapKind::Polarization => "polarization",
            MapKind::Steiner => "steiner",
            MapKind::Solynin => "solynin",
            MapKind::Brock => "brock",
        }
    }
}

/// Which closed half-line is the positive side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Orientation {
    /// Positive side `[c, ∞)`.
    #[default]
    #[serde(rename = "+")]
    Positive,
    /// Positive side `(-∞, c]`.
    #[serde(rename = "-")]
    Negative,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Orientation::Positive => "+",
            Orientation::Negative => "-",
        }
    }
}

/// A set map on the real line determined by a hyperplane position.
///
/// `orientation` matters for polarization and Solynin only; `b` only for
/// Brock (and must lie in `[0, 1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct SetMap1D<S> {
    pub kind: MapKind,
    pub center: S,
    pub orientation: Orientation,
    pub b: S,
}

impl<S: Scalar> std::fmt::Display for SetMap1D<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(t0={}", self.kind.name(), self.center)?;
        match self.kind {
            MapKind::Polarization | MapKind::Solynin => {
                write!(f, ", {})", self.orientation.symbol())
            }
            MapKind::Brock => write!(f, ", b={})", self.b),
            _ => write!(f, ")"),
        }
    }
}

impl<S: Scalar> SetMap1D<S> {
    fn with(kind: MapKind, center: S, orientation: Orientation) -> Self {
        SetMap1D {
            kind,
            center,
            orientation,
            b: S::one(),
        }
    }

    pub fn reflection(center: S) -> Self {
        Self::with(MapKind::Reflection, center, Orientation::Positive)
    }

    pub fn polarization(center: S, orientation: Orientation) -> Self {
        Self::with(MapKind::Polarization, center, orientation)
    }

    pub fn steiner(center: S) -> Self {
        Self::with(MapKind::Steiner, center, Orientation::Positive)
    }

    pub fn solynin(center: S, orientation: Orientation) -> Self {
        Self::with(MapKind::Solynin, center, orientation)
    }

    pub fn brock(center: S, b: S) -> Result<Self> {
        if b < S::zero() || b > S::one() {
            return Err(Error::InvalidParameter(format!(
                "brock parameter b={b} outside [0, 1]"
            )));
        }
        Ok(SetMap1D {
            kind: MapKind::Brock,
            center,
            orientation: Orientation::Positive,
            b,
        })
    }

    pub fn apply(&self, a: &IntervalUnion<S>) -> Result<IntervalUnion<S>> {
        Ok(match self.kind {
            MapKind::Reflection => a.reflect(&self.center),
            MapKind::Polarization => polarize(a, &self.center, self.orientation),
            MapKind::Steiner => steiner_1d(a, &self.center),
            MapKind::Solynin => match self.orientation {
                Orientation::Positive => solynin_1d(a, &self.center),
                Orientation::Negative => {
                    solynin_1d(&a.reflect(&self.center), &self.center).reflect(&self.center)
                }
            },
            MapKind::Brock => brock_convex_1d(a, &self.center, &self.b)?,
        })
    }
}

/// Two-point symmetrization of a 1-D set in the point `c`.
///
/// With positive orientation the positive side is `[c, ∞)` and
/// `P A = ((A ∪ A†) ∩ [c, ∞)) ∪ ((A ∩ A†) ∩ (-∞, c])`.
pub fn polarize<S: Scalar>(a: &IntervalUnion<S>, c: &S, orient: Orientation) -> IntervalUnion<S> {
    let (Some(lo), Some(hi)) = (a.inf(), a.sup()) else {
        return IntervalUnion::empty();
    };
    // Shortcuts: the whole set on one side of c.
    match orient {
        Orientation::Positive => {
            if lo >= c {
                return a.clone();
            }
            if hi <= c {
                return a.reflect(c);
            }
        }
        Orientation::Negative => {
            if hi <= c {
                return a.clone();
            }
            if lo >= c {
                return a.reflect(c);
            }
        }
    }
    let mirror = a.reflect(c);
    let joined = a.union(&mirror);
    let common = a.intersect(&mirror);
    match orient {
        Orientation::Positive => joined.clip_at_least(c).union(&common.clip_at_most(c)),
        Orientation::Negative => joined.clip_at_most(c).union(&common.clip_at_least(c)),
    }
}

/// Steiner symmetral: the interval of equal length centered at `t0`.
pub fn steiner_1d<S: Scalar>(a: &IntervalUnion<S>, t0: &S) -> IntervalUnion<S> {
    let half = a.measure().half();
    IntervalUnion::interval(t0.clone() - half.clone(), t0.clone() + half)
}

/// Radius `r ≥ 0` with `|[t-r, t+r] ∪ (A ∩ [t, ∞))| = |A|`.
///
/// Sweeps the components of `A ∩ [t, ∞)`. On a gap the covered measure
/// grows with slope 2 in `r`, inside a component with slope 1, so the root
/// is found exactly.
pub fn solynin_radius<S: Scalar>(a: &IntervalUnion<S>, t: &S) -> S {
    let right = a.clip_at_least(t);
    let mut remaining = a.clip_at_most(t).measure();
    let mut pos = t.clone();
    if remaining.is_zero() {
        return S::zero();
    }
    for comp in right.components() {
        let gap = comp.lo.clone() - pos.clone();
        let gap_cover = gap.clone() + gap;
        if gap_cover >= remaining {
            return pos - t.clone() + remaining.half();
        }
        remaining = remaining - gap_cover;
        pos = comp.lo.clone();
        let len = comp.length();
        if len >= remaining {
            return pos - t.clone() + remaining;
        }
        remaining = remaining - len;
        pos = comp.hi.clone();
    }
    pos - t.clone() + remaining.half()
}

/// Solynin (continuous symmetrization) map with respect to `{t}`, usual
/// orientation: `[t - r_A, t + r_A] ∪ (A ∩ [t, ∞))`.
pub fn solynin_1d<S: Scalar>(a: &IntervalUnion<S>, t: &S) -> IntervalUnion<S> {
    let r = solynin_radius(a, t);
    let right = a.clip_at_least(t);
    right.union(&IntervalUnion::interval(
        t.clone() - r.clone(),
        t.clone() + r,
    ))
}

/// Chord-midpoint contraction on a single interval: the midpoint `m` moves
/// to `(1 - b) t0 + b m`, the length is kept.
pub fn brock_convex_1d<S: Scalar>(a: &IntervalUnion<S>, t0: &S, b: &S) -> Result<IntervalUnion<S>> {
    match a.components() {
        [] => Ok(IntervalUnion::empty()),
        [single] => {
            let mid = single.midpoint();
            let new_mid = (S::one() - b.clone()) * t0.clone() + b.clone() * mid.clone();
            Ok(a.translate(&(new_mid - mid)))
        }
        many => Err(Error::MultiComponentInput {
            components: many.len(),
        }),
    }
}

/// Center `k / 2^m` of the `k`-th dyadic polarization.
pub fn dyadic_center<S: Scalar>(m: u32, k: i64) -> S {
    S::from_int(k) * S::pow2(-(m as i32))
}

/// Lowest admissible chain index, `-2^(2m)`.
pub fn dyadic_first_index(m: u32) -> i64 {
    -(1i64 << (2 * m))
}

/// Iterates the chain `A_{m,k}` for `k = -2^(2m), …, 0`.
///
/// `A_{m,k} = P_{k/2^m}(A_{m,k-1})` with `A_{m,-2^(2m)-1} = A`, all
/// polarizations positively oriented.
pub struct DyadicChain<S> {
    m: u32,
    next_k: i64,
    current: IntervalUnion<S>,
    scale: S,
}

impl<S: Scalar> DyadicChain<S> {
    pub fn new(a: &IntervalUnion<S>, m: u32) -> Self {
        assert!(m >= 1, "dyadic level m must be positive");
        DyadicChain {
            m,
            next_k: dyadic_first_index(m),
            current: a.clone(),
            scale: S::pow2(-(m as i32)),
        }
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    /// Index of the set returned by the next call to [`Iterator::next`].
    pub fn next_index(&self) -> i64 {
        self.next_k
    }

    pub fn current(&self) -> &IntervalUnion<S> {
        &self.current
    }
}

impl<S: Scalar> Iterator for DyadicChain<S> {
    type Item = (i64, IntervalUnion<S>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_k > 0 {
            return None;
        }
        let k = self.next_k;
        let c = S::from_int(k) * self.scale.clone();
        self.current = polarize(&self.current, &c, Orientation::Positive);
        self.next_k += 1;
        Some((k, self.current.clone()))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (1 - self.next_k).max(0) as usize;
        (left, Some(left))
    }
}

/// `A_{m,k}` computed exactly. Performs `k + 2^(2m) + 1` polarizations.
pub fn dyadic_chain<S: Scalar>(a: &IntervalUnion<S>, m: u32, k: i64) -> Result<IntervalUnion<S>> {
    let first = dyadic_first_index(m);
    if m == 0 || k < first || k > 0 {
        return Err(Error::IndexOutOfRange { k, m });
    }
    let mut current = a.clone();
    let scale = S::pow2(-(m as i32));
    for (step, j) in (first..=k).enumerate() {
        current = polarize(
            &current,
            &(S::from_int(j) * scale.clone()),
            Orientation::Positive,
        );
        assert!(
            current.len() <= a.len() + 2 * (step + 1),
            "dyadic chain component count grew past the sanity bound"
        );
    }
    Ok(current)
}

/// Exact smoothing check: `dilate(♦A, d) ⊂ ♦(dilate(A, d))` up to a null
/// set. Boundary points are ignored, so the density-point set of `♦A` is
/// the canonical union itself.
pub fn check_smoothing<S: Scalar>(map: &SetMap1D<S>, a: &IntervalUnion<S>, d: &S) -> Result<bool> {
    let image = map.apply(a)?.essential_interior();
    let lhs = if image.is_empty() {
        image
    } else {
        image.dilate(d)
    };
    let dilated = if a.is_empty() { a.clone() } else { a.dilate(d) };
    let rhs = map.apply(&dilated)?;
    Ok(lhs.is_essential_subset(&rhs))
}

/// One violated inclusion of the dyadic well-distribution property.
#[derive(Debug, Clone, PartialEq)]
pub struct WellDistributedViolation<S> {
    pub k: i64,
    pub s: i64,
    pub mirrored: bool,
    pub missing: IntervalUnion<S>,
}

/// Checks, for every even `k` with `-2^(2m) < k ≤ -2` and every
/// `s ∈ {2, 4, …, -(k+2)}`, that
/// `A_{m,0} ⊃ (A_{m,0} ∩ (k/2^m, (k+2)/2^m]) + s/2^m` and
/// `A_{m,0} ⊃ -(A_{m,0} ∩ (k/2^m, (k+2)/2^m]) - s/2^m`, exactly.
pub fn welldistributed_violations<S: Scalar>(
    a: &IntervalUnion<S>,
    m: u32,
) -> Vec<WellDistributedViolation<S>> {
    let final_set = dyadic_chain(a, m, 0).expect("k = 0 is always in range");
    welldistributed_violations_of(&final_set, m)
}

/// As [`welldistributed_violations`] but for a precomputed `A_{m,0}`.
pub fn welldistributed_violations_of<S: Scalar>(
    final_set: &IntervalUnion<S>,
    m: u32,
) -> Vec<WellDistributedViolation<S>> {
    let scale = S::pow2(-(m as i32));
    let first = dyadic_first_index(m);
    let mut out = Vec::new();
    // Only cells meeting the negative part of A_{m,0} can be nonempty.
    let Some(inf) = final_set.inf() else {
        return out;
    };
    let lowest_cell = ((inf.clone() / scale.clone()).floor_i64() - 2).max(first + 1);
    let mut k = if lowest_cell % 2 == 0 {
        lowest_cell
    } else {
        lowest_cell + 1
    };
    if k <= first {
        k += 2;
    }
    while k <= -2 {
        let cell_lo = S::from_int(k) * scale.clone();
        let cell_hi = S::from_int(k + 2) * scale.clone();
        let cell = final_set.intersect(&IntervalUnion::interval(cell_lo, cell_hi));
        if !cell.is_empty() {
            let mirrored_cell = cell.negate();
            let mut s = 2;
            while s <= -(k + 2) {
                let shift = S::from_int(s) * scale.clone();
                let forward = cell.translate(&shift);
                let missing = forward.subtract(final_set);
                if !missing.is_empty() {
                    out.push(WellDistributedViolation {
                        k,
                        s,
                        mirrored: false,
                        missing,
                    });
                }
                let backward = mirrored_cell.translate(&(-shift));
                let missing = backward.subtract(final_set);
                if !missing.is_empty() {
                    out.push(WellDistributedViolation {
                        k,
                        s,
                        mirrored: true,
                        missing,
                    });
                }
                s += 2;
            }
        }
        k += 2;
    }
    out
}

pub fn check_welldistributed<S: Scalar>(a: &IntervalUnion<S>, m: u32) -> bool {
    welldistributed_violations(a, m).is_empty()
}

/// `|A_{m,0} Δ So_{0} A|`, exactly.
pub fn solynin_distance<S: Scalar>(a: &IntervalUnion<S>, m: u32) -> S {
    let chain = dyadic_chain(a, m, 0).expect("k = 0 is always in range");
    chain.symdiff_measure(&solynin_1d(a, &S::zero()))
}

/// Interval `[t - r, t + r]` as a one-component union.
pub fn ball_1d<S: Scalar>(t: &S, r: &S) -> IntervalUnion<S> {
    IntervalUnion::interval(t.clone() - r.clone(), t.clone() + r.clone())
}

/// Single-component view, if there is exactly one.
pub fn as_single<S: Scalar>(a: &IntervalUnion<S>) -> Option<&Interval<S>> {
    match a.components() {
        [one] => Some(one),
        _ => None,
    }
}
