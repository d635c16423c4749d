//! Contractions of `R^n`: polarization folds, fold chains and the
//! structured maps obtained by letting a 1-D contraction act on the
//! coordinate along a hyperplane normal.
//!
//! Hyperplanes are stored as `{x : ⟨x, n⟩ = c}` with a rational normal `n`
//! that need not be a unit vector. For every implemented kind the offset
//! `φ(σ) − σ` is a positively homogeneous function of `c − σ`, so
//! `ψ(x) = x + (φ(⟨x,n⟩) − ⟨x,n⟩) / ⟨n,n⟩ · n` is the same map as for the
//! normalized direction, and stays exact for directions such as `(1, -1)`.

use serde::{Deserialize, Serialize};

use super::pl::PlContraction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::setmap::{as_single, ball_1d, MapKind, Orientation, SetMap1D};

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn dist_sq<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
        let d = x.clone() - y.clone();
        acc + d.clone() * d
    })
}

pub fn norm_f64(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `x + s·n`.
pub fn add_scaled<S: Scalar>(x: &[S], s: &S, n: &[S]) -> Vec<S> {
    x.iter()
        .zip(n)
        .map(|(xi, ni)| xi.clone() + s.clone() * ni.clone())
        .collect()
}

/// The `i`-th standard basis vector of `R^dim`.
pub fn axis<S: Scalar>(dim: usize, i: usize) -> Vec<S> {
    (0..dim)
        .map(|j| if j == i { S::one() } else { S::zero() })
        .collect()
}

/// A map `R^n → R^n` that is 1-Lipschitz.
pub trait Contraction<S: Scalar>: Sync {
    fn apply(&self, x: &[S]) -> Vec<S>;
}

/// The identity map.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl<S: Scalar> Contraction<S> for Identity {
    fn apply(&self, x: &[S]) -> Vec<S> {
        x.to_vec()
    }
}

impl<S: Scalar, C: Contraction<S> + ?Sized> Contraction<S> for &C {
    fn apply(&self, x: &[S]) -> Vec<S> {
        (**self).apply(x)
    }
}

/// Wraps a closure as a [`Contraction`]; the Lipschitz bound is the caller's
/// responsibility.
pub struct FnContraction<F>(pub F);

impl<S: Scalar, F: Fn(&[S]) -> Vec<S> + Sync> Contraction<S> for FnContraction<F> {
    fn apply(&self, x: &[S]) -> Vec<S> {
        (self.0)(x)
    }
}

fn check_unit<S: Scalar>(u: &[S]) -> Result<()> {
    let nn = dot(u, u);
    let ok = if S::IS_EXACT {
        nn == S::one()
    } else {
        (nn.as_f64() - 1.0).abs() <= 1e-12
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotUnit {
            norm_sq: nn.to_string(),
        })
    }
}

fn check_normal<S: Scalar>(n: &[S]) -> Result<()> {
    if n.is_empty() || n.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidParameter(
            "hyperplane normal must be a nonzero vector".into(),
        ));
    }
    Ok(())
}

/// Polarization contraction with respect to the oriented hyperplane
/// `{⟨x, n⟩ = c}`. The positive side is `⟨x, n⟩ ≥ c` for
/// [`Orientation::Positive`] and `⟨x, n⟩ ≤ c` otherwise; points on the
/// positive side are fixed and the rest are reflected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind", rename = "fold")]
pub struct Fold<S: Scalar> {
    #[serde(rename = "u", with = "crate::io::scalar_vec")]
    pub normal: Vec<S>,
    #[serde(rename = "t0", with = "crate::io::scalar")]
    pub level: S,
    #[serde(rename = "orient", default)]
    pub orientation: Orientation,
}

impl<S: Scalar> Fold<S> {
    /// Hyperplane `{⟨x, normal⟩ = level}`; `normal` need not be a unit vector.
    pub fn new(normal: Vec<S>, level: S, orientation: Orientation) -> Result<Self> {
        check_normal(&normal)?;
        Ok(Fold {
            normal,
            level,
            orientation,
        })
    }

    /// Hyperplane `u^⊥ + t0 u` for a unit vector `u`.
    pub fn unit(u: Vec<S>, t0: S, orientation: Orientation) -> Result<Self> {
        check_unit(&u)?;
        Self::new(u, t0, orientation)
    }

    /// Hyperplane `{x_i = t0}`.
    pub fn axis(dim: usize, i: usize, t0: S, orientation: Orientation) -> Self {
        Fold {
            normal: axis(dim, i),
            level: t0,
            orientation,
        }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `⟨x, n⟩ − c`, signed so that the positive side is `≥ 0`.
    pub fn side(&self, x: &[S]) -> S {
        let d = dot(x, &self.normal) - self.level.clone();
        match self.orientation {
            Orientation::Positive => d,
            Orientation::Negative => -d,
        }
    }

    pub fn on_positive_side(&self, x: &[S]) -> bool {
        self.side(x) >= S::zero()
    }

    /// Mirror image of `x` in the hyperplane.
    pub fn reflect(&self, x: &[S]) -> Vec<S> {
        let d = dot(x, &self.normal) - self.level.clone();
        let s = -(d.clone() + d) / dot(&self.normal, &self.normal);
        add_scaled(x, &s, &self.normal)
    }

    /// Euclidean distance from `x` to the hyperplane.
    pub fn distance(&self, x: &[S]) -> f64 {
        let d = (dot(x, &self.normal) - self.level.clone()).as_f64();
        d.abs() / dot(&self.normal, &self.normal).as_f64().sqrt()
    }

    pub fn flipped(&self) -> Self {
        Fold {
            orientation: self.orientation.flipped(),
            ..self.clone()
        }
    }

    pub fn to_structured(&self) -> StructuredMap<S> {
        StructuredMap {
            profile: SetMap1D::polarization(self.level.clone(), self.orientation),
            normal: self.normal.clone(),
        }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Fold<T> {
        Fold {
            normal: self.normal.iter().map(&f).collect(),
            level: f(&self.level),
            orientation: self.orientation,
        }
    }
}

impl<S: Scalar> Contraction<S> for Fold<S> {
    fn apply(&self, x: &[S]) -> Vec<S> {
        if self.on_positive_side(x) {
            x.to_vec()
        } else {
            self.reflect(x)
        }
    }
}

/// Composition of folds, applied first to last.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "", transparent)]
pub struct FoldChain<S: Scalar> {
    pub folds: Vec<Fold<S>>,
}

impl<S: Scalar> FoldChain<S> {
    pub fn new(folds: Vec<Fold<S>>) -> Self {
        FoldChain { folds }
    }

    pub fn identity() -> Self {
        FoldChain { folds: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.folds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folds.is_empty()
    }

    pub fn push(&mut self, fold: Fold<S>) {
        self.folds.push(fold);
    }

    /// Orbit of `x`: its image after each prefix of the chain.
    pub fn trajectory(&self, x: &[S]) -> Vec<Vec<S>> {
        let mut out = Vec::with_capacity(self.folds.len() + 1);
        let mut cur = x.to_vec();
        out.push(cur.clone());
        for f in &self.folds {
            cur = f.apply(&cur);
            out.push(cur.clone());
        }
        out
    }

    /// The 1-D contraction acting on `t = ⟨x, u⟩` when every normal is a
    /// nonzero multiple of `u`; `None` otherwise.
    pub fn phi_along(&self, u: &[S]) -> Option<PlContraction<S>> {
        let mut phi = PlContraction::identity();
        for f in &self.folds {
            let lambda = parallel_factor(&f.normal, u)?;
            // ⟨x,n⟩ ≥ c  ⇔  λ t ≥ c.
            let center = f.level.clone() / lambda.clone();
            let orient = if lambda > S::zero() {
                f.orientation
            } else {
                f.orientation.flipped()
            };
            phi = phi_of(&SetMap1D::polarization(center, orient)).compose(&phi);
        }
        Some(phi)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FoldChain<T> {
        FoldChain {
            folds: self.folds.iter().map(|fold| fold.map_scalar(&f)).collect(),
        }
    }
}

/// `λ` with `n = λ u`, if it exists and is nonzero.
pub fn parallel_factor<S: Scalar>(n: &[S], u: &[S]) -> Option<S> {
    if n.len() != u.len() {
        return None;
    }
    let i = u.iter().position(|x| !x.is_zero())?;
    let lambda = n[i].clone() / u[i].clone();
    if lambda.is_zero() {
        return None;
    }
    n.iter()
        .zip(u)
        .all(|(a, b)| a.clone() == lambda.clone() * b.clone())
        .then_some(lambda)
}

impl<S: Scalar> Contraction<S> for FoldChain<S> {
    fn apply(&self, x: &[S]) -> Vec<S> {
        let mut cur = x.to_vec();
        for f in &self.folds {
            cur = f.apply(&cur);
        }
        cur
    }
}

/// Contraction `ψ` of a structured map: the profile's `φ` acts on
/// `σ = ⟨x, normal⟩` (with the profile center as the hyperplane level)
/// and the orthogonal part of `x` is kept.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredMap<S> {
    pub profile: SetMap1D<S>,
    pub normal: Vec<S>,
}

impl<S: Scalar> StructuredMap<S> {
    pub fn new(profile: SetMap1D<S>, normal: Vec<S>) -> Result<Self> {
        check_normal(&normal)?;
        Ok(StructuredMap { profile, normal })
    }

    /// Map along a unit direction `u` with hyperplane `u^⊥ + t0 u`
    /// (`profile.center` plays the role of `t0`).
    pub fn unit(profile: SetMap1D<S>, u: Vec<S>) -> Result<Self> {
        check_unit(&u)?;
        Self::new(profile, u)
    }

    pub fn kind(&self) -> MapKind {
        self.profile.kind
    }

    pub fn phi(&self) -> PlContraction<S> {
        phi_of(&self.profile)
    }
}

impl<S: Scalar> Contraction<S> for StructuredMap<S> {
    fn apply(&self, x: &[S]) -> Vec<S> {
        let sigma = dot(x, &self.normal);
        let shift = (phi_value(&self.profile, &sigma) - sigma) / dot(&self.normal, &self.normal);
        add_scaled(x, &shift, &self.normal)
    }
}

/// `φ(t)` of the closed-form contraction of a 1-D set map.
pub fn phi_value<S: Scalar>(map: &SetMap1D<S>, t: &S) -> S {
    let c = &map.center;
    match (map.kind, map.orientation) {
        (MapKind::Reflection, _) => c.clone() + c.clone() - t.clone(),
        (MapKind::Polarization, Orientation::Positive) => (t.clone() - c.clone()).abs() + c.clone(),
        (MapKind::Polarization, Orientation::Negative) => c.clone() - (t.clone() - c.clone()).abs(),
        (MapKind::Steiner, _) => c.clone(),
        (MapKind::Solynin, Orientation::Positive) => S::max_of(c, t),
        (MapKind::Solynin, Orientation::Negative) => S::min_of(c, t),
        (MapKind::Brock, _) => map.b.clone() * (t.clone() - c.clone()) + c.clone(),
    }
}

/// Closed-form `φ` of a 1-D set map as a piecewise-linear contraction with
/// a single breakpoint at the center.
pub fn phi_of<S: Scalar>(map: &SetMap1D<S>) -> PlContraction<S> {
    let c = map.center.clone();
    let one = S::one();
    let zero = S::zero();
    let (l, r) = match (map.kind, map.orientation) {
        (MapKind::Reflection, _) => (-one.clone(), -one),
        (MapKind::Polarization, Orientation::Positive) => (-one.clone(), one),
        (MapKind::Polarization, Orientation::Negative) => (one.clone(), -one),
        (MapKind::Steiner, _) => (zero.clone(), zero),
        (MapKind::Solynin, Orientation::Positive) => (zero, one),
        (MapKind::Solynin, Orientation::Negative) => (one, zero),
        (MapKind::Brock, _) => (map.b.clone(), map.b.clone()),
    };
    PlContraction::kink(c.clone(), c, l, r).expect("closed-form slopes lie in [-1, 1]")
}

/// Recovers `φ(t)` by mapping the interval `[t - r, t + r]` and reading off
/// the midpoint of the image.
pub fn phi_from_setmap<S: Scalar>(map: &SetMap1D<S>, t: &S, r: &S) -> Result<S> {
    if r <= &S::zero() {
        return Err(Error::InvalidParameter(format!(
            "radius {r} must be positive"
        )));
    }
    let lo = t.clone() - r.clone();
    let hi = t.clone() + r.clone();
    let image = map.apply(&ball_1d(t, r))?;
    match as_single(&image) {
        Some(iv) if iv.length() == r.clone() + r.clone() => Ok(iv.midpoint()),
        _ => Err(Error::NotABall {
            lo: lo.to_string(),
            hi: hi.to_string(),
            image: image.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use num_rational::BigRational;

    type Q = BigRational;

    fn pt(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn eval_psi_examples() {
        let refl = StructuredMap::unit(SetMap1D::reflection(q(0, 1)), pt(&[0, 1])).unwrap();
        assert_eq!(refl.apply(&pt(&[1, 1])), pt(&[1, -1]));
        let fold = Fold::unit(pt(&[0, 1]), q(0, 1), Orientation::Positive).unwrap();
        assert_eq!(fold.apply(&pt(&[3, -2])), pt(&[3, 2]));
        let brock =
            StructuredMap::unit(SetMap1D::brock(q(0, 1), q(1, 2)).unwrap(), pt(&[0, 1])).unwrap();
        assert_eq!(brock.apply(&pt(&[1, 2])), pt(&[1, 1]));
    }

    #[test]
    fn fold_equals_structured_polarization() {
        let n = pt(&[1, -1]);
        for orient in [Orientation::Positive, Orientation::Negative] {
            let fold = Fold::new(n.clone(), q(1, 3), orient).unwrap();
            let s = fold.to_structured();
            for i in -6..=6 {
                for j in -6..=6 {
                    let x = vec![q(i, 2), q(j, 3)];
                    assert_eq!(fold.apply(&x), s.apply(&x));
                }
            }
        }
    }

    #[test]
    fn non_unit_normal_is_rejected_by_unit_constructor() {
        assert!(matches!(
            Fold::unit(pt(&[1, 1]), q(0, 1), Orientation::Positive),
            Err(Error::NotUnit { .. })
        ));
        assert!(Fold::unit(vec![q(3, 5), q(4, 5)], q(0, 1), Orientation::Positive).is_ok());
        assert!(Fold::new(pt(&[0, 0]), q(0, 1), Orientation::Positive).is_err());
    }

    #[test]
    fn phi_of_examples() {
        let p = phi_of(&SetMap1D::polarization(q(0, 1), Orientation::Positive));
        assert_eq!(p.breakpoints(), &[q(0, 1)]);
        assert_eq!(
            (p.left_slope().clone(), p.right_slope().clone()),
            (q(-1, 1), q(1, 1))
        );
        let s = phi_of(&SetMap1D::solynin(q(0, 1), Orientation::Positive));
        assert_eq!(s.eval(&q(-3, 1)), q(0, 1));
        assert_eq!(s.eval(&q(2, 1)), q(2, 1));
        let b = phi_of(&SetMap1D::brock(q(0, 1), q(1, 2)).unwrap());
        assert_eq!(b.eval(&q(3, 1)), q(3, 2));
    }

    #[test]
    fn phi_from_setmap_examples() {
        let so = SetMap1D::solynin(q(0, 1), Orientation::Positive);
        assert_eq!(phi_from_setmap(&so, &q(-1, 1), &q(1, 1)).unwrap(), q(0, 1));
        let p = SetMap1D::polarization(q(0, 1), Orientation::Positive);
        assert_eq!(phi_from_setmap(&p, &q(-3, 1), &q(1, 1)).unwrap(), q(3, 1));
        let st = SetMap1D::steiner(q(5, 1));
        assert_eq!(phi_from_setmap(&st, &q(-7, 2), &q(2, 1)).unwrap(), q(5, 1));
        assert!(phi_from_setmap(&p, &q(0, 1), &q(0, 1)).is_err());
    }

    #[test]
    fn parallel_chain_phi() {
        let chain = FoldChain::new(vec![
            Fold::axis(2, 1, q(0, 1), Orientation::Positive),
            Fold::new(pt(&[0, -2]), q(-2, 1), Orientation::Positive).unwrap(),
        ]);
        let phi = chain.phi_along(&pt(&[0, 1])).unwrap();
        for i in -12..=12 {
            let t = q(i, 3);
            let img = chain.apply(&[q(1, 1), t.clone()]);
            assert_eq!(img[1], phi.eval(&t));
            assert_eq!(img[0], q(1, 1));
        }
        let skew = FoldChain::new(vec![
            Fold::new(pt(&[1, 1]), q(0, 1), Orientation::Positive).unwrap()
        ]);
        assert!(skew.phi_along(&pt(&[0, 1])).is_none());
    }
}
