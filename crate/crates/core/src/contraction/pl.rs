//! Piecewise-linear 1-Lipschitz maps of the real line.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Continuous piecewise-linear map `R → R` with every slope in `[-1, 1]`.
///
/// Stored as at least one breakpoint with its value plus the two tail
/// slopes; inner slopes are implied by consecutive breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PlContraction<S> {
    xs: Vec<S>,
    ys: Vec<S>,
    left_slope: S,
    right_slope: S,
}

fn check_slope<S: Scalar>(slope: &S) -> Result<()> {
    if slope.abs() > S::one() {
        return Err(Error::NotLipschitz {
            slope: slope.to_string(),
        });
    }
    Ok(())
}

impl<S: Scalar> PlContraction<S> {
    pub fn new(xs: Vec<S>, ys: Vec<S>, left_slope: S, right_slope: S) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::InvalidContraction(
                "need matching, nonempty breakpoints and values".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidContraction(
                "breakpoints must be strictly ascending".into(),
            ));
        }
        let f = PlContraction {
            xs,
            ys,
            left_slope,
            right_slope,
        };
        for s in f.all_slopes() {
            check_slope(&s)?;
        }
        Ok(f)
    }

    pub fn identity() -> Self {
        PlContraction {
            xs: vec![S::zero()],
            ys: vec![S::zero()],
            left_slope: S::one(),
            right_slope: S::one(),
        }
    }

    pub fn constant(c: S) -> Self {
        PlContraction {
            xs: vec![S::zero()],
            ys: vec![c],
            left_slope: S::zero(),
            right_slope: S::zero(),
        }
    }

    /// `t ↦ slope (t - x0) + y0`.
    pub fn affine(x0: S, y0: S, slope: S) -> Result<Self> {
        Self::new(vec![x0], vec![y0], slope.clone(), slope)
    }

    /// One kink at `x0` with value `y0`.
    pub fn kink(x0: S, y0: S, left_slope: S, right_slope: S) -> Result<Self> {
        Self::new(vec![x0], vec![y0], left_slope, right_slope)
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.xs
    }

    pub fn values(&self) -> &[S] {
        &self.ys
    }

    pub fn left_slope(&self) -> &S {
        &self.left_slope
    }

    pub fn right_slope(&self) -> &S {
        &self.right_slope
    }

    /// Slopes of the inner segments, left to right.
    pub fn inner_slopes(&self) -> Vec<S> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1].clone() - y[0].clone()) / (x[1].clone() - x[0].clone()))
            .collect()
    }

    /// Left tail, inner segments, right tail.
    pub fn all_slopes(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.xs.len() + 1);
        out.push(self.left_slope.clone());
        out.extend(self.inner_slopes());
        out.push(self.right_slope.clone());
        out
    }

    /// Every slope lies in `[-1, 1]`; holds by construction, re-audited here.
    pub fn is_one_lipschitz(&self) -> bool {
        self.all_slopes().iter().all(|s| s.abs() <= S::one())
    }

    pub fn eval(&self, t: &S) -> S {
        let n = self.xs.len();
        if t <= &self.xs[0] {
            return self.ys[0].clone() + self.left_slope.clone() * (t.clone() - self.xs[0].clone());
        }
        if t >= &self.xs[n - 1] {
            return self.ys[n - 1].clone()
                + self.right_slope.clone() * (t.clone() - self.xs[n - 1].clone());
        }
        let i = self.xs.partition_point(|x| x <= t) - 1;
        let (x0, x1) = (&self.xs[i], &self.xs[i + 1]);
        let (y0, y1) = (&self.ys[i], &self.ys[i + 1]);
        y0.clone()
            + (y1.clone() - y0.clone()) * (t.clone() - x0.clone()) / (x1.clone() - x0.clone())
    }

    /// Slope of the piece immediately to the right of `t`.
    pub fn slope_right_of(&self, t: &S) -> S {
        let i = self.xs.partition_point(|x| x <= t);
        self.all_slopes()[i].clone()
    }

    /// Slope of the piece immediately to the left of `t`.
    pub fn slope_left_of(&self, t: &S) -> S {
        let i = self.xs.partition_point(|x| x < t);
        self.all_slopes()[i].clone()
    }

    /// All solutions of `self(x) = y` on pieces of nonzero slope. Constant
    /// pieces at height `y` contribute their finite endpoints.
    pub fn preimages(&self, y: &S) -> Vec<S> {
        let mut out = Vec::new();
        let n = self.xs.len();
        let push = |x: S, out: &mut Vec<S>| {
            if !out.contains(&x) {
                out.push(x);
            }
        };
        // left tail (-∞, x0]
        if !self.left_slope.is_zero() {
            let x = self.xs[0].clone() + (y.clone() - self.ys[0].clone()) / self.left_slope.clone();
            if x <= self.xs[0] {
                push(x, &mut out);
            }
        } else if &self.ys[0] == y {
            push(self.xs[0].clone(), &mut out);
        }
        for i in 0..n.saturating_sub(1) {
            let (x0, x1, y0, y1) = (&self.xs[i], &self.xs[i + 1], &self.ys[i], &self.ys[i + 1]);
            if y0 == y1 {
                if y0 == y {
                    push(x0.clone(), &mut out);
                    push(x1.clone(), &mut out);
                }
                continue;
            }
            let lo = S::min_of(y0, y1);
            let hi = S::max_of(y0, y1);
            if &lo <= y && y <= &hi {
                let x = x0.clone()
                    + (y.clone() - y0.clone()) * (x1.clone() - x0.clone())
                        / (y1.clone() - y0.clone());
                push(x, &mut out);
            }
        }
        if !self.right_slope.is_zero() {
            let x = self.xs[n - 1].clone()
                + (y.clone() - self.ys[n - 1].clone()) / self.right_slope.clone();
            if x >= self.xs[n - 1] {
                push(x, &mut out);
            }
        } else if &self.ys[n - 1] == y {
            push(self.xs[n - 1].clone(), &mut out);
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
        out
    }

    /// Drops breakpoints where the slope does not change (keeps at least one).
    pub fn simplified(&self) -> Self {
        let slopes = self.all_slopes();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..self.xs.len() {
            if slopes[i] != slopes[i + 1] {
                xs.push(self.xs[i].clone());
                ys.push(self.ys[i].clone());
            }
        }
        if xs.is_empty() {
            xs.push(self.xs[0].clone());
            ys.push(self.ys[0].clone());
        }
        PlContraction {
            xs,
            ys,
            left_slope: self.left_slope.clone(),
            right_slope: self.right_slope.clone(),
        }
    }

    /// Exact composition `self ∘ inner`.
    ///
    /// Breakpoints of the result are those of `inner` plus the preimages
    /// under `inner` of the breakpoints of `self`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut xs: Vec<S> = inner.xs.clone();
        for p in &self.xs {
            xs.extend(inner.preimages(p));
        }
        xs.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
        xs.dedup();
        let ys: Vec<S> = xs.iter().map(|x| self.eval(&inner.eval(x))).collect();
        let tail = |inner_slope: &S, towards_plus: bool| -> S {
            // As t → ±∞ the inner map runs off with `inner_slope`; the outer
            // slope is the one on the side it runs to.
            if inner_slope.is_zero() {
                S::zero()
            } else {
                let goes_up = (inner_slope > &S::zero()) == towards_plus;
                let outer = if goes_up {
                    &self.right_slope
                } else {
                    &self.left_slope
                };
                outer.clone() * inner_slope.clone()
            }
        };
        let left_slope = tail(&inner.left_slope, false);
        let right_slope = tail(&inner.right_slope, true);
        PlContraction {
            xs,
            ys,
            left_slope,
            right_slope,
        }
        .simplified()
    }

    /// Equality as functions (breakpoint sets may differ).
    pub fn same_function(&self, other: &Self) -> bool {
        self.simplified() == other.simplified()
    }
}

impl<S: Scalar> fmt::Display for PlContraction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slope {} | ", self.left_slope)?;
        for (i, (x, y)) in self.xs.iter().zip(&self.ys).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, " | slope {}", self.right_slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use num_rational::BigRational;

    type Pl = PlContraction<BigRational>;

    fn abs_shift(c: i64) -> Pl {
        // t ↦ |t - c| + c
        Pl::kink(q(c, 1), q(c, 1), q(-1, 1), q(1, 1)).unwrap()
    }

    #[test]
    fn rejects_steep_segments() {
        assert!(Pl::new(
            vec![q(0, 1), q(1, 1)],
            vec![q(0, 1), q(2, 1)],
            q(0, 1),
            q(0, 1)
        )
        .is_err());
        assert!(Pl::kink(q(0, 1), q(0, 1), q(-3, 2), q(0, 1)).is_err());
        assert!(Pl::new(
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1)],
            q(0, 1),
            q(0, 1)
        )
        .is_err());
    }

    #[test]
    fn eval_and_tails() {
        let f = Pl::new(
            vec![q(0, 1), q(1, 1)],
            vec![q(0, 1), q(-1, 1)],
            q(1, 1),
            q(1, 1),
        )
        .unwrap();
        assert_eq!(f.eval(&q(-2, 1)), q(-2, 1));
        assert_eq!(f.eval(&q(1, 2)), q(-1, 2));
        assert_eq!(f.eval(&q(3, 1)), q(1, 1));
    }

    #[test]
    fn compose_examples() {
        let id = Pl::identity();
        let f = abs_shift(1);
        assert!(id.compose(&f).same_function(&f));
        assert!(f.compose(&id).same_function(&f));
        let abs = abs_shift(0);
        assert!(abs.compose(&abs).same_function(&abs));
    }

    #[test]
    fn compose_matches_pointwise_oracle() {
        let f = abs_shift(1);
        let g = abs_shift(0);
        let h = f.compose(&g);
        assert_eq!(h.breakpoints(), &[q(-1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(h.eval(&q(-2, 1)), q(2, 1));
        for i in -40..=40 {
            let t = q(i, 8);
            assert_eq!(h.eval(&t), f.eval(&g.eval(&t)), "t={t}");
        }
    }

    #[test]
    fn compose_with_constant_pieces() {
        let clamp = Pl::new(
            vec![q(0, 1), q(1, 1)],
            vec![q(0, 1), q(1, 1)],
            q(0, 1),
            q(0, 1),
        )
        .unwrap();
        let refl = Pl::affine(q(0, 1), q(0, 1), q(-1, 1)).unwrap();
        let h = clamp.compose(&refl);
        for i in -20..=20 {
            let t = q(i, 4);
            assert_eq!(h.eval(&t), clamp.eval(&refl.eval(&t)));
        }
        assert_eq!(h.left_slope(), &q(0, 1));
        assert_eq!(h.right_slope(), &q(0, 1));
    }

    #[test]
    fn preimages_cover_all_pieces() {
        let f = Pl::new(
            vec![q(0, 1), q(1, 1)],
            vec![q(0, 1), q(-1, 1)],
            q(1, 1),
            q(1, 1),
        )
        .unwrap();
        assert_eq!(f.preimages(&q(0, 1)), vec![q(0, 1), q(2, 1)]);
        assert_eq!(f.preimages(&q(-1, 1)), vec![q(-1, 1), q(1, 1)]);
    }
}
