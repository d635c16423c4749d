//! Finite unions of closed intervals: the model of a bounded 1-D set.
//!
//! A canonical [`IntervalUnion`] has components sorted by `lo`, every
//! component of positive length, and a strict gap between neighbours.
//! Boundary points carry no measure, so two unions that differ only at
//! finitely many points are treated as the same set by every comparison in
//! this crate ("essential" equality). Touching components are merged.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Interval<S> {
    /// Returns `None` for degenerate input (`lo >= hi`).
    pub fn new(lo: S, hi: S) -> Option<Self> {
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn length(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> S {
        (self.lo.clone() + self.hi.clone()).half()
    }

    pub fn contains(&self, x: &S) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl<S: fmt::Display> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Set operation selector for [`IntervalUnion::combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Union,
    Intersect,
    Subtract,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalUnion<S> {
    components: Vec<Interval<S>>,
}

impl<S> Default for IntervalUnion<S> {
    fn default() -> Self {
        IntervalUnion {
            components: Vec::new(),
        }
    }
}

fn cmp<S: PartialOrd>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b)
        .expect("scalar comparison must be total (NaN endpoint?)")
}

impl<S: Scalar> IntervalUnion<S> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// A single interval; empty if `lo >= hi`.
    pub fn interval(lo: S, hi: S) -> Self {
        Self::from_pairs([(lo, hi)])
    }

    /// Normalizes arbitrary (possibly overlapping, unsorted, degenerate) pairs.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
    {
        Self::normalize(
            pairs
                .into_iter()
                .filter_map(|(lo, hi)| Interval::new(lo, hi))
                .collect(),
        )
    }

    fn normalize(mut parts: Vec<Interval<S>>) -> Self {
        parts.sort_by(|a, b| cmp(&a.lo, &b.lo));
        let mut out: Vec<Interval<S>> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalUnion { components: out }
    }

    /// Trusted constructor: `parts` must already be canonical.
    fn from_canonical(parts: Vec<Interval<S>>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0].hi < w[1].lo));
        IntervalUnion { components: parts }
    }

    pub fn components(&self) -> &[Interval<S>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn inf(&self) -> Option<&S> {
        self.components.first().map(|c| &c.lo)
    }

    pub fn sup(&self) -> Option<&S> {
        self.components.last().map(|c| &c.hi)
    }

    pub fn contains(&self, x: &S) -> bool {
        let idx = self.components.partition_point(|c| &c.hi < x);
        self.components.get(idx).is_some_and(|c| c.contains(x))
    }

    pub fn combine(&self, other: &Self, mode: Combine) -> Self {
        match mode {
            Combine::Union => self.union(other),
            Combine::Intersect => self.intersect(other),
            Combine::Subtract => self.subtract(other),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut parts = Vec::with_capacity(self.len() + other.len());
        parts.extend(self.components.iter().cloned());
        parts.extend(other.components.iter().cloned());
        Self::normalize(parts)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.components, &other.components);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = S::max_of(&a[i].lo, &b[j].lo);
            let hi = S::min_of(&a[i].hi, &b[j].hi);
            if lo < hi {
                out.push(Interval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_canonical(out)
    }

    pub fn subtract(&self, other: &Self) -> Self {
        let b = &other.components;
        let mut out = Vec::new();
        let mut j = 0;
        for comp in &self.components {
            let mut lo = comp.lo.clone();
            while j < b.len() && b[j].hi <= lo {
                j += 1;
            }
            let mut k = j;
            while k < b.len() && b[k].lo < comp.hi {
                if b[k].lo > lo {
                    out.push(Interval {
                        lo: lo.clone(),
                        hi: b[k].lo.clone(),
                    });
                }
                if b[k].hi > lo {
                    lo = b[k].hi.clone();
                }
                if lo >= comp.hi {
                    break;
                }
                k += 1;
            }
            if lo < comp.hi {
                out.push(Interval {
                    lo,
                    hi: comp.hi.clone(),
                });
            }
        }
        Self::from_canonical(out)
    }

    /// `self ∩ [c, ∞)`.
    pub fn clip_at_least(&self, c: &S) -> Self {
        let parts = self
            .components
            .iter()
            .filter(|comp| &comp.hi > c)
            .map(|comp| Interval {
                lo: S::max_of(&comp.lo, c),
                hi: comp.hi.clone(),
            })
            .filter(|comp| comp.lo < comp.hi)
            .collect();
        Self::from_canonical(parts)
    }

    /// `self ∩ (-∞, c]`.
    pub fn clip_at_most(&self, c: &S) -> Self {
        let parts = self
            .components
            .iter()
            .filter(|comp| &comp.lo < c)
            .map(|comp| Interval {
                lo: comp.lo.clone(),
                hi: S::min_of(&comp.hi, c),
            })
            .filter(|comp| comp.lo < comp.hi)
            .collect();
        Self::from_canonical(parts)
    }

    pub fn measure(&self) -> S {
        self.components
            .iter()
            .fold(S::zero(), |acc, c| acc + c.length())
    }

    /// Measure of the symmetric difference.
    pub fn symdiff_measure(&self, other: &Self) -> S {
        self.subtract(other).measure() + other.subtract(self).measure()
    }

    /// Inclusion up to a null set.
    pub fn is_essential_subset(&self, other: &Self) -> bool {
        self.subtract(other).is_empty()
    }

    /// Equality up to a null set. Canonical forms make this structural.
    pub fn essentially_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Mirror image in the point `c`: `x ↦ 2c - x`.
    pub fn reflect(&self, c: &S) -> Self {
        let two_c = c.clone() + c.clone();
        let parts = self
            .components
            .iter()
            .rev()
            .map(|comp| Interval {
                lo: two_c.clone() - comp.hi.clone(),
                hi: two_c.clone() - comp.lo.clone(),
            })
            .collect();
        Self::from_canonical(parts)
    }

    pub fn translate(&self, s: &S) -> Self {
        let parts = self
            .components
            .iter()
            .map(|comp| Interval {
                lo: comp.lo.clone() + s.clone(),
                hi: comp.hi.clone() + s.clone(),
            })
            .collect();
        Self::from_canonical(parts)
    }

    /// `x ↦ -x`.
    pub fn negate(&self) -> Self {
        self.reflect(&S::zero())
    }

    /// Minkowski sum with `[-d, d]`, `d > 0`.
    pub fn dilate(&self, d: &S) -> Self {
        assert!(d > &S::zero(), "dilation radius must be positive");
        let parts = self
            .components
            .iter()
            .map(|comp| Interval {
                lo: comp.lo.clone() - d.clone(),
                hi: comp.hi.clone() + d.clone(),
            })
            .collect();
        Self::normalize(parts)
    }

    /// Density-one points of the set. For a canonical union these differ
    /// from the set only at component endpoints, so the closed representative
    /// is returned unchanged.
    pub fn essential_interior(&self) -> Self {
        self.clone()
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> IntervalUnion<T> {
        IntervalUnion::from_pairs(self.components.iter().map(|c| (f(&c.lo), f(&c.hi))))
    }
}

impl<S: Scalar> FromIterator<Interval<S>> for IntervalUnion<S> {
    fn from_iter<I: IntoIterator<Item = Interval<S>>>(iter: I) -> Self {
        Self::normalize(iter.into_iter().collect())
    }
}

impl<S: fmt::Display> fmt::Display for IntervalUnion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}
