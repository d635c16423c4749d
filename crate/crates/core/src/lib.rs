//! Exact and numeric toolkit for rearrangement set maps (reflection,
//! polarization, Steiner, Solynin, Brock), their contractions, the dyadic
//! polarization chain and function rearrangements via level sets.
//!
//! Everything is generic over [`Scalar`]; the aliases below fix the scalar
//! to exact rationals ([`Rational`]) or `f64`.

pub mod contraction;
pub mod corpus;
pub mod error;
pub mod experiments;
pub mod interval;
pub mod io;
pub mod nd;
pub mod rearrange;
pub mod scalar;
pub mod setmap;

pub use error::{Error, Result};
pub use interval::{Combine, Interval, IntervalUnion};
pub use scalar::{q, Scalar};
pub use setmap::{MapKind, Orientation, SetMap1D};

pub type Rational = num_rational::BigRational;

pub type ExactUnion = IntervalUnion<Rational>;
pub type FloatUnion = IntervalUnion<f64>;
pub type ExactSetMap = SetMap1D<Rational>;
pub type ExactPl = contraction::PlContraction<Rational>;
pub type ExactFold = contraction::Fold<Rational>;
pub type ExactFoldChain = contraction::FoldChain<Rational>;
pub type FloatFold = contraction::Fold<f64>;
pub type FloatFoldChain = contraction::FoldChain<f64>;
pub type ExactStep = rearrange::StepFunction<Rational, ExactUnion>;
pub type ExactGridFunction = rearrange::GridFunction1D<Rational>;
pub type FloatGridFunction = rearrange::GridFunction1D<f64>;
