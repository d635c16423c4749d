//! Scalar abstraction shared by every module.
//!
//! The set algebra, the piecewise-linear contraction calculus and the step
//! function machinery are written once against [`Scalar`]. Exact experiments
//! instantiate them with [`BigRational`]; Monte-Carlo and rasterization code
//! uses `f64`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::ParseScalarError;

/// Ordered field used as the coordinate type.
///
/// Implementations for `f32`/`f64` are "exact" only up to rounding; the
/// rational implementation is exact.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic never rounds.
    const IS_EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Converts the binary value of `x` (exactly, for rationals).
    fn of_f64(x: f64) -> Self;

    fn as_f64(&self) -> f64;

    /// Parses `"p/q"`, an integer, or a decimal such as `"-0.125"` / `"1e-3"`.
    fn parse_exact(s: &str) -> Result<Self, ParseScalarError>;

    /// Inverse of [`Scalar::parse_exact`].
    fn to_exact_string(&self) -> String;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half(&self) -> Self {
        self.clone() / Self::two()
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// `2^exp` for `exp >= 0`, `1/2^(-exp)` otherwise.
    fn pow2(exp: i32) -> Self {
        let mut acc = Self::one();
        let factor = if exp >= 0 {
            Self::two()
        } else {
            Self::one() / Self::two()
        };
        for _ in 0..exp.unsigned_abs() {
            acc = acc * factor.clone();
        }
        acc
    }

    fn pow_u(&self, p: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..p {
            acc = acc * self.clone();
        }
        acc
    }

    /// Is `self` an integer (exactly, or within rounding for floats)?
    fn is_integer_valued(&self) -> bool;

    /// Rounds towards negative infinity to an `i64`.
    fn floor_i64(&self) -> i64;
}

fn parse_decimal(s: &str) -> Result<BigRational, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| err())?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

impl Scalar for BigRational {
    const IS_EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn of_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_exact(s: &str) -> Result<Self, ParseScalarError> {
        parse_decimal(s)
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    fn is_integer_valued(&self) -> bool {
        self.is_integer()
    }

    fn floor_i64(&self) -> i64 {
        self.floor()
            .to_integer()
            .to_i64()
            .expect("floor fits in i64")
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const IS_EXACT: bool = false;

            fn from_ratio(numer: i64, denom: i64) -> Self {
                numer as $t / denom as $t
            }

            fn of_f64(x: f64) -> Self {
                x as $t
            }

            fn as_f64(&self) -> f64 {
                *self as f64
            }

            fn parse_exact(s: &str) -> Result<Self, ParseScalarError> {
                if let Ok(v) = s.trim().parse::<$t>() {
                    return Ok(v);
                }
                parse_decimal(s).map(|r| r.as_f64() as $t)
            }

            fn to_exact_string(&self) -> String {
                format!("{}", self)
            }

            fn is_integer_valued(&self) -> bool {
                (self - self.round()).abs() <= <$t>::EPSILON * self.abs().max(1.0) * 8.0
            }

            fn floor_i64(&self) -> i64 {
                self.floor() as i64
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

/// Shorthand for building exact rationals in tests and fixtures.
pub fn q(numer: i64, denom: i64) -> BigRational {
    BigRational::from_ratio(numer, denom)
}
