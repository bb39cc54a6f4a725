//! Scalar field abstraction.
//!
//! Everything polytopal (Kronecker expansion, H-gauges, the simplex, vertex
//! enumeration) is written once over [`Scalar`] and runs either on `f64` or on
//! exact [`Rational`]s. Ellipsoid work and the optimizers are `f64` only.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Whether arithmetic is exact. Exact scalars ignore float tolerances.
    const EXACT: bool;

    fn from_f64(x: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Square root. Exact for rationals that are perfect squares, rounded
    /// through `f64` otherwise.
    fn sqrt(&self) -> Self;

    /// A comparison slack: `t` for floats, zero for exact scalars.
    fn tol(t: f64) -> Self {
        if Self::EXACT {
            Self::zero()
        } else {
            Self::from_f64(t)
        }
    }

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        libm::fabs(*self)
    }

    fn sqrt(&self) -> Self {
        libm::sqrt(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).unwrap_or_else(Rational::zero)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn sqrt(&self) -> Self {
        if self.is_negative() {
            return Self::from_f64(f64::NAN);
        }
        let (n, d) = (self.numer(), self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            return Rational::new(rn, rd);
        }
        Self::from_f64(libm::sqrt(Scalar::to_f64(self)))
    }
}
