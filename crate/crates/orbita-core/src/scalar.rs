//! Scalar abstraction for the matrix and elimination kernels.
//!
//! The linear algebra is generic over any exact field implementing
//! [`Scalar`]; the crate instantiates it with [`Rational`] (fast path for
//! random suites and the numeric pipeline) and [`RatFun`] (symbolic path).

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::symbolic::{Poly, RatFun, Rational};

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Field division. Callers guarantee a nonzero divisor.
    fn exact_div(&self, den: &Self) -> Self;

    /// A multiplier that clears this value to polynomial form, `one()` when
    /// the scalar has no fractional structure. Used by the fraction-free
    /// elimination to pre-scale rows so that all intermediate divisions stay
    /// polynomial.
    fn denominator_part(&self) -> Self {
        Self::one()
    }

    fn from_rational(r: &Rational) -> Self;

    /// Exact conversion back to a rational, when the value is one.
    fn to_rational(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    fn exact_div(&self, den: &Self) -> Self {
        self / den
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for RatFun {
    fn exact_div(&self, den: &Self) -> Self {
        // Fast path: both polynomial and the division exact. This is the
        // path the fraction-free elimination always takes after row scaling.
        if let (Some(n), Some(d)) = (self.as_poly(), den.as_poly()) {
            if let Some(q) = n.div_exact(d) {
                return RatFun::from_poly(q);
            }
        }
        self.try_div(den).expect("division by zero rational function")
    }

    fn denominator_part(&self) -> Self {
        RatFun::from_poly(self.den().clone())
    }

    fn from_rational(r: &Rational) -> Self {
        RatFun::constant(r.clone())
    }

    fn to_rational(&self) -> Option<Rational> {
        self.as_poly().and_then(Poly::constant_value)
    }
}
