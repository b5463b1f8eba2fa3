//! Exact scalars: rationals, polynomials and rational functions.
//!
//! Every comparison in this module is exact. No floating point is used
//! except in explicit `to_f64` conversions for display.

mod poly;
mod ratfunc;
mod rational;

pub use poly::Polynomial;
pub use ratfunc::RationalFunction;
pub use rational::{gcd, Rational};

use crate::error::Result;

/// Minimal field interface shared by [`Rational`] and [`RationalFunction`],
/// so the same parameter pipeline runs numerically and symbolically.
pub trait Scalar: Clone + PartialEq + std::fmt::Display + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Result<Self>;
    fn is_zero(&self) -> bool;
    /// Size measure used by resource guards (0 for rationals, degree for
    /// rational functions).
    fn complexity(&self) -> usize;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn complexity(&self) -> usize {
        0
    }
}

impl Scalar for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn from_i64(v: i64) -> Self {
        RationalFunction::constant(Rational::from(v))
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn complexity(&self) -> usize {
        self.degree()
    }
}
