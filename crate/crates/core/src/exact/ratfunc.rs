//! Univariate rational functions over [`Rational`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational};

/// Reduced fraction of polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc == Rational::one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip().expect("nonzero");
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    /// The indeterminate.
    pub fn var() -> Self {
        RationalFunction { num: Polynomial::x(), den: Polynomial::one() }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Largest of the numerator and denominator degrees.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<RationalFunction> {
        Self::one().checked_div(self)
    }

    /// Exact substitution; a vanishing denominator is reported as a pole.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole { at: x.to_string(), denominator: self.den.to_string() });
        }
        self.num.eval(x).checked_div(&d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1 {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    #[test]
    fn field_examples() {
        let f = rf(&[1, 1], &[-1, 1]);
        assert!((&f - &f).is_zero());
        assert_eq!(&rf(&[0, 1], &[1, 1]) * &rf(&[1, 1], &[0, 1]), RationalFunction::one());
        let sum = &rf(&[1], &[-1, 1]) + &rf(&[1], &[1, 1]);
        assert_eq!(sum, rf(&[0, 2], &[-1, 0, 1]));
        assert_eq!(sum.to_string(), "2n/(n^2 - 1)");
    }

    #[test]
    fn evaluation_and_poles() {
        let f = rf(&[0, 2], &[-1, 0, 1]);
        assert_eq!(f.eval(&Rational::from(2)).unwrap(), Rational::ratio(4, 3));
        let p0 = rf(&[1, -2, 2], &[1, -2, 1]);
        assert_eq!(p0.eval(&Rational::from(5)).unwrap(), Rational::ratio(41, 16));
        match f.eval(&Rational::from(1)) {
            Err(Error::Pole { at, denominator }) => {
                assert_eq!(at, "1");
                assert_eq!(denominator, "n^2 - 1");
            }
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn zero_division_and_normal_form() {
        assert_eq!(RationalFunction::one().checked_div(&RationalFunction::zero()), Err(Error::DivisionByZero));
        assert!(RationalFunction::new(poly(&[1]), Polynomial::zero()).is_err());
        let z = rf(&[0], &[3, 7]);
        assert_eq!(z.denom(), &Polynomial::one());
        // denominator made monic
        let g = rf(&[2], &[4, 2]);
        assert_eq!(g.denom(), &poly(&[2, 1]));
        assert_eq!(g.numer(), &poly(&[1]));
    }
}
