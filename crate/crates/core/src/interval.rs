//! Closed intervals with exact rational endpoints.
//!
//! Each operation returns an interval that contains every value of the
//! operation on points of its inputs. Square and cube roots are computed on
//! dyadic grids with outward rounding, so widths are controlled by an
//! explicit bit count.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct HighPrecisionReal {
    lo: Rational,
    hi: Rational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn dyadic(num: BigInt, bits: u32) -> Rational {
    Rational::new(num, pow2(bits)).expect("power of two is nonzero")
}

/// Largest `m/2^bits ≤ x`.
pub fn round_down(x: &Rational, bits: u32) -> Rational {
    dyadic(x.mul_integer(&pow2(bits)).floor(), bits)
}

/// Smallest `m/2^bits ≥ x`.
pub fn round_up(x: &Rational, bits: u32) -> Rational {
    dyadic(x.mul_integer(&pow2(bits)).ceil(), bits)
}

/// `⌊x^{1/d}⌋` and `⌈x^{1/d}⌉` for an integer `x ≥ 0`.
fn int_root_bounds(x: &BigUint, d: u32) -> (BigUint, BigUint) {
    let r = x.nth_root(d);
    if num_traits::pow(r.clone(), d as usize) == *x {
        (r.clone(), r)
    } else {
        (r.clone(), r + 1u32)
    }
}

fn nonneg_magnitude(v: &BigInt) -> BigUint {
    debug_assert!(v.sign() != Sign::Minus);
    v.magnitude().clone()
}

/// Lower or upper bound for `x^{1/d}` with `x ≥ 0` on the `2^-bits` grid.
fn root_bound(x: &Rational, d: u32, bits: u32, upper: bool) -> Rational {
    let scale = pow2(bits * d);
    let scaled = x.mul_integer(&scale);
    let (lo, hi) = if upper {
        int_root_bounds(&nonneg_magnitude(&scaled.ceil()), d)
    } else {
        int_root_bounds(&nonneg_magnitude(&scaled.floor()), d)
    };
    let pick = if upper { hi } else { lo };
    dyadic(BigInt::from(pick), bits)
}

impl HighPrecisionReal {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(HighPrecisionReal { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        HighPrecisionReal { lo: x.clone(), hi: x }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::point(Rational::from(v))
    }

    pub fn lower(&self) -> &Rational {
        &self.lo
    }

    pub fn upper(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `width ≤ 2^{-bits}`.
    pub fn width_within(&self, bits: u32) -> bool {
        self.width().mul_integer(&pow2(bits)) <= Rational::one()
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi).checked_div(&Rational::from(2)).expect("2 != 0")
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(HighPrecisionReal { lo, hi })
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Endpoints moved outward onto the `2^-bits` grid.
    pub fn round_outward(&self, bits: u32) -> Self {
        HighPrecisionReal { lo: round_down(&self.lo, bits), hi: round_up(&self.hi, bits) }
    }

    /// True when every point of the interval starts with the given decimal
    /// digits, e.g. `"0.67765"` certifies `0.67765 ≤ x < 0.67766`.
    pub fn certifies_prefix(&self, prefix: &str) -> bool {
        let Ok(base) = parse_decimal(prefix) else {
            return false;
        };
        let digits = prefix.split_once('.').map_or(0, |(_, f)| f.len());
        let ulp = Rational::new(1, num_traits::pow(BigInt::from(10u8), digits)).expect("nonzero");
        if prefix.starts_with('-') {
            let top = base.clone();
            let bottom = &base - &ulp;
            self.hi <= top && self.lo > bottom
        } else {
            self.lo >= base && self.hi < &base + &ulp
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        HighPrecisionReal { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        HighPrecisionReal { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }

    pub fn neg(&self) -> Self {
        HighPrecisionReal { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let cands = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = cands.iter().min().expect("four candidates").clone();
        let hi = cands.iter().max().expect("four candidates").clone();
        HighPrecisionReal { lo, hi }
    }

    pub fn square(&self) -> Self {
        if self.contains_zero() {
            let m = self.lo.abs().max(self.hi.abs());
            HighPrecisionReal { lo: Rational::zero(), hi: &m * &m }
        } else {
            let (a, b) = (&self.lo * &self.lo, &self.hi * &self.hi);
            HighPrecisionReal { lo: a.clone().min(b.clone()), hi: a.max(b) }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        match e {
            0 => Self::from_i64(1),
            _ if e.is_multiple_of(2) => self.pow(e / 2).square(),
            _ => self.mul(&self.pow(e - 1)),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(HighPrecisionReal { lo: self.hi.recip()?, hi: self.lo.recip()? })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    /// Enclosure of `√x` on the `2^-bits` grid; needs `upper ≥ 0`.
    pub fn sqrt(&self, bits: u32) -> Result<Self> {
        if self.hi.is_negative() {
            return Err(Error::domain("square root of a negative interval"));
        }
        let lo = if self.lo.is_positive() { root_bound(&self.lo, 2, bits, false) } else { Rational::zero() };
        Ok(HighPrecisionReal { lo, hi: root_bound(&self.hi, 2, bits, true) })
    }

    /// Enclosure of the real cube root on the `2^-bits` grid; any sign.
    pub fn cbrt(&self, bits: u32) -> Self {
        let one_side = |x: &Rational, upper: bool| -> Rational {
            if x.is_negative() {
                -root_bound(&-x, 3, bits, !upper)
            } else {
                root_bound(x, 3, bits, upper)
            }
        };
        HighPrecisionReal { lo: one_side(&self.lo, false), hi: one_side(&self.hi, true) }
    }

    /// Midpoint in floating point, for display only.
    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Midpoint truncated to `digits` decimals, for display only.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        self.midpoint().to_decimal_string(digits)
    }
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{int}{frac}")
        .parse()
        .map_err(|_| Error::Parse(format!("not a decimal: {s}")))?;
    let v = Rational::new(digits, num_traits::pow(BigInt::from(10u8), frac.len()))?;
    Ok(if neg { -&v } else { v })
}

impl fmt::Debug for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_decimal_string(20), self.hi.to_decimal_string(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn iv(a: Rational, b: Rational) -> HighPrecisionReal {
        HighPrecisionReal::new(a, b).unwrap()
    }

    #[test]
    fn arithmetic_encloses() {
        let a = iv(q(-1, 2), q(3, 1));
        let b = iv(q(2, 1), q(5, 1));
        assert_eq!(a.mul(&b), iv(q(-5, 2), q(15, 1)));
        assert_eq!(a.sub(&b), iv(q(-11, 2), q(1, 1)));
        assert_eq!(a.square(), iv(q(0, 1), q(9, 1)));
        assert!(a.recip().is_err());
        assert_eq!(b.recip().unwrap(), iv(q(1, 5), q(1, 2)));
        assert!(HighPrecisionReal::new(q(1, 1), q(0, 1)).is_err());
    }

    #[test]
    fn roots_enclose() {
        let two = HighPrecisionReal::from_i64(2);
        let s = two.sqrt(64).unwrap();
        assert!(s.square().contains(&q(2, 1)));
        assert!(s.width_within(63));
        let c = HighPrecisionReal::from_i64(-8).cbrt(40);
        assert_eq!(c, HighPrecisionReal::from_i64(-2));
        let c = HighPrecisionReal::from_i64(-3).cbrt(64);
        assert!(c.pow(3).contains(&q(-3, 1)));
        assert!(c.width_within(63));
        let nine = HighPrecisionReal::from_i64(9).sqrt(10).unwrap();
        assert_eq!(nine, HighPrecisionReal::from_i64(3));
    }

    #[test]
    fn prefixes() {
        let x = iv(q(677651, 1000000), q(677652, 1000000));
        assert!(x.certifies_prefix("0.67765"));
        assert!(!x.certifies_prefix("0.67766"));
        let wide = iv(q(67764, 100000), q(67766, 100000));
        assert!(!wide.certifies_prefix("0.67765"));
    }

    #[test]
    fn rounding_is_outward() {
        let x = HighPrecisionReal::point(q(1, 3));
        let r = x.round_outward(10);
        assert!(r.contains(&q(1, 3)));
        assert!(r.width_within(10));
    }
}
