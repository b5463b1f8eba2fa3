//! Arbitrary-precision rationals kept in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Greatest common divisor of two non-negative big integers.
///
/// Euclidean remainder steps first, so that a huge operand paired with a
/// small one collapses after a single division; the tail runs on machine
/// words.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = if a >= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    loop {
        if b.is_zero() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.to_u128(), b.to_u128()) {
            return BigUint::from(gcd_u128(x, y));
        }
        let r = &a % &b;
        a = b;
        b = r;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Exact fraction `num/den` with `den > 0` and `gcd(|num|, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    pub fn zero() -> Self {
        Rational { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Rational { num: BigInt::one(), den: BigInt::one() }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational { num: n.into(), den: BigInt::one() }
    }

    /// `num/den` in canonical form; a zero denominator is an error.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    /// Small-integer constructor for literals.
    ///
    /// Panics when `den == 0`; use [`Rational::new`] for data that is not a
    /// compile-time constant.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "Rational::ratio with zero denominator");
        Self::normalize(BigInt::from(num), BigInt::from(den))
    }

    fn normalize(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(num.magnitude(), den.magnitude());
        if !g.is_one() {
            let g = BigInt::from(g);
            num /= &g;
            den /= &g;
        }
        Rational { num, den }
    }

    /// Builds `num/den` when the caller knows that `gcd(num, den)` divides
    /// `hint`. Only small gcds are taken, so this stays cheap when `num`
    /// and `den` have millions of bits.
    pub fn from_parts_with_divisor_hint(num: BigInt, den: BigInt, hint: &BigUint) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if hint.is_zero() {
            return Err(Error::domain("divisor hint must be positive"));
        }
        let (mut num, mut den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd(&gcd(hint, &(num.magnitude() % hint)), &(den.magnitude() % hint));
        let g = gcd(&g, hint);
        if !g.is_one() && !g.is_zero() {
            let g = BigInt::from(g);
            num /= &g;
            den /= &g;
        }
        let r = Rational { num, den };
        debug_assert!(r.den.bits() > 4096 || r.num.bits() > 4096 || r.is_canonical());
        Ok(r)
    }

    /// Wraps parts that are already coprime with a positive denominator.
    pub(crate) fn from_coprime_parts(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        let r = Rational { num, den };
        debug_assert!(r.den.bits() > 4096 || r.num.bits() > 4096 || r.is_canonical());
        r
    }

    pub fn is_canonical(&self) -> bool {
        self.den.is_positive()
            && if self.num.is_zero() {
                self.den.is_one()
            } else {
                gcd(self.num.magnitude(), self.den.magnitude()).is_one()
            }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational { num: self.num.abs(), den: self.den.clone() }
    }

    /// `self + k` without a gcd pass (adding an integer keeps lowest terms).
    pub fn add_integer(&self, k: &BigInt) -> Rational {
        Rational { num: &self.num + k * &self.den, den: self.den.clone() }
    }

    /// `self · k` for an integer `k`; only `gcd(k, den)` is taken.
    pub fn mul_integer(&self, k: &BigInt) -> Rational {
        if k.is_zero() {
            return Self::zero();
        }
        let g = BigInt::from(gcd(k.magnitude(), self.den.magnitude()));
        let (mut num, mut den) = (&self.num * (k / &g), &self.den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Rational { num, den }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (a/b) / (c/d) = (a/c) * (d/b) with cross cancellation.
        let g1 = BigInt::from(gcd(self.num.magnitude(), rhs.num.magnitude()));
        let g2 = BigInt::from(gcd(&self.den.magnitude().clone(), rhs.den.magnitude()));
        let mut num = (&self.num / &g1) * (&rhs.den / &g2);
        let mut den = (&self.den / &g2) * (&rhs.num / &g1);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Rational { num, den })
    }

    pub fn pow(&self, exp: i32) -> Result<Rational> {
        let e = exp.unsigned_abs();
        let r = Rational {
            num: num_traits::pow(self.num.clone(), e as usize),
            den: num_traits::pow(self.den.clone(), e as usize),
        };
        if exp < 0 {
            r.recip()
        } else {
            Ok(r)
        }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    /// Nearest double, to within one rounding of a 64-bit quotient.
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        // q = ⌊|num| · 2^s / den⌋ carries about 64 significant bits.
        let s = self.den.bits() as i64 - self.num.bits() as i64 + 64;
        let mag = self.num.magnitude();
        let q = if s >= 0 { (mag << s as usize) / self.den.magnitude() } else { (mag >> (-s) as usize) / self.den.magnitude() };
        let mut v = q.to_f64().unwrap_or(f64::INFINITY);
        // Apply 2^-s in steps to avoid intermediate overflow or underflow.
        let mut e = -s;
        while e != 0 {
            let step = e.clamp(-1000, 1000);
            v *= 2f64.powi(step as i32);
            e -= step;
        }
        if self.num.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Result<Rational> {
        if !x.is_finite() {
            return Err(Error::domain(format!("cannot represent {x} exactly")));
        }
        if x == 0.0 {
            return Ok(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        Ok(if e >= 0 {
            Rational::from_integer(m << e as usize)
        } else {
            Rational::normalize(m, BigInt::one() << (-e) as usize)
        })
    }

    /// Decimal expansion truncated toward zero after `digits` fractional
    /// digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10u8), digits);
        let scaled = (self.num.abs() * &scale) / &self.den;
        let int_part = &scaled / &scale;
        let frac_part = &scaled % &scale;
        let sign = if self.num.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
        }
    }

    /// Renders an exponent as `2 + a/b` (or `2 - a/b` below 2).
    pub fn display_exponent(&self) -> String {
        let two = Rational::from_integer(2);
        let excess = self - &two;
        if excess.is_negative() {
            format!("2 - {}", excess.abs())
        } else {
            format!("2 + {excess}")
        }
    }

    pub fn sign(&self) -> Sign {
        self.num.sign()
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Serialized as its canonical `a/b` string.
impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse(n)?, parse(d)?),
            None => Ok(Rational::from_integer(parse(s)?)),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Rational {
    /// `self ± rhs` by Knuth's method: the gcd is taken between the
    /// denominators first, so a small denominator keeps every gcd small.
    fn add_signed(&self, rhs: &Rational, negate: bool) -> Rational {
        let c = if negate { -&rhs.num } else { rhs.num.clone() };
        let g = gcd(self.den.magnitude(), rhs.den.magnitude());
        if g.is_one() {
            return Rational { num: &self.num * &rhs.den + c * &self.den, den: &self.den * &rhs.den };
        }
        let g = BigInt::from(g);
        let t = &self.num * (&rhs.den / &g) + c * (&self.den / &g);
        if t.is_zero() {
            return Rational::zero();
        }
        let g2 = BigInt::from(gcd(t.magnitude(), g.magnitude()));
        Rational { num: t / &g2, den: (&self.den / &g) * (&rhs.den / &g2) }
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn add(self, rhs: &'a Rational) -> Rational {
        self.add_signed(rhs, false)
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn sub(self, rhs: &'a Rational) -> Rational {
        self.add_signed(rhs, true)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn mul(self, rhs: &'a Rational) -> Rational {
        if self.is_zero() || rhs.is_zero() {
            return Rational::zero();
        }
        let g1 = BigInt::from(gcd(self.num.magnitude(), rhs.den.magnitude()));
        let g2 = BigInt::from(gcd(rhs.num.magnitude(), self.den.magnitude()));
        Rational {
            num: (&self.num / &g1) * (&rhs.num / &g2),
            den: (&self.den / &g2) * (&rhs.den / &g1),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational { (&self).$m(rhs) }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}
