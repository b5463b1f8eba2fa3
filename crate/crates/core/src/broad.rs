//! k-broad exponents `p_n(k) = 2 + 6 / (2(n-1) + (k-1) Π_{i=k}^{n-1} 2i/(2i+1))`.
//!
//! The product is computed two ways: directly as a product of the dyadic
//! factors, and from the factorial form
//! `4^(n-k) ((n-1)!/(k-1)!)^2 (2k-1)!/(2n-1)!`. The factorial form is
//! assembled from Legendre prime valuations, which yields the fraction
//! already in lowest terms and keeps dimensions in the 10^5 range cheap.
//! The two routes are compared by cross multiplication on every call.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{gcd, Rational};
use crate::primes;

/// Outcome of the squared telescoping bounds
/// `k²(2n+1)/((2k+1)n²) ≤ Π² ≤ k/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsCertificate {
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundsCertificate {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BroadExponent {
    pub n: u32,
    pub k: u32,
    /// `Π_{i=k}^{n-1} 2i/(2i+1)`.
    pub product: Rational,
    pub p: Rational,
    /// Product form and factorial form agree exactly.
    pub forms_agree: bool,
    /// `None` when `k = n`, outside the range where the bounds are stated.
    pub bounds: Option<BoundsCertificate>,
}

impl BroadExponent {
    /// `k = n` lies outside `2 ≤ k ≤ n-1` but is admitted as an empty product.
    pub fn is_boundary(&self) -> bool {
        self.k == self.n
    }

    pub fn certified(&self) -> bool {
        self.forms_agree && self.bounds.is_none_or(|b| b.holds())
    }
}

fn check_range(k: u32, n: u32) -> Result<()> {
    if k < 2 || n < 2 {
        return Err(Error::domain(format!("need k >= 2 and n >= 2, got k = {k}, n = {n}")));
    }
    if k > n {
        return Err(Error::domain(format!("need k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// Unreduced numerator `Π 2i` and denominator `Π (2i+1)` over `k ≤ i < n`.
#[derive(Clone, Debug)]
pub(crate) struct DyadicFactors {
    pub num: BigUint,
    pub den: BigUint,
}

impl DyadicFactors {
    pub(crate) fn new(k: u32, n: u32) -> Self {
        let range = k as u64..n as u64;
        DyadicFactors {
            num: primes::product_u64(range.clone().map(|i| 2 * i)),
            den: primes::product_u64(range.map(|i| 2 * i + 1)),
        }
    }

    /// Same as `new(k - 1, n)` derived from `new(k, n)` by one more factor.
    pub(crate) fn extend_down(&self, k: u32) -> Self {
        let i = (k - 1) as u64;
        DyadicFactors { num: &self.num * (2 * i), den: &self.den * (2 * i + 1) }
    }
}

/// `Π_{i=k}^{n-1} 2i/(2i+1)` by direct multiplication; `1` when `k = n`.
pub fn dyadic_product(k: u32, n: u32) -> Result<Rational> {
    check_range(k, n)?;
    let f = DyadicFactors::new(k, n);
    Rational::new(BigInt::from(f.num), BigInt::from(f.den))
}

/// The same product through `4^(n-k) ((n-1)!/(k-1)!)^2 (2k-1)!/(2n-1)!`,
/// returned in lowest terms without a gcd pass.
pub fn dyadic_product_factorial(k: u32, n: u32) -> Result<Rational> {
    check_range(k, n)?;
    let (k, n) = (k as u64, n as u64);
    let mut num = Vec::new();
    let mut den = Vec::new();
    for p in primes::primes_up_to(2 * n - 1) {
        let mut e = 2 * (primes::legendre(n - 1, p) as i64 - primes::legendre(k - 1, p) as i64)
            + primes::legendre(2 * k - 1, p) as i64
            - primes::legendre(2 * n - 1, p) as i64;
        if p == 2 {
            e += 2 * (n - k) as i64;
        }
        match e.signum() {
            1 => num.push(num_traits::pow(BigUint::from(p), e as usize)),
            -1 => den.push(num_traits::pow(BigUint::from(p), (-e) as usize)),
            _ => {}
        }
    }
    Ok(Rational::from_coprime_parts(
        BigInt::from(primes::product(num)),
        BigInt::from(primes::product(den)),
    ))
}

/// `2 + 6 / (2(n-1) + (k-1)·product)` for a product given in lowest terms.
///
/// With `product = a/b` the excess is `6b / (2(n-1)b + (k-1)a)`, whose
/// numerator/denominator gcd divides `6·gcd(b, k-1)`.
pub(crate) fn exponent_from_product(n: u32, k: u32, product: &Rational) -> Rational {
    let (a, b) = (product.numer(), product.denom());
    let km1 = BigUint::from(k - 1);
    let d = BigInt::from(2 * (n as u64 - 1)) * b + BigInt::from(k - 1) * a;
    let hint = gcd(&(b.magnitude() % &km1), &km1) * 6u32;
    let excess = Rational::from_parts_with_divisor_hint(BigInt::from(6u8) * b, d, &hint)
        .expect("denominator is positive");
    excess.add_integer(&BigInt::from(2u8))
}

fn bounds_for(n: u32, k: u32, product: &Rational) -> BoundsCertificate {
    let (a, b) = (product.numer(), product.denom());
    let (a2, b2) = (a * a, b * b);
    let (n, k) = (BigInt::from(n), BigInt::from(k));
    let one = BigInt::one();
    let two = BigInt::from(2u8);
    // k²(2n+1)/((2k+1)n²) ≤ a²/b²
    let lower_ok = &k * &k * (&two * &n + &one) * &b2 <= (&two * &k + &one) * &n * &n * &a2;
    // a²/b² ≤ k/n
    let upper_ok = &n * &a2 <= &k * &b2;
    BoundsCertificate { lower_ok, upper_ok }
}

/// Squared telescoping bounds on the dyadic product, for `2 ≤ k ≤ n-1`.
pub fn appendix_product_bounds(n: u32, k: u32) -> Result<BoundsCertificate> {
    check_range(k, n)?;
    if k >= n {
        return Err(Error::domain(format!("bounds need k <= n - 1, got k = {k}, n = {n}")));
    }
    Ok(bounds_for(n, k, &dyadic_product_factorial(k, n)?))
}

/// `(2i+1)/(2i+3) ≥ (2i/(2i+1))·(2(i+1)/(2i+3)) ≥ i/(i+1)`, checked exactly.
pub fn chain_inequality_check(i: u64) -> bool {
    if i == 0 {
        return false;
    }
    let i = i as i64;
    let left = Rational::ratio(2 * i + 1, 2 * i + 3);
    let middle = &Rational::ratio(2 * i, 2 * i + 1) * &Rational::ratio(2 * (i + 1), 2 * i + 3);
    let right = Rational::ratio(i, i + 1);
    left >= middle && middle >= right
}

/// The k-broad exponent with both closed forms cross-checked.
pub fn p_broad(n: u32, k: u32) -> Result<BroadExponent> {
    check_range(k, n)?;
    let direct = DyadicFactors::new(k, n);
    let product = dyadic_product_factorial(k, n)?;
    let forms_agree = BigInt::from(direct.num) * product.denom() == BigInt::from(direct.den) * product.numer();
    let bounds = (k < n).then(|| bounds_for(n, k, &product));
    let p = exponent_from_product(n, k, &product);
    Ok(BroadExponent { n, k, product, p, forms_agree, bounds })
}

/// Exact `p_broad(n, k) ≤ 2 + 4/(2n - k)` decided from unreduced factors.
pub(crate) fn broad_at_most_limit(n: u32, k: u32, f: &DyadicFactors) -> bool {
    // 6/(2(n-1) + (k-1)A/B) ≤ 4/(2n-k)  ⇔  A·2(k-1) ≥ B·(2n-3k+4)
    let rhs = 2 * n as i64 - 3 * k as i64 + 4;
    if rhs <= 0 {
        return true;
    }
    BigInt::from(&f.num * (2 * (k as u64 - 1))) >= BigInt::from(&f.den * rhs as u64)
}

/// Exact ordering of `p_broad(n, k)` against `2 + 4/(2n - k')`.
pub(crate) fn compare_broad_limit(n: u32, k: u32, f: &DyadicFactors, k_limit: u32) -> std::cmp::Ordering {
    // 6B/(2(n-1)B + (k-1)A)  vs  4/(2n-k')
    let lhs = BigInt::from(&f.den * 6u32) * BigInt::from(2 * n as i64 - k_limit as i64);
    let rhs = (BigInt::from(&f.den * (2 * (n as u64 - 1))) + BigInt::from(&f.num * (k as u64 - 1))) * 4;
    lhs.cmp(&rhs)
}
