//! Prime sieve, Legendre valuations and balanced product trees.

use num_bigint::BigUint;
use num_traits::One;

pub(crate) fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Exponent of the prime `p` in `m!`.
pub(crate) fn legendre(m: u64, p: u64) -> u64 {
    let mut e = 0;
    let mut q = m / p;
    while q > 0 {
        e += q;
        q /= p;
    }
    e
}

/// Product of all values, multiplied pairwise in a balanced tree.
pub(crate) fn product(mut values: Vec<BigUint>) -> BigUint {
    if values.is_empty() {
        return BigUint::one();
    }
    while values.len() > 1 {
        let mut next = Vec::with_capacity(values.len().div_ceil(2));
        let mut it = values.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        values = next;
    }
    values.pop().expect("nonempty")
}

/// Product of small integers, batched into machine words before the tree.
pub(crate) fn product_u64(values: impl IntoIterator<Item = u64>) -> BigUint {
    let mut limbs = Vec::new();
    let mut acc: u128 = 1;
    for v in values {
        match acc.checked_mul(v as u128) {
            Some(x) if x < (1u128 << 64) => acc = x,
            _ => {
                limbs.push(BigUint::from(acc));
                acc = v as u128;
            }
        }
    }
    limbs.push(BigUint::from(acc));
    product(limbs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn legendre_matches_factorial() {
        // 10! = 2^8 3^4 5^2 7
        assert_eq!(legendre(10, 2), 8);
        assert_eq!(legendre(10, 3), 4);
        assert_eq!(legendre(10, 5), 2);
        assert_eq!(legendre(10, 7), 1);
        assert_eq!(legendre(10, 11), 0);
    }

    #[test]
    fn products() {
        assert_eq!(product_u64(1..=20), BigUint::from(2432902008176640000u64));
        assert_eq!(product_u64(std::iter::empty()), BigUint::one());
        let big = product_u64((1..=30).map(|_| u32::MAX as u64));
        assert_eq!(big, num_traits::pow(BigUint::from(u32::MAX), 30));
    }
}
