//! Integer helpers shared by every engine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Extended gcd with a non-negative gcd: returns (g, s, t) with s*a + t*b = g.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// lcm with the convention lcm(0, x) = 0.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b)
}

/// Least non-negative residue; `m == 0` means no reduction.
pub fn modp(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        a.clone()
    } else {
        a.mod_floor(m)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, s, _) = xgcd(&modp(a, m), m);
    if g.is_one() {
        Some(modp(&s, m))
    } else {
        None
    }
}

/// Deterministic primality test: trial division for small values, then
/// Miller-Rabin with the first twelve prime bases, which is a proof below
/// 3.3e24 and a strong probable-prime test above.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &big(2) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigInt::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'base: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division; fine for the small moduli used here.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = big(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// If `m = p^e` with `e >= 1`, returns `(p, e)`.
pub fn prime_power(m: &BigInt) -> Option<(BigInt, u32)> {
    let f = factor(m);
    if f.len() == 1 {
        Some(f[0].clone())
    } else {
        None
    }
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn pow(b: &BigInt, e: u64) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

pub fn to_usize(a: &BigInt) -> Option<usize> {
    a.to_usize()
}

/// Euler phi via the factorization.
pub fn totient(m: &BigInt) -> BigInt {
    let mut r = m.abs();
    for (p, _) in factor(m) {
        r = r / &p * (&p - 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<i64> = (0..60).filter(|&n| is_prime(&big(n))).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(&big(1_000_000_007)));
        assert!(!is_prime(&big(561)));
        assert!(!is_prime(&(big(1_000_000_007) * big(998_244_353))));
    }

    #[test]
    fn xgcd_signs() {
        let (g, s, t) = xgcd(&big(-4), &big(6));
        assert_eq!(g, big(2));
        assert_eq!(s * big(-4) + t * big(6), big(2));
    }

    #[test]
    fn factors_and_binomials() {
        assert_eq!(factor(&big(360)), vec![(big(2), 3), (big(3), 2), (big(5), 1)]);
        assert_eq!(prime_power(&big(8)), Some((big(2), 3)));
        assert_eq!(prime_power(&big(12)), None);
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(3, 4), big(0));
        assert_eq!(totient(&big(12)), big(4));
    }
}
