//! Word-sized modular arithmetic and small prime utilities.
//!
//! Residues modulo rational primes below 2^32 fit comfortably in `u64` with
//! `u128` products; everything that can grow (elements, norms, units) lives in
//! `BigInt` elsewhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a big integer into `[0, m)`.
pub fn big_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime factors of `a * b` for word-sized `a`, `b`.
pub fn prime_divisors_of_product(a: u64, b: u64) -> Vec<u64> {
    let mut ps: Vec<u64> = factor(a).into_iter().chain(factor(b)).map(|(p, _)| p).collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Sieve of Eratosthenes: all primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Kronecker symbol `(a | p)` for a prime `p`.
pub fn kronecker(a: &BigInt, p: u64) -> i32 {
    if p == 2 {
        if a.is_even() {
            return 0;
        }
        let r = big_mod(a, 8);
        return if r == 1 || r == 7 { 1 } else { -1 };
    }
    let r = big_mod(a, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue `a` modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Largest integer whose square is `<= n` (n >= 0).
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    if n.is_zero() {
        return BigInt::zero();
    }
    num_integer::Roots::sqrt(n)
}

/// `Some(r)` when `n = r^2` with `r >= 0`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt(n);
    (&r * &r == *n).then_some(r)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_all_residues() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in 0..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a),
                    None => assert!((0..p).all(|r| mul_mod(r, r, p) != a)),
                }
            }
        }
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let ps = primes_up_to(10_000);
        for n in 0..=10_000u64 {
            assert_eq!(is_prime(n), ps.binary_search(&n).is_ok(), "n = {n}");
        }
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297));
    }

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(&BigInt::from(2), 7), 1);
        assert_eq!(kronecker(&BigInt::from(2), 3), -1);
        assert_eq!(kronecker(&BigInt::from(40), 2), 0);
        assert_eq!(kronecker(&BigInt::from(-15), 2), 1);
        assert_eq!(kronecker(&BigInt::from(5), 2), -1);
    }

    #[test]
    fn factor_roundtrip() {
        for n in 1..2000u64 {
            let prod: u64 = factor(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
    }
}
