//! Cyclic class groups by Minkowski-bound enumeration.
//!
//! Classes are discovered as products of small prime ideals and separated by
//! principality tests; the group is accepted only when some class has order
//! `h`, and the generator is then the least-norm prime ideal of order `h`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{factor_prime, FractionalIdeal, IntegralIdeal, PrimeIdeal};
use crate::arith::{isqrt, primes_up_to};
use crate::error::{Error, Result};
use crate::quadratic_field::QuadraticField;

/// A class written as `generator^k`, `0 <= k < h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealClass(pub u64);

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroup {
    d: i64,
    h: u64,
    generator: PrimeIdeal,
    /// `conj(generator)^k` for `k < h`; these lie in class `-k`.
    inverse_powers: Vec<IntegralIdeal>,
}

impl ClassGroup {
    pub fn compute(k: &QuadraticField) -> Result<ClassGroup> {
        let disc = BigInt::from(k.disc().unsigned_abs());
        let root = isqrt(&disc) + 1;
        // Minkowski: sqrt|D|/2 (real), (2/π)·sqrt|D| < 0.7·sqrt|D| (imaginary)
        let bound: BigInt = if k.is_real() { &root / 2 + 1 } else { &root * 7 / 10 + 1 };
        let bound = bound.to_u64().expect("desk-scale discriminant");
        let small_primes = k.primes_up_to(bound.max(2));

        let mut reps = vec![IntegralIdeal::unit()];
        for prime in &small_primes {
            let mut i = 0;
            while i < reps.len() {
                let cand = k.ideal_mul(&reps[i], prime.ideal());
                if !reps.iter().any(|r| same_class(k, &cand, r)) {
                    reps.push(cand);
                }
                i += 1;
            }
        }
        let h = reps.len() as u64;
        if !reps.iter().any(|r| class_order(k, r, h) == h) {
            return Err(Error::NonCyclicClassGroup { d: k.d(), h });
        }
        let generator = find_generator(k, h, &small_primes);
        let conj = k.ideal_conj(generator.ideal());
        let mut inverse_powers = vec![IntegralIdeal::unit()];
        for i in 1..h as usize {
            let next = k.ideal_mul(&inverse_powers[i - 1], &conj);
            inverse_powers.push(next);
        }
        Ok(ClassGroup { d: k.d(), h, generator, inverse_powers })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// The class number `h_K`.
    pub fn order(&self) -> u64 {
        self.h
    }

    pub fn generator(&self) -> &PrimeIdeal {
        &self.generator
    }

    pub fn add(&self, x: IdealClass, y: IdealClass) -> IdealClass {
        IdealClass((x.0 + y.0) % self.h)
    }

    pub fn neg(&self, x: IdealClass) -> IdealClass {
        IdealClass((self.h - x.0) % self.h)
    }

    pub fn mul_scalar(&self, x: IdealClass, n: i64) -> IdealClass {
        IdealClass((x.0 as i128 * n as i128).rem_euclid(self.h as i128) as u64)
    }

    /// Order of a class in the cyclic group.
    pub fn class_order(&self, x: IdealClass) -> u64 {
        self.h / num_integer::gcd(self.h, x.0)
    }

    pub fn generates(&self, x: IdealClass) -> bool {
        self.class_order(x) == self.h
    }

    pub fn ideal_class_integral(&self, k: &QuadraticField, ideal: &IntegralIdeal) -> IdealClass {
        if self.h == 1 {
            return IdealClass(0);
        }
        for (e, inv) in self.inverse_powers.iter().enumerate() {
            if k.is_principal_integral(&k.ideal_mul(ideal, inv)) {
                return IdealClass(e as u64);
            }
        }
        unreachable!("every ideal lies in some class of a cyclic group of order {}", self.h)
    }

    /// The exponent `k` with `I ~ generator^k`.
    pub fn ideal_class(&self, k: &QuadraticField, ideal: &FractionalIdeal) -> IdealClass {
        self.ideal_class_integral(k, ideal.num())
    }
}

fn same_class(k: &QuadraticField, x: &IntegralIdeal, y: &IntegralIdeal) -> bool {
    // y^{-1} ~ conj(y)
    k.is_principal_integral(&k.ideal_mul(x, &k.ideal_conj(y)))
}

fn class_order(k: &QuadraticField, x: &IntegralIdeal, h: u64) -> u64 {
    let mut acc = x.clone();
    for j in 1..=h {
        if k.is_principal_integral(&acc) {
            return j;
        }
        acc = k.ideal_mul(&acc, x);
    }
    unreachable!("class order divides h")
}

fn find_generator(k: &QuadraticField, h: u64, small: &[PrimeIdeal]) -> PrimeIdeal {
    if let Some(p) = small.iter().find(|p| class_order(k, p.ideal(), h) == h) {
        return p.clone();
    }
    // every class holds infinitely many primes; keep scanning past the bound
    let start = small.iter().map(|p| p.p()).max().unwrap_or(1);
    let mut limit = start.max(64);
    loop {
        for p in primes_up_to(limit * 4).into_iter().filter(|&p| p > limit) {
            for (q, _) in factor_prime(p, k).expect("prime") {
                if class_order(k, q.ideal(), h) == h {
                    return q;
                }
            }
        }
        limit *= 4;
    }
}
