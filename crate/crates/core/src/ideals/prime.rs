use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{FractionalIdeal, IntegralIdeal};
use crate::arith::{big_mod, is_prime, kronecker, mul_mod, sqrt_mod};
use crate::error::{Error, Result};
use crate::quadratic_field::QuadraticField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitType::Split => "split",
            SplitType::Inert => "inert",
            SplitType::Ramified => "ramified",
        })
    }
}

/// A nonzero prime ideal of `O_K` lying over the rational prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    p: u64,
    residue_degree: u8,
    split: SplitType,
    hnf: IntegralIdeal,
}

impl PrimeIdeal {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u8 {
        self.residue_degree
    }

    pub fn split_type(&self) -> SplitType {
        self.split
    }

    pub fn ideal(&self) -> &IntegralIdeal {
        &self.hnf
    }

    /// `Nm(p) = p^f`.
    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_degree as u32)
    }

    /// For degree-one primes `(p, b + ω)`, the residue `r` with `ω ≡ r (mod p)`.
    pub fn omega_root(&self) -> Option<u64> {
        if self.residue_degree != 1 {
            return None;
        }
        let b = self.hnf.b().to_u64().expect("b < p");
        Some((self.p - b) % self.p)
    }

    /// Recognizes a prime ideal from its HNF.
    pub fn from_ideal(k: &QuadraticField, ideal: &IntegralIdeal) -> Option<PrimeIdeal> {
        let n = ideal.norm().to_u64()?;
        if ideal.c() == &BigInt::from(1) && is_prime(n) {
            let p = n;
            let split = if kronecker(&BigInt::from(k.disc()), p) == 0 { SplitType::Ramified } else { SplitType::Split };
            return Some(PrimeIdeal { p, residue_degree: 1, split, hnf: ideal.clone() });
        }
        let c = ideal.c().to_u64()?;
        if ideal.a() == &BigInt::from(1) && is_prime(c) && kronecker(&BigInt::from(k.disc()), c) == -1 {
            return Some(PrimeIdeal { p: c, residue_degree: 2, split: SplitType::Inert, hnf: ideal.clone() });
        }
        None
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hnf)
    }
}

/// Factors `(p)` into prime ideals by the Kronecker symbol `(disc | p)`.
/// The factors are returned in HNF order with their multiplicities.
pub fn factor_prime(p: u64, k: &QuadraticField) -> Result<Vec<(PrimeIdeal, u32)>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let disc = BigInt::from(k.disc());
    let (t, n) = k.omega_min_poly();
    let (t, n) = (big_mod(t, p), big_mod(n, p));
    let roots: Vec<u64> = if p == 2 {
        (0..2u64).filter(|&x| (x * x + 2 * 2 - t * x + n) % 2 == 0).collect()
    } else {
        // roots of X^2 - tX + n are (t ± sqrt(disc)) / 2
        let dm = big_mod(&disc, p);
        let s = sqrt_mod(dm, p).map(|s| vec![s, (p - s) % p]).unwrap_or_default();
        let half = (p + 1) / 2;
        let mut rs: Vec<u64> = s.into_iter().map(|s| mul_mod((t + s) % p, half, p)).collect();
        rs.sort_unstable();
        rs.dedup();
        rs
    };
    let prime_at = |root: u64, split| {
        let b = (p - root) % p;
        PrimeIdeal {
            p,
            residue_degree: 1,
            split,
            hnf: IntegralIdeal { a: p.into(), b: b.into(), c: 1.into() },
        }
    };
    let mut out = match (kronecker(&disc, p), roots.len()) {
        (1, 2) => vec![(prime_at(roots[0], SplitType::Split), 1), (prime_at(roots[1], SplitType::Split), 1)],
        (0, 1) => vec![(prime_at(roots[0], SplitType::Ramified), 2)],
        (-1, 0) => vec![(
            PrimeIdeal {
                p,
                residue_degree: 2,
                split: SplitType::Inert,
                hnf: IntegralIdeal { a: 1.into(), b: 0.into(), c: p.into() },
            },
            1,
        )],
        (kr, nr) => unreachable!("kronecker {kr} with {nr} roots mod {p}"),
    };
    out.sort_by(|x, y| x.0.hnf.cmp(&y.0.hnf));
    Ok(out)
}

impl QuadraticField {
    /// `v_p(I)`: the exponent of `p` in the factorization of `I`.
    pub fn valuation(&self, ideal: &FractionalIdeal, prime: &PrimeIdeal) -> i64 {
        self.valuation_integral(ideal.num(), prime) - self.valuation_rational(ideal.den(), prime)
    }

    fn valuation_rational(&self, n: &BigInt, prime: &PrimeIdeal) -> i64 {
        let p = BigInt::from(prime.p);
        let mut m = n.clone();
        let mut v = 0;
        while !m.is_zero() && (&m % &p).is_zero() {
            m /= &p;
            v += 1;
        }
        match prime.split {
            SplitType::Ramified => 2 * v,
            _ => v,
        }
    }

    fn valuation_integral(&self, ideal: &IntegralIdeal, prime: &PrimeIdeal) -> i64 {
        let mut v = self.valuation_rational(ideal.c(), prime);
        let mut j = ideal.primitive();
        let conj = self.ideal_conj(&prime.hnf);
        let norm = BigInt::from(prime.norm());
        while j.is_subset_of(&prime.hnf) {
            // j · p^{-1} = j · conj(p) / Nm(p)
            let next = FractionalIdeal::new(self.ideal_mul(&j, &conj), norm.clone());
            j = next.into_integral().expect("j ⊆ p");
            v += 1;
        }
        v
    }

    /// All prime ideals of norm `<= bound`, ordered by (norm, HNF).
    pub fn primes_up_to(&self, bound: u64) -> Vec<PrimeIdeal> {
        let mut out: Vec<PrimeIdeal> = crate::arith::primes_up_to(bound)
            .into_iter()
            .flat_map(|p| factor_prime(p, self).expect("prime").into_iter().map(|(q, _)| q))
            .filter(|q| q.norm() <= bound)
            .collect();
        out.sort_by(|x, y| (x.norm(), &x.hnf).cmp(&(y.norm(), &y.hnf)));
        out
    }
}
