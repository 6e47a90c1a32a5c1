//! Unit images modulo primes and the sieve statistics built on them.
//!
//! `f(p)` is the order of the image of `O_K^×` in `(O_K/p)^×`. Everything
//! here works on residues in machine words; elements of `K` only appear when
//! a unit representative has to be materialized.

mod panel;

pub use panel::{
    admissible_e_ideals, admissible_primes, large_sieve_panel, omega_p, sieve_heart_check, z_alpha, z_beta, z_beta_bruteforce, z_beta_bruteforce_all,
    LargeSieveReport, PanelReport, PrimeData, PrimeStats, SievePanel,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factor, lcm_u64};
use crate::error::{Error, Result};
use crate::ideals::{factor_prime, FractionalIdeal, PrimeIdeal};
use crate::quadratic_field::{AlgInt, FieldElem, QuadraticField};
use crate::residue::{Residue, ResidueField};

/// Image of the unit group in `(O_K/p)^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitImage {
    pub p: PrimeIdeal,
    pub f: u64,
    pub surjective: bool,
    /// Order of the torsion generator mod `p`.
    pub torsion_order: u64,
    /// Order of the fundamental unit mod `p` (real fields only).
    pub epsilon_order: Option<u64>,
}

pub fn unit_image(k: &QuadraticField, p: &PrimeIdeal) -> UnitImage {
    let r = ResidueField::new(k, p);
    unit_image_in(k, p, &r)
}

/// `f(p)` together with surjectivity.
pub fn f_p(k: &QuadraticField, p: &PrimeIdeal) -> UnitImage {
    unit_image(k, p)
}

fn unit_image_in(k: &QuadraticField, p: &PrimeIdeal, r: &ResidueField) -> UnitImage {
    let torsion_order = r.order(r.reduce(k.torsion_generator()));
    let epsilon_order = k.fundamental_unit().ok().map(|e| r.order(r.reduce(e)));
    let f = lcm_u64(torsion_order, epsilon_order.unwrap_or(1));
    UnitImage { p: p.clone(), f, surjective: f == r.unit_group_order(), torsion_order, epsilon_order }
}

/// A representative `ζ^j·ε^i` of one residue class in the unit image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct UnitRep {
    pub residue: Residue,
    pub torsion_power: u64,
    pub epsilon_power: u64,
}

impl UnitRep {
    pub fn materialize(&self, k: &QuadraticField) -> AlgInt {
        let z = k.pow(k.torsion_generator(), self.torsion_power);
        match k.fundamental_unit() {
            Ok(e) => k.mul(&z, &k.pow(e, self.epsilon_power)),
            Err(_) => z,
        }
    }
}

/// `U(p)`: one unit per residue class of the unit image, ordered by residue.
/// Each class keeps the unit with the least `(ε-exponent, ζ-exponent)`.
pub fn unit_representatives(k: &QuadraticField, p: &PrimeIdeal, r: &ResidueField) -> Vec<UnitRep> {
    let img = unit_image_in(k, p, r);
    let zeta = r.reduce(k.torsion_generator());
    let eps = k.fundamental_unit().map(|e| r.reduce(e)).unwrap_or_else(|_| r.one());
    let mut seen: BTreeMap<Residue, UnitRep> = BTreeMap::new();
    let mut e_pow = r.one();
    for i in 0..img.epsilon_order.unwrap_or(1) {
        let mut acc = e_pow;
        for j in 0..img.torsion_order {
            seen.entry(acc).or_insert(UnitRep { residue: acc, torsion_power: j, epsilon_power: i });
            acc = r.mul(acc, zeta);
        }
        e_pow = r.mul(e_pow, eps);
    }
    debug_assert_eq!(seen.len() as u64, img.f);
    seen.into_values().collect()
}

/// `f_M(p)`: size of the image in `O_K/p` of the monoid generated by `gens`.
pub fn f_monoid(k: &QuadraticField, p: &PrimeIdeal, gens: &[AlgInt]) -> Result<u64> {
    let r = ResidueField::new(k, p);
    let mut f = 1;
    for g in gens {
        let x = r.reduce(g);
        if r.is_zero(x) {
            return Err(Error::GeneratorInPrime(format!("{g} lies in {p}")));
        }
        // finite monoid of a cyclic group: the subgroup of order lcm of orders
        f = lcm_u64(f, r.order(x));
    }
    Ok(f)
}

/// Decides whether no nontrivial integer relation `∏ x_i^{a_i} = 1` holds.
pub fn multiplicatively_independent(k: &QuadraticField, xs: &[FieldElem]) -> Result<bool> {
    if xs.iter().any(FieldElem::is_zero) {
        return Err(Error::Hypothesis("zero has no multiplicative relations".into()));
    }
    // valuation vectors over every prime dividing some x_i
    let mut rational = std::collections::BTreeSet::new();
    for x in xs {
        for n in [k.norm(&x.num).abs(), x.den.clone()] {
            let n = n.to_u64().filter(|&v| v <= 1_000_000_000_000).ok_or_else(|| Error::Hypothesis(format!("norm of {x} too large to factor")))?;
            rational.extend(factor(n).into_iter().map(|(q, _)| q));
        }
    }
    let mut primes = Vec::new();
    for q in rational {
        primes.extend(factor_prime(q, k)?.into_iter().map(|(p, _)| p));
    }
    let ideals: Vec<FractionalIdeal> = xs.iter().map(|x| k.principal_ideal(x)).collect::<Result<_>>()?;
    let matrix: Vec<Vec<BigRational>> = primes
        .iter()
        .map(|p| ideals.iter().map(|i| BigRational::from_integer(BigInt::from(k.valuation(i, p)))).collect())
        .collect();
    let kernel = kernel_basis(matrix, xs.len());
    match kernel.len() {
        0 => Ok(true),
        1 if k.is_real() => {
            let a = &kernel[0];
            let mut u = FieldElem::one();
            for (x, e) in xs.iter().zip(a) {
                u = k.elem_mul(&u, &k.elem_pow(x, e.to_i64().ok_or_else(|| Error::Hypothesis("relation too large".into()))?)?);
            }
            Ok(!(u == FieldElem::one() || u == FieldElem::one().neg()))
        }
        _ => Ok(false),
    }
}

/// Integer basis of the rational kernel of an `m × n` matrix.
fn kernel_basis(mut m: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, pr);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..n {
                    let sub = &factor * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); n];
            v[fc] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            let l = v.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// One row of the Gupta–Murty scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuptaMurtyRow {
    pub y: u64,
    pub count: u64,
    /// Heuristic reference `y^2` (one independent generator).
    pub y_squared: u128,
}

/// For each `y`, the number of prime ideals with `Nm(p) <= x_bound` and
/// `f(p) <= y`.
pub fn gupta_murty_scan(k: &QuadraticField, x_bound: u64, y_grid: &[u64]) -> Result<Vec<GuptaMurtyRow>> {
    if !k.is_real() {
        return Err(Error::ImaginaryField(k.d()));
    }
    let mut fs: Vec<u64> = k.primes_up_to(x_bound).iter().map(|p| f_p(k, p).f).collect();
    fs.sort_unstable();
    Ok(y_grid
        .iter()
        .map(|&y| GuptaMurtyRow { y, count: fs.partition_point(|&f| f <= y) as u64, y_squared: (y as u128) * (y as u128) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_field::make_field;

    fn prime_with_root(k: &QuadraticField, p: u64, root: u64) -> PrimeIdeal {
        factor_prime(p, k).unwrap().into_iter().map(|x| x.0).find(|q| q.omega_root() == Some(root)).unwrap()
    }

    #[test]
    fn unit_image_fixtures() {
        let k = make_field(10).unwrap();
        let img = f_p(&k, &prime_with_root(&k, 13, 6));
        assert_eq!((img.f, img.surjective), (6, false));
        let k = make_field(2).unwrap();
        let img = f_p(&k, &prime_with_root(&k, 7, 3));
        assert_eq!((img.f, img.surjective), (6, true));
    }

    #[test]
    fn unit_representatives_cover_image() {
        let k = make_field(10).unwrap();
        let p = prime_with_root(&k, 13, 6);
        let r = ResidueField::new(&k, &p);
        let reps = unit_representatives(&k, &p, &r);
        assert_eq!(reps.len(), 6);
        for u in &reps {
            assert_eq!(r.reduce(&u.materialize(&k)), u.residue);
        }
    }

    #[test]
    fn monoid_images() {
        let k = make_field(10).unwrap();
        let p = prime_with_root(&k, 13, 6);
        let eps = k.fundamental_unit().unwrap().clone();
        assert_eq!(f_monoid(&k, &p, &[AlgInt::one()]).unwrap(), 1);
        assert_eq!(f_monoid(&k, &p, &[eps.clone(), AlgInt::from_int(-1)]).unwrap(), 6);
        // ⟨9, 7⟩ mod 13: 7 is a primitive root
        assert_eq!(f_monoid(&k, &p, &[eps, AlgInt::new(1, 1)]).unwrap(), 12);
        assert!(f_monoid(&k, &p, &[AlgInt::new(-6, 1)]).is_err());
    }

    #[test]
    fn independence_examples() {
        let k = make_field(10).unwrap();
        let eps = FieldElem::integral(k.fundamental_unit().unwrap().clone());
        let eps2 = k.elem_mul(&eps, &eps);
        assert!(multiplicatively_independent(&k, &[eps.clone()]).unwrap());
        assert!(!multiplicatively_independent(&k, &[FieldElem::from_int(-1)]).unwrap());
        assert!(!multiplicatively_independent(&k, &[eps.clone(), eps2]).unwrap());
        assert!(multiplicatively_independent(&k, &[eps.clone(), FieldElem::from_int(2)]).unwrap());
        assert!(!multiplicatively_independent(&k, &[FieldElem::from_int(4), FieldElem::new(AlgInt::one(), 2)]).unwrap());
        let gi = make_field(-1).unwrap();
        assert!(!multiplicatively_independent(&gi, &[FieldElem::integral(AlgInt::new(0, 1))]).unwrap());
        assert!(multiplicatively_independent(&gi, &[FieldElem::integral(AlgInt::new(1, 1))]).unwrap());
    }

    #[test]
    fn gupta_murty_monotone() {
        let k = make_field(2).unwrap();
        let rows = gupta_murty_scan(&k, 2000, &[1, 10, 100, 2000]).unwrap();
        assert!(rows.windows(2).all(|w| w[0].count <= w[1].count));
        assert_eq!(rows[3].count, k.primes_up_to(2000).len() as u64);
        assert!(gupta_murty_scan(&make_field(-5).unwrap(), 10, &[1]).is_err());
    }
}
