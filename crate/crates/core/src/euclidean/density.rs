use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{descent_target_inv, generates_module, witness_box, EIdeal};
use crate::arith::{exact_sqrt, is_prime};
use crate::error::{Error, Result};
use crate::ideals::{IntegralIdeal, PrimeIdeal};
use crate::quadratic_field::{AlgInt, FieldElem, QuadraticField};

/// Distinct primes `q = (x + y)·I^{-1}·C^{-1}` found in the search, each with
/// the first `y` that produced it.
#[derive(Clone, Debug)]
pub struct DensityReport {
    pub count: usize,
    pub witnesses: Vec<(AlgInt, PrimeIdeal)>,
}

/// Counts prime ideals `q` with `Nm(q) <= x_bound` of the form
/// `(x + y)·I^{-1}·C^{-1}`, `y ∈ C` of height at most `height`.
pub fn similar_density(
    k: &QuadraticField,
    x: &FieldElem,
    i: &EIdeal,
    c: &IntegralIdeal,
    x_bound: u64,
    height: u64,
) -> Result<DensityReport> {
    if !generates_module(k, x, i, c)? {
        return Err(Error::Hypothesis(format!("({x}) + C is not IC")));
    }
    let scale = &x.den * &x.den * c.norm();
    let norm_inv = i.norm_inv();
    let mut found: BTreeMap<IntegralIdeal, (AlgInt, PrimeIdeal)> = BTreeMap::new();
    for y in witness_box(c, height) {
        let num = &x.num + &y.scale(&x.den);
        if num.is_zero() {
            continue;
        }
        let (q, r) = (k.norm(&num).abs() * &norm_inv).div_rem(&scale);
        if !r.is_zero() || q > BigInt::from(x_bound) || !prime_power_norm(&q) {
            continue;
        }
        let z = FieldElem::new(num, x.den.clone());
        let target = descent_target_inv(k, &z, i.inv(), c)?;
        if found.contains_key(&target) {
            continue;
        }
        if let Some(p) = PrimeIdeal::from_ideal(k, &target) {
            found.insert(target, (y, p));
        }
    }
    let witnesses: Vec<_> = found.into_values().collect();
    Ok(DensityReport { count: witnesses.len(), witnesses })
}

fn prime_power_norm(n: &BigInt) -> bool {
    let Some(v) = n.to_u64() else { return false };
    if is_prime(v) {
        return true;
    }
    exact_sqrt(n).and_then(|r| r.to_u64()).is_some_and(is_prime)
}
