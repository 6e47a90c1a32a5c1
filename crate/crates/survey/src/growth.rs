use std::collections::BTreeMap;
use std::path::Path;

use euclid_core::euclidean::{witness_box, EIdeal};
use euclid_core::ideals::{FractionalIdeal, IntegralIdeal, PrimeIdeal};
use euclid_core::quadratic_field::FieldElem;
use euclid_core::residue::ResidueField;
use euclid_core::sieve::f_p;
use euclid_core::arith::{exact_sqrt, is_prime};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::SurveyResult;
use crate::scan::{scan, ScanRecord};
use crate::Survey;

/// One grid point. Reference columns are heuristic shapes, not claims.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub x: u64,
    pub b1_count: u64,
    pub b2_lower_bound: Option<u64>,
    pub heuristic_reference_x_over_log2_x: String,
    pub heuristic_reference_x_over_h_log_x: String,
    pub ratio_b1_to_x_over_log2_x: String,
    pub ratio_b2_to_x_over_h_log_x: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub d: i64,
    pub c: String,
    pub h: u64,
    pub height: Option<u64>,
    pub rows: Vec<GrowthRow>,
}

impl GrowthReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).expect("rows serialize");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn row(x: u64, h: u64, b1: u64, b2: Option<u64>) -> GrowthRow {
    let lx = (x.max(2) as f64).ln();
    let r1 = x as f64 / (lx * lx);
    let r2 = x as f64 / (h as f64 * lx);
    GrowthRow {
        x,
        b1_count: b1,
        b2_lower_bound: b2,
        heuristic_reference_x_over_log2_x: fmt6(r1),
        heuristic_reference_x_over_h_log_x: fmt6(r2),
        ratio_b1_to_x_over_log2_x: fmt6(b1 as f64 / r1),
        ratio_b2_to_x_over_h_log_x: b2.map(|b| fmt6(b as f64 / r2)),
    }
}

/// Norms of the `B_{1,C}` primes among the records, ascending.
fn b1_norms(s: &Survey, records: &[ScanRecord]) -> Vec<u64> {
    let mut v: Vec<u64> = records.iter().flat_map(|r| r.entries.iter()).filter(|e| e.b1_member(s)).map(|e| e.norm).collect();
    v.sort_unstable();
    v
}

/// `|B_{1,C}(x)|` at each grid point.
pub fn b1_count(s: &Survey, grid: &[u64], jobs: usize, cache: Option<&Path>) -> SurveyResult<GrowthReport> {
    let x_max = grid.iter().copied().max().unwrap_or(0);
    let records = scan(s, x_max, jobs, cache)?;
    let norms = b1_norms(s, &records);
    let rows = grid.iter().map(|&x| row(x, s.g.order(), norms.partition_point(|&n| n <= x) as u64, None)).collect();
    Ok(GrowthReport { d: s.d(), c: s.c.to_string(), h: s.g.order(), height: None, rows })
}

/// Lower bound for `|B_{2,C}(x)|`: the `B_1` primes plus every prime whose
/// nonzero cosets all descend, with a witness of height `<= height`, into
/// `B_{1,C} ∪ {R}`.
pub fn b2_lower_bound(s: &Survey, grid: &[u64], height: u64, jobs: usize, cache: Option<&Path>) -> SurveyResult<GrowthReport> {
    let x_max = grid.iter().copied().max().unwrap_or(0);
    let records = scan(s, x_max, jobs, cache)?;
    let b1: BTreeMap<IntegralIdeal, bool> = records
        .iter()
        .flat_map(|r| r.entries.iter())
        .map(|e| (e.ideal(&s.k), e.b1_member(s)))
        .collect();
    let target_class = s.g.mul_scalar(s.c_class, 2);
    let candidates: Vec<(u64, PrimeIdeal)> = records
        .iter()
        .flat_map(|r| r.entries.iter())
        .filter(|e| e.norm <= x_max && !e.b1_member(s) && e.class == target_class.0)
        .map(|e| (e.norm, e.prime(&s.k)))
        .filter(|(_, p)| !s.divides_c(p))
        .collect();
    let run = || -> Vec<bool> { candidates.par_iter().map(|(_, p)| certify_b2(s, p, height, &b1)).collect() };
    let certified = if jobs <= 1 {
        candidates.iter().map(|(_, p)| certify_b2(s, p, height, &b1)).collect()
    } else {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map(|pool| pool.install(run)).unwrap_or_else(|_| run())
    };
    let b1 = b1_norms(s, &records);
    let mut norms = b1.clone();
    norms.extend(candidates.iter().zip(certified).filter(|(_, ok)| *ok).map(|((n, _), _)| *n));
    norms.sort_unstable();
    let rows = grid
        .iter()
        .map(|&x| row(x, s.g.order(), b1.partition_point(|&n| n <= x) as u64, Some(norms.partition_point(|&n| n <= x) as u64)))
        .collect();
    Ok(GrowthReport { d: s.d(), c: s.c.to_string(), h: s.g.order(), height: Some(height), rows })
}

/// Level-2 test for `p^{-1}`. The nonzero cosets of `p^{-1}C/C` are
/// `r·β_1` for `r ∈ (O_K/p)^×`, and descent is unit invariant, so only one
/// coset per unit orbit `g^i·β_1`, `0 <= i < (Nm(p) - 1)/f(p)`, is searched.
fn certify_b2(s: &Survey, p: &PrimeIdeal, height: u64, b1: &BTreeMap<IntegralIdeal, bool>) -> bool {
    let k = &s.k;
    let space = k.coset_space(&EIdeal::prime_inverse(p), &s.c);
    let Some(beta1) = space.outer().basis().into_iter().find(|b| !s.c.contains_elem(b)) else { return false };
    let field = ResidueField::new(k, p);
    let f = f_p(k, p).f;
    let orbits = field.unit_group_order() / f;
    let gen = field.primitive_element();
    let ys = witness_box(&s.c, height);
    let norm_c = s.c.norm();
    let norm_p = num_bigint::BigInt::from(p.norm());
    // I^{-1} of the target is (z)·p·C^{-1}
    let p_over_c = k.frac_mul(&FractionalIdeal::integral(p.ideal().clone()), &k.inverse(&s.c));
    let mut r = field.one();
    for _ in 0..orbits {
        let beta = space.reduce(&k.elem_mul(&FieldElem::integral(field.lift(r)), &beta1)).value;
        let den = &beta.den;
        let scale = den * den * &norm_c;
        let found = ys.iter().any(|y| {
            let num = &beta.num + &y.scale(den);
            if num.is_zero() {
                return false;
            }
            let nz = k.norm(&num).abs() * &norm_p;
            if !(&nz % &scale).is_zero() {
                return false;
            }
            let q = nz / &scale;
            if q == num_bigint::BigInt::from(1) {
                return s.g.ideal_class_integral(k, p.ideal()) == s.c_class;
            }
            if !prime_power(&q) {
                return false;
            }
            let z = FieldElem::new(num, den.clone());
            let Ok(zi) = k.principal_ideal(&z) else { return false };
            let Some(target) = k.frac_mul(&zi, &p_over_c).into_integral() else { return false };
            is_b1(s, &target, b1)
        });
        if !found {
            return false;
        }
        r = field.mul(r, gen);
    }
    true
}

fn prime_power(n: &num_bigint::BigInt) -> bool {
    let Some(v) = n.to_u64() else { return false };
    is_prime(v) || exact_sqrt(n).and_then(|r| r.to_u64()).is_some_and(is_prime)
}

fn is_b1(s: &Survey, q: &IntegralIdeal, known: &BTreeMap<IntegralIdeal, bool>) -> bool {
    if let Some(&b) = known.get(q) {
        return b;
    }
    let Some(prime) = PrimeIdeal::from_ideal(&s.k, q) else { return false };
    !s.divides_c(&prime) && s.g.ideal_class_integral(&s.k, q) == s.c_class && f_p(&s.k, &prime).surjective
}
