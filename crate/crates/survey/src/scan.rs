use std::path::Path;

use euclid_core::arith::primes_up_to;
use euclid_core::ideals::{factor_prime, ClassGroup, IntegralIdeal, PrimeIdeal, SplitType};
use euclid_core::sieve::f_p;
use euclid_core::QuadraticField;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::ScanCache;
use crate::error::{SurveyError, SurveyResult};
use crate::Survey;

/// Data for one prime ideal above `p`. Independent of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealEntry {
    pub hnf: (u64, u64, u64),
    pub norm: u64,
    pub class: u64,
    pub f: u64,
    pub surjective: bool,
}

/// Everything the scan learns about one rational prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub p: u64,
    pub split: SplitType,
    pub entries: Vec<IdealEntry>,
}

pub fn compute_record(k: &QuadraticField, g: &ClassGroup, p: u64) -> ScanRecord {
    let factors = factor_prime(p, k).expect("scan only visits primes");
    let split = factors[0].0.split_type();
    let entries = factors
        .iter()
        .map(|(q, _)| {
            let img = f_p(k, q);
            let i = q.ideal();
            let small = |x: &num_bigint::BigInt| x.to_u64().expect("HNF entries of a prime ideal are at most p");
            IdealEntry {
                hnf: (small(i.a()), small(i.b()), small(i.c())),
                norm: q.norm(),
                class: g.ideal_class_integral(k, i).0,
                f: img.f,
                surjective: img.surjective,
            }
        })
        .collect();
    ScanRecord { p, split, entries }
}

impl IdealEntry {
    pub fn ideal(&self, k: &QuadraticField) -> IntegralIdeal {
        IntegralIdeal::from_hnf(k, self.hnf.0.into(), self.hnf.1.into(), self.hnf.2.into()).expect("cached HNF is valid")
    }

    pub fn prime(&self, k: &QuadraticField) -> PrimeIdeal {
        PrimeIdeal::from_ideal(k, &self.ideal(k)).expect("cached ideal is prime")
    }

    /// `p^{-1} ∈ B_{1,C}`: class of `C`, coprime to `C`, units surject.
    pub fn b1_member(&self, s: &Survey) -> bool {
        self.class == s.c_class.0 && self.surjective && !s.divides_c(&self.prime(&s.k))
    }
}

/// One output line of `scan`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub ideal: String,
    pub norm: u64,
    pub split: SplitType,
    pub class: u64,
    pub f: u64,
    pub surjective: bool,
    pub divides_c: bool,
    pub b1_member: bool,
}

pub fn rows(s: &Survey, records: &[ScanRecord]) -> Vec<ScanRow> {
    records
        .iter()
        .flat_map(|r| {
            r.entries.iter().map(move |e| {
                let divides_c = s.divides_c(&e.prime(&s.k));
                ScanRow {
                    p: r.p,
                    ideal: format!("{},{},{}", e.hnf.0, e.hnf.1, e.hnf.2),
                    norm: e.norm,
                    split: r.split,
                    class: e.class,
                    f: e.f,
                    surjective: e.surjective,
                    divides_c,
                    b1_member: !divides_c && e.class == s.c_class.0 && e.surjective,
                }
            })
        })
        .collect()
}

/// Records for every rational prime `p <= x`, ascending. Records found in
/// the cache are reused; the rest are computed on `jobs` workers and
/// appended to the cache.
pub fn scan(s: &Survey, x: u64, jobs: usize, cache: Option<&Path>) -> SurveyResult<Vec<ScanRecord>> {
    let primes = primes_up_to(x);
    let mut store = match cache {
        Some(path) => Some(ScanCache::open(path, s)?),
        None => None,
    };
    let missing: Vec<u64> = match &store {
        Some(c) => primes.iter().copied().filter(|p| c.get(*p).is_none()).collect(),
        None => primes.clone(),
    };
    let fresh = compute_many(s, &missing, jobs)?;
    if let Some(c) = store.as_mut() {
        c.insert_all(fresh.clone())?;
    }
    let out = match &store {
        Some(c) => primes.iter().map(|p| c.get(*p).cloned().expect("just filled")).collect(),
        None => fresh,
    };
    Ok(out)
}

fn compute_many(s: &Survey, primes: &[u64], jobs: usize) -> SurveyResult<Vec<ScanRecord>> {
    if jobs <= 1 {
        return Ok(primes.iter().map(|&p| compute_record(&s.k, &s.g, p)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SurveyError::Precondition(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| primes.par_iter().map(|&p| compute_record(&s.k, &s.g, p)).collect()))
}
