use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{unit_image_in, unit_representatives, UnitImage, UnitRep};
use crate::error::{Error, Result};
use crate::euclidean::{witness_box, CosetRep, EIdeal, GeneratorTable, Quotient};
use crate::ideals::{ClassGroup, FractionalIdeal, IntegralIdeal, PrimeIdeal};
use crate::quadratic_field::{AlgInt, FieldElem, QuadraticField};
use crate::residue::{Residue, ResidueField};

/// A finite test set `A` of E-ideals in the class `[C^n]`, their generators
/// `x_I`, and a set of primes `P` with `[p^{-1}] = [C^{n-1}]`.
#[derive(Clone, Debug)]
pub struct SievePanel {
    c: IntegralIdeal,
    n: u32,
    a_set: Vec<EIdeal>,
    script_a: Vec<AlgInt>,
    primes: Vec<PrimeIdeal>,
    x_max: BigInt,
    q_max: u64,
    table: GeneratorTable,
}

impl SievePanel {
    pub fn new(
        k: &QuadraticField,
        g: &ClassGroup,
        c: &IntegralIdeal,
        n: u32,
        a_set: Vec<EIdeal>,
        mut primes: Vec<PrimeIdeal>,
    ) -> Result<SievePanel> {
        if n == 0 {
            return Err(Error::Hypothesis("n must be positive".into()));
        }
        let distinct: BTreeSet<_> = a_set.iter().collect();
        if distinct.len() != a_set.len() {
            return Err(Error::Hypothesis("A contains a repeated ideal".into()));
        }
        let mut table = GeneratorTable::new(c.clone());
        let script_a = a_set.iter().map(|i| table.pick_x(k, g, i, n)).collect::<Result<Vec<_>>>()?;
        primes.sort_by(|x, y| (x.norm(), x.ideal()).cmp(&(y.norm(), y.ideal())));
        primes.dedup();
        for p in &primes {
            check_prime(p, c)?;
            table.x_prime(k, g, p, n)?;
        }
        let x_max = a_set.iter().map(EIdeal::norm_inv).max().unwrap_or_default();
        let q_max = primes.iter().map(PrimeIdeal::norm).max().unwrap_or(0);
        Ok(SievePanel { c: c.clone(), n, a_set, script_a, primes, x_max, q_max, table })
    }

    /// All E-ideals with `Nm(I^{-1}) <= x_bound` in `[C^n]`, and all admissible
    /// primes with `Nm(p) <= q_bound`.
    pub fn standard(
        k: &QuadraticField,
        g: &ClassGroup,
        c: &IntegralIdeal,
        n: u32,
        x_bound: u64,
        q_bound: u64,
    ) -> Result<SievePanel> {
        let a_set = admissible_e_ideals(k, g, c, n, x_bound);
        let primes = admissible_primes(k, g, c, n, q_bound);
        SievePanel::new(k, g, c, n, a_set, primes)
    }

    pub fn c(&self) -> &IntegralIdeal {
        &self.c
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a_set(&self) -> &[EIdeal] {
        &self.a_set
    }

    pub fn script_a(&self) -> &[AlgInt] {
        &self.script_a
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    /// `X = max Nm(I^{-1})` over `A` (zero when `A` is empty).
    pub fn x_max(&self) -> &BigInt {
        &self.x_max
    }

    /// `Q = max Nm(p)` over `P` (zero when `P` is empty).
    pub fn q_max(&self) -> u64 {
        self.q_max
    }

    /// Everything needed to evaluate `Z(·, p, C)` for one prime. The prime
    /// need not belong to `P`, but must satisfy the same conditions.
    pub fn prime_data(&self, k: &QuadraticField, g: &ClassGroup, p: &PrimeIdeal) -> Result<PrimeData> {
        check_prime(p, &self.c)?;
        let mut table = self.table.clone();
        let x_p = table.x_prime(k, g, p, self.n)?;
        let field = ResidueField::new(k, p);
        let image = unit_image_in(k, p, &field);
        let units = unit_representatives(k, p, &field);
        let quotient = k.coset_space(&EIdeal::prime_inverse(p), &self.c);
        let mut counts = HashMap::new();
        for x in &self.script_a {
            *counts.entry(field.reduce(x)).or_insert(0u64) += 1;
        }
        Ok(PrimeData { prime: p.clone(), field, image, units, x_p, quotient, counts })
    }
}

fn check_prime(p: &PrimeIdeal, c: &IntegralIdeal) -> Result<()> {
    if c.is_subset_of(p.ideal()) {
        return Err(Error::NotCoprime(p.to_string()));
    }
    Ok(())
}

/// E-ideals with `Nm(I^{-1}) <= bound` lying in the class `[C^n]`.
pub fn admissible_e_ideals(k: &QuadraticField, g: &ClassGroup, c: &IntegralIdeal, n: u32, bound: u64) -> Vec<EIdeal> {
    let target = g.mul_scalar(g.ideal_class_integral(k, c), n as i64);
    k.ideals_up_to(bound)
        .into_iter()
        .map(EIdeal::from_inverse)
        .filter(|i| i.class(k, g) == target)
        .collect()
}

/// Primes coprime to `C` with `Nm(p) <= bound` and `[p^{-1}] = [C^{n-1}]`.
pub fn admissible_primes(k: &QuadraticField, g: &ClassGroup, c: &IntegralIdeal, n: u32, bound: u64) -> Vec<PrimeIdeal> {
    let target = g.mul_scalar(g.ideal_class_integral(k, c), n as i64 - 1);
    k.primes_up_to(bound)
        .into_iter()
        .filter(|p| !c.is_subset_of(p.ideal()))
        .filter(|p| g.neg(g.ideal_class_integral(k, p.ideal())) == target)
        .collect()
}

/// Per-prime data for a panel.
#[derive(Clone, Debug)]
pub struct PrimeData {
    pub prime: PrimeIdeal,
    pub field: ResidueField,
    pub image: UnitImage,
    pub units: Vec<UnitRep>,
    pub x_p: AlgInt,
    pub quotient: Quotient,
    counts: HashMap<Residue, u64>,
}

impl PrimeData {
    /// `f(p)`.
    pub fn f(&self) -> u64 {
        self.image.f
    }

    pub fn norm(&self) -> u64 {
        self.prime.norm()
    }

    /// `Z(α, p)` for a residue.
    pub fn z_residue(&self, alpha: Residue) -> u64 {
        self.counts.get(&alpha).copied().unwrap_or(0)
    }

    /// `Z(β, p, C)` for every coset of `p^{-1}C/C`, in representative order.
    pub fn z_beta_all(&self, k: &QuadraticField) -> Vec<(CosetRep, u64)> {
        self.quotient.reps().into_iter().map(|b| {
            let z = self.z_of_rep(k, &b);
            (b, z)
        }).collect()
    }

    fn z_of_rep(&self, k: &QuadraticField, beta: &CosetRep) -> u64 {
        let r = &self.field;
        if beta.is_zero {
            return self.image.f * self.z_residue(r.zero());
        }
        let prod = k.elem_mul(&beta.value, &FieldElem::integral(self.x_p.clone()));
        debug_assert!(prod.is_integral());
        let base = r.reduce(&prod.num);
        self.units.iter().map(|u| self.z_residue(r.mul(u.residue, base))).sum()
    }

    /// `Σ_α Z(α, p)` partitions `A`; `Σ_β Z(β, p, C)/f(p)` does too.
    pub fn residue_counts(&self) -> Vec<u64> {
        self.field.elements().into_iter().map(|a| self.z_residue(a)).collect()
    }
}

/// `Z(α, p)`: how many of `script_a` are congruent to `alpha` modulo `p`.
pub fn z_alpha(k: &QuadraticField, script_a: &[AlgInt], alpha: &AlgInt, p: &PrimeIdeal) -> u64 {
    let r = ResidueField::new(k, p);
    let target = r.reduce(alpha);
    script_a.iter().filter(|x| r.reduce(x) == target).count() as u64
}

/// `Z(β, p, C)` through the unit-sum formula.
pub fn z_beta(k: &QuadraticField, pd: &PrimeData, beta: &FieldElem) -> Result<u64> {
    if !pd.quotient.contains(beta) {
        return Err(Error::NotInIdeal { element: beta.to_string(), ideal: pd.quotient.outer().to_string() });
    }
    Ok(pd.z_of_rep(k, &pd.quotient.reduce(beta)))
}

/// The definitional count for every coset: ideals `I ∈ A` with
/// `(β + y)^{-1}p^{-1}C = I` for some `y ∈ C`. Elements `β + y` are found with
/// `y` of height `<= height` around each canonical representative, and every
/// hit is closed under the units (`(uz)` and `(z)` are the same ideal).
/// The zero coset is scaled by `f(p)`.
pub fn z_beta_bruteforce_all(k: &QuadraticField, panel: &SievePanel, pd: &PrimeData, height: u64) -> BTreeMap<CosetRep, u64> {
    let c = &panel.c;
    let norm_c = c.norm();
    let norm_p = BigInt::from(pd.norm());
    let targets: HashMap<&IntegralIdeal, usize> = panel.a_set.iter().enumerate().map(|(i, e)| (e.inv(), i)).collect();
    let target_norms: BTreeSet<BigInt> = panel.a_set.iter().map(|e| e.norm_inv()).collect();
    // (z) = p^{-1}·C·I^{-1}, so I^{-1} = (z)·p·C^{-1}
    let p_over_c = k.frac_mul(&FractionalIdeal::integral(pd.prime.ideal().clone()), &k.inverse(c));
    let ys = witness_box(c, height);
    let reps = pd.quotient.reps();

    let mut hits: BTreeMap<CosetRep, BTreeSet<usize>> = reps.iter().map(|r| (r.clone(), BTreeSet::new())).collect();
    let units: Vec<AlgInt> = pd.units.iter().map(|u| u.materialize(k)).collect();
    for r in &reps {
        let den = &r.value.den;
        let scale = den * den * &norm_c;
        for y in &ys {
            let num = &r.value.num + &y.scale(den);
            if num.is_zero() {
                continue;
            }
            let (q, rem) = (k.norm(&num).abs() * &norm_p).div_rem(&scale);
            if !rem.is_zero() || !target_norms.contains(&q) {
                continue;
            }
            let z = FieldElem::new(num, den.clone());
            let Ok(zi) = k.principal_ideal(&z) else { continue };
            let Some(inv) = k.frac_mul(&zi, &p_over_c).into_integral() else { continue };
            let Some(&idx) = targets.get(&inv) else { continue };
            for u in &units {
                let w = k.elem_mul(&FieldElem::integral(u.clone()), &z);
                hits.get_mut(&pd.quotient.reduce(&w)).expect("orbit stays in p^{-1}C").insert(idx);
            }
        }
    }
    hits.into_iter()
        .map(|(r, s)| {
            let n = s.len() as u64;
            let z = if r.is_zero { pd.f() * n } else { n };
            (r, z)
        })
        .collect()
}

/// Single-coset form of [`z_beta_bruteforce_all`].
pub fn z_beta_bruteforce(k: &QuadraticField, panel: &SievePanel, pd: &PrimeData, beta: &FieldElem, height: u64) -> Result<u64> {
    if !pd.quotient.contains(beta) {
        return Err(Error::NotInIdeal { element: beta.to_string(), ideal: pd.quotient.outer().to_string() });
    }
    let all = z_beta_bruteforce_all(k, panel, pd, height);
    Ok(all[&pd.quotient.reduce(beta)])
}

/// `ω(p)`: cosets of `p^{-1}C/C` with `Z(β, p, C) = 0`.
pub fn omega_p(k: &QuadraticField, pd: &PrimeData) -> u64 {
    pd.z_beta_all(k).iter().filter(|(_, z)| *z == 0).count() as u64
}

/// Two sides of an inequality `lhs <= rhs_raw` in exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PanelReport {
    pub lhs: BigRational,
    pub rhs_raw: BigRational,
    /// `lhs / rhs_raw`; absent when `rhs_raw = 0`.
    pub ratio: Option<BigRational>,
}

impl PanelReport {
    fn new(lhs: BigRational, rhs_raw: BigRational) -> Self {
        let ratio = if rhs_raw.is_zero() { None } else { Some(&lhs / &rhs_raw) };
        PanelReport { lhs, rhs_raw, ratio }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs_raw
    }
}

#[derive(Serialize)]
struct RationalJson {
    num: String,
    den: String,
}

fn rational_json(x: &BigRational) -> RationalJson {
    RationalJson { num: x.numer().to_string(), den: x.denom().to_string() }
}

impl Serialize for PanelReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PanelReport", 3)?;
        st.serialize_field("lhs", &rational_json(&self.lhs))?;
        st.serialize_field("rhs_raw", &rational_json(&self.rhs_raw))?;
        st.serialize_field("ratio", &self.ratio.as_ref().map(rational_json))?;
        st.end()
    }
}

/// Variance of `Z(β, p, C)/f(p)` over the cosets against the variance of
/// `Z(α, p)` over the residues.
pub fn sieve_heart_check(k: &QuadraticField, panel: &SievePanel, pd: &PrimeData) -> PanelReport {
    let n = BigRational::from_integer(BigInt::from(pd.norm()));
    let mean = BigRational::from_integer(BigInt::from(panel.a_set.len())) / &n;
    let f = BigRational::from_integer(BigInt::from(pd.f()));
    let lhs = pd
        .z_beta_all(k)
        .into_iter()
        .map(|(_, z)| {
            let d = BigRational::from_integer(BigInt::from(z)) / &f - &mean;
            &d * &d
        })
        .fold(BigRational::zero(), |a, b| a + b);
    let rhs = pd
        .residue_counts()
        .into_iter()
        .map(|z| {
            let d = BigRational::from_integer(BigInt::from(z)) - &mean;
            &d * &d
        })
        .fold(BigRational::zero(), |a, b| a + b);
    PanelReport::new(lhs, rhs)
}

/// Per-prime quantities of a large-sieve evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeStats {
    pub prime: String,
    pub norm: u64,
    pub f: u64,
    pub omega: u64,
    pub heart: PanelReport,
}

/// `S = Σ_p Nm(p)·Σ_β (Z(β)/f − |A|/Nm(p))^2` against `(Q^2 + X)|A|`, and
/// `W·|A| = |A|·Σ_p ω(p)/Nm(p)` against `Q^2 + X`.
#[derive(Clone, Debug, Serialize)]
pub struct LargeSieveReport {
    pub d: i64,
    pub c: String,
    pub n: u32,
    pub a_size: usize,
    pub x: String,
    pub q: u64,
    pub s: PanelReport,
    pub w: PanelReport,
    pub primes: Vec<PrimeStats>,
}

pub fn large_sieve_panel(k: &QuadraticField, g: &ClassGroup, panel: &SievePanel) -> Result<LargeSieveReport> {
    let stats: Vec<(PrimeStats, BigRational, BigRational)> = panel
        .primes
        .par_iter()
        .map(|p| {
            let pd = panel.prime_data(k, g, p)?;
            let heart = sieve_heart_check(k, panel, &pd);
            let omega = omega_p(k, &pd);
            let norm = BigRational::from_integer(BigInt::from(pd.norm()));
            let s_term = &norm * &heart.lhs;
            let w_term = BigRational::from_integer(BigInt::from(omega)) / &norm;
            Ok((PrimeStats { prime: p.ideal().to_string(), norm: pd.norm(), f: pd.f(), omega, heart }, s_term, w_term))
        })
        .collect::<Result<_>>()?;
    let s = stats.iter().fold(BigRational::zero(), |a, t| a + &t.1);
    let w = stats.iter().fold(BigRational::zero(), |a, t| a + &t.2);
    let a = BigRational::from_integer(BigInt::from(panel.a_set.len()));
    let q = BigInt::from(panel.q_max);
    let scale = BigRational::from_integer(&q * &q + &panel.x_max);
    Ok(LargeSieveReport {
        d: k.d(),
        c: panel.c.to_string(),
        n: panel.n,
        a_size: panel.a_set.len(),
        x: panel.x_max.to_string(),
        q: panel.q_max,
        s: PanelReport::new(s, &scale * &a),
        w: PanelReport::new(&w * &a, scale),
        primes: stats.into_iter().map(|t| t.0).collect(),
    })
}
