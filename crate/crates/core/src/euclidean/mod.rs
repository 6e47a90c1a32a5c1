//! Euclidean ideals: coset spaces `IC/C`, the fixed generators `x_I`, the
//! exact `B_1` membership criterion, and the Motzkin-type level search.

mod density;
mod search;

pub use density::{similar_density, DensityReport};
pub use search::{
    motzkin_search, verify_assignment, verify_assignment_detailed, LevelAssignment, SearchBounds, SearchScope,
    Witness,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ideals::{ClassGroup, FractionalIdeal, IdealClass, IntegralIdeal, PrimeIdeal};
use crate::quadratic_field::{AlgInt, FieldElem, QuadraticField};
use crate::sieve::unit_image;

/// `I ∈ E`, stored through its integral inverse: `I = inv^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EIdeal {
    inv: IntegralIdeal,
}

impl EIdeal {
    pub fn from_inverse(inv: IntegralIdeal) -> Self {
        EIdeal { inv }
    }

    /// `R` itself.
    pub fn unit() -> Self {
        EIdeal { inv: IntegralIdeal::unit() }
    }

    /// `p^{-1}`.
    pub fn prime_inverse(p: &PrimeIdeal) -> Self {
        EIdeal { inv: p.ideal().clone() }
    }

    /// The integral ideal `I^{-1}`.
    pub fn inv(&self) -> &IntegralIdeal {
        &self.inv
    }

    /// `Nm(I^{-1})`.
    pub fn norm_inv(&self) -> BigInt {
        self.inv.norm()
    }

    pub fn is_unit(&self) -> bool {
        self.inv.is_unit()
    }

    pub fn ideal(&self, k: &QuadraticField) -> FractionalIdeal {
        k.inverse(&self.inv)
    }

    /// The class `[I] = -[I^{-1}]`.
    pub fn class(&self, k: &QuadraticField, g: &ClassGroup) -> IdealClass {
        g.neg(g.ideal_class_integral(k, &self.inv))
    }
}

impl fmt::Display for EIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^-1", self.inv)
    }
}

/// A coset `x + C`, represented by its unique element in the fundamental box
/// of `C`'s HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetRep {
    pub value: FieldElem,
    pub is_zero: bool,
}

impl fmt::Display for CosetRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The finite quotient `outer / inner` of a fractional ideal by an integral
/// sub-ideal, with canonical representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    outer: FractionalIdeal,
    inner: IntegralIdeal,
}

impl Quotient {
    pub fn new(outer: FractionalIdeal, inner: IntegralIdeal) -> Self {
        debug_assert!(inner.basis().iter().all(|g| outer.contains(&FieldElem::integral(g.clone()))));
        Quotient { outer, inner }
    }

    pub fn outer(&self) -> &FractionalIdeal {
        &self.outer
    }

    pub fn inner(&self) -> &IntegralIdeal {
        &self.inner
    }

    /// `[outer : inner]`.
    pub fn index(&self) -> BigInt {
        let (a1, _, c1, den) = self.outer.lattice();
        let (a2, _, c2) = self.inner.lattice();
        (&a2 * &den / &a1) * (&c2 * &den / &c1)
    }

    /// Canonical representative of `x + inner`.
    pub fn reduce(&self, x: &FieldElem) -> CosetRep {
        let (a2, b2, c2) = self.inner.lattice();
        let e = &x.den;
        let (mut s, mut t) = (x.num.a.clone(), x.num.b.clone());
        let k2 = t.div_floor(&(e * &c2));
        s -= &k2 * &b2 * e;
        t -= &k2 * &c2 * e;
        let k1 = s.div_floor(&(e * &a2));
        s -= &k1 * &a2 * e;
        let value = FieldElem::new(AlgInt { a: s, b: t }, e.clone());
        let is_zero = value.is_zero();
        CosetRep { value, is_zero }
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        self.outer.contains(x)
    }

    /// All representatives, the zero coset first.
    pub fn reps(&self) -> Vec<CosetRep> {
        let (a1, b1, c1, den) = self.outer.lattice();
        let (a2, _, c2) = self.inner.lattice();
        let n = (&c2 * &den / &c1).to_u64().expect("desk-scale index");
        let m = (&a2 * &den / &a1).to_u64().expect("desk-scale index");
        let mut out = Vec::with_capacity((m * n) as usize);
        for j in 0..n {
            let j = BigInt::from(j);
            let i0 = -((&j * &b1).div_floor(&a1));
            for i in 0..m {
                let i = &i0 + BigInt::from(i);
                let num = AlgInt { a: &i * &a1 + &j * &b1, b: &j * &c1 };
                let value = FieldElem::new(num, den.clone());
                let is_zero = value.is_zero();
                out.push(CosetRep { value, is_zero });
            }
        }
        out
    }
}

impl QuadraticField {
    /// `IC` for `I ∈ E`.
    pub fn ic(&self, i: &EIdeal, c: &IntegralIdeal) -> FractionalIdeal {
        self.frac_mul(&i.ideal(self), &FractionalIdeal::integral(c.clone()))
    }

    pub fn coset_space(&self, i: &EIdeal, c: &IntegralIdeal) -> Quotient {
        Quotient::new(self.ic(i, c), c.clone())
    }
}

/// One representative per coset of `C` in `IC`; exactly `Nm(I^{-1})` of them.
pub fn cosets(k: &QuadraticField, i: &EIdeal, c: &IntegralIdeal) -> Vec<CosetRep> {
    k.coset_space(i, c).reps()
}

/// Elements `y ∈ C` with `max(|a|, |b|) <= height`, ordered by
/// (height, a, b).
pub fn witness_box(c: &IntegralIdeal, height: u64) -> Vec<AlgInt> {
    let h = BigInt::from(height);
    let (a2, b2, c2) = c.lattice();
    let mut out = Vec::new();
    let jmax = (&h / &c2).to_i64().expect("desk-scale height");
    for j in -jmax..=jmax {
        let j = BigInt::from(j);
        let t = &j * &c2;
        let off = &j * &b2;
        let lo = (-&h - &off).div_ceil(&a2);
        let hi = (&h - &off).div_floor(&a2);
        let mut i = lo;
        while i <= hi {
            out.push(AlgInt { a: &i * &a2 + &off, b: t.clone() });
            i += 1;
        }
    }
    out.sort_by(|x, y| (x.height(), &x.a, &x.b).cmp(&(y.height(), &y.a, &y.b)));
    out
}

/// True iff `x̄` generates `IC/C` as an `R/I^{-1}`-module, i.e. `(x) + C = IC`.
pub fn generates_module(k: &QuadraticField, x: &FieldElem, i: &EIdeal, c: &IntegralIdeal) -> Result<bool> {
    let ic = k.ic(i, c);
    if !ic.contains(x) {
        return Err(Error::NotInIdeal { element: x.to_string(), ideal: ic.to_string() });
    }
    let c_frac = FractionalIdeal::integral(c.clone());
    if x.is_zero() {
        return Ok(c_frac == ic);
    }
    let sum = k.frac_sum(&k.principal_ideal(x)?, &c_frac);
    Ok(sum == ic)
}

/// The integral ideal `(x + y)·I^{-1}·C^{-1}`, i.e. the inverse of the
/// descent target `(x + y)^{-1}·I·C`.
pub fn descent_target_inv(
    k: &QuadraticField,
    z: &FieldElem,
    inv: &IntegralIdeal,
    c: &IntegralIdeal,
) -> Result<IntegralIdeal> {
    let zi = k.principal_ideal(z)?;
    let prod = k.frac_mul(&k.frac_mul(&zi, &FractionalIdeal::integral(inv.clone())), &k.frac_inverse(&FractionalIdeal::integral(c.clone())));
    prod.into_integral().ok_or_else(|| Error::Hypothesis(format!("{z} is not in I·C")))
}

/// Generators fixed once per `(C, n)`: for `I ∈ E` in class `[C^n]`,
/// `(x_I) = I^{-1}·C^n`; for a prime with `[p^{-1}] = [C^{n-1}]`,
/// `(x_p) = p·C^{n-1}`. Every entry is the canonical generator.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    c: IntegralIdeal,
    c_powers: Vec<IntegralIdeal>,
    entries: BTreeMap<IntegralIdeal, AlgInt>,
}

impl GeneratorTable {
    pub fn new(c: IntegralIdeal) -> Self {
        GeneratorTable { c, c_powers: vec![IntegralIdeal::unit()], entries: BTreeMap::new() }
    }

    pub fn c(&self) -> &IntegralIdeal {
        &self.c
    }

    pub fn c_power(&mut self, k: &QuadraticField, n: u32) -> IntegralIdeal {
        while self.c_powers.len() <= n as usize {
            let next = k.ideal_mul(self.c_powers.last().expect("nonempty"), &self.c);
            self.c_powers.push(next);
        }
        self.c_powers[n as usize].clone()
    }

    /// Canonical generator of an integral principal ideal, memoized.
    pub fn generator_of(&mut self, k: &QuadraticField, target: &IntegralIdeal) -> Result<AlgInt> {
        if let Some(x) = self.entries.get(target) {
            return Ok(x.clone());
        }
        let g = k.canonical_generator(&FractionalIdeal::integral(target.clone()))?;
        debug_assert!(g.is_integral());
        self.entries.insert(target.clone(), g.num.clone());
        Ok(g.num)
    }

    /// `x_I` with `(x_I) = I^{-1}·C^n`; requires `[I] = [C^n]`.
    pub fn pick_x(&mut self, k: &QuadraticField, g: &ClassGroup, i: &EIdeal, n: u32) -> Result<AlgInt> {
        let c_class = g.ideal_class_integral(k, &self.c);
        let expected = g.mul_scalar(c_class, n as i64);
        let found = i.class(k, g);
        if expected != found {
            return Err(Error::ClassMismatch { expected: expected.0, found: found.0 });
        }
        let cn = self.c_power(k, n);
        let target = k.ideal_mul(i.inv(), &cn);
        self.generator_of(k, &target)
    }

    /// `x_p` with `(x_p) = p·C^{n-1}`; requires `[p^{-1}] = [C^{n-1}]`.
    pub fn x_prime(&mut self, k: &QuadraticField, g: &ClassGroup, p: &PrimeIdeal, n: u32) -> Result<AlgInt> {
        if n == 0 {
            return Err(Error::Hypothesis("n must be positive".into()));
        }
        let c_class = g.ideal_class_integral(k, &self.c);
        let expected = g.mul_scalar(c_class, n as i64 - 1);
        let found = g.neg(g.ideal_class_integral(k, p.ideal()));
        if expected != found {
            return Err(Error::ClassMismatch { expected: expected.0, found: found.0 });
        }
        let cn1 = self.c_power(k, n - 1);
        let target = k.ideal_mul(p.ideal(), &cn1);
        self.generator_of(k, &target)
    }

    /// The canonical `c` with `C^{h_K} = (c)`.
    pub fn c_of(&mut self, k: &QuadraticField, g: &ClassGroup) -> Result<AlgInt> {
        let ch = self.c_power(k, g.order() as u32);
        self.generator_of(k, &ch)
    }
}

/// Convenience wrapper for a single `x_I`.
pub fn pick_x(k: &QuadraticField, g: &ClassGroup, i: &EIdeal, c: &IntegralIdeal, n: u32) -> Result<AlgInt> {
    GeneratorTable::new(c.clone()).pick_x(k, g, i, n)
}

/// Checks by enumeration that `β ↦ x_p·β` maps `p^{-1}C/C` bijectively onto
/// `C^n / pC^n`.
pub fn mult_xp_iso_check(k: &QuadraticField, g: &ClassGroup, p: &PrimeIdeal, c: &IntegralIdeal, n: u32) -> Result<bool> {
    let mut table = GeneratorTable::new(c.clone());
    let xp = FieldElem::integral(table.x_prime(k, g, p, n)?);
    let cn = table.c_power(k, n);
    let source = k.coset_space(&EIdeal::prime_inverse(p), c);
    let target = Quotient::new(FractionalIdeal::integral(cn.clone()), k.ideal_mul(p.ideal(), &cn));
    if source.index() != target.index() {
        return Ok(false);
    }
    let mut images = BTreeSet::new();
    for beta in source.reps() {
        let img = k.elem_mul(&xp, &beta.value);
        if !img.is_integral() || !cn.contains(&img.num) {
            return Ok(false);
        }
        images.insert(target.reduce(&img));
    }
    Ok(BigInt::from(images.len()) == target.index())
}

/// Exact test for `p^{-1} ∈ B_{1,C}`: `[p] = [C]` and the units surject onto
/// `(O_K/p)^×`.
pub fn is_b1_member(k: &QuadraticField, g: &ClassGroup, p: &PrimeIdeal, c: &IntegralIdeal) -> Result<bool> {
    if c.is_subset_of(p.ideal()) {
        return Err(Error::NotCoprime(p.to_string()));
    }
    if g.ideal_class_integral(k, p.ideal()) != g.ideal_class_integral(k, c) {
        return Ok(false);
    }
    Ok(unit_image(k, p).surjective)
}

/// Lemma probe: for `x, y ∈ C^n` and `p` coprime to `C`, returns the pair
/// (`x ≡ y mod pC^n`, `x ≡ y mod p`); the two always agree.
pub fn congruence_transport(
    k: &QuadraticField,
    x: &AlgInt,
    y: &AlgInt,
    p: &PrimeIdeal,
    cn: &IntegralIdeal,
) -> (bool, bool) {
    let diff = x - y;
    let pcn = k.ideal_mul(p.ideal(), cn);
    (pcn.contains(&diff), p.ideal().contains(&diff))
}

/// Lemma probe: returns (`y·x_p ∈ pC^n`, `y ∈ C`); the two always agree.
pub fn membership_transport(
    k: &QuadraticField,
    y: &FieldElem,
    xp: &AlgInt,
    p: &PrimeIdeal,
    c: &IntegralIdeal,
    cn: &IntegralIdeal,
) -> (bool, bool) {
    let prod = k.elem_mul(y, &FieldElem::integral(xp.clone()));
    let pcn = k.ideal_mul(p.ideal(), cn);
    (pcn.contains_elem(&prod), c.contains_elem(y))
}

/// Lemma probe: when `(x, C) = IC` and `v_p(I^{-1}) ≠ 0`, the integral ideal
/// `x·I^{-1}·C^{-1}` is prime to `p`.
pub fn coprime_after_descent(
    k: &QuadraticField,
    x: &FieldElem,
    i: &EIdeal,
    c: &IntegralIdeal,
    p: &PrimeIdeal,
) -> Result<bool> {
    let q = descent_target_inv(k, x, i.inv(), c)?;
    Ok(!q.is_subset_of(p.ideal()))
}
