//! Exact arithmetic in a quadratic field `Q(√d)` and its ring of integers.
//!
//! Elements of `O_K` are pairs `a + b·ω` over the integral basis `{1, ω}` with
//! `ω = √d` when `d ≡ 2, 3 (mod 4)` and `ω = (1 + √d)/2` when `d ≡ 1 (mod 4)`.
//! Field elements carry a positive denominator and are kept in lowest terms.
//!
//! The real embedding always sends `√d` to the positive root; every "positive"
//! or "least" choice in this crate refers to that embedding.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{Error, Result};

/// The algebraic integer `a + b·ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl AlgInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        AlgInt { a: a.into(), b: b.into() }
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        AlgInt { a: a.into(), b: BigInt::zero() }
    }

    pub fn zero() -> Self {
        AlgInt::from_int(0)
    }

    pub fn one() -> Self {
        AlgInt::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &BigInt) -> AlgInt {
        AlgInt { a: &self.a * k, b: &self.b * k }
    }

    /// gcd of the two coordinates.
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b)
    }

    /// `max(|a|, |b|)`, the box height used by every bounded witness search.
    pub fn height(&self) -> BigInt {
        std::cmp::max(self.a.abs(), self.b.abs())
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.is_negative() {
            write!(f, "{}-{}w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

impl<'a> Add<&'a AlgInt> for &'a AlgInt {
    type Output = AlgInt;
    fn add(self, o: &AlgInt) -> AlgInt {
        AlgInt { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a AlgInt> for &'a AlgInt {
    type Output = AlgInt;
    fn sub(self, o: &AlgInt) -> AlgInt {
        AlgInt { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Neg for &AlgInt {
    type Output = AlgInt;
    fn neg(self) -> AlgInt {
        AlgInt { a: -&self.a, b: -&self.b }
    }
}

impl Neg for AlgInt {
    type Output = AlgInt;
    fn neg(self) -> AlgInt {
        AlgInt { a: -self.a, b: -self.b }
    }
}

/// An element `num / den` of `K`, `den > 0`, in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    pub num: AlgInt,
    pub den: BigInt,
}

impl FieldElem {
    pub fn new(num: AlgInt, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        let mut g = num.content().gcd(&den);
        if den.is_negative() {
            g = -g;
        }
        FieldElem { num: AlgInt { a: &num.a / &g, b: &num.b / &g }, den: &den / &g }
    }

    pub fn integral(num: AlgInt) -> Self {
        FieldElem { num, den: BigInt::one() }
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        FieldElem::integral(AlgInt::from_int(a))
    }

    pub fn zero() -> Self {
        FieldElem::from_int(0)
    }

    pub fn one() -> Self {
        FieldElem::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        FieldElem::new(&self.num.scale(&o.den) + &o.num.scale(&self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        FieldElem::new(&self.num.scale(&o.den) - &o.num.scale(&self.den), &self.den * &o.den)
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, k: &BigInt) -> FieldElem {
        FieldElem::new(self.num.scale(k), self.den.clone())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl FieldElem {
    /// The `a,b[/e]` form accepted by [`parse_elem`].
    pub fn to_spec(&self) -> String {
        if self.den.is_one() {
            format!("{},{}", self.num.a, self.num.b)
        } else {
            format!("{},{}/{}", self.num.a, self.num.b, self.den)
        }
    }
}

impl From<AlgInt> for FieldElem {
    fn from(x: AlgInt) -> Self {
        FieldElem::integral(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Omega {
    /// `ω = √d`
    Sqrt,
    /// `ω = (1 + √d)/2`
    HalfSqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Real,
    Imaginary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    pub torsion_order: u32,
    /// Least unit `> 1`; absent for imaginary fields.
    pub fundamental_unit: Option<AlgInt>,
    /// Roots of unity, listed as successive powers of a generator.
    pub torsion: Vec<AlgInt>,
}

/// `Q(√d)` together with its integral basis and unit group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticField {
    d: i64,
    disc: i64,
    omega: Omega,
    // minimal polynomial of ω is X^2 - trace·X + norm
    omega_trace: BigInt,
    omega_norm: BigInt,
    units: UnitGroup,
}

/// Builds `Q(√d)`, rejecting non-square-free or degenerate `d`.
pub fn make_field(d: i64) -> Result<QuadraticField> {
    QuadraticField::new(d)
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::DegenerateField(d));
        }
        let mag = d.unsigned_abs();
        let mut k = 2u64;
        while k * k <= mag {
            if mag % (k * k) == 0 {
                return Err(Error::NotSquareFree { d, factor: k as i64 });
            }
            k += 1;
        }
        let (omega, disc) = if d.rem_euclid(4) == 1 { (Omega::HalfSqrt, d) } else { (Omega::Sqrt, 4 * d) };
        let (omega_trace, omega_norm) = match omega {
            Omega::Sqrt => (BigInt::zero(), BigInt::from(-d)),
            Omega::HalfSqrt => (BigInt::one(), BigInt::from((1 - d) / 4)),
        };
        let mut field = QuadraticField {
            d,
            disc,
            omega,
            omega_trace,
            omega_norm,
            units: UnitGroup { torsion_order: 2, fundamental_unit: None, torsion: vec![] },
        };
        field.units = field.compute_units();
        Ok(field)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn d_big(&self) -> BigInt {
        BigInt::from(self.d)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega(&self) -> Omega {
        self.omega
    }

    pub fn signature(&self) -> Signature {
        if self.d > 0 {
            Signature::Real
        } else {
            Signature::Imaginary
        }
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn units(&self) -> &UnitGroup {
        &self.units
    }

    /// `(trace, norm)` of ω.
    pub fn omega_min_poly(&self) -> (&BigInt, &BigInt) {
        (&self.omega_trace, &self.omega_norm)
    }

    pub fn omega_str(&self) -> String {
        match self.omega {
            Omega::Sqrt => format!("sqrt({})", self.d),
            Omega::HalfSqrt => format!("(1+sqrt({}))/2", self.d),
        }
    }

    pub fn mul(&self, x: &AlgInt, y: &AlgInt) -> AlgInt {
        // ω^2 = t·ω - n
        let bb = &x.b * &y.b;
        AlgInt {
            a: &x.a * &y.a - &bb * &self.omega_norm,
            b: &x.a * &y.b + &x.b * &y.a + &bb * &self.omega_trace,
        }
    }

    pub fn conj(&self, x: &AlgInt) -> AlgInt {
        // ω' = t - ω
        AlgInt { a: &x.a + &x.b * &self.omega_trace, b: -&x.b }
    }

    /// `x · conj(x)`.
    pub fn norm(&self, x: &AlgInt) -> BigInt {
        &x.a * &x.a + &x.a * &x.b * &self.omega_trace + &x.b * &x.b * &self.omega_norm
    }

    pub fn trace(&self, x: &AlgInt) -> BigInt {
        BigInt::from(2) * &x.a + &x.b * &self.omega_trace
    }

    pub fn pow(&self, x: &AlgInt, mut e: u64) -> AlgInt {
        let mut acc = AlgInt::one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Coordinates `(X, Y)` with `x = (X + Y·√d)/2`.
    pub fn half_coords(&self, x: &AlgInt) -> (BigInt, BigInt) {
        match self.omega {
            Omega::Sqrt => (BigInt::from(2) * &x.a, BigInt::from(2) * &x.b),
            Omega::HalfSqrt => (BigInt::from(2) * &x.a + &x.b, x.b.clone()),
        }
    }

    /// Inverse of [`half_coords`](Self::half_coords); `None` when `(X + Y√d)/2`
    /// is not an algebraic integer.
    pub fn from_half_coords(&self, x: &BigInt, y: &BigInt) -> Option<AlgInt> {
        match self.omega {
            Omega::Sqrt => {
                if x.is_odd() || y.is_odd() {
                    None
                } else {
                    Some(AlgInt { a: x / 2, b: y / 2 })
                }
            }
            Omega::HalfSqrt => {
                let s = x - y;
                if s.is_odd() {
                    None
                } else {
                    Some(AlgInt { a: s / 2, b: y.clone() })
                }
            }
        }
    }

    pub fn elem_mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        FieldElem::new(self.mul(&x.num, &y.num), &x.den * &y.den)
    }

    pub fn elem_conj(&self, x: &FieldElem) -> FieldElem {
        FieldElem { num: self.conj(&x.num), den: x.den.clone() }
    }

    pub fn elem_norm(&self, x: &FieldElem) -> BigRational {
        BigRational::new(self.norm(&x.num), &x.den * &x.den)
    }

    pub fn elem_inv(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let n = self.norm(&x.num);
        Ok(FieldElem::new(self.conj(&x.num).scale(&x.den), n))
    }

    pub fn elem_div(&self, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
        Ok(self.elem_mul(x, &self.elem_inv(y)?))
    }

    /// `x^e` for any integer exponent (`x ≠ 0` when `e < 0`).
    pub fn elem_pow(&self, x: &FieldElem, e: i64) -> Result<FieldElem> {
        let base = if e < 0 { self.elem_inv(x)? } else { x.clone() };
        let num = self.pow(&base.num, e.unsigned_abs());
        Ok(FieldElem::new(num, num_traits::pow(base.den.clone(), e.unsigned_abs() as usize)))
    }

    /// Sign of the first real embedding of `x` (real fields only).
    pub fn sign(&self, x: &FieldElem) -> i32 {
        debug_assert!(self.is_real());
        let (xx, yy) = self.half_coords(&x.num);
        sign_of_surd(&xx, &yy, &self.d_big())
    }

    /// Sign of `|x| - |y|` in the first real embedding.
    pub fn cmp_abs(&self, x: &FieldElem, y: &FieldElem) -> std::cmp::Ordering {
        let s = self.sign(&x.sub(y)) * self.sign(&x.add(y));
        // |x|^2 - |y|^2 = (x - y)(x + y)
        s.cmp(&0)
    }

    pub fn fundamental_unit(&self) -> Result<&AlgInt> {
        self.units.fundamental_unit.as_ref().ok_or(Error::ImaginaryField(self.d))
    }

    pub fn torsion_units(&self) -> &[AlgInt] {
        &self.units.torsion
    }

    /// A generator of the roots of unity (`-1` unless `d ∈ {-1, -3}`).
    pub fn torsion_generator(&self) -> &AlgInt {
        &self.units.torsion[1]
    }

    /// True iff `x` is a unit of `O_K`.
    pub fn is_unit(&self, x: &AlgInt) -> bool {
        self.norm(x).abs().is_one()
    }

    fn compute_units(&self) -> UnitGroup {
        let torsion: Vec<AlgInt> = match (self.d, self.omega) {
            (-1, _) => vec![AlgInt::new(1, 0), AlgInt::new(0, 1), AlgInt::new(-1, 0), AlgInt::new(0, -1)],
            // ω = (1 + √-3)/2 is a primitive sixth root of unity
            (-3, _) => vec![
                AlgInt::new(1, 0),
                AlgInt::new(0, 1),
                AlgInt::new(-1, 1),
                AlgInt::new(-1, 0),
                AlgInt::new(0, -1),
                AlgInt::new(1, -1),
            ],
            _ => vec![AlgInt::new(1, 0), AlgInt::new(-1, 0)],
        };
        let fundamental_unit = if self.d > 0 { Some(self.pell_unit()) } else { None };
        UnitGroup { torsion_order: torsion.len() as u32, fundamental_unit, torsion }
    }

    /// Walks the continued fraction of ω; the first convergent `p/q` whose
    /// companion `p - q·ω'` is a unit gives the fundamental unit.
    fn pell_unit(&self) -> AlgInt {
        let d = self.d_big();
        let s = isqrt(&d);
        let (mut pp, mut qq) = match self.omega {
            Omega::Sqrt => (BigInt::zero(), BigInt::one()),
            Omega::HalfSqrt => (BigInt::one(), BigInt::from(2)),
        };
        let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
        let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
        loop {
            debug_assert!(qq.is_positive());
            let a = (&pp + &s).div_floor(&qq);
            let p = &a * &p1 + &p2;
            let q = &a * &q1 + &q2;
            let eta = AlgInt { a: &p - &q * &self.omega_trace, b: q.clone() };
            if self.norm(&eta).abs().is_one() {
                return eta;
            }
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
            pp = &a * &qq - &pp;
            qq = (&d - &pp * &pp) / &qq;
        }
    }

    /// Parses `"a,b"` or `"a,b/e"` as the element `(a + b·ω)/e`.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        parse_elem(s)
    }

    pub fn to_i64_pair(x: &AlgInt) -> Option<(i64, i64)> {
        Some((x.a.to_i64()?, x.b.to_i64()?))
    }
}

/// Exact sign of `X + Y·√d` for non-square `d > 0`.
pub fn sign_of_surd(x: &BigInt, y: &BigInt, d: &BigInt) -> i32 {
    let sx = sgn(x);
    let sy = sgn(y);
    if sx >= 0 && sy >= 0 {
        return if sx == 0 && sy == 0 { 0 } else { 1 };
    }
    if sx <= 0 && sy <= 0 {
        return -1;
    }
    let lhs = x * x;
    let rhs = d * y * y;
    if lhs > rhs {
        sx
    } else {
        sy
    }
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Parses `"a,b"` or `"a,b/e"` as `(a + b·ω)/e`.
pub fn parse_elem(s: &str) -> Result<FieldElem> {
    let s = s.trim();
    let (body, den) = match s.split_once('/') {
        Some((body, den)) => (body, parse_big(den)?),
        None => (s, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    let (a, b) = body.split_once(',').ok_or_else(|| Error::Parse(format!("expected `a,b[/e]`, got `{s}`")))?;
    Ok(FieldElem::new(AlgInt { a: parse_big(a)?, b: parse_big(b)? }, den))
}

pub(crate) fn parse_big(s: &str) -> Result<BigInt> {
    let t = s.trim();
    if t.is_empty() || t.len() > 4096 {
        return Err(Error::Parse(format!("bad integer `{t}`")));
    }
    t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer `{t}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_conventions() {
        let k = make_field(-1).unwrap();
        assert_eq!(k.disc(), -4);
        assert_eq!(k.omega(), Omega::Sqrt);
        let k = make_field(10).unwrap();
        assert_eq!(k.disc(), 40);
        assert_eq!(k.omega(), Omega::Sqrt);
        assert_eq!(k.signature(), Signature::Real);
        let k = make_field(-15).unwrap();
        assert_eq!(k.disc(), -15);
        assert_eq!(k.omega(), Omega::HalfSqrt);
        assert_eq!(k.signature(), Signature::Imaginary);
    }

    #[test]
    fn rejects_bad_d() {
        assert_eq!(make_field(12), Err(Error::NotSquareFree { d: 12, factor: 2 }));
        assert_eq!(make_field(-45), Err(Error::NotSquareFree { d: -45, factor: 3 }));
        assert_eq!(make_field(0), Err(Error::DegenerateField(0)));
        assert_eq!(make_field(1), Err(Error::DegenerateField(1)));
        assert!(make_field(-1).is_ok());
    }

    #[test]
    fn norms() {
        let k = make_field(2).unwrap();
        assert_eq!(k.norm(&AlgInt::new(3, 1)), BigInt::from(7));
        assert_eq!(k.norm(&AlgInt::one()), BigInt::one());
        let k = make_field(-15).unwrap();
        // ω = (1+√-15)/2 has norm (1 + 15)/4
        assert_eq!(k.norm(&AlgInt::new(0, 1)), BigInt::from(4));
    }

    #[test]
    fn units() {
        let k = make_field(2).unwrap();
        assert_eq!(k.fundamental_unit().unwrap(), &AlgInt::new(1, 1));
        let k = make_field(10).unwrap();
        assert_eq!(k.fundamental_unit().unwrap(), &AlgInt::new(3, 1));
        assert_eq!(k.torsion_units().len(), 2);
        let k = make_field(-1).unwrap();
        assert_eq!(k.fundamental_unit(), Err(Error::ImaginaryField(-1)));
        assert_eq!(k.torsion_units().len(), 4);
        let k = make_field(-3).unwrap();
        assert_eq!(k.torsion_units().len(), 6);
        for u in k.torsion_units() {
            assert!(k.is_unit(u));
            assert_eq!(k.pow(u, 6), AlgInt::one());
        }
        // (3+√13)/2 = 1 + ω
        let k = make_field(13).unwrap();
        assert_eq!(k.fundamental_unit().unwrap(), &AlgInt::new(1, 1));
        let k = make_field(3).unwrap();
        assert_eq!(k.fundamental_unit().unwrap(), &AlgInt::new(2, 1));
    }

    #[test]
    fn exact_sign() {
        let d = BigInt::from(2);
        assert_eq!(sign_of_surd(&BigInt::from(-1), &BigInt::from(1), &d), 1);
        assert_eq!(sign_of_surd(&BigInt::from(-2), &BigInt::from(1), &d), -1);
        assert_eq!(sign_of_surd(&BigInt::from(3), &BigInt::from(-2), &d), 1);
        assert_eq!(sign_of_surd(&BigInt::from(0), &BigInt::from(0), &d), 0);
    }

    #[test]
    fn parse_elements() {
        assert_eq!(parse_elem("3,-1/2").unwrap(), FieldElem::new(AlgInt::new(3, -1), 2));
        assert_eq!(parse_elem(" 4 , 2 / 2").unwrap(), FieldElem::integral(AlgInt::new(2, 1)));
        assert!(parse_elem("3").is_err());
        assert!(parse_elem("1,1/0").is_err());
    }
}
