//! Integral and fractional ideals of a quadratic order `O_K`.
//!
//! An integral ideal is stored in Hermite normal form as the triple `(a, b, c)`
//! denoting the lattice `c·(a·Z + (b + ω)·Z)` with `0 <= b < a` and
//! `a | Nm(b + ω)`. The form is unique, so equality and hashing are structural.

mod class_group;
mod prime;
mod principal;

pub use class_group::{ClassGroup, IdealClass};
pub use prime::{factor_prime, PrimeIdeal, SplitType};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quadratic_field::{parse_big, AlgInt, FieldElem, QuadraticField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralIdeal {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl IntegralIdeal {
    /// The unit ideal `O_K`.
    pub fn unit() -> Self {
        IntegralIdeal { a: BigInt::one(), b: BigInt::zero(), c: BigInt::one() }
    }

    /// Validates an HNF triple against the field.
    pub fn from_hnf(k: &QuadraticField, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !a.is_positive() || !c.is_positive() {
            return Err(Error::InvalidIdeal(format!("[{a},{b},{c}]: a and c must be positive")));
        }
        if b.is_negative() || b >= a {
            return Err(Error::InvalidIdeal(format!("[{a},{b},{c}]: need 0 <= b < a")));
        }
        if !k.norm(&AlgInt { a: b.clone(), b: BigInt::one() }).is_multiple_of(&a) {
            return Err(Error::InvalidIdeal(format!("[{a},{b},{c}]: a does not divide Nm(b + w)")));
        }
        Ok(IntegralIdeal { a, b, c })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c * &self.c
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_one() && self.c.is_one()
    }

    /// The Z-basis `{a·c, c·(b + ω)}`.
    pub fn basis(&self) -> [AlgInt; 2] {
        [AlgInt { a: &self.a * &self.c, b: BigInt::zero() }, AlgInt { a: &self.b * &self.c, b: self.c.clone() }]
    }

    /// `(A, B, C)` with lattice basis `A` and `B + C·ω`.
    pub fn lattice(&self) -> (BigInt, BigInt, BigInt) {
        (&self.a * &self.c, &self.b * &self.c, self.c.clone())
    }

    pub fn contains(&self, x: &AlgInt) -> bool {
        if !x.a.is_multiple_of(&self.c) || !x.b.is_multiple_of(&self.c) {
            return false;
        }
        let s = &x.a / &self.c;
        let t = &x.b / &self.c;
        (s - &self.b * t).is_multiple_of(&self.a)
    }

    pub fn contains_elem(&self, x: &FieldElem) -> bool {
        x.is_integral() && self.contains(&x.num)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &IntegralIdeal) -> bool {
        self.basis().iter().all(|g| other.contains(g))
    }

    /// Content and primitive part: `self = content · primitive`.
    pub fn primitive(&self) -> IntegralIdeal {
        IntegralIdeal { a: self.a.clone(), b: self.b.clone(), c: BigInt::one() }
    }

    pub fn scale(&self, k: &BigInt) -> IntegralIdeal {
        IntegralIdeal { a: self.a.clone(), b: self.b.clone(), c: &self.c * k.abs() }
    }
}

impl fmt::Display for IntegralIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// Parses `"a,b,c"` (brackets optional). The result still needs
/// [`IntegralIdeal::from_hnf`] validation against a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfTriple(pub BigInt, pub BigInt, pub BigInt);

impl FromStr for HnfTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = t.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected `a,b,c`, got `{s}`")));
        }
        Ok(HnfTriple(parse_big(parts[0])?, parse_big(parts[1])?, parse_big(parts[2])?))
    }
}

/// The fractional ideal `num / den`, reduced so that `den` is minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractionalIdeal {
    num: IntegralIdeal,
    den: BigInt,
}

impl FractionalIdeal {
    pub fn new(num: IntegralIdeal, den: BigInt) -> Self {
        assert!(den.is_positive());
        let g = num.c.gcd(&den);
        FractionalIdeal {
            num: IntegralIdeal { a: num.a, b: num.b, c: &num.c / &g },
            den: den / g,
        }
    }

    pub fn integral(num: IntegralIdeal) -> Self {
        FractionalIdeal { num, den: BigInt::one() }
    }

    pub fn unit() -> Self {
        FractionalIdeal::integral(IntegralIdeal::unit())
    }

    pub fn num(&self) -> &IntegralIdeal {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn into_integral(self) -> Option<IntegralIdeal> {
        self.den.is_one().then_some(self.num)
    }

    pub fn norm(&self) -> num_rational::BigRational {
        num_rational::BigRational::new(self.num.norm(), &self.den * &self.den)
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        let scaled = x.scale(&self.den);
        scaled.is_integral() && self.num.contains(&scaled.num)
    }

    /// `(A, B, C, D)`: lattice basis `A/D` and `(B + C·ω)/D`.
    pub fn lattice(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let (a, b, c) = self.num.lattice();
        (a, b, c, self.den.clone())
    }

    pub fn basis(&self) -> [FieldElem; 2] {
        let [u, v] = self.num.basis();
        [FieldElem::new(u, self.den.clone()), FieldElem::new(v, self.den.clone())]
    }

    /// True iff the ideal contains `O_K` (i.e. its inverse is integral).
    pub fn contains_one(&self) -> bool {
        self.contains(&FieldElem::one())
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// HNF `(A, B, C)` of the full-rank lattice spanned by `gens` in
/// `(1, ω)`-coordinates; `None` if the lattice is not of rank 2.
pub(crate) fn hnf2<I>(gens: I) -> Option<(BigInt, BigInt, BigInt)>
where
    I: IntoIterator<Item = (BigInt, BigInt)>,
{
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut acc = BigInt::zero();
    for (s, t) in gens {
        if t.is_zero() {
            acc = acc.gcd(&s);
            continue;
        }
        pivot = Some(match pivot {
            None => (s, t),
            Some((ps, pt)) => {
                let eg = pt.extended_gcd(&t);
                let g = eg.gcd;
                let killed = (&t / &g) * &ps - (&pt / &g) * &s;
                acc = acc.gcd(&killed);
                (&eg.x * &ps + &eg.y * &s, g)
            }
        });
    }
    let (mut ps, mut pt) = pivot?;
    if acc.is_zero() {
        return None;
    }
    if pt.is_negative() {
        pt = -pt;
        ps = -ps;
    }
    let a = acc.abs();
    Some((a.clone(), ps.mod_floor(&a), pt))
}

impl QuadraticField {
    /// Integral ideal from a full-rank lattice in HNF.
    fn ideal_from_lattice(&self, (a, b, c): (BigInt, BigInt, BigInt)) -> IntegralIdeal {
        debug_assert!(a.is_multiple_of(&c) && b.is_multiple_of(&c), "not an ideal lattice");
        let ideal = IntegralIdeal { a: &a / &c, b: &b / &c, c };
        debug_assert!(self.norm(&AlgInt { a: ideal.b.clone(), b: BigInt::one() }).is_multiple_of(&ideal.a));
        ideal
    }

    /// The ideal generated (as an `O_K`-module) by nonzero integral elements.
    pub fn ideal_from_generators(&self, gens: &[AlgInt]) -> IntegralIdeal {
        let omega = AlgInt::new(0, 1);
        let lattice = gens
            .iter()
            .flat_map(|g| [g.clone(), self.mul(g, &omega)])
            .map(|x| (x.a, x.b));
        self.ideal_from_lattice(hnf2(lattice).expect("nonzero generators span a full lattice"))
    }

    /// The principal ideal `(x)` for `x ≠ 0`.
    pub fn principal_ideal(&self, x: &FieldElem) -> Result<FractionalIdeal> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let num = self.ideal_from_generators(std::slice::from_ref(&x.num));
        Ok(FractionalIdeal::new(num, x.den.clone()))
    }

    pub fn ideal_mul(&self, x: &IntegralIdeal, y: &IntegralIdeal) -> IntegralIdeal {
        let [u1, u2] = x.basis();
        let [v1, v2] = y.basis();
        let prods = [self.mul(&u1, &v1), self.mul(&u1, &v2), self.mul(&u2, &v1), self.mul(&u2, &v2)];
        self.ideal_from_lattice(hnf2(prods.into_iter().map(|p| (p.a, p.b))).expect("product of nonzero ideals"))
    }

    pub fn ideal_pow(&self, x: &IntegralIdeal, e: u64) -> IntegralIdeal {
        let mut acc = IntegralIdeal::unit();
        for _ in 0..e {
            acc = self.ideal_mul(&acc, x);
        }
        acc
    }

    pub fn ideal_conj(&self, x: &IntegralIdeal) -> IntegralIdeal {
        let basis = x.basis().map(|g| self.conj(&g));
        self.ideal_from_lattice(hnf2(basis.into_iter().map(|p| (p.a, p.b))).expect("nonzero ideal"))
    }

    /// `x + y` (the ideal generated by both).
    pub fn ideal_sum(&self, x: &IntegralIdeal, y: &IntegralIdeal) -> IntegralIdeal {
        let gens = x.basis().into_iter().chain(y.basis()).map(|p| (p.a, p.b));
        self.ideal_from_lattice(hnf2(gens).expect("nonzero ideals"))
    }

    pub fn frac_mul(&self, x: &FractionalIdeal, y: &FractionalIdeal) -> FractionalIdeal {
        FractionalIdeal::new(self.ideal_mul(&x.num, &y.num), &x.den * &y.den)
    }

    pub fn frac_pow(&self, x: &FractionalIdeal, e: i64) -> FractionalIdeal {
        let base = if e < 0 { self.frac_inverse(x) } else { x.clone() };
        let mut acc = FractionalIdeal::unit();
        for _ in 0..e.unsigned_abs() {
            acc = self.frac_mul(&acc, &base);
        }
        acc
    }

    /// `J^{-1} = conj(J) / Nm(J)`; the inverse of an integral ideal contains `O_K`.
    pub fn inverse(&self, x: &IntegralIdeal) -> FractionalIdeal {
        FractionalIdeal::new(self.ideal_conj(x), x.norm())
    }

    pub fn frac_inverse(&self, x: &FractionalIdeal) -> FractionalIdeal {
        self.inverse(&x.num).scale_up(&x.den)
    }

    /// `x + y` for fractional ideals.
    pub fn frac_sum(&self, x: &FractionalIdeal, y: &FractionalIdeal) -> FractionalIdeal {
        let l = x.den.lcm(&y.den);
        let xs = x.num.scale(&(&l / &x.den));
        let ys = y.num.scale(&(&l / &y.den));
        FractionalIdeal::new(self.ideal_sum(&xs, &ys), l)
    }

    /// Validates and builds an ideal from a parsed triple.
    pub fn ideal_from_triple(&self, t: &HnfTriple) -> Result<IntegralIdeal> {
        IntegralIdeal::from_hnf(self, t.0.clone(), t.1.clone(), t.2.clone())
    }

    /// All integral ideals of norm exactly `n`, in HNF order.
    pub fn ideals_of_norm(&self, n: u64) -> Vec<IntegralIdeal> {
        let mut out = Vec::new();
        let mut c = 1u64;
        while c * c <= n {
            if n % (c * c) == 0 {
                let a = n / (c * c);
                for b in 0..a {
                    let nb = self.norm(&AlgInt::new(b, 1));
                    if nb.is_multiple_of(&BigInt::from(a)) {
                        out.push(IntegralIdeal { a: a.into(), b: b.into(), c: c.into() });
                    }
                }
            }
            c += 1;
        }
        out.sort();
        out
    }

    /// All integral ideals with norm `<= bound`, ordered by (norm, HNF).
    pub fn ideals_up_to(&self, bound: u64) -> Vec<IntegralIdeal> {
        (1..=bound).flat_map(|n| self.ideals_of_norm(n)).collect()
    }
}

impl FractionalIdeal {
    fn scale_up(self, k: &BigInt) -> FractionalIdeal {
        FractionalIdeal::new(self.num.scale(k), self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_field::make_field;

    fn ideal(k: &QuadraticField, a: i64, b: i64, c: i64) -> IntegralIdeal {
        IntegralIdeal::from_hnf(k, a.into(), b.into(), c.into()).unwrap()
    }

    #[test]
    fn ramified_square_in_q_sqrt10() {
        let k = make_field(10).unwrap();
        let p2 = ideal(&k, 2, 0, 1);
        let sq = k.ideal_mul(&p2, &p2);
        assert_eq!(sq, ideal(&k, 1, 0, 2));
        assert_eq!(sq.norm(), BigInt::from(4));
    }

    #[test]
    fn identity_and_inverse() {
        let k = make_field(10).unwrap();
        let p2 = ideal(&k, 2, 0, 1);
        let one = FractionalIdeal::unit();
        let p = FractionalIdeal::integral(p2.clone());
        assert_eq!(k.frac_mul(&p, &one), p);
        let inv = k.inverse(&p2);
        assert!(inv.contains_one());
        assert_eq!(k.frac_mul(&inv, &p), one);
        assert_eq!(k.inverse(&IntegralIdeal::unit()), one);
    }

    #[test]
    fn principal_inverse_is_reciprocal() {
        let k = make_field(-15).unwrap();
        let x = FieldElem::integral(AlgInt::new(3, 2));
        let px = k.principal_ideal(&x).unwrap();
        let inv_x = k.elem_inv(&x).unwrap();
        assert_eq!(k.frac_inverse(&px), k.principal_ideal(&inv_x).unwrap());
    }

    #[test]
    fn rejects_non_ideal_triples() {
        let k = make_field(10).unwrap();
        assert!(IntegralIdeal::from_hnf(&k, 3.into(), 0.into(), 1.into()).is_err());
        assert!(IntegralIdeal::from_hnf(&k, 3.into(), 3.into(), 1.into()).is_err());
        assert!(IntegralIdeal::from_hnf(&k, 0.into(), 0.into(), 1.into()).is_err());
        assert!("2,0".parse::<HnfTriple>().is_err());
        assert_eq!("[2,0,1]".parse::<HnfTriple>().unwrap(), HnfTriple(2.into(), 0.into(), 1.into()));
    }

    #[test]
    fn ideals_of_norm_counts() {
        // Q(i): number of ideals of norm n is sum of chi_{-4}(d) over d | n
        let k = make_field(-1).unwrap();
        let counts: Vec<usize> = (1..=10).map(|n| k.ideals_of_norm(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 0, 1, 2, 0, 0, 1, 1, 2]);
    }
}
