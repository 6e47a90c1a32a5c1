use std::collections::BTreeSet;

use euclid_core::quadratic_field::Omega;
use euclid_core::{make_field, AlgInt, ClassGroup, Error, FieldElem, QuadraticField};
use num_bigint::BigInt;
use proptest::prelude::*;

fn squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    (2..).take_while(|q| q * q <= n).all(|q| n % (q * q) != 0)
}

fn fields() -> Vec<QuadraticField> {
    [2, 3, 5, 10, 13, 15, -1, -2, -3, -5, -15, -23].iter().map(|&d| make_field(d).unwrap()).collect()
}

fn elem() -> impl Strategy<Value = AlgInt> {
    (-10_000i64..10_000, -10_000i64..10_000).prop_map(|(a, b)| AlgInt::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_is_multiplicative(fi in 0usize..12, x in elem(), y in elem()) {
        let k = &fields()[fi];
        prop_assert_eq!(k.norm(&k.mul(&x, &y)), k.norm(&x) * k.norm(&y));
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(fi in 0usize..12, x in elem(), y in elem()) {
        let k = &fields()[fi];
        prop_assert_eq!(k.conj(&k.conj(&x)), x.clone());
        prop_assert_eq!(k.conj(&(&x + &y)), &k.conj(&x) + &k.conj(&y));
        prop_assert_eq!(k.conj(&k.mul(&x, &y)), k.mul(&k.conj(&x), &k.conj(&y)));
        prop_assert_eq!(k.mul(&x, &k.conj(&x)), AlgInt::from_int(k.norm(&x)));
    }

    #[test]
    fn field_inverse_round_trips(fi in 0usize..12, x in elem(), den in 1i64..50) {
        let k = &fields()[fi];
        prop_assume!(!x.is_zero());
        let e = FieldElem::new(x, den);
        let inv = k.elem_inv(&e).unwrap();
        prop_assert_eq!(k.elem_mul(&e, &inv), FieldElem::one());
    }
}

/// Least solution of `X^2 - dY^2 = ±4` (or `±1` when `d ≢ 1 mod 4`) with
/// `X, Y > 0`, as an element of `O_K`.
fn pell_oracle(d: i64) -> AlgInt {
    let one_mod_four = d.rem_euclid(4) == 1;
    let target: i128 = if one_mod_four { 4 } else { 1 };
    for y in 1i128.. {
        let dy2 = d as i128 * y * y;
        for t in [-target, target] {
            let x2 = dy2 + t;
            if x2 <= 0 {
                continue;
            }
            let x = (x2 as f64).sqrt() as i128;
            let x = (x - 1..=x + 1).find(|r| r * r == x2);
            if let Some(x) = x {
                return if one_mod_four {
                    // (x + y√d)/2 = (x - y)/2 + y·ω
                    AlgInt::new(BigInt::from((x - y) / 2), BigInt::from(y))
                } else {
                    AlgInt::new(BigInt::from(x), BigInt::from(y))
                };
            }
        }
    }
    unreachable!()
}

#[test]
fn fundamental_units_match_pell_search() {
    for d in (2..=100).filter(|&d| squarefree(d)) {
        let k = make_field(d).unwrap();
        let eps = k.fundamental_unit().unwrap();
        assert_eq!(eps, &pell_oracle(d), "d = {d}");
        assert!(k.is_unit(eps));
        assert_eq!(k.norm(eps).magnitude(), &1u32.into());
        assert_eq!(k.sign(&FieldElem::integral(eps - &AlgInt::one())), 1, "ε > 1 for d = {d}");
    }
}

#[test]
fn torsion_units() {
    for d in [-100i64, -3, -2, -1, 2, 5, 10] {
        if !squarefree(d) {
            continue;
        }
        let k = make_field(d).unwrap();
        let expected = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        assert_eq!(k.torsion_units().len(), expected);
        for u in k.torsion_units() {
            assert_eq!(k.pow(u, expected as u64), AlgInt::one());
            assert_eq!(k.norm(u), BigInt::from(1));
        }
    }
    assert!(make_field(-7).unwrap().fundamental_unit().is_err());
}

#[test]
fn bad_inputs() {
    assert!(matches!(make_field(12), Err(Error::NotSquareFree { .. })));
    assert!(matches!(make_field(0), Err(Error::DegenerateField(0))));
    assert!(matches!(make_field(1), Err(Error::DegenerateField(1))));
    assert!(make_field(-4).is_err());
}

#[test]
fn integral_bases() {
    assert_eq!(make_field(5).unwrap().omega(), Omega::HalfSqrt);
    assert_eq!(make_field(-3).unwrap().omega(), Omega::HalfSqrt);
    assert_eq!(make_field(10).unwrap().omega(), Omega::Sqrt);
    assert_eq!(make_field(10).unwrap().disc(), 40);
    assert_eq!(make_field(-15).unwrap().disc(), -15);
}

fn disc(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// `h(D)` for `D < 0`: the number of reduced forms `(a, b, c)`.
fn h_imaginary(dd: i64) -> u64 {
    let mut h = 0;
    for a in 1.. {
        if 3 * a * a > -dd {
            break;
        }
        for b in -a + 1..=a {
            if (b * b - dd) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - dd) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            h += 1;
        }
    }
    h
}

fn lt_sqrt(x: i64, dd: i64) -> bool {
    x <= 0 || x * x < dd
}

fn gt_sqrt(x: i64, dd: i64) -> bool {
    x > 0 && x * x > dd
}

/// The narrow class number for `D > 0`: cycles of reduced indefinite forms
/// under the reduction operator.
fn h_plus_real(dd: i64) -> u64 {
    let root = (dd as f64).sqrt() as i64 + 1;
    let reduced = |a: i64, b: i64| b > 0 && lt_sqrt(b, dd) && lt_sqrt(2 * a.abs() - b, dd) && gt_sqrt(2 * a.abs() + b, dd);
    let mut forms = BTreeSet::new();
    for b in 1..root {
        if (b * b - dd) % 4 != 0 {
            continue;
        }
        let ac = (b * b - dd) / 4;
        for a in (-root..=root).filter(|&a| a != 0 && ac % a == 0) {
            if reduced(a, b) {
                forms.insert((a, b, ac / a));
            }
        }
    }
    let rho = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        let mut r = (-b).rem_euclid(m);
        // largest r ≡ -b (mod 2|c|) below √D
        while lt_sqrt(r + m, dd) {
            r += m;
        }
        while !lt_sqrt(r, dd) {
            r -= m;
        }
        (c, r, (r * r - dd) / (4 * c))
    };
    let mut seen = BTreeSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = rho(g);
            assert!(forms.contains(&g), "rho left the reduced set at D = {dd}");
            if g == f {
                break;
            }
        }
    }
    cycles
}

fn class_number_oracle(d: i64) -> u64 {
    let dd = disc(d);
    if d < 0 {
        return h_imaginary(dd);
    }
    let k = make_field(d).unwrap();
    let eps = k.fundamental_unit().unwrap();
    let h_plus = h_plus_real(dd);
    if k.norm(eps) == BigInt::from(-1) {
        h_plus
    } else {
        h_plus / 2
    }
}

#[test]
fn class_numbers_match_reduced_forms() {
    for d in (-150..=150).filter(|&d| d != 0 && d != 1 && squarefree(d)) {
        let k = make_field(d).unwrap();
        let h = class_number_oracle(d);
        match ClassGroup::compute(&k) {
            Ok(g) => assert_eq!(g.order(), h, "d = {d}"),
            Err(Error::NonCyclicClassGroup { h: got, .. }) => {
                assert_eq!(got, h, "d = {d}");
                assert!(h % 4 == 0 || h % 9 == 0, "d = {d}: h = {h} reported non-cyclic");
            }
            Err(e) => panic!("d = {d}: {e}"),
        }
    }
}

#[test]
fn class_number_fixtures() {
    for (d, h) in [(2, 1), (10, 2), (-15, 2), (-5, 2), (-1, 1), (-23, 3), (79, 3), (-14, 4)] {
        assert_eq!(ClassGroup::compute(&make_field(d).unwrap()).unwrap().order(), h, "d = {d}");
        assert_eq!(class_number_oracle(d), h, "oracle at d = {d}");
    }
}
