use std::collections::{BTreeMap, BTreeSet};

use euclid_core::euclidean::{
    cosets, descent_target_inv, generates_module, is_b1_member, motzkin_search, verify_assignment, EIdeal, LevelAssignment,
    SearchBounds, SearchScope,
};
use euclid_core::{make_field, AlgInt, ClassGroup, FieldElem, FractionalIdeal, IntegralIdeal, QuadraticField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

fn setup(d: i64) -> (QuadraticField, ClassGroup, IntegralIdeal) {
    let k = make_field(d).unwrap();
    let g = ClassGroup::compute(&k).unwrap();
    let c = if g.order() == 1 { IntegralIdeal::unit() } else { g.generator().ideal().clone() };
    (k, g, c)
}

/// Nonzero cosets of `C` in `IC`, found by reducing `u·β_1 + v·β_2` for
/// `0 <= u, v < [IC : C]` and comparing differences against `C`.
fn naive_cosets(k: &QuadraticField, inv: &IntegralIdeal, c: &IntegralIdeal) -> Vec<FieldElem> {
    let ic = k.frac_mul(&k.inverse(inv), &FractionalIdeal::integral(c.clone()));
    let n = inv.norm().to_i64().unwrap();
    let [b1, b2] = ic.basis();
    let mut reps: Vec<FieldElem> = vec![FieldElem::zero()];
    for u in 0..n {
        for v in 0..n {
            let x = b1.scale(&BigInt::from(u)).add(&b2.scale(&BigInt::from(v)));
            if !reps.iter().any(|r| c.contains_elem(&x.sub(r))) {
                reps.push(x);
            }
        }
    }
    assert_eq!(reps.len() as i64, n, "index of C in IC");
    reps.remove(0);
    reps
}

fn naive_box(c: &IntegralIdeal, h: i64) -> Vec<AlgInt> {
    let mut out = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            let y = AlgInt::new(a, b);
            if c.contains(&y) {
                out.push(y);
            }
        }
    }
    out
}

fn naive_target(k: &QuadraticField, z: &FieldElem, inv: &IntegralIdeal, c: &IntegralIdeal, bound: u64) -> Option<IntegralIdeal> {
    if z.is_zero() {
        return None;
    }
    let norm = k.elem_norm(z).abs() * BigRational::from_integer(inv.norm()) / BigRational::from_integer(c.norm());
    if !norm.is_integer() || norm.to_integer() > BigInt::from(bound) {
        return None;
    }
    let j = k.frac_mul(&k.frac_mul(&k.principal_ideal(z).unwrap(), &FractionalIdeal::integral(inv.clone())), &k.inverse(c));
    Some(j.into_integral().expect("x + y lies in IC"))
}

/// Level function straight from the definition, on the same horizon. The
/// box is centred on the canonical representatives, so these are shared
/// with the search; everything else is recomputed here.
fn naive_levels(k: &QuadraticField, c: &IntegralIdeal, b: SearchBounds) -> BTreeMap<IntegralIdeal, u32> {
    let ys = naive_box(c, b.height as i64);
    let mut levels = BTreeMap::from([(IntegralIdeal::unit(), 0u32)]);
    let candidates: Vec<_> = k.ideals_up_to(b.norm_bound).into_iter().filter(|i| !i.is_unit()).collect();
    let cos: BTreeMap<_, Vec<FieldElem>> = candidates
        .iter()
        .map(|i| {
            let reps = cosets(k, &EIdeal::from_inverse(i.clone()), c);
            (i.clone(), reps.into_iter().filter(|r| !r.is_zero).map(|r| r.value).collect())
        })
        .collect();
    for level in 1..=b.depth {
        let snapshot = levels.clone();
        for inv in &candidates {
            if snapshot.contains_key(inv) {
                continue;
            }
            let ok = cos[inv].iter().all(|x| {
                ys.iter().any(|y| {
                    naive_target(k, &x.add(&FieldElem::integral(y.clone())), inv, c, b.norm_bound)
                        .is_some_and(|t| snapshot.contains_key(&t))
                })
            });
            if ok {
                levels.insert(inv.clone(), level);
            }
        }
    }
    levels
}

fn as_map(l: &LevelAssignment) -> BTreeMap<IntegralIdeal, u32> {
    l.levels().map(|(i, n)| (i.inv().clone(), n)).collect()
}

#[test]
fn search_matches_naive_level_function() {
    for (d, b) in [
        (-15, SearchBounds { norm_bound: 12, height: 6, depth: 9 }),
        (-5, SearchBounds { norm_bound: 10, height: 6, depth: 9 }),
        (-1, SearchBounds { norm_bound: 20, height: 4, depth: 6 }),
        (-11, SearchBounds { norm_bound: 15, height: 3, depth: 6 }),
        (10, SearchBounds { norm_bound: 10, height: 5, depth: 4 }),
    ] {
        let (k, g, c) = setup(d);
        let l = motzkin_search(&k, &g, &c, b, SearchScope::AllE).unwrap();
        assert!(verify_assignment(&k, &l));
        assert_eq!(as_map(&l), naive_levels(&k, &c, b), "d = {d}");
    }
}

#[test]
fn coset_counts_and_distinctness() {
    for d in [-15, -5, 10, 15, 2] {
        let (k, _, c) = setup(d);
        for inv in k.ideals_up_to(25) {
            let i = EIdeal::from_inverse(inv.clone());
            let reps = cosets(&k, &i, &c);
            assert_eq!(BigInt::from(reps.len()), inv.norm());
            assert_eq!(reps.iter().filter(|r| r.is_zero).count(), 1);
            let naive = naive_cosets(&k, &inv, &c);
            for x in &naive {
                let hits = reps.iter().filter(|r| c.contains_elem(&x.sub(&r.value))).count();
                assert_eq!(hits, 1, "d = {d}, I^-1 = {inv}, x = {x}");
            }
        }
    }
}

#[test]
fn generates_module_iff_target_coprime_to_inverse() {
    // (x) + C = IC  ⟺  the integral ideal x·I^{-1}·C^{-1} is coprime to I^{-1}
    for d in [-15, 10] {
        let (k, _, c) = setup(d);
        for inv in k.ideals_up_to(12).into_iter().filter(|i| !i.is_unit()) {
            let i = EIdeal::from_inverse(inv.clone());
            for x in naive_cosets(&k, &inv, &c) {
                let t = descent_target_inv(&k, &x, &inv, &c).unwrap();
                let coprime = k.ideal_sum(&t, &inv).is_unit();
                assert_eq!(generates_module(&k, &x, &i, &c).unwrap(), coprime, "d = {d}, {inv}, {x}");
            }
        }
    }
}

fn units(k: &QuadraticField) -> Vec<FieldElem> {
    let mut us: Vec<FieldElem> = k.torsion_units().iter().cloned().map(FieldElem::integral).collect();
    if let Ok(e) = k.fundamental_unit() {
        let e = FieldElem::integral(e.clone());
        us.push(k.elem_inv(&e).unwrap());
        us.push(e);
    }
    us
}

#[test]
fn descent_is_unit_invariant() {
    let fixtures: [(i64, &[(u64, u64, u64)]); 5] = [
        (-15, &[(2, 0, 1), (3, 1, 1), (4, 0, 1), (5, 2, 1), (1, 0, 2), (17, 5, 1)]),
        (-5, &[(3, 1, 1), (7, 3, 1), (2, 1, 1), (1, 0, 3)]),
        (10, &[(3, 1, 1), (3, 2, 1), (13, 6, 1), (1, 0, 2)]),
        (15, &[(7, 1, 1), (2, 1, 1), (11, 2, 1)]),
        (-1, &[(5, 2, 1), (13, 5, 1), (2, 1, 1)]),
    ];
    let mut count = 0;
    for (d, invs) in fixtures {
        let (k, _, c) = setup(d);
        let us = units(&k);
        let ys = naive_box(&c, 5);
        for &(a, b, cc) in invs {
            let inv = IntegralIdeal::from_hnf(&k, a.into(), b.into(), cc.into()).unwrap();
            count += 1;
            for x in naive_cosets(&k, &inv, &c) {
                let reach: BTreeSet<_> = ys.iter().filter_map(|y| naive_target(&k, &x.add(&FieldElem::integral(y.clone())), &inv, &c, u64::MAX)).collect();
                for u in &us {
                    let ux = k.elem_mul(u, &x);
                    assert!(!c.contains_elem(&ux), "unit moved a nonzero coset to zero");
                    let ureach: BTreeSet<_> = ys
                        .iter()
                        .filter_map(|y| {
                            let uy = k.elem_mul(u, &FieldElem::integral(y.clone()));
                            naive_target(&k, &ux.add(&uy), &inv, &c, u64::MAX)
                        })
                        .collect();
                    assert_eq!(reach, ureach, "d = {d}, I^-1 = {inv}, x = {x}, u = {u}");
                }
            }
        }
    }
    assert_eq!(count, 20);
}

#[test]
fn search_is_monotone_in_bounds() {
    for d in [-15, -5, 10, -7] {
        let (k, g, c) = setup(d);
        let small = motzkin_search(&k, &g, &c, SearchBounds { norm_bound: 15, height: 4, depth: 3 }, SearchScope::AllE).unwrap();
        let large = motzkin_search(&k, &g, &c, SearchBounds { norm_bound: 25, height: 10, depth: 6 }, SearchScope::AllE).unwrap();
        for (i, l) in small.levels() {
            let bigger = large.level(&i).unwrap_or_else(|| panic!("d = {d}: {i} lost its level"));
            assert!(bigger <= l, "d = {d}: {i} rose from {l} to {bigger}");
        }
        let primes = motzkin_search(&k, &g, &c, SearchBounds { norm_bound: 25, height: 10, depth: 6 }, SearchScope::PrimeInverses).unwrap();
        for (i, l) in primes.levels() {
            assert!(large.level(&i).unwrap() <= l, "d = {d}: restricting to primes lowered {i}");
        }
    }
}

#[test]
fn level_one_agrees_with_b1_criterion() {
    for d in [-15, -5, -1, -2, -7, 10, 2, 15] {
        let (k, g, c) = setup(d);
        let l = motzkin_search(&k, &g, &c, SearchBounds { norm_bound: 50, height: 30, depth: 1 }, SearchScope::PrimeInverses).unwrap();
        let mut missed = 0;
        for p in k.primes_up_to(50).into_iter().filter(|p| !c.is_subset_of(p.ideal())) {
            let member = is_b1_member(&k, &g, &p, &c).unwrap();
            let level_one = l.level(&EIdeal::prime_inverse(&p)) == Some(1);
            assert!(!level_one || member, "d = {d}: search put {p} at level 1 but it is not in B_1");
            missed += (member && !level_one) as u32;
        }
        if !k.is_real() {
            assert_eq!(missed, 0, "d = {d}: bounded search missed B_1 members");
        }
    }
}

#[test]
fn zero_coset_is_never_a_witness() {
    let (k, g, c) = setup(-15);
    let l = motzkin_search(&k, &g, &c, SearchBounds { norm_bound: 20, height: 10, depth: 7 }, SearchScope::AllE).unwrap();
    for (i, _) in l.levels() {
        for w in l.witnesses(&i) {
            assert!(!c.contains_elem(&w.coset));
            assert!(!w.coset.add(&FieldElem::integral(w.y.clone())).is_zero());
        }
    }
    assert!(l.levels().all(|(i, _)| !i.is_unit() || l.witnesses(&i).is_empty()));
}
