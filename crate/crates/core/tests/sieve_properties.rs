use std::collections::BTreeSet;

use euclid_core::ideals::factor_prime;
use euclid_core::residue::ResidueField;
use euclid_core::sieve::{
    admissible_e_ideals, admissible_primes, f_monoid, f_p, gupta_murty_scan, multiplicatively_independent, omega_p,
    sieve_heart_check, unit_representatives, z_alpha, z_beta, SievePanel,
};
use euclid_core::{make_field, AlgInt, ClassGroup, FieldElem, IntegralIdeal, PrimeIdeal, QuadraticField};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

/// `O_K/p` by hand: pairs `(a, b)` meaning `a + bω`, or plain residues for
/// degree-one primes.
struct Model {
    p: i64,
    root: Option<i64>,
    t: i64,
    n: i64,
}

impl Model {
    fn new(k: &QuadraticField, q: &PrimeIdeal) -> Model {
        let (t, n) = k.omega_min_poly();
        Model { p: q.p() as i64, root: q.omega_root().map(|r| r as i64), t: t.to_i64().unwrap(), n: n.to_i64().unwrap() }
    }

    fn reduce(&self, x: &AlgInt) -> (i64, i64) {
        let a = (&x.a % self.p).to_i64().unwrap().rem_euclid(self.p);
        let b = (&x.b % self.p).to_i64().unwrap().rem_euclid(self.p);
        match self.root {
            Some(r) => ((a + b * r).rem_euclid(self.p), 0),
            None => (a, b),
        }
    }

    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        let p = self.p;
        let bb = x.1 * y.1 % p;
        ((x.0 * y.0 - bb * self.n).rem_euclid(p), (x.0 * y.1 + x.1 * y.0 + bb * self.t).rem_euclid(p))
    }

    fn closure(&self, gens: &[(i64, i64)]) -> usize {
        let mut seen = BTreeSet::from([(1, 0)]);
        let mut frontier = vec![(1, 0)];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.len()
    }
}

fn unit_gens(k: &QuadraticField) -> Vec<AlgInt> {
    let mut g = vec![k.torsion_generator().clone()];
    if let Ok(e) = k.fundamental_unit() {
        g.push(e.clone());
    }
    g
}

#[test]
fn unit_image_matches_subgroup_closure() {
    for d in [2i64, 10, 5, 15, 7, -1, -3, -15, -5] {
        let k = make_field(d).unwrap();
        let gens = unit_gens(&k);
        for q in k.primes_up_to(1500) {
            let img = f_p(&k, &q);
            let m = Model::new(&k, &q);
            let closure = m.closure(&gens.iter().map(|g| m.reduce(g)).collect::<Vec<_>>()) as u64;
            assert_eq!(img.f, closure, "d = {d}, p = {q}");
            assert_eq!((q.norm() - 1) % img.f, 0);
            assert_eq!(img.surjective, img.f == q.norm() - 1);
        }
    }
}

#[test]
fn monoid_image_matches_closure() {
    let k = make_field(10).unwrap();
    let gens = [AlgInt::new(1, 1), AlgInt::new(3, 0), AlgInt::new(2, -1), k.fundamental_unit().unwrap().clone()];
    for q in k.primes_up_to(400) {
        let m = Model::new(&k, &q);
        for take in 1..=gens.len() {
            let gs: Vec<_> = gens[..take].to_vec();
            let res: Vec<_> = gs.iter().map(|g| m.reduce(g)).collect();
            if res.iter().any(|r| *r == (0, 0)) {
                assert!(f_monoid(&k, &q, &gs).is_err());
                continue;
            }
            assert_eq!(f_monoid(&k, &q, &gs).unwrap(), m.closure(&res) as u64, "p = {q}, gens = {take}");
        }
        assert_eq!(f_monoid(&k, &q, &unit_gens(&k)).unwrap(), f_p(&k, &q).f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn powers_of_one_unit_are_dependent(a in 1u64..6, b in 1u64..6, t in 0usize..2) {
        let k = make_field(if t == 0 { 2 } else { 10 }).unwrap();
        let e = k.fundamental_unit().unwrap();
        let xs = [FieldElem::integral(k.pow(e, a)), FieldElem::integral(k.pow(e, b))];
        prop_assert!(!multiplicatively_independent(&k, &xs).unwrap());
        prop_assert!(multiplicatively_independent(&k, &xs[..1]).unwrap());
    }

    #[test]
    fn distinct_rational_primes_are_independent(i in 0usize..5, j in 0usize..5) {
        let ps = [2i64, 3, 5, 7, 11];
        prop_assume!(i != j);
        let k = make_field(-7).unwrap();
        let xs = [FieldElem::from_int(ps[i]), FieldElem::from_int(ps[j])];
        prop_assert!(multiplicatively_independent(&k, &xs).unwrap());
        let prod = FieldElem::from_int(ps[i] * ps[j]);
        prop_assert!(!multiplicatively_independent(&k, &[xs[0].clone(), xs[1].clone(), prod]).unwrap());
    }
}

fn setup(d: i64) -> (QuadraticField, ClassGroup, IntegralIdeal) {
    let k = make_field(d).unwrap();
    let g = ClassGroup::compute(&k).unwrap();
    let c = if g.order() == 1 { IntegralIdeal::unit() } else { g.generator().ideal().clone() };
    (k, g, c)
}

#[test]
fn z_beta_ignores_choice_of_representatives() {
    for d in [2, 10] {
        let (k, g, c) = setup(d);
        let eps = k.fundamental_unit().unwrap().clone();
        let panel = SievePanel::standard(&k, &g, &c, 1, 60, 40).unwrap();
        let c_basis = c.basis();
        for p in panel.primes() {
            let pd = panel.prime_data(&k, &g, p).unwrap();
            let field = ResidueField::new(&k, p);
            let reps = unit_representatives(&k, p, &field);
            // lifts that differ by a unit in the kernel of reduction
            let kernel = k.pow(&eps, field.order(field.reduce(&eps)));
            for (beta, z) in pd.z_beta_all(&k) {
                assert_eq!(z_beta(&k, &pd, &beta.value).unwrap(), z);
                let shifted = beta.value.add(&FieldElem::integral(&c_basis[0] + &c_basis[1]));
                assert_eq!(z_beta(&k, &pd, &shifted).unwrap(), z, "coset representative, d = {d}, p = {p}");
                if beta.is_zero {
                    continue;
                }
                let other: u64 = reps
                    .iter()
                    .map(|u| {
                        let lift = k.mul(&k.mul(&u.materialize(&k), &kernel), &kernel);
                        let alpha = k.elem_mul(&k.elem_mul(&FieldElem::integral(lift), &beta.value), &FieldElem::integral(pd.x_p.clone()));
                        assert!(alpha.is_integral());
                        z_alpha(&k, panel.script_a(), &alpha.num, p)
                    })
                    .sum();
                assert_eq!(other, z, "unit representatives, d = {d}, p = {p}, beta = {}", beta.value);
            }
        }
    }
}

#[test]
fn z_alpha_partitions_script_a() {
    let (k, g, c) = setup(10);
    let panel = SievePanel::standard(&k, &g, &c, 1, 80, 30).unwrap();
    for p in panel.primes() {
        let field = ResidueField::new(&k, p);
        let total: u64 = field.elements().iter().map(|&r| z_alpha(&k, panel.script_a(), &field.lift(r), p)).sum();
        assert_eq!(total, panel.script_a().len() as u64);
    }
    let x = panel.script_a()[0].clone();
    for p in panel.primes() {
        assert_eq!(z_alpha(&k, std::slice::from_ref(&x), &x, p), 1);
        assert_eq!(z_alpha(&k, &[], &x, p), 0);
    }
}

#[test]
fn degenerate_panels() {
    let (k, g, c) = setup(2);
    let empty = SievePanel::new(&k, &g, &c, 1, vec![], admissible_primes(&k, &g, &c, 1, 50)).unwrap();
    for p in empty.primes() {
        let pd = empty.prime_data(&k, &g, p).unwrap();
        assert_eq!(omega_p(&k, &pd), p.norm());
        assert!(sieve_heart_check(&k, &empty, &pd).lhs.is_zero());
    }
    // one ideal, a prime where the unit image is everything
    let a = admissible_e_ideals(&k, &g, &c, 1, 20);
    let single = SievePanel::new(&k, &g, &c, 1, vec![a[1].clone()], admissible_primes(&k, &g, &c, 1, 50)).unwrap();
    let x = &single.script_a()[0];
    let p = single.primes().iter().find(|p| f_p(&k, p).surjective && !p.ideal().contains(x)).unwrap().clone();
    let pd = single.prime_data(&k, &g, &p).unwrap();
    let rep = sieve_heart_check(&k, &single, &pd);
    assert!(rep.holds());
    assert!(!rep.rhs_raw.is_zero());
    // units reach every nonzero residue, so each nonzero coset meets x once
    for (beta, z) in pd.z_beta_all(&k) {
        assert_eq!(z, u64::from(!beta.is_zero), "beta = {}", beta.value);
    }
}

#[test]
fn zero_coset_counts_multiples_of_p() {
    let (k, g, c) = setup(10);
    let panel = SievePanel::standard(&k, &g, &c, 1, 60, 40).unwrap();
    for p in panel.primes() {
        let pd = panel.prime_data(&k, &g, p).unwrap();
        let zero = FieldElem::zero();
        let divisible = panel.script_a().iter().filter(|x| p.ideal().contains(x)).count() as u64;
        assert_eq!(z_beta(&k, &pd, &zero).unwrap(), pd.f() * divisible);
    }
}

#[test]
fn gupta_murty_boundaries() {
    let k = make_field(2).unwrap();
    let rows = gupta_murty_scan(&k, 2000, &[1, 2, 5, 10, 100, 2000]).unwrap();
    assert!(rows.windows(2).all(|w| w[0].count <= w[1].count));
    assert_eq!(rows.last().unwrap().count, k.primes_up_to(2000).len() as u64);
    assert!(gupta_murty_scan(&make_field(-1).unwrap(), 100, &[10]).is_err());
    let p7 = factor_prime(7, &k).unwrap();
    assert!(p7.iter().all(|(q, _)| f_p(&k, q).f == 6));
}
