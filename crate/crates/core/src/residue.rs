//! The residue field `O_K / p` of a prime ideal, in machine words.
//!
//! Degree-one primes reduce `a + b·ω` to `a + b·r (mod p)` where `ω ≡ r`;
//! inert primes give `F_p[ω] / (ω^2 - t·ω + n)`, a field with `p^2` elements.

use num_bigint::BigInt;

use crate::arith::{big_mod, factor, mul_mod, pow_mod};
use crate::ideals::PrimeIdeal;
use crate::quadratic_field::{AlgInt, QuadraticField};

/// A residue `u + v·ω`; `v` is always zero for degree-one primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(pub u64, pub u64);

#[derive(Clone, Debug)]
pub struct ResidueField {
    p: u64,
    kind: Kind,
    /// `(q, e)` factorization of the unit group order `Nm(p) - 1`.
    group_order_factors: Vec<(u64, u32)>,
}

#[derive(Clone, Debug)]
enum Kind {
    Linear { root: u64 },
    Quadratic { trace: u64, norm: u64 },
}

impl ResidueField {
    pub fn new(k: &QuadraticField, prime: &PrimeIdeal) -> Self {
        let p = prime.p();
        let kind = match prime.omega_root() {
            Some(root) => Kind::Linear { root },
            None => {
                let (t, n) = k.omega_min_poly();
                Kind::Quadratic { trace: big_mod(t, p), norm: big_mod(n, p) }
            }
        };
        let group_order_factors = match kind {
            Kind::Linear { .. } => factor(p - 1),
            Kind::Quadratic { .. } => {
                // p^2 - 1 = (p - 1)(p + 1), factored piecewise to stay in range
                let mut fs = factor(p - 1);
                for (q, e) in factor(p + 1) {
                    match fs.iter_mut().find(|(r, _)| *r == q) {
                        Some(entry) => entry.1 += e,
                        None => fs.push((q, e)),
                    }
                }
                fs.sort_unstable();
                fs
            }
        };
        ResidueField { p, kind, group_order_factors }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// `|O_K / p|`.
    pub fn size(&self) -> u64 {
        match self.kind {
            Kind::Linear { .. } => self.p,
            Kind::Quadratic { .. } => self.p * self.p,
        }
    }

    /// Order of the multiplicative group, `Nm(p) - 1`.
    pub fn unit_group_order(&self) -> u64 {
        self.size() - 1
    }

    pub fn reduce(&self, x: &AlgInt) -> Residue {
        let a = big_mod(&x.a, self.p);
        let b = big_mod(&x.b, self.p);
        match self.kind {
            Kind::Linear { root } => Residue((a + mul_mod(b, root, self.p)) % self.p, 0),
            Kind::Quadratic { .. } => Residue(a, b),
        }
    }

    pub fn reduce_int(&self, x: &BigInt) -> Residue {
        Residue(big_mod(x, self.p), 0)
    }

    pub fn zero(&self) -> Residue {
        Residue(0, 0)
    }

    pub fn one(&self) -> Residue {
        Residue(1 % self.p, 0)
    }

    pub fn is_zero(&self, x: Residue) -> bool {
        x == Residue(0, 0)
    }

    pub fn add(&self, x: Residue, y: Residue) -> Residue {
        Residue((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    pub fn mul(&self, x: Residue, y: Residue) -> Residue {
        let p = self.p;
        match self.kind {
            Kind::Linear { .. } => Residue(mul_mod(x.0, y.0, p), 0),
            Kind::Quadratic { trace, norm } => {
                // ω^2 = t·ω - n
                let bb = mul_mod(x.1, y.1, p);
                let u = (mul_mod(x.0, y.0, p) + p - mul_mod(bb, norm, p)) % p;
                let v = (mul_mod(x.0, y.1, p) + mul_mod(x.1, y.0, p) + mul_mod(bb, trace, p)) % p;
                Residue(u, v)
            }
        }
    }

    pub fn pow(&self, x: Residue, mut e: u64) -> Residue {
        if let Kind::Linear { .. } = self.kind {
            return Residue(pow_mod(x.0, e, self.p), 0);
        }
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Residue) -> Residue {
        debug_assert!(!self.is_zero(x));
        self.pow(x, self.unit_group_order() - 1)
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(&self, x: Residue) -> u64 {
        debug_assert!(!self.is_zero(x));
        let mut ord = self.unit_group_order();
        for &(q, e) in &self.group_order_factors {
            for _ in 0..e {
                if self.pow(x, ord / q) == self.one() {
                    ord /= q;
                } else {
                    break;
                }
            }
        }
        ord
    }

    /// Every element of the field, in a fixed order.
    pub fn elements(&self) -> Vec<Residue> {
        match self.kind {
            Kind::Linear { .. } => (0..self.p).map(|u| Residue(u, 0)).collect(),
            Kind::Quadratic { .. } => {
                (0..self.p).flat_map(|u| (0..self.p).map(move |v| Residue(u, v))).collect()
            }
        }
    }

    /// A generator of the multiplicative group (least in `elements` order).
    pub fn primitive_element(&self) -> Residue {
        let n = self.unit_group_order();
        self.elements()
            .into_iter()
            .filter(|&x| !self.is_zero(x))
            .find(|&x| self.order(x) == n)
            .expect("finite fields have cyclic unit groups")
    }

    /// Lifts a residue to a small algebraic integer mapping onto it.
    pub fn lift(&self, x: Residue) -> AlgInt {
        match self.kind {
            Kind::Linear { .. } => AlgInt::new(x.0, 0),
            Kind::Quadratic { .. } => AlgInt::new(x.0, x.1),
        }
    }
}
