//! Principality testing by exhaustive search over the elements of exact norm,
//! and the canonical choice of generator among unit multiples.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FractionalIdeal, IntegralIdeal};
use crate::arith::{exact_sqrt, isqrt};
use crate::error::{Error, Result};
use crate::quadratic_field::{AlgInt, FieldElem, QuadraticField};

impl QuadraticField {
    /// Some generator of an integral ideal, or `None` if it is not principal.
    ///
    /// Writes a candidate as `(X + Y√d)/2` and enumerates every solution of
    /// `X^2 - dY^2 = ±4N` inside the region where a unit-reduced generator
    /// must lie, so a `None` is a proof of non-principality.
    pub fn principal_generator(&self, ideal: &IntegralIdeal) -> Option<AlgInt> {
        let n = ideal.a().clone();
        let prim = ideal.primitive();
        let d = self.d_big();
        let four_n = BigInt::from(4) * &n;
        let y_max = if self.is_real() {
            // a generator with sqrt(N) <= |x| < sqrt(N)·ε exists; then
            // |X|, |Y|·√d <= sqrt(N)·(ε + 1) <= sqrt(N)·T
            let t = self.unit_bound();
            isqrt(&(&n * &t * &t / &d))
        } else {
            isqrt(&(&four_n / -&d))
        };
        let signs: &[i32] = if self.is_real() { &[1, -1] } else { &[1] };
        let mut y = BigInt::zero();
        while y <= y_max {
            let dyy = &d * &y * &y;
            for &s in signs {
                let xx = if s > 0 { &dyy + &four_n } else { &dyy - &four_n };
                let Some(x) = exact_sqrt(&xx) else { continue };
                for xs in [x.clone(), -x.clone()] {
                    if let Some(alpha) = self.from_half_coords(&xs, &y) {
                        if prim.contains(&alpha) {
                            return Some(alpha.scale(ideal.c()));
                        }
                    }
                }
            }
            y += 1;
        }
        None
    }

    /// An integer `T >= ε + 1` for the fundamental unit `ε` (real fields).
    fn unit_bound(&self) -> BigInt {
        let eps = self.fundamental_unit().expect("real field");
        let (x, y) = self.half_coords(eps);
        let root = isqrt(&(&y * &y * self.d_big())) + 1;
        let sum: BigInt = x + root;
        sum.div_floor(&BigInt::from(2)) + 2
    }

    /// The canonical generator of `I`, or `None` if `I` is not principal.
    pub fn is_principal(&self, ideal: &FractionalIdeal) -> Option<FieldElem> {
        let g = self.principal_generator(ideal.num())?;
        Some(self.canonicalize(&FieldElem::new(g, ideal.den().clone())))
    }

    pub fn canonical_generator(&self, ideal: &FractionalIdeal) -> Result<FieldElem> {
        self.is_principal(ideal).ok_or_else(|| Error::NotPrincipal(ideal.to_string()))
    }

    /// The distinguished unit multiple of `g`.
    ///
    /// Real fields: the multiple with `|g|/|g'|` in `[1/ε, ε)` and `g > 0`.
    /// Imaginary fields: the multiple of least argument in `[0, 2π)`.
    pub fn canonicalize(&self, g: &FieldElem) -> FieldElem {
        assert!(!g.is_zero());
        if self.is_real() {
            let eps = FieldElem::integral(self.fundamental_unit().expect("real").clone());
            let eps_inv = self.elem_inv(&eps).expect("unit");
            let mut g = g.clone();
            loop {
                let gc = self.elem_conj(&g);
                if self.cmp_abs(&g, &self.elem_mul(&gc, &eps)) != Ordering::Less {
                    g = self.elem_mul(&g, &eps_inv);
                } else if self.cmp_abs(&self.elem_mul(&g, &eps), &gc) == Ordering::Less {
                    g = self.elem_mul(&g, &eps);
                } else {
                    break;
                }
            }
            if self.sign(&g) < 0 {
                g = g.neg();
            }
            g
        } else {
            self.torsion_units()
                .iter()
                .map(|u| self.elem_mul(g, &FieldElem::integral(u.clone())))
                .min_by(|x, y| self.cmp_arg(x, y))
                .expect("torsion is nonempty")
        }
    }

    /// Orders nonzero elements of an imaginary field by argument in `[0, 2π)`.
    fn cmp_arg(&self, x: &FieldElem, y: &FieldElem) -> Ordering {
        let (xa, xb) = self.half_coords(&x.num);
        let (ya, yb) = self.half_coords(&y.num);
        let half = |re: &BigInt, im: &BigInt| -> u8 {
            if im.is_positive() || (im.is_zero() && re.is_positive()) {
                0
            } else {
                1
            }
        };
        half(&xa, &xb).cmp(&half(&ya, &yb)).then_with(|| {
            let cross = &xa * &yb - &xb * &ya;
            BigInt::zero().cmp(&cross)
        })
    }

    /// True iff `x` and `y` generate the same ideal.
    pub fn associated(&self, x: &FieldElem, y: &FieldElem) -> bool {
        match self.elem_div(x, y) {
            Ok(q) => q.is_integral() && self.is_unit(&q.num),
            Err(_) => false,
        }
    }

    pub fn is_principal_integral(&self, ideal: &IntegralIdeal) -> bool {
        ideal.a().is_one() || self.principal_generator(ideal).is_some()
    }
}
