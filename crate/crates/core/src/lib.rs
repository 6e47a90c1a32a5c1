//! Euclidean ideals over quadratic fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`quadratic_field`]: exact arithmetic in `Q(√d)` and `O_K`, units.
//! * [`ideals`]: HNF ideals, prime factorization, principality, class groups.
//! * [`euclidean`]: the Motzkin-type level sets, the exact `B_1` criterion and
//!   the supporting coset/generator machinery.
//! * [`sieve`]: unit images `f(p)`, the counting functions `Z` and `ω(p)`, and
//!   the large-sieve inequalities evaluated in exact rationals.
//! * [`spec`]: user-facing input syntax for ideals and elements.

pub mod arith;
pub mod error;
pub mod euclidean;
pub mod ideals;
pub mod quadratic_field;
pub mod residue;
pub mod sieve;
pub mod spec;

pub use error::{Error, Result};
pub use ideals::{ClassGroup, FractionalIdeal, IdealClass, IntegralIdeal, PrimeIdeal, SplitType};
pub use quadratic_field::{make_field, AlgInt, FieldElem, QuadraticField};
