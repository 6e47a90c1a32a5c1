//! Textual handles for user input: ideal specs (`unit`, `gen`, `a,b,c`) and
//! field elements (`a,b` or `a,b/e`, meaning `(a + b·ω)/e`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ideals::{ClassGroup, HnfTriple, IntegralIdeal};
use crate::quadratic_field::{parse_elem, FieldElem, QuadraticField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealSpec {
    /// `O_K` itself.
    Unit,
    /// The class-group generator of least norm (`O_K` when `h = 1`).
    Generator,
    Hnf(HnfTriple),
}

impl FromStr for IdealSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "unit" => Ok(IdealSpec::Unit),
            "gen" => Ok(IdealSpec::Generator),
            other => other.parse().map(IdealSpec::Hnf),
        }
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSpec::Unit => write!(f, "unit"),
            IdealSpec::Generator => write!(f, "gen"),
            IdealSpec::Hnf(HnfTriple(a, b, c)) => write!(f, "{a},{b},{c}"),
        }
    }
}

impl IdealSpec {
    pub fn resolve(&self, k: &QuadraticField, g: &ClassGroup) -> Result<IntegralIdeal> {
        match self {
            IdealSpec::Unit => Ok(IntegralIdeal::unit()),
            IdealSpec::Generator if g.order() == 1 => Ok(IntegralIdeal::unit()),
            IdealSpec::Generator => Ok(g.generator().ideal().clone()),
            IdealSpec::Hnf(t) => k.ideal_from_triple(t),
        }
    }
}

/// Parses an element written `a,b` or `a,b/e`.
pub fn parse_element(s: &str) -> Result<FieldElem> {
    parse_elem(s)
}
