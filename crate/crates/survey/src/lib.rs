//! Prime scans, growth reports and fixture certification on top of
//! `euclid-core`.
//!
//! A [`Survey`] fixes a field, its class group and the ideal `C`. Scans
//! produce one [`ScanRecord`] per rational prime. Records depend only on
//! `(d, p)`, so they are cached independently of `C`.

pub mod cache;
pub mod certify;
pub mod error;
pub mod growth;
pub mod scan;

pub use cache::ScanCache;
pub use certify::{certify_field, certify_fixtures, CertifyOutcome, LENSTRA_FIELDS};
pub use error::{SurveyError, SurveyResult};
pub use growth::{b1_count, b2_lower_bound, GrowthReport, GrowthRow};
pub use scan::{compute_record, IdealEntry, ScanRecord, ScanRow};

use euclid_core::ideals::{ClassGroup, IdealClass, IntegralIdeal, PrimeIdeal};
use euclid_core::spec::IdealSpec;
use euclid_core::QuadraticField;

/// A field, its class group, and a chosen ideal `C`.
#[derive(Clone, Debug)]
pub struct Survey {
    pub k: QuadraticField,
    pub g: ClassGroup,
    pub c: IntegralIdeal,
    pub c_class: IdealClass,
}

impl Survey {
    pub fn new(d: i64, spec: &IdealSpec) -> SurveyResult<Survey> {
        let k = QuadraticField::new(d)?;
        let g = ClassGroup::compute(&k)?;
        let c = spec.resolve(&k, &g)?;
        let c_class = g.ideal_class_integral(&k, &c);
        Ok(Survey { k, g, c, c_class })
    }

    pub fn d(&self) -> i64 {
        self.k.d()
    }

    /// True iff `p` contains `C`, i.e. divides it.
    pub fn divides_c(&self, p: &PrimeIdeal) -> bool {
        self.c.is_subset_of(p.ideal())
    }
}
