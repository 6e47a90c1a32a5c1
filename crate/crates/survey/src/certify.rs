use std::time::{Duration, Instant};

use euclid_core::euclidean::{motzkin_search, verify_assignment_detailed, LevelAssignment, SearchBounds, SearchScope};
use euclid_core::spec::IdealSpec;
use serde::Serialize;

use crate::error::{SurveyError, SurveyResult};
use crate::Survey;

/// The imaginary quadratic fields whose rings of integers can carry a
/// Euclidean ideal.
pub const LENSTRA_FIELDS: [i64; 7] = [-1, -2, -3, -5, -7, -11, -15];

#[derive(Clone, Debug, Serialize)]
pub struct CertifyOutcome {
    pub d: i64,
    pub c: String,
    pub h: u64,
    pub bounds: SearchBounds,
    /// Every E-ideal inside the norm bound received a level.
    pub complete: bool,
    pub max_level: u32,
    pub assigned: usize,
    pub unassigned: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub assignment: LevelAssignment,
}

/// Runs the search on all of `E` and re-verifies it. A failed verification
/// is an error naming the ideal; missing levels are a reported outcome.
pub fn certify_field(s: &Survey, bounds: SearchBounds) -> SurveyResult<CertifyOutcome> {
    let start = Instant::now();
    let l = motzkin_search(&s.k, &s.g, &s.c, bounds, SearchScope::AllE)?;
    verify_assignment_detailed(&s.k, &l).map_err(|e| SurveyError::Verification(format!("d = {}: {e}", s.d())))?;
    Ok(CertifyOutcome {
        d: s.d(),
        c: s.c.to_string(),
        h: s.g.order(),
        bounds,
        complete: l.is_complete(),
        max_level: l.max_level(),
        assigned: l.levels().count(),
        unassigned: l.unassigned().map(|i| i.to_string()).collect(),
        elapsed: start.elapsed(),
        assignment: l,
    })
}

/// [`certify_field`] over the seven fields, with `C` the least-norm
/// class-group generator (`C = (1)` when `h = 1`).
pub fn certify_fixtures(bounds: SearchBounds) -> SurveyResult<Vec<CertifyOutcome>> {
    LENSTRA_FIELDS.iter().map(|&d| certify_field(&Survey::new(d, &IdealSpec::Generator)?, bounds)).collect()
}
