//! Exact evaluation of Wilson loop expectations as a truncated sum over
//! Poisson point configurations on the matching-colour pairs of a word.
//!
//! For a count vector `k` (points per pair) the configuration only matters
//! through the relative order of points sharing a letter, since pairs of
//! different letters never meet at a word position. The weight of the count
//! vector is therefore the average of the glued-surface weights over the
//! distinct arrangements of that multiset, summed over gluing choices. That
//! average is a Laurent polynomial in `N` independent of the areas, so an
//! expansion is built once and evaluated at any areas and `N`.

mod expansion;
mod relations;
mod tail;

pub use expansion::{
    arrangement_cost, ArrangementMode, CountTerm, SeriesExpansion, SeriesParams, DEFAULT_BUDGET,
    MAX_AUTO_K,
};
pub use relations::{
    constant_prefactor, makeenko_migdal_check, n1_closed_form, su_from_u, FacePartial, MmResult,
};
pub use tail::poisson_tail;

use loopspec::{EngineResult, GroupSpec, LassoWord};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error(
        "k_max = {k_max} needs {cost} arrangement-gluing evaluations, over the budget of {budget}"
    )]
    Budget {
        k_max: usize,
        cost: u128,
        budget: u64,
    },
    #[error("expansion was built for {built} but evaluated for {requested}")]
    GroupMismatch { built: String, requested: String },
    #[error("expected {expected} areas, got {got}")]
    AreaCount { expected: usize, got: usize },
    #[error("finite-difference step must be positive, got {0}")]
    Step(f64),
    #[error("Makeenko-Migdal relation is only available for U(N) and SU(N), not {0}")]
    MmGroup(String),
    #[error(transparent)]
    Word(#[from] loopspec::LoopspecError),
}

/// Builds the expansion of `w` and evaluates it at the word's own areas.
pub fn evaluate(
    w: &LassoWord,
    g: &GroupSpec,
    p: &SeriesParams,
) -> Result<EngineResult, SeriesError> {
    let exp = SeriesExpansion::build(w, g.kind(), p)?;
    exp.evaluate(w.areas(), g, p.normalized)
}
