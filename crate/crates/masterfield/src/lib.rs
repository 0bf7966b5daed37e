//! The `N = ∞` limit of Wilson loop expectations.
//!
//! [`master_field`] expands a loop word in the free cumulants of free
//! unitary Brownian motions, one per face, summed over non-crossing
//! partitions whose blocks carry a single letter. [`master_field_nc_series`]
//! keeps only the planar part of the unitary surface expansion.
//! [`forest_polynomial`] counts non-crossing same-letter forests exactly for
//! words without inverses, and [`poisson_forest_estimate`] estimates the same
//! count by Poisson splitting of the letters.

mod cumulant;
mod forest;
mod moments;
mod nc;
mod poisson;
mod series;

pub use cumulant::{block_cumulant, master_field, BlockWord};
pub use forest::{forest_polynomial, ForestPolynomial, Monomial};
pub use moments::{q_moment, q_n, q_polynomial};
pub use nc::{nc_block_sum, BlockSum, NCPartition};
pub use poisson::{poisson_forest_estimate, PoissonParams, DEFAULT_FOREST_BUDGET};
pub use series::master_field_nc_series;

use series_engine::SeriesError;
use thiserror::Error;

/// Longest loop accepted by the exact non-crossing enumerations.
pub const MAX_NC_LENGTH: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MasterError {
    #[error("loop {index} has {len} letters; exact enumeration is limited to {max}")]
    TooLong {
        index: usize,
        len: usize,
        max: usize,
    },
    #[error("forest polynomials are defined here for words without inverses")]
    Inverse,
    #[error("the Poisson forest estimator takes a single loop, got {0}")]
    MultiLoop(usize),
    #[error("a sample needed more than {budget} forest enumeration steps")]
    Budget { budget: u64 },
    #[error("at least one sample is required")]
    NoSamples,
    #[error("no value given for variable `{0}`")]
    MissingVariable(String),
    #[error("invalid block word: {0}")]
    Block(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Rejects loops longer than [`MAX_NC_LENGTH`].
fn check_lengths(w: &loopspec::LassoWord) -> Result<(), MasterError> {
    for (index, r) in w.loop_blocks().into_iter().enumerate() {
        if r.len() > MAX_NC_LENGTH {
            return Err(MasterError::TooLong {
                index,
                len: r.len(),
                max: MAX_NC_LENGTH,
            });
        }
    }
    Ok(())
}
