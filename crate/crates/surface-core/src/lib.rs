//! Surfaces glued from polygons.
//!
//! A realisation of the Poisson process on matching-colour pairs yields a
//! fixed-point-free involution on edge slots distributed over the loop
//! boundaries. Gluing the slots in pairs under one of four relations gives a
//! CW complex whose Euler characteristic, orientability and non-orientable
//! genus determine the weight of the configuration.

mod dsu;
mod pairing;
mod topology;

pub use pairing::{pairing_from_config, Pairing, PointConfig};
pub use topology::{
    chi_crosscheck_orientable, glue, weight, weight_term, Component, GluingChoice, Relation,
    SurfaceStats, WeightTerm,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("two points share the coordinate t = {0}")]
    DuplicateT(f64),
    #[error("invalid point configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("gluing relation {relation:?} is not admissible for {group}")]
    InadmissibleRelation { relation: Relation, group: String },
}
