//! Loop descriptions for planar Wilson loop computations.
//!
//! A loop (or a collection of loops) is described by a word in face lassos.
//! Each letter names a bounded face of the planar graph; its area is given
//! separately. Positions in the word are 0-based throughout the API.

mod group;
mod parse;
mod result;
mod word;

pub use group::{GroupKind, GroupSpec};
pub use parse::{parse_area_list, parse_word};
pub use result::EngineResult;
pub use word::{LassoWord, Letter, MatchPair, MatchPairSet};

use thiserror::Error;

/// Errors raised while building or parsing loop descriptions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoopspecError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("no area given for identifier `{name}` (byte {pos})")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("area of `{name}` must be positive and finite, got {value}")]
    NonPositiveArea { name: String, value: f64 },
    #[error("invalid word structure: {0}")]
    Structure(String),
    #[error("invalid group: {0}")]
    Group(String),
    #[error("invalid area list: {0}")]
    AreaList(String),
}
