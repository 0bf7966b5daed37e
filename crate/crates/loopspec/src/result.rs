//! Result type shared by the numerical engines.

use std::collections::BTreeMap;

/// A numeric estimate with its error and run metadata.
///
/// `error` is a rigorous truncation bound for exact engines and a standard
/// error for sampling engines; `metadata["error_kind"]` says which.
#[derive(Clone, Debug, PartialEq)]
pub struct EngineResult {
    pub value: f64,
    pub error: f64,
    /// Number of series terms or Monte Carlo samples behind the value.
    pub terms_or_samples: u64,
    pub metadata: BTreeMap<String, String>,
}

impl EngineResult {
    pub fn new(value: f64, error: f64, terms_or_samples: u64) -> Self {
        debug_assert!(error >= 0.0 || error.is_nan());
        Self {
            value,
            error,
            terms_or_samples,
            metadata: BTreeMap::new(),
        }
    }

    /// Adds a metadata entry, builder style.
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).map(String::as_str)
    }
}
