//! Makeenko-Migdal check at a crossing.

use std::collections::BTreeMap;

use loopspec::{GroupSpec, LassoWord};
use serde::{Deserialize, Serialize};
use series_engine::{makeenko_migdal_check, FacePartial, SeriesParams};

use crate::error::CliError;
use crate::job::word_with_defaults;

/// One face derivative as written on the command line: `COEF:letter` or
/// `COEF:letter+letter` when the face enters several letters.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSpec {
    pub coefficient: f64,
    pub letters: Vec<String>,
}

impl std::str::FromStr for PartialSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (coef, letters) = s
            .split_once(':')
            .ok_or_else(|| CliError::parse(format!("partial `{s}` is not COEF:letter[+letter]")))?;
        let coefficient: f64 = coef
            .trim()
            .parse()
            .map_err(|_| CliError::parse(format!("bad coefficient `{coef}` in partial `{s}`")))?;
        let letters: Vec<String> = letters.split('+').map(|l| l.trim().to_string()).collect();
        if letters.iter().any(String::is_empty) {
            return Err(CliError::parse(format!("empty letter in partial `{s}`")));
        }
        Ok(Self {
            coefficient,
            letters,
        })
    }
}

impl PartialSpec {
    fn resolve(&self, w: &LassoWord) -> Result<FacePartial, CliError> {
        let ids = self
            .letters
            .iter()
            .map(|l| {
                w.letter_id(l).ok_or_else(|| {
                    CliError::parse(format!("letter `{l}` does not occur in the word"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FacePartial::new(self.coefficient, &ids))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmReport {
    pub word_canonical: String,
    pub split_canonical: String,
    pub group: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub h: f64,
    /// Alternating sum of face derivatives by central differences.
    pub lhs: f64,
    /// Value of the split pair of loops, times `1 + 1/N²` for SU(N).
    pub rhs: f64,
    pub residual: f64,
    /// Split pair minus the whole loop over `N²` for SU(N).
    pub rhs_corrected: f64,
    pub residual_corrected: f64,
    pub truncation_bound: f64,
}

/// Runs the check with areas shared between the loop and its split.
pub fn mm_check(
    word: &str,
    split: &str,
    areas: &BTreeMap<String, f64>,
    partials: &[PartialSpec],
    g: &GroupSpec,
    h: f64,
    params: &SeriesParams,
) -> Result<MmReport, CliError> {
    let w = word_with_defaults(word, areas)?;
    let mut all = areas.clone();
    for id in 0..w.alphabet_len() {
        all.insert(w.name(id).to_string(), w.area(id));
    }
    let s = word_with_defaults(split, &all)?;
    let faces = partials
        .iter()
        .map(|p| p.resolve(&w))
        .collect::<Result<Vec<_>, _>>()?;
    let r = makeenko_migdal_check(&w, &faces, &s, g, h, params)?;
    Ok(MmReport {
        word_canonical: w.canonical(),
        split_canonical: s.canonical(),
        group: g.kind().to_string(),
        n: g.n(),
        h,
        lhs: r.lhs,
        rhs: r.rhs,
        residual: r.residual,
        rhs_corrected: r.rhs_corrected,
        residual_corrected: r.lhs - r.rhs_corrected,
        truncation_bound: r.truncation_bound,
    })
}
