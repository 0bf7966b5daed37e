//! Scaling studies of the expectation in three regimes: `N = 1`, small
//! areas at fixed `N`, and large areas at `N = ∞`.

use std::collections::BTreeMap;

use loopspec::{GroupSpec, LassoWord};
use masterfield::master_field;
use serde::{Deserialize, Serialize};
use series_engine::{evaluate, n1_closed_form, SeriesParams};

use crate::error::CliError;
use crate::job::word_with_defaults;
use crate::table::find_row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LimitMode {
    /// Series at `U(1)` against the abelian closed form.
    N1,
    /// Series at fixed `N` and shrinking areas against the abelian form;
    /// the ratio compares the first-order deficits `1 - value`.
    Small,
    /// Master field at growing areas against the known leading term of a
    /// table row.
    Large,
}

impl LimitMode {
    pub fn default_scales(self) -> Vec<f64> {
        match self {
            LimitMode::N1 => vec![0.25, 0.5, 1.0, 2.0],
            LimitMode::Small => vec![1e-1, 1e-2, 1e-3, 1e-4],
            LimitMode::Large => vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub scale: f64,
    pub value: f64,
    pub predicted: f64,
    pub ratio: f64,
}

pub const LIMITS_CSV_HEADER: &str = "scale,value,predicted,ratio";

impl LimitPoint {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:e},{:e},{}",
            self.scale, self.value, self.predicted, self.ratio
        )
    }
}

/// Leading large-area term of the `N = ∞` expectation of a table row, with
/// variables in the row's order. `None` for rows without a known term.
pub fn leading_term(row: u32, v: &[f64]) -> Option<f64> {
    let e = |x: f64| (-x / 2.0).exp();
    Some(match row {
        1 => e(v[0]),
        3 => {
            let [t, s] = [v[0], v[1]];
            -t * e(2.0 * t + s)
        }
        5 => {
            let [t1, t2, s] = [v[0], v[1], v[2]];
            t1 * t2 * e(2.0 * t1 + 2.0 * t2 + s)
        }
        6 => {
            let [t1, _t2, s] = [v[0], v[1], v[2]];
            e(2.0 * t1 + s)
        }
        8 => {
            let [u, t, s] = [v[0], v[1], v[2]];
            (1.5 * u * u + t * u) * e(2.0 * t + 3.0 * u + s)
        }
        19 => {
            let [t1, t3, t2, s] = [v[0], v[1], v[2], v[3]];
            -t1 * t2 * t3 * e(2.0 * t1 + 2.0 * t2 + 2.0 * t3 + s)
        }
        27 => {
            let [s1, t, s2, s3] = [v[0], v[1], v[2], v[3]];
            -t * e(2.0 * t + s1 + s2 + s3)
        }
        28 => {
            let [t1, t2, s2, s1] = [v[0], v[1], v[2], v[3]];
            e(2.0 * t1.min(t2) + s1 + s2)
        }
        _ => return None,
    })
}

/// Rows with a known leading term.
pub const LEADING_ROWS: [u32; 8] = [1, 3, 5, 6, 8, 19, 27, 28];

/// What a limit study runs on.
#[derive(Clone, Debug, PartialEq)]
pub enum LimitTarget {
    /// A word with base areas, for the `N1` and `Small` modes.
    Word {
        word: String,
        areas: BTreeMap<String, f64>,
    },
    /// A table row with base values in its variable order, for `Large`.
    Row { id: u32, values: Vec<f64> },
}

fn scaled(w: &LassoWord, scale: f64) -> Result<LassoWord, CliError> {
    let areas: Vec<f64> = w.areas().iter().map(|a| a * scale).collect();
    Ok(w.with_areas(&areas)?)
}

/// Runs a study over `scales`. `n` is used by the `Small` mode only.
pub fn run_limits(
    mode: LimitMode,
    target: &LimitTarget,
    n: Option<u32>,
    scales: &[f64],
    params: &SeriesParams,
) -> Result<Vec<LimitPoint>, CliError> {
    if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(CliError::parse("scales must be positive and finite"));
    }
    match (mode, target) {
        (LimitMode::N1 | LimitMode::Small, LimitTarget::Word { word, areas }) => {
            let base = word_with_defaults(word, areas)?;
            let g = match mode {
                LimitMode::N1 => GroupSpec::unitary(1),
                _ => GroupSpec::unitary(
                    n.ok_or_else(|| CliError::parse("the small-area study needs `N`"))?,
                ),
            };
            scales
                .iter()
                .map(|&scale| {
                    let w = scaled(&base, scale)?;
                    let value = evaluate(&w, &g, params)?.value;
                    let predicted = n1_closed_form(&w);
                    let ratio = match mode {
                        LimitMode::N1 => value / predicted,
                        _ => (1.0 - value) / (1.0 - predicted),
                    };
                    Ok(LimitPoint {
                        scale,
                        value,
                        predicted,
                        ratio,
                    })
                })
                .collect()
        }
        (LimitMode::Large, LimitTarget::Row { id, values }) => {
            let row = find_row(*id)?;
            if !LEADING_ROWS.contains(id) {
                return Err(CliError::parse(format!(
                    "no leading term is known for row {id}; choose one of {LEADING_ROWS:?}"
                )));
            }
            if values.len() != row.vars.len() {
                return Err(CliError::parse(format!(
                    "row {id} takes {} values ({})",
                    row.vars.len(),
                    row.vars.join(", ")
                )));
            }
            scales
                .iter()
                .map(|&scale| {
                    let v: Vec<f64> = values.iter().map(|x| x * scale).collect();
                    let w = row.parse(&v)?;
                    let value = master_field(&w)?;
                    let predicted = leading_term(*id, &v).expect("row has a leading term");
                    Ok(LimitPoint {
                        scale,
                        value,
                        predicted,
                        ratio: value / predicted,
                    })
                })
                .collect()
        }
        (LimitMode::Large, _) => Err(CliError::parse("the large-area study takes a table row")),
        _ => Err(CliError::parse(
            "the N = 1 and small-area studies take a word",
        )),
    }
}
