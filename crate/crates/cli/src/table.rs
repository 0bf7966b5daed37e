//! Regression table of explicit normalized `U(N)` Wilson loop expectations.
//!
//! Each row pairs a lasso word with a hand-transcribed closed form. The
//! closed forms take their variables in the order of [`TableRow::vars`] and
//! the matrix size `N`. Three rows have no closed form and are skipped.

use std::collections::BTreeMap;

use loopspec::{GroupKind, GroupSpec, LassoWord};
use serde::{Deserialize, Serialize};
use series_engine::{SeriesExpansion, SeriesParams};
use walk_engine::{build_action_graph, evaluate_walk_at};

use crate::error::CliError;
use crate::job::word_with_defaults;

/// Reason attached to rows without a closed form.
pub const SKIP_REASON: &str = "Not computed here";

pub type ClosedForm = fn(&[f64], f64) -> f64;

#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub id: u32,
    pub word: &'static str,
    pub vars: &'static [&'static str],
    pub reference: Option<ClosedForm>,
    /// Replacement for a transcribed closed form that disagrees with every
    /// engine. The row still fails on its transcription; the replacement is
    /// reported next to it.
    pub corrected: Option<ClosedForm>,
}

impl TableRow {
    pub fn parse(&self, values: &[f64]) -> Result<LassoWord, CliError> {
        let areas: BTreeMap<String, f64> = self
            .vars
            .iter()
            .zip(values)
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        word_with_defaults(self.word, &areas)
    }

    /// Closed form at `values` (in `vars` order) and `n`.
    pub fn reference_value(&self, values: &[f64], n: f64) -> Option<f64> {
        self.reference.map(|f| f(values, n))
    }
}

fn ch(x: f64, n: f64) -> f64 {
    (x / n).cosh()
}

fn sh(x: f64, n: f64) -> f64 {
    (x / n).sinh()
}

/// `cosh(x/N) - N sinh(x/N)`, the factor of a face surrounded twice.
fn twice(x: f64, n: f64) -> f64 {
    ch(x, n) - n * sh(x, n)
}

fn decay(sum: f64) -> f64 {
    (-sum / 2.0).exp()
}

/// Factor of a face surrounded three times, with `t` the area between the
/// second and third turn.
fn thrice(u: f64, t: f64, n: f64) -> f64 {
    let n2 = n * n;
    -(n2 - 1.0) / 3.0 * ch(t, n) + (n2 + 2.0) / 3.0 * ch(3.0 * u + t, n) - n * sh(3.0 * u + t, n)
}

/// Factor of a face `t1` crossed by a face `t2` traversed backwards.
fn backtrack(t1: f64, t2: f64, n: f64) -> f64 {
    let e2 = t2.exp();
    e2 * ch(t1, n) - e2 / n * sh(t1, n) - (n * n - 1.0) / n * sh(t1, n)
}

fn row_simple(v: &[f64], _n: f64) -> f64 {
    decay(v.iter().sum())
}

fn row3(v: &[f64], n: f64) -> f64 {
    let [t, s] = [v[0], v[1]];
    decay(2.0 * t + s) * twice(t, n)
}

fn row5(v: &[f64], n: f64) -> f64 {
    let [t1, t2, s] = [v[0], v[1], v[2]];
    decay(2.0 * t1 + 2.0 * t2 + s) * twice(t1, n) * twice(t2, n)
}

fn row6(v: &[f64], n: f64) -> f64 {
    let [t1, t2, s] = [v[0], v[1], v[2]];
    decay(2.0 * t1 + 2.0 * t2 + s) * backtrack(t1, t2, n)
}

fn row7(v: &[f64], n: f64) -> f64 {
    let [t, s1, s2] = [v[0], v[1], v[2]];
    decay(2.0 * t + s1 + s2) * twice(t, n)
}

fn row8(v: &[f64], n: f64) -> f64 {
    let [u, t, s] = [v[0], v[1], v[2]];
    decay(2.0 * t + 3.0 * u + s) * thrice(u, t, n)
}

fn row10(v: &[f64], n: f64) -> f64 {
    let [u, t1, t2, s] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t1 + 2.0 * t2 + 3.0 * u + s) * thrice(u, t1, n) * twice(t2, n)
}

fn row11_with(v: &[f64], n: f64, eu: f64) -> f64 {
    let [t1, u, t2, s] = [v[0], v[1], v[2], v[3]];
    let inner = sh(t1, n) * (eu + (n * n - 2.0) * sh(u, n) - n * ch(u, n))
        + (t2 + u).exp() * (ch(t1, n) - sh(t1, n) / n);
    decay(2.0 * t1 + 2.0 * t2 + 3.0 * u + s) * inner
}

/// As printed, with a bare `e^u` inside the first bracket.
fn row11(v: &[f64], n: f64) -> f64 {
    row11_with(v, n, v[1].exp())
}

/// The first bracket carries `e^u / N`. The two forms agree at `N = 1` and
/// as `N → ∞` and differ by `e^{-len/2} sinh(t1/N) e^u (1 - 1/N)` otherwise.
fn row11_corrected(v: &[f64], n: f64) -> f64 {
    row11_with(v, n, v[1].exp() / n)
}

fn row12(v: &[f64], n: f64) -> f64 {
    let [u, t, s1, s2] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t + 3.0 * u + s1 + s2) * thrice(u, t, n)
}

fn row14(v: &[f64], n: f64) -> f64 {
    let [t1, s1, t2, s2] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t1 + 2.0 * t2 + s1 + s2) * twice(t1, n) * twice(t2, n)
}

fn row15(v: &[f64], n: f64) -> f64 {
    let [t3, t1, t2, s] = [v[0], v[1], v[2], v[3]];
    let n2 = n * n;
    let (e2, e3) = (t2.exp(), t3.exp());
    let inner = (n2 - 1.0) / n2 * (e2 - 1.0) * ch(t1, n) - (n2 - 1.0) / n * sh(t1, n)
        + (n2 + e2 - 1.0) / n2 * e3 * ch(t1, n)
        - (t2 + t3).exp() / n * sh(t1, n);
    decay(2.0 * t1 + 2.0 * t2 + 2.0 * t3 + s) * inner
}

fn row17(v: &[f64], n: f64) -> f64 {
    let [t, s3, s1, s2] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t + s1 + s2 + s3) * twice(t, n)
}

fn row18(v: &[f64], n: f64) -> f64 {
    let [t1, t2, s1, s2] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t1 + 2.0 * t2 + s1 + s2) * twice(t1, n) * twice(t2, n)
}

fn row19(v: &[f64], n: f64) -> f64 {
    let [t1, t3, t2, s] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t1 + 2.0 * t2 + 2.0 * t3 + s) * twice(t1, n) * twice(t2, n) * twice(t3, n)
}

fn row20(v: &[f64], n: f64) -> f64 {
    let [t1, t2, s1, s2] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t1 + 2.0 * t2 + s1 + s2) * backtrack(t1, t2, n)
}

fn row21(v: &[f64], n: f64) -> f64 {
    let [t, s1, s3, s2] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t + s1 + s2 + s3) * twice(t, n)
}

fn row22(v: &[f64], n: f64) -> f64 {
    let [t1, t2, t3, s] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t1 + 2.0 * t2 + 2.0 * t3 + s) * backtrack(t1, t2, n) * twice(t3, n)
}

fn row23(v: &[f64], n: f64) -> f64 {
    let [t1, t2, t3, s] = [v[0], v[1], v[2], v[3]];
    let e2 = t2.exp();
    let inner = e2 * ch(t1, n) * ch(t3, n)
        - n * e2 * ch(t1, n) * sh(t3, n)
        - (n * n + e2 - 1.0) / n * sh(t1, n) * ch(t3, n)
        + e2 * sh(t1, n) * sh(t3, n);
    decay(2.0 * t1 + 2.0 * t2 + 2.0 * t3 + s) * inner
}

fn row24(v: &[f64], n: f64) -> f64 {
    let [t2, u, t1, s] = [v[0], v[1], v[2], v[3]];
    let n2 = n * n;
    let e2 = t2.exp();
    let x = t1 + 3.0 * u;
    let inner = -(n2 - 1.0) / 3.0 * ch(t1, n)
        + (n2 - 1.0) / (3.0 * n) * (e2 - 1.0) * sh(t1, n)
        + ((n2 - 1.0) / 3.0 + e2) * ch(x, n)
        - ((n2 + 2.0) * e2 + 2.0 * (n2 - 1.0)) / (3.0 * n) * sh(x, n);
    decay(2.0 * t1 + 2.0 * t2 + 3.0 * u + s) * inner
}

fn row27(v: &[f64], n: f64) -> f64 {
    let [s1, t, s2, s3] = [v[0], v[1], v[2], v[3]];
    decay(2.0 * t + s1 + s2 + s3) * twice(t, n)
}

fn row28(v: &[f64], n: f64) -> f64 {
    let [t1, t2, s2, s1] = [v[0], v[1], v[2], v[3]];
    let (e1, e2) = (t1.exp(), t2.exp());
    decay(2.0 * t1 + 2.0 * t2 + s1 + s2) * (e1 + e2 - 1.0 + (e1 - 1.0) * (e2 - 1.0) / (n * n))
}

const fn row(
    id: u32,
    word: &'static str,
    vars: &'static [&'static str],
    reference: Option<ClosedForm>,
) -> TableRow {
    TableRow {
        id,
        word,
        vars,
        reference,
        corrected: None,
    }
}

/// All table rows in order. Variables are listed in order of first
/// appearance in the word.
pub const ROWS: [TableRow; 28] = [
    row(1, "(s)", &["s"], Some(row_simple)),
    row(2, "(s1)(s2)", &["s1", "s2"], Some(row_simple)),
    row(3, "(t)(t s)", &["t", "s"], Some(row3)),
    row(4, "(s1)(s3)(s2)^-1", &["s1", "s3", "s2"], Some(row_simple)),
    row(5, "(t1)(t1 t2 s)(t2)", &["t1", "t2", "s"], Some(row5)),
    row(6, "(t1)(t2)^-1(t1 t2 s)", &["t1", "t2", "s"], Some(row6)),
    row(7, "(t)(t s1)(s2)^-1", &["t", "s1", "s2"], Some(row7)),
    row(8, "(u t)(u)(u t s)", &["u", "t", "s"], Some(row8)),
    row(
        9,
        "(s1)(s2)^-1(s3)^-1(s4)^-1",
        &["s1", "s2", "s3", "s4"],
        Some(row_simple),
    ),
    row(
        10,
        "(u t1)(u)(u t1 t2 s)(t2)",
        &["u", "t1", "t2", "s"],
        Some(row10),
    ),
    TableRow {
        id: 11,
        word: "(t1)(u t2 t1 s)(u)^-1(u t2)^-1",
        vars: &["t1", "u", "t2", "s"],
        reference: Some(row11),
        corrected: Some(row11_corrected),
    },
    row(
        12,
        "(u t)(u)(u t s1)(s2)^-1",
        &["u", "t", "s1", "s2"],
        Some(row12),
    ),
    row(13, "(v u)(v)(v u t)(v u t s)", &["v", "u", "t", "s"], None),
    row(
        14,
        "(t1 s1)(t1)(t2)(t2 s2)",
        &["t1", "s1", "t2", "s2"],
        Some(row14),
    ),
    row(
        15,
        "(t3 t1 t2 s)(t3)^-1(t1)(t2)^-1",
        &["t3", "t1", "t2", "s"],
        Some(row15),
    ),
    row(
        16,
        "(s2)(s3)(s1)^-1(s4)",
        &["s2", "s3", "s1", "s4"],
        Some(row_simple),
    ),
    row(
        17,
        "(t)(s3)^-1(t s1)(s2)^-1",
        &["t", "s3", "s1", "s2"],
        Some(row17),
    ),
    row(
        18,
        "(t1)(t2)(t2 t1 s1)(s2)^-1",
        &["t1", "t2", "s1", "s2"],
        Some(row18),
    ),
    row(
        19,
        "(t1)(t3)(t3 t1 t2 s)(t2)",
        &["t1", "t3", "t2", "s"],
        Some(row19),
    ),
    row(
        20,
        "(t1)(t2)^-1(t1 t2 s1)(s2)^-1",
        &["t1", "t2", "s1", "s2"],
        Some(row20),
    ),
    row(
        21,
        "(t s1)(t)(s3)(s2)^-1",
        &["t", "s1", "s3", "s2"],
        Some(row21),
    ),
    row(
        22,
        "(t1)(t2)^-1(t1 t2 t3 s)(t3)",
        &["t1", "t2", "t3", "s"],
        Some(row22),
    ),
    row(
        23,
        "(t1)(t2 t3 t1 s)(t3)(t2)^-1",
        &["t1", "t2", "t3", "s"],
        Some(row23),
    ),
    row(
        24,
        "(t2 u t1 s)(t2)^-1(u t1)(u)",
        &["t2", "u", "t1", "s"],
        Some(row24),
    ),
    row(
        25,
        "(u2 u1 t s)(u2)(u2 u1 t)(u1)",
        &["u2", "u1", "t", "s"],
        None,
    ),
    row(
        26,
        "(u1)(u2)^-1(u1 u2 t)(u1 u2 t s)",
        &["u1", "u2", "t", "s"],
        None,
    ),
    row(
        27,
        "(s1)(t)(s2)(t s3)",
        &["s1", "t", "s2", "s3"],
        Some(row27),
    ),
    row(
        28,
        "(t1)(t2 s2)(t1 s1)^-1(t2)^-1",
        &["t1", "t2", "s2", "s1"],
        Some(row28),
    ),
];

pub fn find_row(id: u32) -> Result<&'static TableRow, CliError> {
    ROWS.iter()
        .find(|r| r.id == id)
        .ok_or_else(|| CliError::parse(format!("unknown table row {id} (rows are 1 to 28)")))
}

/// Ids of the rows with a closed form.
pub fn computed_rows() -> Vec<u32> {
    ROWS.iter()
        .filter(|r| r.reference.is_some())
        .map(|r| r.id)
        .collect()
}

/// Options of a regression run.
#[derive(Clone, Debug, PartialEq)]
pub struct TableOptions {
    /// Area values; every variable ranges over all of them.
    pub grid: Vec<f64>,
    pub ns: Vec<u32>,
    /// Absolute tolerance added to the series tail bound.
    pub tol: f64,
    /// Also compare the walk engine on rows without inverses.
    pub walk: bool,
    pub series: SeriesParams,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            grid: vec![0.2, 0.5, 1.0],
            ns: vec![2, 3],
            tol: 1e-6,
            walk: true,
            series: SeriesParams::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one row over the whole grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub row: u32,
    pub word: String,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub points: usize,
    pub k_max: Option<usize>,
    /// Largest `|series - reference|`.
    pub max_dev_series: f64,
    /// Largest series tail bound.
    pub max_tail: f64,
    /// Largest `|series - reference| - tail`, negative when every point is
    /// inside its bound.
    pub max_excess: f64,
    /// Largest `|walk - reference|`, for rows without inverses.
    pub max_dev_walk: Option<f64>,
    /// Areas and `N` of the point with the largest excess.
    pub worst_point: Option<(Vec<f64>, u32)>,
    /// Outcome against the corrected closed form, when the row has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_status: Option<RowStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_dev_corrected: Option<f64>,
}

/// All points of the Cartesian grid `grid^dim`.
pub fn grid_points(grid: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |&g| {
                    let mut q = p.clone();
                    q.push(g);
                    q
                })
            })
            .collect();
    }
    out
}

/// Areas indexed by letter id for values given in `row.vars` order.
fn letter_areas(row: &TableRow, w: &LassoWord, values: &[f64]) -> Vec<f64> {
    (0..w.alphabet_len())
        .map(|id| {
            let k = row
                .vars
                .iter()
                .position(|v| *v == w.name(id))
                .expect("row variable");
            values[k]
        })
        .collect()
}

/// Evaluates one row over the grid. A NaN deviation counts as a failure,
/// hence the negated comparisons.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_row(row: &TableRow, opts: &TableOptions) -> Result<RowReport, CliError> {
    let reference = match row.reference {
        Some(f) => f,
        None => {
            return Ok(RowReport {
                row: row.id,
                word: row.word.to_string(),
                status: RowStatus::Skipped,
                reason: Some(SKIP_REASON.to_string()),
                points: 0,
                k_max: None,
                max_dev_series: 0.0,
                max_tail: 0.0,
                max_excess: f64::NEG_INFINITY,
                max_dev_walk: None,
                worst_point: None,
                corrected_status: None,
                max_dev_corrected: None,
            })
        }
    };
    let w = row.parse(&vec![1.0; row.vars.len()])?;
    let exp = SeriesExpansion::build(&w, GroupKind::U, &opts.series)?;
    let graph = if opts.walk && w.is_inverse_free() {
        Some(build_action_graph(&w)?)
    } else {
        None
    };
    let mut rep = RowReport {
        row: row.id,
        word: w.canonical(),
        status: RowStatus::Pass,
        reason: None,
        points: 0,
        k_max: Some(exp.k_max()),
        max_dev_series: 0.0,
        max_tail: 0.0,
        max_excess: f64::NEG_INFINITY,
        max_dev_walk: graph.as_ref().map(|_| 0.0),
        worst_point: None,
        corrected_status: row.corrected.map(|_| RowStatus::Pass),
        max_dev_corrected: row.corrected.map(|_| 0.0),
    };
    for values in grid_points(&opts.grid, row.vars.len()) {
        let areas = letter_areas(row, &w, &values);
        for &n in &opts.ns {
            let g = GroupSpec::unitary(n);
            let want = reference(&values, n as f64);
            let got = exp.evaluate(&areas, &g, true)?;
            let dev = (got.value - want).abs();
            rep.points += 1;
            rep.max_dev_series = rep.max_dev_series.max(dev);
            rep.max_tail = rep.max_tail.max(got.error);
            let excess = dev - got.error;
            if excess > rep.max_excess {
                rep.max_excess = excess;
                rep.worst_point = Some((values.clone(), n));
            }
            if !(dev <= opts.tol + got.error) {
                rep.status = RowStatus::Fail;
            }
            if let Some(fix) = row.corrected {
                let d = (got.value - fix(&values, n as f64)).abs();
                rep.max_dev_corrected = rep.max_dev_corrected.map(|m| m.max(d));
                if !(d <= opts.tol + got.error) {
                    rep.corrected_status = Some(RowStatus::Fail);
                }
            }
            if let Some(graph) = &graph {
                let walk = evaluate_walk_at(graph, &w, &areas, n)?;
                let d = (walk - want).abs();
                rep.max_dev_walk = rep.max_dev_walk.map(|m| m.max(d));
                if !(d <= opts.tol) {
                    rep.status = RowStatus::Fail;
                }
            }
        }
    }
    Ok(rep)
}

/// Runs the selected rows; all rows when `ids` is empty.
pub fn run_table(ids: &[u32], opts: &TableOptions) -> Result<Vec<RowReport>, CliError> {
    let rows: Vec<&TableRow> = if ids.is_empty() {
        ROWS.iter().collect()
    } else {
        ids.iter()
            .map(|&id| find_row(id))
            .collect::<Result<_, _>>()?
    };
    rows.into_iter().map(|r| check_row(r, opts)).collect()
}
