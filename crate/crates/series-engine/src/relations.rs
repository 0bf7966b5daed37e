//! Closed-form relations between groups and between loops.

use loopspec::{GroupKind, GroupSpec, LassoWord, MatchPairSet};

use crate::expansion::{SeriesExpansion, SeriesParams};
use crate::SeriesError;

/// `exp(c/2 · Σ_m area(m) + total pair mass)`.
pub fn constant_prefactor(w: &LassoWord, pairs: &MatchPairSet, g: &GroupSpec) -> f64 {
    (g.casimir() / 2.0 * w.total_length() + pairs.total_mass).exp()
}

/// Converts a `U(N)` value into the `SU(N)` value of the same word.
///
/// The Casimir shift contributes `exp(Σ_ℓ count_ℓ² area_ℓ / 2N²)` and the
/// signed Poisson process at intensity `1/N²` contributes
/// `Π_p exp(mass_p (σ_p - 1) / N²)`.
pub fn su_from_u(w: &LassoWord, n: u32, value_u: f64) -> f64 {
    let n2 = (n as f64).powi(2);
    let shift: f64 = w
        .counts()
        .iter()
        .zip(w.areas())
        .map(|(&c, &a)| (c * c) as f64 * a / (2.0 * n2))
        .sum();
    let signs: f64 = w
        .matching_pairs()
        .pairs
        .iter()
        .map(|p| p.mass * (p.sign as f64 - 1.0) / n2)
        .sum();
    value_u * (shift + signs).exp()
}

/// Value at `N = 1`: `Π_ℓ exp(-k_ℓ² area_ℓ / 2)` with `k_ℓ` the net winding.
pub fn n1_closed_form(w: &LassoWord) -> f64 {
    w.net_windings()
        .iter()
        .zip(w.areas())
        .map(|(&k, &a)| (-((k * k) as f64) * a / 2.0).exp())
        .product()
}

/// One term of an alternating sum of face derivatives: moving the face
/// changes the area of every listed letter by the same amount.
#[derive(Clone, Debug, PartialEq)]
pub struct FacePartial {
    pub coefficient: f64,
    pub letters: Vec<usize>,
}

impl FacePartial {
    pub fn new(coefficient: f64, letters: &[usize]) -> Self {
        Self {
            coefficient,
            letters: letters.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MmResult {
    /// Central-difference estimate of the alternating face derivative.
    pub lhs: f64,
    /// `Φ(Γ1, Γ2)` for U(N) and `(1 + 1/N²) Φ(Γ1, Γ2)` for SU(N).
    pub rhs: f64,
    pub residual: f64,
    /// `Φ(Γ1, Γ2) - Φ(Γ)/N²` for SU(N), the plain right side for U(N).
    pub rhs_corrected: f64,
    /// Bound on the truncation error of `lhs - rhs_corrected`.
    pub truncation_bound: f64,
}

/// Makeenko-Migdal check at a crossing, using normalized values.
///
/// `partials` lists the faces around the crossing with their alternating
/// signs. Faces of infinite area are omitted. `split` is the two-loop word
/// obtained by splitting the loop at the crossing.
pub fn makeenko_migdal_check(
    w: &LassoWord,
    partials: &[FacePartial],
    split: &LassoWord,
    g: &GroupSpec,
    h: f64,
    params: &SeriesParams,
) -> Result<MmResult, SeriesError> {
    if h.is_nan() || h <= 0.0 {
        return Err(SeriesError::Step(h));
    }
    if !matches!(g.kind(), GroupKind::U | GroupKind::SU) {
        return Err(SeriesError::MmGroup(g.to_string()));
    }
    let exp = SeriesExpansion::build(w, g.kind(), params)?;
    let base = w.areas().to_vec();
    let mut lhs = 0.0;
    let mut lhs_err = 0.0;
    for fp in partials {
        let mut plus = base.clone();
        let mut minus = base.clone();
        for &l in &fp.letters {
            plus[l] += h;
            minus[l] -= h;
        }
        let fplus = exp.evaluate(&plus, g, true)?;
        let fminus = exp.evaluate(&minus, g, true)?;
        lhs += fp.coefficient * (fplus.value - fminus.value) / (2.0 * h);
        lhs_err += fp.coefficient.abs() * (fplus.error + fminus.error) / (2.0 * h);
    }
    let whole = exp.evaluate(&base, g, true)?;
    let two = SeriesExpansion::build(split, g.kind(), params)?.evaluate(split.areas(), g, true)?;
    let n2 = g.n_f64().powi(2);
    let (rhs, rhs_corrected, corr_err) = match g.kind() {
        GroupKind::SU => (
            (1.0 + 1.0 / n2) * two.value,
            two.value - whole.value / n2,
            two.error + whole.error / n2,
        ),
        _ => (two.value, two.value, two.error),
    };
    Ok(MmResult {
        lhs,
        rhs,
        residual: lhs - rhs,
        rhs_corrected,
        truncation_bound: lhs_err + corr_err,
    })
}
