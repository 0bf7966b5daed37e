//! The planar part of the unitary surface expansion.

use loopspec::{EngineResult, GroupKind, LassoWord};
use series_engine::{poisson_tail, SeriesExpansion, SeriesParams};

use crate::MasterError;

/// `N = ∞` limit from the surface expansion: each count vector keeps the
/// arrangement average of `Π signs · (-1)^K · 1[χ = 2n]`, the configurations
/// whose gluing is a union of `n` spheres (non-crossing pairings), times
/// `exp(-½ Σ_m |λ_m| + Σ_pairs |λ|)` against the Poisson weights.
///
/// The error is the Poisson tail of the total pair mass beyond the order
/// used, since every count vector contributes at most one in modulus.
pub fn master_field_nc_series(
    w: &LassoWord,
    params: &SeriesParams,
) -> Result<EngineResult, MasterError> {
    let exp = SeriesExpansion::build(w, GroupKind::U, params)?;
    let pairs = exp.pairs();
    let top = w.n_loops() as i32;
    let k_max = exp.k_max();
    let powers: Vec<Vec<f64>> = pairs
        .pairs
        .iter()
        .map(|p| {
            let mut row = vec![1.0];
            for j in 1..=k_max {
                row.push(row[j - 1] * p.mass / j as f64);
            }
            row
        })
        .collect();
    let mut sum = 0.0;
    for term in exp.terms() {
        // U weights are N^{χ-n}, so spheres carry the power n.
        let Some(&(_, c)) = term.coeffs.iter().find(|&&(p, _)| p == top) else {
            continue;
        };
        let mono: f64 = term
            .counts
            .iter()
            .enumerate()
            .map(|(p, &k)| powers[p][k as usize])
            .product();
        sum += mono * c;
    }
    let scale = (-w.total_length() / 2.0).exp();
    let error = scale * poisson_tail(pairs.total_mass, k_max);
    Ok(
        EngineResult::new(scale * sum, error, exp.terms().len() as u64)
            .with("engine", "master_nc_series")
            .with("k_max", k_max)
            .with("normalized", true)
            .with("error_kind", "tail_bound")
            .with("evaluations", exp.evaluations()),
    )
}
