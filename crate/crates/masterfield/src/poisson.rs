//! Poisson splitting estimator of forest polynomials.

use loopspec::{EngineResult, LassoWord};
use mc_engine::{sample_rng, Moments, CHUNK};
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::MasterError;

/// Default cap on forest enumeration steps per sample.
pub const DEFAULT_FOREST_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonParams {
    pub samples: u64,
    pub seed: u64,
    /// Enumeration steps allowed per sample.
    pub budget: u64,
}

impl PoissonParams {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            budget: DEFAULT_FOREST_BUDGET,
        }
    }
}

/// Estimates the forest polynomial `p(w)` (not normalized by the length).
///
/// Each sample draws `n_A ~ Poisson(A)` per letter and replaces every `A`
/// by `A_1 … A_{n_A}` and every `A⁻¹` by `A_{n_A}⁻¹ … A_1⁻¹`. It then sums
/// `(-1)^{s(F)}` over the non-crossing forests whose edges carry pairwise
/// distinct sub-letters, where `s(F)` counts edges joining two copies of
/// equal sign. Distinct sub-letters make the edges vertex-disjoint, so such
/// forests are non-crossing partial matchings with one edge per sub-letter
/// at most.
pub fn poisson_forest_estimate(
    w: &LassoWord,
    params: &PoissonParams,
) -> Result<EngineResult, MasterError> {
    if w.n_loops() != 1 {
        return Err(MasterError::MultiLoop(w.n_loops()));
    }
    if params.samples == 0 {
        return Err(MasterError::NoSamples);
    }
    let dists: Vec<Poisson<f64>> = w
        .areas()
        .iter()
        .map(|&a| Poisson::new(a).expect("areas are positive and finite"))
        .collect();
    let chunks = params.samples.div_ceil(CHUNK);
    let parts: Vec<Result<Moments, MasterError>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::default();
            let end = ((c + 1) * CHUNK).min(params.samples);
            for i in c * CHUNK..end {
                let mut rng = sample_rng(params.seed, i);
                let counts: Vec<usize> =
                    dists.iter().map(|d| d.sample(&mut rng) as usize).collect();
                m.push(split_forest_sum(w, &counts, params.budget)? as f64);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(&p?);
    }
    Ok(
        EngineResult::new(total.mean(), total.standard_error(), total.count())
            .with("engine", "poisson_forest")
            .with("seed", params.seed)
            .with("normalized", false)
            .with("error_kind", "standard_error"),
    )
}

/// `q̂(φ(w))` for the split word with `counts[letter]` sub-letters.
pub(crate) fn split_forest_sum(
    w: &LassoWord,
    counts: &[usize],
    budget: u64,
) -> Result<i128, MasterError> {
    // Copies of each sub-letter as (vertex index, sign), in word order.
    let offsets: Vec<usize> = counts
        .iter()
        .scan(0, |acc, &c| {
            let o = *acc;
            *acc += c;
            Some(o)
        })
        .collect();
    let total: usize = counts.iter().sum();
    let mut groups: Vec<Vec<(usize, i8)>> = vec![Vec::new(); total];
    let mut vertex = 0;
    for l in w.letters() {
        let n = counts[l.id];
        for j in 0..n {
            let sub = if l.sign > 0 { j } else { n - 1 - j };
            groups[offsets[l.id] + sub].push((vertex, l.sign));
            vertex += 1;
        }
    }
    groups.retain(|g| g.len() >= 2);
    let mut search = Search {
        groups: &groups,
        chosen: Vec::new(),
        steps: 0,
        budget,
    };
    search.run(0)
}

struct Search<'a> {
    groups: &'a [Vec<(usize, i8)>],
    chosen: Vec<(usize, usize)>,
    steps: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, g: usize) -> Result<i128, MasterError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(MasterError::Budget {
                budget: self.budget,
            });
        }
        if g == self.groups.len() {
            return Ok(1);
        }
        let mut total = self.run(g + 1)?;
        let copies = &self.groups[g];
        for i in 0..copies.len() {
            for j in i + 1..copies.len() {
                let (a, sa) = copies[i];
                let (b, sb) = copies[j];
                if self.chosen.iter().any(|&(c, d)| crosses((a, b), (c, d))) {
                    continue;
                }
                self.chosen.push((a, b));
                let v = self.run(g + 1)?;
                self.chosen.pop();
                total += if sa == sb { -v } else { v };
            }
        }
        Ok(total)
    }
}

fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn word(text: &str) -> LassoWord {
        let areas: BTreeMap<String, f64> = [("A", 0.3), ("B", 0.2)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        loopspec::parse_word(text, &areas).unwrap()
    }

    fn binom(n: i128, k: i128) -> i128 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn fourth_power_counts() {
        let w = word("A A A A");
        for k in 0..6i128 {
            let want = 1 - 6 * k + 16 * binom(k, 2) - 16 * binom(k, 3);
            assert_eq!(split_forest_sum(&w, &[k as usize], u64::MAX).unwrap(), want);
        }
    }

    #[test]
    fn letter_and_inverse_counts() {
        let w = word("A A'");
        for k in 0..8 {
            assert_eq!(split_forest_sum(&w, &[k], u64::MAX).unwrap(), 1 << k);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let w = word("A A A A");
        assert_eq!(
            split_forest_sum(&w, &[6], 10).unwrap_err(),
            MasterError::Budget { budget: 10 }
        );
    }
}
