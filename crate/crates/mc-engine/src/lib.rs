//! Monte Carlo estimation of Wilson loop expectations by sampling the
//! Poisson process on matching-colour pairs.
//!
//! Each sample draws a point configuration, builds its pairing and glues it.
//! For `U(N)` every point uses relation I. For the other groups each point
//! picks one of its two relations uniformly and the weight is multiplied by
//! `2^K`, which keeps the estimator unbiased.
//!
//! Sample `i` uses its own ChaCha stream derived from `(seed, i)`, and
//! samples are reduced in fixed-size chunks merged in chunk order, so the
//! result does not depend on the number of threads.

mod moments;

pub use moments::Moments;

use loopspec::{EngineResult, GroupKind, GroupSpec, LassoWord, MatchPairSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use surface_core::{glue, pairing_from_config, weight, GluingChoice, PointConfig, Relation};
use thiserror::Error;

/// Samples per reduction chunk.
pub const CHUNK: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("at least one sample is required")]
    NoSamples,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McParams {
    pub samples: u64,
    pub seed: u64,
    /// Divide by `N^n` for `n` loops.
    pub normalized: bool,
}

impl McParams {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            normalized: true,
        }
    }
}

/// The random stream of sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws a Poisson point configuration: an independent `Poisson(mass)` count
/// per pair and i.i.d. uniform coordinates, redrawn on the null event of a
/// tie.
pub fn sample_config<R: Rng + ?Sized>(pairs: &MatchPairSet, rng: &mut R) -> PointConfig {
    let mut points = Vec::new();
    for (p, pair) in pairs.pairs.iter().enumerate() {
        let k = poisson(pair.mass, rng);
        for _ in 0..k {
            points.push((p, rng.random::<f64>()));
        }
    }
    loop {
        match PointConfig::new(points.clone()) {
            Ok(cfg) => return cfg,
            Err(_) => {
                for pt in &mut points {
                    pt.1 = rng.random::<f64>();
                }
            }
        }
    }
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    // Poisson::new only fails for non-positive or non-finite means.
    Poisson::new(mean)
        .map(|d| d.sample(rng) as u64)
        .unwrap_or(0)
}

/// Precomputed per-word data shared by all samples.
pub struct Sampler<'a> {
    word: &'a LassoWord,
    group: GroupSpec,
    pairs: MatchPairSet,
    scale: f64,
}

impl<'a> Sampler<'a> {
    pub fn new(word: &'a LassoWord, group: GroupSpec, normalized: bool) -> Self {
        let pairs = word.matching_pairs();
        let prefactor = (group.casimir() / 2.0 * word.total_length() + pairs.total_mass).exp();
        let norm = if normalized {
            group.n_f64().powi(word.n_loops() as i32)
        } else {
            1.0
        };
        Self {
            word,
            group,
            pairs,
            scale: prefactor / norm,
        }
    }

    /// One unbiased sample of the (normalized) Wilson loop expectation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let cfg = sample_config(&self.pairs, rng);
        // Sequence of pairs in t order fixes the pairing.
        let pairing = pairing_from_config(&cfg, &self.pairs, self.word)
            .expect("sampled pair indices are in range");
        let k = cfg.len();
        let relations = Relation::admissible(self.group.kind());
        let (choice, reweight) = if self.group.kind() == GroupKind::U {
            (GluingChoice::all_type_one(k), 1.0)
        } else {
            let c = (0..k)
                .map(|_| relations[rng.random_range(0..relations.len())])
                .collect();
            (GluingChoice(c), (relations.len() as f64).powi(k as i32))
        };
        let stats = glue(&pairing, &choice, self.word.n_loops());
        let negative = cfg
            .points()
            .iter()
            .filter(|&&(p, _)| self.pairs.pairs[p].sign < 0)
            .count();
        let sign = if negative % 2 == 0 { 1.0 } else { -1.0 };
        self.scale * sign * reweight * weight(&stats, &self.group, self.word.n_loops())
    }
}

/// Monte Carlo estimate with its standard error.
pub fn estimate(w: &LassoWord, g: &GroupSpec, p: &McParams) -> Result<EngineResult, McError> {
    if p.samples == 0 {
        return Err(McError::NoSamples);
    }
    let sampler = Sampler::new(w, *g, p.normalized);
    let chunks = p.samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::default();
            let end = ((c + 1) * CHUNK).min(p.samples);
            for i in c * CHUNK..end {
                let mut rng = sample_rng(p.seed, i);
                m.push(sampler.sample(&mut rng));
            }
            m
        })
        .collect();
    let total = parts.iter().fold(Moments::default(), |acc, m| acc.merge(m));
    Ok(
        EngineResult::new(total.mean(), total.standard_error(), total.count())
            .with("engine", "mc")
            .with("group", g)
            .with("seed", p.seed)
            .with("normalized", p.normalized)
            .with("error_kind", "standard_error"),
    )
}
