//! Direct simulation of Brownian motion on `U(N)`, `SO(N)`, `SU(N)` and
//! `Sp(N/2)`, used as an independent oracle for Wilson loop expectations.
//!
//! Each letter of a word is an independent Brownian motion run for a time
//! equal to the letter's area. Loops multiply the letter matrices in word
//! order, inverse letters contribute the inverse matrix, and the sample value
//! is the product of the normalized traces of the loops.

mod increment;

pub use increment::{sample_increment, sample_increment_into, symplectic_form};

use loopspec::{EngineResult, GroupSpec, LassoWord};
use matexp::{expm_into, DenseMatrix, ExpmWorkspace, MatexpError};
use mc_engine::{sample_rng, Moments, CHUNK};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

pub type CMatrix = DenseMatrix<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HolonomyError {
    #[error("time step must be positive, got {0}")]
    TimeStep(f64),
    #[error("at least one step is required")]
    NoSteps,
    #[error("at least one sample is required")]
    NoSamples,
    #[error(transparent)]
    Matrix(#[from] MatexpError),
}

/// Discretisation of the group-valued SDE.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stepper {
    /// `U ← U · exp(ΔW)`; stays on the group.
    #[default]
    Exponential,
    /// `U ← U · ((1 + c·Δt/2) I + ΔW)` with the Casimir drift `c`.
    Euler,
}

impl std::str::FromStr for Stepper {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exponential" | "exp" => Ok(Self::Exponential),
            "euler" => Ok(Self::Euler),
            other => Err(format!(
                "unknown stepper `{other}` (expected exponential or euler)"
            )),
        }
    }
}

/// Brownian motion on a matrix group, discretised with `steps` steps per
/// letter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixBm {
    pub group: GroupSpec,
    pub steps: usize,
    pub stepper: Stepper,
}

/// Scratch matrices for one simulation thread.
pub struct Scratch {
    inc: CMatrix,
    step: CMatrix,
    tmp: CMatrix,
    ws: ExpmWorkspace<Complex64>,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Self {
            inc: CMatrix::zeros(n),
            step: CMatrix::zeros(n),
            tmp: CMatrix::zeros(n),
            ws: ExpmWorkspace::new(n),
        }
    }
}

impl MatrixBm {
    pub fn new(group: GroupSpec, steps: usize, stepper: Stepper) -> Result<Self, HolonomyError> {
        if steps == 0 {
            return Err(HolonomyError::NoSteps);
        }
        Ok(Self {
            group,
            steps,
            stepper,
        })
    }

    /// Runs the motion from the identity for time `t` into `u`.
    pub fn run<R: Rng + ?Sized>(
        &self,
        t: f64,
        rng: &mut R,
        scratch: &mut Scratch,
        u: &mut CMatrix,
    ) -> Result<(), HolonomyError> {
        let dt = t / self.steps as f64;
        if dt.is_nan() || dt <= 0.0 {
            return Err(HolonomyError::TimeStep(dt));
        }
        let n = self.group.n() as usize;
        let drift = Complex64::new(1.0 + self.group.casimir() * dt / 2.0, 0.0);
        u.set_identity();
        for _ in 0..self.steps {
            sample_increment_into(&self.group, dt, rng, &mut scratch.inc)?;
            match self.stepper {
                Stepper::Exponential => {
                    expm_into(&scratch.inc, &mut scratch.ws, &mut scratch.step)?
                }
                Stepper::Euler => {
                    scratch.step.copy_from(&scratch.inc);
                    for i in 0..n {
                        scratch.step.add_at(i, i, drift);
                    }
                }
            }
            u.mul_into(&scratch.step, &mut scratch.tmp);
            std::mem::swap(u, &mut scratch.tmp);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyParams {
    /// Steps per letter.
    pub steps: usize,
    pub samples: u64,
    pub seed: u64,
    pub stepper: Stepper,
}

impl HolonomyParams {
    pub fn new(steps: usize, samples: u64, seed: u64) -> Self {
        Self {
            steps,
            samples,
            seed,
            stepper: Stepper::Exponential,
        }
    }
}

/// Simulates one matrix per letter of the alphabet for sample `index`.
pub fn sample_letters(
    w: &LassoWord,
    bm: &MatrixBm,
    seed: u64,
    index: u64,
    scratch: &mut Scratch,
) -> Result<Vec<CMatrix>, HolonomyError> {
    let n = bm.group.n() as usize;
    let mut rng = sample_rng(seed, index);
    let used = w.counts();
    let mut out = Vec::with_capacity(w.alphabet_len());
    for (id, &area) in w.areas().iter().enumerate() {
        let mut u = CMatrix::identity(n);
        if used[id] > 0 {
            bm.run(area, &mut rng, scratch, &mut u)?;
        }
        out.push(u);
    }
    Ok(out)
}

/// Product over loops of the normalized traces of the loop holonomies,
/// given one matrix per letter. Inverse letters use `inverses`.
pub fn loop_traces(w: &LassoWord, letters: &[CMatrix], inverses: &[CMatrix]) -> Complex64 {
    let n = letters.first().map_or(1, |m| m.dim());
    let mut total = Complex64::new(1.0, 0.0);
    let mut acc = CMatrix::identity(n);
    let mut tmp = CMatrix::zeros(n);
    for block in w.loop_blocks() {
        acc.set_identity();
        for pos in block {
            let l = w.letter(pos);
            let m = if l.sign > 0 {
                &letters[l.id]
            } else {
                &inverses[l.id]
            };
            acc.mul_into(m, &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
        }
        total *= acc.trace() / n as f64;
    }
    total
}

/// Inverse of each letter matrix: the adjoint for group-valued matrices from
/// the exponential stepper, a linear solve for the Euler stepper.
pub fn letter_inverses(
    letters: &[CMatrix],
    stepper: Stepper,
) -> Result<Vec<CMatrix>, HolonomyError> {
    letters
        .iter()
        .map(|m| match stepper {
            Stepper::Exponential => Ok(m.adjoint()),
            Stepper::Euler => Ok(m.solve(&CMatrix::identity(m.dim()))?),
        })
        .collect()
}

/// Monte Carlo average of the normalized Wilson loop trace.
///
/// The sample value is the real part of the product of the loop traces.
pub fn holonomy_trace_mc(
    w: &LassoWord,
    g: &GroupSpec,
    p: &HolonomyParams,
) -> Result<EngineResult, HolonomyError> {
    if p.samples == 0 {
        return Err(HolonomyError::NoSamples);
    }
    let bm = MatrixBm::new(*g, p.steps, p.stepper)?;
    let chunks = p.samples.div_ceil(CHUNK);
    let parts: Vec<Result<Moments, HolonomyError>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut scratch = Scratch::new(g.n() as usize);
            let mut m = Moments::default();
            let end = ((c + 1) * CHUNK).min(p.samples);
            for i in c * CHUNK..end {
                let letters = sample_letters(w, &bm, p.seed, i, &mut scratch)?;
                let inverses = if w.is_inverse_free() {
                    Vec::new()
                } else {
                    letter_inverses(&letters, p.stepper)?
                };
                m.push(loop_traces(w, &letters, &inverses).re);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for part in parts {
        total = total.merge(&part?);
    }
    Ok(
        EngineResult::new(total.mean(), total.standard_error(), total.count())
            .with("engine", "holonomy")
            .with("group", g)
            .with("steps", p.steps)
            .with("stepper", format!("{:?}", p.stepper).to_lowercase())
            .with("seed", p.seed)
            .with("normalized", true)
            .with("error_kind", "standard_error"),
    )
}
