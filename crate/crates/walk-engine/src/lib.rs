//! Exact `U(N)` Wilson loop expectations of inverse-free single loops as a
//! weighted random walk on permutations.
//!
//! States are the permutations of the `M` word positions reachable from the
//! long cycle `ζ_M = (1 2 … M)` by right multiplication with the
//! transpositions `(m m*)` of matching pairs. A step along pair `(m, m*)`
//! carries weight `-area`, discounted by `N⁻²` when it lowers the cycle
//! count. The normalized expectation is `e^{-Σ/2} · 1ᵀ exp(Q) e_ζ`.

mod perm;

pub use perm::{cycle_count, deficit, lehmer_rank, long_cycle};

use std::collections::HashMap;
use std::collections::VecDeque;

use loopspec::LassoWord;
use matexp::{expm, DenseMatrix, MatexpError};
use thiserror::Error;

/// Default cap on reachable states.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;
/// Largest graph exponentiated densely; larger graphs use a sparse
/// Taylor action on the root vector.
pub const DENSE_LIMIT: usize = 2048;
/// Longest word whose permutations have a `u64` Lehmer rank.
pub const MAX_LENGTH: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("the walk on permutations only supports words without inverse letters")]
    Inverse,
    #[error("the walk on permutations only supports single loops, got {0}")]
    MultiLoop(usize),
    #[error("word of length {0} exceeds the supported maximum of {MAX_LENGTH}")]
    TooLong(usize),
    #[error("more than {0} reachable states")]
    StateCap(usize),
    #[error("consecutive path entries {0} and {1} do not differ by one transposition")]
    InvalidStep(usize, usize),
    #[error("expected {expected} areas, got {got}")]
    AreaCount { expected: usize, got: usize },
    #[error("matrix exponential failed: {0}")]
    Matrix(#[from] MatexpError),
}

/// One directed edge `from → to = from·(m m*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Letter of the pair `(m, m*)`.
    pub letter: usize,
    /// Whether the step lowers the cycle count.
    pub decreases: bool,
}

/// Reachable component of the action graph of an inverse-free word.
#[derive(Clone, Debug)]
pub struct ActionGraph {
    states: Vec<Vec<u8>>,
    edges: Vec<Edge>,
    n_pairs: usize,
    alphabet: usize,
}

impl ActionGraph {
    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    /// Index of `ζ_M`, always zero.
    pub fn root(&self) -> usize {
        0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    /// Generator `Q` with `Q[to, from] = -area · N^{-2·[decreases]}`.
    pub fn generator(&self, areas: &[f64], n: f64) -> Result<DenseMatrix<f64>, WalkError> {
        self.check_areas(areas)?;
        let mut q = DenseMatrix::zeros(self.states.len());
        let discount = 1.0 / (n * n);
        for e in &self.edges {
            let w = if e.decreases { discount } else { 1.0 };
            q.add_at(e.to, e.from, -areas[e.letter] * w);
        }
        Ok(q)
    }

    /// Number of outgoing edges of every state, one per matching pair.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.states.len()];
        for e in &self.edges {
            d[e.from] += 1;
        }
        d
    }

    fn check_areas(&self, areas: &[f64]) -> Result<(), WalkError> {
        if areas.len() != self.alphabet {
            return Err(WalkError::AreaCount {
                expected: self.alphabet,
                got: areas.len(),
            });
        }
        Ok(())
    }
}

/// Builds the reachable action graph of `w` with the default state cap.
pub fn build_action_graph(w: &LassoWord) -> Result<ActionGraph, WalkError> {
    build_action_graph_with_cap(w, DEFAULT_STATE_CAP)
}

/// Breadth-first closure from `ζ_M` under the pair transpositions.
pub fn build_action_graph_with_cap(w: &LassoWord, cap: usize) -> Result<ActionGraph, WalkError> {
    if !w.is_inverse_free() {
        return Err(WalkError::Inverse);
    }
    if w.n_loops() != 1 {
        return Err(WalkError::MultiLoop(w.n_loops()));
    }
    let m = w.len();
    if m > MAX_LENGTH {
        return Err(WalkError::TooLong(m));
    }
    let pairs = w.matching_pairs();
    let root = long_cycle(m);
    let mut index: HashMap<u64, usize> = HashMap::new();
    index.insert(lehmer_rank(&root), 0);
    let mut states = vec![root];
    let mut cycles = vec![cycle_count(&states[0])];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(from) = queue.pop_front() {
        for pair in &pairs.pairs {
            let mut next = states[from].clone();
            next.swap(pair.m, pair.m_star);
            let key = lehmer_rank(&next);
            let to = match index.get(&key) {
                Some(&i) => i,
                None => {
                    if states.len() >= cap {
                        return Err(WalkError::StateCap(cap));
                    }
                    let i = states.len();
                    index.insert(key, i);
                    cycles.push(cycle_count(&next));
                    states.push(next);
                    queue.push_back(i);
                    i
                }
            };
            edges.push(Edge {
                from,
                to,
                letter: pair.letter,
                decreases: cycles[to] < cycles[from],
            });
        }
    }
    Ok(ActionGraph {
        states,
        edges,
        n_pairs: pairs.len(),
        alphabet: w.alphabet_len(),
    })
}

/// Normalized `U(N)` expectation `e^{-Σ/2} · 1ᵀ exp(Q) e_ζ` at the areas of
/// `w`, for the graph built from `w`.
pub fn evaluate_walk(graph: &ActionGraph, w: &LassoWord, n: u32) -> Result<f64, WalkError> {
    evaluate_walk_at(graph, w, w.areas(), n)
}

/// As [`evaluate_walk`] at explicit per-letter areas.
pub fn evaluate_walk_at(
    graph: &ActionGraph,
    w: &LassoWord,
    areas: &[f64],
    n: u32,
) -> Result<f64, WalkError> {
    graph.check_areas(areas)?;
    let nf = n as f64;
    let length: f64 = w.letters().iter().map(|l| areas[l.id]).sum();
    let v = if graph.n_states() <= DENSE_LIMIT {
        let e = expm(&graph.generator(areas, nf)?)?;
        (0..graph.n_states())
            .map(|i| e.get(i, graph.root()))
            .sum::<f64>()
    } else {
        sparse_action(graph, areas, nf).iter().sum()
    };
    Ok((-length / 2.0).exp() * v)
}

/// `exp(Q) e_ζ` by `s` Taylor steps of `exp(Q/s)` with `‖Q/s‖₁ ≤ 1`.
fn sparse_action(graph: &ActionGraph, areas: &[f64], n: f64) -> Vec<f64> {
    let discount = 1.0 / (n * n);
    let weights: Vec<f64> = graph
        .edges
        .iter()
        .map(|e| -areas[e.letter] * if e.decreases { discount } else { 1.0 })
        .collect();
    let mut col = vec![0.0; graph.n_states()];
    for (e, w) in graph.edges.iter().zip(&weights) {
        col[e.from] += w.abs();
    }
    let norm = col.iter().cloned().fold(0.0, f64::max);
    let steps = norm.ceil().max(1.0) as usize;
    let mut v = vec![0.0; graph.n_states()];
    v[graph.root()] = 1.0;
    let mut term = vec![0.0; graph.n_states()];
    let mut next = vec![0.0; graph.n_states()];
    for _ in 0..steps {
        term.copy_from_slice(&v);
        for k in 1.. {
            next.iter_mut().for_each(|x| *x = 0.0);
            let c = 1.0 / (steps as f64 * k as f64);
            for (e, w) in graph.edges.iter().zip(&weights) {
                next[e.to] += c * w * term[e.from];
            }
            std::mem::swap(&mut term, &mut next);
            let t = term.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            v.iter_mut().zip(&term).for_each(|(a, b)| *a += b);
            let s = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if t <= 1e-18 * s || t == 0.0 {
                break;
            }
        }
    }
    v
}

/// Forces the sparse path; exposed for cross-checking the two kernels.
pub fn evaluate_walk_sparse(
    graph: &ActionGraph,
    w: &LassoWord,
    areas: &[f64],
    n: u32,
) -> Result<f64, WalkError> {
    graph.check_areas(areas)?;
    let length: f64 = w.letters().iter().map(|l| areas[l.id]).sum();
    Ok((-length / 2.0).exp() * sparse_action(graph, areas, n as f64).iter().sum::<f64>())
}
