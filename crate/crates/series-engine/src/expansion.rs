//! Count-vector expansion of the surface sum.

use std::collections::BTreeMap;

use loopspec::{EngineResult, GroupKind, GroupSpec, LassoWord, MatchPairSet};
use rayon::prelude::*;
use surface_core::{chi_crosscheck_orientable, glue, weight_term, GluingChoice, Pairing, Relation};

use crate::tail::poisson_tail;
use crate::SeriesError;

/// Default cap on arrangement-gluing evaluations per expansion.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Largest truncation order chosen automatically.
pub const MAX_AUTO_K: usize = 24;

/// Which orderings of the points are enumerated for a count vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ArrangementMode {
    /// Only the relative order of points sharing a letter.
    #[default]
    PerLetter,
    /// Every distinct arrangement of the multiset of pair labels.
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesParams {
    /// Truncation on the total point count. `None` picks the largest order
    /// up to [`MAX_AUTO_K`] that fits the budget.
    pub k_max: Option<usize>,
    pub budget: u64,
    /// Divide by `N^n` for `n` loops.
    pub normalized: bool,
    pub arrangements: ArrangementMode,
}

impl Default for SeriesParams {
    fn default() -> Self {
        Self {
            k_max: None,
            budget: DEFAULT_BUDGET,
            normalized: true,
            arrangements: ArrangementMode::PerLetter,
        }
    }
}

impl SeriesParams {
    pub fn with_k_max(k_max: usize) -> Self {
        Self {
            k_max: Some(k_max),
            ..Self::default()
        }
    }
}

/// Contribution of one count vector: the arrangement average of the summed
/// gluing weights, times the point signs, as `Σ coeff · N^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTerm {
    pub counts: Vec<u8>,
    pub arrangements: u64,
    pub coeffs: Vec<(i32, f64)>,
}

impl CountTerm {
    pub fn total(&self) -> usize {
        self.counts.iter().map(|&k| k as usize).sum()
    }

    /// `Σ coeff · N^power` at a given `N`.
    pub fn at(&self, n: f64) -> f64 {
        self.coeffs.iter().map(|&(p, c)| c * n.powi(p)).sum()
    }
}

/// Area-independent expansion of a word for one group family.
#[derive(Clone, Debug)]
pub struct SeriesExpansion {
    word: LassoWord,
    kind: GroupKind,
    pairs: MatchPairSet,
    k_max: usize,
    terms: Vec<CountTerm>,
    evaluations: u128,
    mode: ArrangementMode,
}

impl SeriesExpansion {
    pub fn build(w: &LassoWord, kind: GroupKind, p: &SeriesParams) -> Result<Self, SeriesError> {
        let pairs = w.matching_pairs();
        let blocks = blocks(w, &pairs, p.arrangements);
        let b = Relation::admissible(kind).len();
        let (k_max, cost) = choose_k_max(&blocks, pairs.len(), b, p)?;
        let mut vectors = Vec::new();
        for big_k in 0..=k_max {
            compositions(pairs.len(), big_k, &mut |c| {
                vectors.push(c.iter().map(|&x| x as u8).collect::<Vec<u8>>());
                true
            });
        }
        let ctx = TermContext {
            word: w,
            pairs: &pairs,
            blocks: &blocks,
            kind,
        };
        let terms: Vec<CountTerm> = vectors.par_iter().map(|c| ctx.term(c)).collect();
        Ok(Self {
            word: w.clone(),
            kind,
            pairs,
            k_max,
            terms,
            evaluations: cost,
            mode: p.arrangements,
        })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn word(&self) -> &LassoWord {
        &self.word
    }

    pub fn pairs(&self) -> &MatchPairSet {
        &self.pairs
    }

    pub fn terms(&self) -> &[CountTerm] {
        &self.terms
    }

    /// Arrangement-gluing evaluations spent building the expansion.
    pub fn evaluations(&self) -> u128 {
        self.evaluations
    }

    /// Evaluates at per-letter `areas` (indexed by letter id).
    pub fn evaluate(
        &self,
        areas: &[f64],
        g: &GroupSpec,
        normalized: bool,
    ) -> Result<EngineResult, SeriesError> {
        if g.kind() != self.kind {
            return Err(SeriesError::GroupMismatch {
                built: self.kind.to_string(),
                requested: g.kind().to_string(),
            });
        }
        if areas.len() != self.word.alphabet_len() {
            return Err(SeriesError::AreaCount {
                expected: self.word.alphabet_len(),
                got: areas.len(),
            });
        }
        let n = g.n_f64();
        let masses: Vec<f64> = self.pairs.pairs.iter().map(|p| areas[p.letter]).collect();
        let lambda: f64 = masses.iter().sum();
        // Tables of mass^j / j! for every pair.
        let powers: Vec<Vec<f64>> = masses
            .iter()
            .map(|&m| {
                let mut row = Vec::with_capacity(self.k_max + 1);
                let mut x = 1.0;
                row.push(x);
                for j in 1..=self.k_max {
                    x *= m / j as f64;
                    row.push(x);
                }
                row
            })
            .collect();
        let mut sum = 0.0;
        for term in &self.terms {
            let mut mono = 1.0;
            for (p, &k) in term.counts.iter().enumerate() {
                mono *= powers[p][k as usize];
            }
            sum += mono * term.at(n);
        }
        let length: f64 = self.word.letters().iter().map(|l| areas[l.id]).sum();
        // constant prefactor times e^{-Λ}
        let scale = (g.casimir() / 2.0 * length).exp();
        let loops = self.word.n_loops() as i32;
        let norm = if normalized { n.powi(loops) } else { 1.0 };
        let b = g.relation_count() as f64;
        let tail = poisson_tail(b * lambda, self.k_max);
        let value = scale * sum / norm;
        let error = scale * tail * n.powi(loops) / norm;
        Ok(EngineResult::new(value, error, self.terms.len() as u64)
            .with("engine", "series")
            .with("group", g)
            .with("k_max", self.k_max)
            .with("normalized", normalized)
            .with("error_kind", "tail_bound")
            .with("evaluations", self.evaluations)
            .with(
                "arrangements",
                match self.mode {
                    ArrangementMode::PerLetter => "per_letter",
                    ArrangementMode::Full => "full",
                },
            ))
    }
}

/// Pair indices grouped into blocks whose internal order matters.
fn blocks(w: &LassoWord, pairs: &MatchPairSet, mode: ArrangementMode) -> Vec<Vec<usize>> {
    match mode {
        ArrangementMode::Full => {
            if pairs.is_empty() {
                Vec::new()
            } else {
                vec![(0..pairs.len()).collect()]
            }
        }
        ArrangementMode::PerLetter => (0..w.alphabet_len())
            .map(|l| {
                (0..pairs.len())
                    .filter(|&p| pairs.pairs[p].letter == l)
                    .collect::<Vec<_>>()
            })
            .filter(|b| !b.is_empty())
            .collect(),
    }
}

/// Number of distinct arrangements enumerated for a count vector: the
/// product over blocks of the multinomial coefficients.
pub fn arrangement_cost(counts: &[usize], blocks: &[Vec<usize>]) -> u128 {
    let mut total: u128 = 1;
    for b in blocks {
        let mut n = 0u128;
        for &p in b {
            for j in 1..=counts[p] as u128 {
                n += 1;
                // running multinomial: multiply by n / j, exact at each step
                total = total.saturating_mul(n) / j;
            }
        }
    }
    total
}

fn choose_k_max(
    blocks: &[Vec<usize>],
    n_pairs: usize,
    b: usize,
    p: &SeriesParams,
) -> Result<(usize, u128), SeriesError> {
    let budget = p.budget as u128;
    let level_cost = |k: usize, cap: u128| -> u128 {
        let gluings = (b as u128).saturating_pow(k as u32);
        let mut cost: u128 = 0;
        compositions(n_pairs, k, &mut |c| {
            cost = cost.saturating_add(arrangement_cost(c, blocks).saturating_mul(gluings));
            cost <= cap
        });
        cost
    };
    match p.k_max {
        Some(k_max) => {
            let mut cost: u128 = 0;
            for k in 0..=k_max {
                cost = cost.saturating_add(level_cost(k, budget.saturating_sub(cost)));
                if cost > budget {
                    return Err(SeriesError::Budget {
                        k_max,
                        cost,
                        budget: p.budget,
                    });
                }
            }
            Ok((k_max, cost))
        }
        None => {
            if n_pairs == 0 {
                return Ok((0, 1));
            }
            let mut cost: u128 = 0;
            let mut chosen = 0;
            for k in 0..=MAX_AUTO_K {
                let c = level_cost(k, budget.saturating_sub(cost));
                if cost.saturating_add(c) > budget {
                    break;
                }
                cost += c;
                chosen = k;
            }
            Ok((chosen, cost))
        }
    }
}

/// Calls `f` on every vector of `parts` non-negative integers summing to
/// `total`, in lexicographically decreasing order. Stops when `f` returns
/// false.
fn compositions(parts: usize, total: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(
        buf: &mut Vec<usize>,
        parts: usize,
        left: usize,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if buf.len() + 1 == parts {
            buf.push(left);
            let go = f(buf);
            buf.pop();
            return go;
        }
        for x in (0..=left).rev() {
            buf.push(x);
            let go = rec(buf, parts, left - x, f);
            buf.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    rec(&mut Vec::with_capacity(parts), parts, total, f);
}

/// Rearranges `v` into the next lexicographic permutation of its multiset.
/// Returns false, leaving `v` sorted, after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

struct TermContext<'a> {
    word: &'a LassoWord,
    pairs: &'a MatchPairSet,
    blocks: &'a [Vec<usize>],
    kind: GroupKind,
}

impl TermContext<'_> {
    fn term(&self, counts: &[u8]) -> CountTerm {
        let mut seq = Vec::new();
        let mut ranges = Vec::new();
        for b in self.blocks {
            let start = seq.len();
            for &p in b {
                seq.extend(std::iter::repeat_n(p, counts[p] as usize));
            }
            ranges.push(start..seq.len());
        }
        let big_k = seq.len();
        let n_loops = self.word.n_loops();
        let relations = Relation::admissible(self.kind);
        let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
        let mut choice = GluingChoice(vec![relations[0]; big_k]);
        let mut arrangements: u64 = 0;
        loop {
            let pairing = Pairing::from_sequence(&seq, self.pairs, self.word);
            if self.kind == GroupKind::U {
                // All points glued with relation I: the vertex count is the
                // number of cycles of s∘partner and each empty face is a sphere.
                let v = chi_crosscheck_orientable(&pairing) as i64;
                let empty = (0..n_loops).filter(|&i| pairing.face_size(i) == 0).count() as i64;
                let sign = if big_k % 2 == 0 { 1 } else { -1 };
                *acc.entry(v + empty - big_k as i64).or_default() += sign;
            } else {
                for mask in 0u64..(1u64 << big_k) {
                    for (i, r) in choice.0.iter_mut().enumerate() {
                        *r = relations[((mask >> i) & 1) as usize];
                    }
                    let stats = glue(&pairing, &choice, n_loops);
                    let t = weight_term(&stats, self.kind, n_loops);
                    *acc.entry(t.power).or_default() += t.sign as i64;
                }
            }
            arrangements += 1;
            if !advance(&mut seq, &ranges) {
                break;
            }
        }
        let negative: usize = counts
            .iter()
            .enumerate()
            .filter(|&(p, _)| self.pairs.pairs[p].sign < 0)
            .map(|(_, &k)| k as usize)
            .sum();
        let point_sign = if negative.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let coeffs = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(p, c)| (p as i32, point_sign * c as f64 / arrangements as f64))
            .collect();
        CountTerm {
            counts: counts.to_vec(),
            arrangements,
            coeffs,
        }
    }
}

/// Odometer over the blocks: advances the last block that still has a next
/// permutation, resetting the blocks after it.
fn advance(seq: &mut [usize], ranges: &[std::ops::Range<usize>]) -> bool {
    for r in ranges.iter().rev() {
        if next_permutation(&mut seq[r.clone()]) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_permutations_are_distinct_and_complete() {
        let mut v = vec![0, 0, 1, 1, 2];
        let mut seen = std::collections::BTreeSet::new();
        loop {
            assert!(seen.insert(v.clone()));
            if !next_permutation(&mut v) {
                break;
            }
        }
        assert_eq!(seen.len(), 30);
        assert_eq!(v, vec![0, 0, 1, 1, 2]);
    }

    #[test]
    fn compositions_count() {
        let mut n = 0;
        compositions(3, 4, &mut |c| {
            assert_eq!(c.iter().sum::<usize>(), 4);
            n += 1;
            true
        });
        assert_eq!(n, 15);
        let mut n = 0;
        compositions(0, 0, &mut |_| {
            n += 1;
            true
        });
        assert_eq!(n, 1);
    }

    #[test]
    fn multinomial_cost() {
        let blocks = vec![vec![0, 1, 2]];
        assert_eq!(arrangement_cost(&[2, 1, 3], &blocks), 60);
        let split = vec![vec![0, 1], vec![2]];
        assert_eq!(arrangement_cost(&[2, 1, 3], &split), 3);
    }
}
