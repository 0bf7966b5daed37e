//! Lasso words and their matching-colour pairs.

use std::fmt;
use std::ops::Range;

use crate::LoopspecError;

/// One position of a lasso word: a face lasso or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    /// Index into the word's alphabet.
    pub id: usize,
    /// `+1` for the lasso, `-1` for its inverse.
    pub sign: i8,
}

/// A word in face lassos, split into one or more loops.
///
/// The alphabet is shared by all loops of a collection. Letter ids follow the
/// order of first appearance, so printing and re-parsing is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct LassoWord {
    names: Vec<String>,
    areas: Vec<f64>,
    letters: Vec<Letter>,
    /// Start offsets of the loops followed by the total length.
    bounds: Vec<usize>,
}

/// A pair of positions `m < m_star` carrying the same letter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchPair {
    pub m: usize,
    pub m_star: usize,
    pub letter: usize,
    /// Area of the letter; the intensity of the Poisson process on the pair.
    pub mass: f64,
    /// Product of the signs at `m` and `m_star`.
    pub sign: i8,
}

/// All matching-colour pairs of a word, sorted by `(m, m_star)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchPairSet {
    pub pairs: Vec<MatchPair>,
    pub total_mass: f64,
}

impl MatchPairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn check_area(name: &str, value: f64) -> Result<(), LoopspecError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(LoopspecError::NonPositiveArea {
            name: name.to_string(),
            value,
        })
    }
}

impl LassoWord {
    /// Builds a word from its alphabet, the letter sequence, and the lengths
    /// of consecutive loops.
    pub fn new(
        names: Vec<String>,
        areas: Vec<f64>,
        letters: Vec<Letter>,
        loop_lengths: &[usize],
    ) -> Result<Self, LoopspecError> {
        if names.len() != areas.len() {
            return Err(LoopspecError::Structure(
                "alphabet and area list differ in length".into(),
            ));
        }
        for (name, &a) in names.iter().zip(&areas) {
            check_area(name, a)?;
        }
        if loop_lengths.is_empty() {
            return Err(LoopspecError::Structure(
                "at least one loop is required".into(),
            ));
        }
        if loop_lengths.contains(&0) {
            return Err(LoopspecError::Structure("loops must be non-empty".into()));
        }
        let total: usize = loop_lengths.iter().sum();
        if total != letters.len() {
            return Err(LoopspecError::Structure(format!(
                "loop lengths sum to {total} but the word has {} letters",
                letters.len()
            )));
        }
        for l in &letters {
            if l.id >= names.len() {
                return Err(LoopspecError::Structure(format!(
                    "letter id {} outside the alphabet",
                    l.id
                )));
            }
            if l.sign != 1 && l.sign != -1 {
                return Err(LoopspecError::Structure(format!("invalid sign {}", l.sign)));
            }
        }
        let mut bounds = Vec::with_capacity(loop_lengths.len() + 1);
        let mut acc = 0;
        bounds.push(0);
        for &l in loop_lengths {
            acc += l;
            bounds.push(acc);
        }
        Ok(Self {
            names,
            areas,
            letters,
            bounds,
        })
    }

    /// Convenience constructor from `(name, sign)` loops and an area lookup.
    pub fn from_loops(
        loops: &[Vec<(&str, i8)>],
        area: impl Fn(&str) -> Option<f64>,
    ) -> Result<Self, LoopspecError> {
        let mut names: Vec<String> = Vec::new();
        let mut areas = Vec::new();
        let mut letters = Vec::new();
        let mut lengths = Vec::new();
        for lp in loops {
            lengths.push(lp.len());
            for &(name, sign) in lp {
                let id = match names.iter().position(|n| n == name) {
                    Some(id) => id,
                    None => {
                        let a = area(name).ok_or_else(|| LoopspecError::UnknownIdentifier {
                            name: name.to_string(),
                            pos: 0,
                        })?;
                        names.push(name.to_string());
                        areas.push(a);
                        names.len() - 1
                    }
                };
                letters.push(Letter { id, sign });
            }
        }
        Self::new(names, areas, letters, &lengths)
    }

    /// Number of positions `M`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of distinct letters `L`.
    pub fn alphabet_len(&self) -> usize {
        self.names.len()
    }

    /// Number of loops `n`.
    pub fn n_loops(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, pos: usize) -> Letter {
        self.letters[pos]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn letter_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn area(&self, id: usize) -> f64 {
        self.areas[id]
    }

    /// Area of the letter at position `pos`.
    pub fn area_at(&self, pos: usize) -> f64 {
        self.areas[self.letters[pos].id]
    }

    /// Replaces the area of one letter.
    pub fn set_area(&mut self, id: usize, area: f64) -> Result<(), LoopspecError> {
        check_area(&self.names[id], area)?;
        self.areas[id] = area;
        Ok(())
    }

    /// Copy of the word with a new area vector (indexed by letter id).
    pub fn with_areas(&self, areas: &[f64]) -> Result<Self, LoopspecError> {
        if areas.len() != self.areas.len() {
            return Err(LoopspecError::Structure(
                "area vector has wrong length".into(),
            ));
        }
        let mut w = self.clone();
        for (id, &a) in areas.iter().enumerate() {
            w.set_area(id, a)?;
        }
        Ok(w)
    }

    /// Position ranges of the loops, in order.
    pub fn loop_blocks(&self) -> Vec<Range<usize>> {
        self.bounds.windows(2).map(|b| b[0]..b[1]).collect()
    }

    pub fn loop_block(&self, i: usize) -> Range<usize> {
        self.bounds[i]..self.bounds[i + 1]
    }

    /// Index of the loop containing position `pos`.
    pub fn loop_of(&self, pos: usize) -> usize {
        debug_assert!(pos < self.len());
        self.bounds.partition_point(|&b| b <= pos) - 1
    }

    /// Sum of the areas over all positions, `Σ_m |λ_{c(m)}|`.
    pub fn total_length(&self) -> f64 {
        self.letters.iter().map(|l| self.areas[l.id]).sum()
    }

    /// Unsigned number of occurrences of each letter.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.names.len()];
        for l in &self.letters {
            c[l.id] += 1;
        }
        c
    }

    /// Signed number of occurrences of each letter.
    pub fn net_windings(&self) -> Vec<i64> {
        let mut k = vec![0i64; self.names.len()];
        for l in &self.letters {
            k[l.id] += l.sign as i64;
        }
        k
    }

    pub fn is_inverse_free(&self) -> bool {
        self.letters.iter().all(|l| l.sign == 1)
    }

    /// All pairs `m < m*` with equal letters, sorted by `(m, m*)`.
    pub fn matching_pairs(&self) -> MatchPairSet {
        let mut pairs = Vec::new();
        for m in 0..self.len() {
            for ms in m + 1..self.len() {
                let (a, b) = (self.letters[m], self.letters[ms]);
                if a.id == b.id {
                    pairs.push(MatchPair {
                        m,
                        m_star: ms,
                        letter: a.id,
                        mass: self.areas[a.id],
                        sign: a.sign * b.sign,
                    });
                }
            }
        }
        let total_mass = pairs.iter().map(|p| p.mass).sum();
        MatchPairSet { pairs, total_mass }
    }

    /// The `i`-th loop as a single-loop word over the same alphabet.
    pub fn loop_word(&self, i: usize) -> Self {
        let r = self.loop_block(i);
        Self {
            names: self.names.clone(),
            areas: self.areas.clone(),
            letters: self.letters[r.clone()].to_vec(),
            bounds: vec![0, r.len()],
        }
    }

    /// Copy of the word with the letter sequence reversed and every sign
    /// flipped inside each loop (the inverse loop).
    pub fn inverse(&self) -> Self {
        let mut letters = Vec::with_capacity(self.len());
        for r in self.loop_blocks() {
            for p in r.rev() {
                let l = self.letters[p];
                letters.push(Letter {
                    id: l.id,
                    sign: -l.sign,
                });
            }
        }
        Self {
            letters,
            ..self.clone()
        }
    }

    /// Canonical text form: symbols separated by spaces, inverses marked with
    /// a trailing `'`, loops separated by ` | `.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.loop_blocks().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            for (j, p) in r.enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                let l = self.letters[p];
                f.write_str(&self.names[l.id])?;
                if l.sign < 0 {
                    f.write_str("'")?;
                }
            }
        }
        Ok(())
    }
}
