//! Free cumulants of a unitary Brownian motion and the cumulant expansion
//! of a loop word.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use loopspec::LassoWord;

use crate::moments::tau;
use crate::nc::nc_block_sum;
use crate::{check_lengths, MasterError};

/// Longest sign pattern accepted by [`BlockWord`].
const MAX_BLOCK: usize = 24;

/// The sign pattern of a single-letter block with the area of its letter.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockWord {
    area: f64,
    signs: Vec<i8>,
}

impl BlockWord {
    pub fn new(area: f64, signs: Vec<i8>) -> Result<Self, MasterError> {
        if !(area.is_finite() && area > 0.0) {
            return Err(MasterError::Block(format!(
                "area must be positive, got {area}"
            )));
        }
        if signs.is_empty() || signs.len() > MAX_BLOCK {
            return Err(MasterError::Block(format!(
                "length must be between 1 and {MAX_BLOCK}, got {}",
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(MasterError::Block("signs must be +1 or -1".into()));
        }
        Ok(Self { area, signs })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Bit `i` is set when position `i` is an inverse.
    fn mask(&self) -> u32 {
        pattern_mask(self.signs.iter().copied())
    }
}

fn pattern_mask(signs: impl Iterator<Item = i8>) -> u32 {
    signs
        .enumerate()
        .filter(|&(_, s)| s < 0)
        .fold(0, |m, (i, _)| m | 1 << i)
}

type Key = (u64, u8, u32);

fn cumulant_cache() -> &'static RwLock<HashMap<Key, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Free cumulant of `(u^{ε_1}, …, u^{ε_m})` for a free unitary Brownian
/// motion `u` at time `A`.
///
/// Computed from the moment-cumulant relation: the cumulant is the moment
/// minus the sum over non-crossing partitions with at least two blocks.
/// Choosing the block of the first position, the remaining positions fall
/// into gaps whose partition sums are again moments. Results are memoised
/// on the sign pattern and area.
pub fn block_cumulant(b: &BlockWord) -> f64 {
    cumulant(b.area, b.len(), b.mask())
}

fn cumulant(area: f64, m: usize, mask: u32) -> f64 {
    let key = (area.to_bits(), m as u8, mask);
    if let Some(&v) = cumulant_cache().read().unwrap().get(&key) {
        return v;
    }
    let inv = |p: usize| mask >> p & 1 == 1;
    let moment_of = |range: std::ops::Range<usize>| {
        let l = range.clone().filter(|&p| inv(p)).count();
        tau(range.len() - l, l, area)
    };
    let mut v = moment_of(0..m);
    let rest = m - 1;
    let full = (1u64 << rest) - 1;
    for sub in 0..full {
        let mut block = vec![0usize];
        block.extend((0..rest).filter(|b| sub >> b & 1 == 1).map(|b| b + 1));
        let sub_mask = pattern_mask(block.iter().map(|&p| if inv(p) { -1 } else { 1 }));
        let mut term = cumulant(area, block.len(), sub_mask);
        for w in block.windows(2) {
            term *= moment_of(w[0] + 1..w[1]);
        }
        term *= moment_of(*block.last().unwrap() + 1..m);
        v -= term;
    }
    cumulant_cache().write().unwrap().insert(key, v);
    v
}

/// `τ(w)`, the `N = ∞` limit of the normalized Wilson loop expectation.
///
/// Faces carry free unitary Brownian motions, so only cumulants of
/// single-letter blocks survive and `τ(w) = Σ_π Π_B κ(B)` over the
/// non-crossing partitions `π` of the positions with single-letter blocks.
/// A collection of loops gives the product over its loops.
pub fn master_field(w: &LassoWord) -> Result<f64, MasterError> {
    check_lengths(w)?;
    let mut value = 1.0;
    for r in w.loop_blocks() {
        let letters = &w.letters()[r];
        let ids: Vec<usize> = letters.iter().map(|l| l.id).collect();
        value *= nc_block_sum(&ids, |block: &[usize]| {
            let area = w.area(ids[block[0]]);
            let mask = pattern_mask(block.iter().map(|&p| letters[p].sign));
            cumulant(area, block.len(), mask)
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_patterns() {
        let a = 0.37;
        let k1 = block_cumulant(&BlockWord::new(a, vec![1]).unwrap());
        assert!((k1 - (-a / 2.0).exp()).abs() < 1e-15);
        let k2 = block_cumulant(&BlockWord::new(a, vec![1, 1]).unwrap());
        assert!((k2 - (-a * (-a).exp())).abs() < 1e-15);
        let k2 = block_cumulant(&BlockWord::new(a, vec![1, -1]).unwrap());
        assert!((k2 - (1.0 - (-a).exp())).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(BlockWord::new(0.0, vec![1]).is_err());
        assert!(BlockWord::new(1.0, vec![]).is_err());
        assert!(BlockWord::new(1.0, vec![2]).is_err());
    }
}
