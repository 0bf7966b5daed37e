//! Permutations of `0..M` stored as image arrays.

use crate::WalkError;

/// The long cycle `i ↦ i + 1 mod M`.
pub fn long_cycle(m: usize) -> Vec<u8> {
    (0..m).map(|i| ((i + 1) % m) as u8).collect()
}

pub fn cycle_count(p: &[u8]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
        }
    }
    cycles
}

/// Rank of `p` among the permutations of its length in lexicographic order.
pub fn lehmer_rank(p: &[u8]) -> u64 {
    let mut rank = 0u64;
    for i in 0..p.len() {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count() as u64;
        rank = rank * (p.len() - i) as u64 + smaller;
    }
    rank
}

/// Number of steps of `path` that lower the cycle count. Consecutive entries
/// must differ by one transposition.
pub fn deficit(path: &[Vec<u8>]) -> Result<usize, WalkError> {
    let mut d = 0;
    for (i, w) in path.windows(2).enumerate() {
        let diff = w[0].iter().zip(&w[1]).filter(|(a, b)| a != b).count();
        if w[0].len() != w[1].len() || diff != 2 {
            return Err(WalkError::InvalidStep(i, i + 1));
        }
        if cycle_count(&w[1]) < cycle_count(&w[0]) {
            d += 1;
        }
    }
    Ok(d)
}
