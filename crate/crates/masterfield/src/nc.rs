//! Non-crossing partitions and sums over them.

use rayon::prelude::*;

use crate::MasterError;

/// A non-crossing partition of `{0, …, m-1}`. Blocks are sorted internally
/// and ordered by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCPartition {
    blocks: Vec<Vec<usize>>,
    size: usize,
}

impl NCPartition {
    /// Validates that `blocks` partition `{0, …, size-1}` without crossings.
    pub fn new(mut blocks: Vec<Vec<usize>>, size: usize) -> Result<Self, MasterError> {
        let mut seen = vec![false; size];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(MasterError::Partition("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x >= size || seen[x] {
                    return Err(MasterError::Partition(format!(
                        "element {x} is out of range or repeated"
                    )));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(MasterError::Partition(format!("element {x} is missing")));
        }
        blocks.sort_by_key(|b| b[0]);
        let p = Self { blocks, size };
        if !p.is_non_crossing() {
            return Err(MasterError::Partition("blocks cross".into()));
        }
        Ok(p)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
    pub fn is_non_crossing(&self) -> bool {
        let mut owner = vec![0usize; self.size];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                owner[x] = i;
            }
        }
        // Scanning left to right, a block may only be revisited after every
        // block opened since its last visit has closed.
        let mut last = vec![0usize; self.blocks.len()];
        for (i, b) in self.blocks.iter().enumerate() {
            last[i] = *b.last().unwrap();
        }
        let mut stack: Vec<usize> = Vec::new();
        for (x, &i) in owner.iter().enumerate() {
            if stack.last() == Some(&i) {
                // continuing the innermost open block
            } else if stack.contains(&i) {
                return false;
            } else {
                stack.push(i);
            }
            if last[i] == x {
                stack.pop();
            }
        }
        true
    }

    /// All non-crossing partitions of `{0, …, m-1}`, enumerated by choosing
    /// the block of the first element and recursing into the gaps.
    pub fn enumerate(m: usize) -> Vec<NCPartition> {
        fn rec(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
            if lo == hi {
                return vec![Vec::new()];
            }
            let rest = hi - lo - 1;
            let mut out = Vec::new();
            for sub in 0u64..(1u64 << rest) {
                let mut block = vec![lo];
                block.extend((0..rest).filter(|b| sub >> b & 1 == 1).map(|b| lo + 1 + b));
                let mut bounds: Vec<(usize, usize)> =
                    block.windows(2).map(|w| (w[0] + 1, w[1])).collect();
                bounds.push((*block.last().unwrap() + 1, hi));
                let mut partials = vec![vec![block]];
                for (a, b) in bounds {
                    let inner = rec(a, b);
                    partials = partials
                        .iter()
                        .flat_map(|p| {
                            inner.iter().map(move |q| {
                                let mut v = p.clone();
                                v.extend(q.iter().cloned());
                                v
                            })
                        })
                        .collect();
                }
                out.extend(partials);
            }
            out
        }
        rec(0, m)
            .into_iter()
            .map(|blocks| NCPartition::new(blocks, m).expect("enumeration yields NC partitions"))
            .collect()
    }
}

/// Values that can be summed and multiplied over partitions.
pub trait BlockSum: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
}

impl BlockSum for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// `Σ_π Π_{B ∈ π} weight(B)` over the non-crossing partitions `π` of the
/// positions `0..ids.len()` whose blocks have a single value of `ids`.
///
/// Sums over contiguous intervals are tabulated by increasing length: the
/// block of the first position of an interval splits it into shorter
/// intervals that are summed independently. Intervals of one length are
/// evaluated in parallel.
pub fn nc_block_sum<T, W>(ids: &[usize], weight: W) -> T
where
    T: BlockSum,
    W: Fn(&[usize]) -> T + Sync,
{
    let m = ids.len();
    // table[i][j - i] is the sum over positions i..j.
    let mut table: Vec<Vec<T>> = (0..=m).map(|i| vec![T::one(); m - i + 1]).collect();
    for len in 1..=m {
        let level: Vec<T> = (0..=m - len)
            .into_par_iter()
            .map(|i| interval(ids, i, i + len, &table, &weight))
            .collect();
        for (i, v) in level.into_iter().enumerate() {
            table[i][len] = v;
        }
    }
    table[0][m].clone()
}

fn interval<T, W>(ids: &[usize], lo: usize, hi: usize, table: &[Vec<T>], weight: &W) -> T
where
    T: BlockSum,
    W: Fn(&[usize]) -> T,
{
    let same: Vec<usize> = (lo + 1..hi).filter(|&p| ids[p] == ids[lo]).collect();
    let mut total = T::zero();
    let mut block = Vec::with_capacity(same.len() + 1);
    for sub in 0u64..(1u64 << same.len()) {
        block.clear();
        block.push(lo);
        block.extend(
            same.iter()
                .enumerate()
                .filter(|(b, _)| sub >> b & 1 == 1)
                .map(|(_, &p)| p),
        );
        let mut v = weight(&block);
        for w in block.windows(2) {
            v = v.mul(&table[w[0] + 1][w[1] - w[0] - 1]);
        }
        let last = *block.last().unwrap();
        v = v.mul(&table[last + 1][hi - last - 1]);
        total.add_assign(&v);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        let catalan = [1, 1, 2, 5, 14, 42, 132, 429];
        for (m, &c) in catalan.iter().enumerate() {
            assert_eq!(NCPartition::enumerate(m).len(), c, "m = {m}");
        }
    }

    #[test]
    fn crossing_detection() {
        assert!(NCPartition::new(vec![vec![0, 2], vec![1, 3]], 4).is_err());
        assert!(NCPartition::new(vec![vec![0, 3], vec![1, 2]], 4).is_ok());
        assert!(NCPartition::new(vec![vec![0, 2, 4], vec![1], vec![3]], 5).is_ok());
        assert!(NCPartition::new(vec![vec![0, 2], vec![1, 4], vec![3]], 5).is_err());
        assert!(NCPartition::new(vec![vec![0, 1]], 3).is_err());
    }

    #[test]
    fn block_sum_counts_partitions() {
        let ids = [0, 0, 0, 0, 0, 0];
        let n: f64 = nc_block_sum(&ids, |_| 1.0);
        assert_eq!(n, 132.0);
        // Letter-pure partitions of a b a b: the two a's and the two b's
        // cannot both be joined.
        let n: f64 = nc_block_sum(&[0, 1, 0, 1], |_| 1.0);
        assert_eq!(n, 3.0);
    }
}
