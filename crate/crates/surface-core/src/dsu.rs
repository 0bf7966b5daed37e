//! Disjoint sets with an optional parity label relative to the root.

#[derive(Clone, Debug, Default)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Union-find where each element carries a parity relative to its root.
/// Joining with a parity that contradicts the existing one marks the class.
#[derive(Clone, Debug)]
pub(crate) struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<u8>,
    conflict: Vec<bool>,
}

impl ParityDsu {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            parity: vec![0; n],
            conflict: vec![false; n],
        }
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub(crate) fn find(&mut self, x: usize) -> (usize, u8) {
        let mut root = x;
        let mut acc = 0u8;
        while self.parent[root] != root {
            acc ^= self.parity[root];
            root = self.parent[root];
        }
        // Path compression with parity bookkeeping.
        let mut cur = x;
        let mut cur_par = acc;
        while self.parent[cur] != cur {
            let next = self.parent[cur];
            let next_par = cur_par ^ self.parity[cur];
            self.parent[cur] = root;
            self.parity[cur] = cur_par;
            cur = next;
            cur_par = next_par;
        }
        (root, acc)
    }

    /// Requires `parity(a) xor parity(b) == rel`.
    pub(crate) fn relate(&mut self, a: usize, b: usize, rel: u8) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != rel {
                self.conflict[ra] = true;
            }
            return;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ rel;
        self.conflict[ra] = self.conflict[ra] || self.conflict[rb];
    }

    pub(crate) fn has_conflict(&mut self, x: usize) -> bool {
        let (r, _) = self.find(x);
        self.conflict[r]
    }
}
