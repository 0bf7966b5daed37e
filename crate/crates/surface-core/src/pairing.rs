//! Edge-slot pairings induced by point configurations.

use loopspec::{LassoWord, MatchPairSet};

use crate::SurfaceError;

/// Points of the Poisson process: `(pair index, t)` sorted by `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig {
    points: Vec<(usize, f64)>,
}

impl PointConfig {
    /// Sorts the points by `t`. Equal `t` values are rejected.
    pub fn new(mut points: Vec<(usize, f64)>) -> Result<Self, SurfaceError> {
        for &(_, t) in &points {
            if !(0.0..=1.0).contains(&t) {
                return Err(SurfaceError::InvalidConfig(format!(
                    "t = {t} outside [0, 1]"
                )));
            }
        }
        points.sort_by(|a, b| a.1.total_cmp(&b.1));
        for w in points.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(SurfaceError::DuplicateT(w[0].1));
            }
        }
        Ok(Self { points })
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    pub fn points(&self) -> &[(usize, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points on each of `n_pairs` pairs.
    pub fn counts(&self, n_pairs: usize) -> Vec<usize> {
        let mut c = vec![0; n_pairs];
        for &(p, _) in &self.points {
            c[p] += 1;
        }
        c
    }

    /// Pair indices in increasing `t`.
    pub fn sequence(&self) -> Vec<usize> {
        self.points.iter().map(|&(p, _)| p).collect()
    }
}

/// A fixed-point-free involution on `2K` edge slots spread over `n` faces.
///
/// Slots of face `i` are the contiguous range `face_start[i]..face_start[i+1]`
/// and the successor map `s` cycles through each range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    partner: Vec<usize>,
    /// Word position of each slot; empty when built from raw parts.
    slot_pos: Vec<usize>,
    face_of: Vec<usize>,
    face_start: Vec<usize>,
    /// The two slots created by each point, in point order.
    point_slots: Vec<(usize, usize)>,
}

impl Pairing {
    /// Builds a pairing from an explicit involution and face sizes.
    /// Points are numbered by their smaller slot.
    pub fn from_parts(partner: Vec<usize>, face_sizes: &[usize]) -> Result<Self, SurfaceError> {
        let total: usize = face_sizes.iter().sum();
        if total != partner.len() {
            return Err(SurfaceError::InvalidPairing(format!(
                "face sizes sum to {total} but there are {} slots",
                partner.len()
            )));
        }
        if face_sizes.is_empty() {
            return Err(SurfaceError::InvalidPairing(
                "at least one face required".into(),
            ));
        }
        let mut point_slots = Vec::new();
        for (p, &q) in partner.iter().enumerate() {
            if q >= partner.len() || q == p || partner[q] != p {
                return Err(SurfaceError::InvalidPairing(format!(
                    "slot {p} is not part of a proper involution"
                )));
            }
            if p < q {
                point_slots.push((p, q));
            }
        }
        let mut face_start = vec![0];
        let mut face_of = Vec::with_capacity(total);
        for (i, &s) in face_sizes.iter().enumerate() {
            face_start.push(face_start[i] + s);
            face_of.extend(std::iter::repeat_n(i, s));
        }
        Ok(Self {
            partner,
            slot_pos: Vec::new(),
            face_of,
            face_start,
            point_slots,
        })
    }

    /// Builds the pairing for points given as a sequence of pair indices in
    /// increasing `t`. Occurrences at a position are ordered by increasing
    /// `t` for a lasso and by decreasing `t` for an inverse lasso, so that
    /// the `j`-th piece of `λ` faces the `j`-th piece of `λ⁻¹` in reverse.
    pub fn from_sequence(seq: &[usize], pairs: &MatchPairSet, w: &LassoWord) -> Self {
        let m_len = w.len();
        let mut count = vec![0usize; m_len];
        for &p in seq {
            let pr = &pairs.pairs[p];
            count[pr.m] += 1;
            count[pr.m_star] += 1;
        }
        let mut offset = vec![0usize; m_len + 1];
        for pos in 0..m_len {
            offset[pos + 1] = offset[pos] + count[pos];
        }
        let total = offset[m_len];
        let mut fill = vec![0usize; m_len];
        let mut partner = vec![0usize; total];
        let mut slot_pos = vec![0usize; total];
        let mut point_slots = Vec::with_capacity(seq.len());
        let place = |pos: usize, fill: &mut [usize]| -> usize {
            let k = fill[pos];
            fill[pos] += 1;
            if w.letter(pos).sign > 0 {
                offset[pos] + k
            } else {
                offset[pos] + count[pos] - 1 - k
            }
        };
        for &p in seq {
            let pr = &pairs.pairs[p];
            let a = place(pr.m, &mut fill);
            let b = place(pr.m_star, &mut fill);
            partner[a] = b;
            partner[b] = a;
            slot_pos[a] = pr.m;
            slot_pos[b] = pr.m_star;
            point_slots.push((a, b));
        }
        let n = w.n_loops();
        let mut face_start = Vec::with_capacity(n + 1);
        let mut face_of = vec![0usize; total];
        for (i, r) in w.loop_blocks().into_iter().enumerate() {
            face_start.push(offset[r.start]);
            for f in &mut face_of[offset[r.start]..offset[r.end]] {
                *f = i;
            }
        }
        face_start.push(total);
        Self {
            partner,
            slot_pos,
            face_of,
            face_start,
            point_slots,
        }
    }

    /// Number of slots `2K`.
    pub fn size(&self) -> usize {
        self.partner.len()
    }

    /// Number of points `K`.
    pub fn n_points(&self) -> usize {
        self.point_slots.len()
    }

    pub fn n_faces(&self) -> usize {
        self.face_start.len() - 1
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Word position carried by slot `p`, when known.
    pub fn slot_position(&self, p: usize) -> Option<usize> {
        self.slot_pos.get(p).copied()
    }

    pub fn face_of(&self, p: usize) -> usize {
        self.face_of[p]
    }

    pub fn face_size(&self, i: usize) -> usize {
        self.face_start[i + 1] - self.face_start[i]
    }

    /// Block-cyclic successor `s(p)`.
    #[inline]
    pub fn succ(&self, p: usize) -> usize {
        let f = self.face_of[p];
        if p + 1 == self.face_start[f + 1] {
            self.face_start[f]
        } else {
            p + 1
        }
    }

    /// The successor permutation as a vector.
    pub fn s_perm(&self) -> Vec<usize> {
        (0..self.size()).map(|p| self.succ(p)).collect()
    }

    /// Slots created by each point.
    pub fn point_slots(&self) -> &[(usize, usize)] {
        &self.point_slots
    }
}

/// Builds the pairing of a configuration: every point contributes
/// occurrences at `m` and `m*`, occurrences are sorted by word position and
/// then by `t` (decreasing at inverse positions), and ranks become slots.
pub fn pairing_from_config(
    cfg: &PointConfig,
    pairs: &MatchPairSet,
    w: &LassoWord,
) -> Result<Pairing, SurfaceError> {
    for &(p, _) in cfg.points() {
        if p >= pairs.len() {
            return Err(SurfaceError::InvalidConfig(format!(
                "pair index {p} out of range ({} pairs)",
                pairs.len()
            )));
        }
    }
    Ok(Pairing::from_sequence(&cfg.sequence(), pairs, w))
}
