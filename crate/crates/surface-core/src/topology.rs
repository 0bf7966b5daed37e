//! Gluing relations, Euler characteristic, orientability and weights.

use loopspec::{GroupKind, GroupSpec};

use crate::dsu::{Dsu, ParityDsu};
use crate::pairing::Pairing;
use crate::SurfaceError;

/// Vertex-label relation imposed on the two edges `p → s(p)` and `q → s(q)`
/// of a matched point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Orientation-reversing gluing: `v_p = v_{s(q)}`, `v_{s(p)} = v_q`.
    I,
    /// Orientation-preserving gluing: `v_p = v_q`, `v_{s(p)} = v_{s(q)}`.
    II,
    /// Contraction of both edges: `v_p = v_{s(p)}`, `v_q = v_{s(q)}`.
    III,
    /// Same vertex labels as relation II, used by the symplectic group.
    IV,
}

impl Relation {
    /// Relations admissible for a group, relation I first.
    pub fn admissible(kind: GroupKind) -> &'static [Relation] {
        match kind {
            GroupKind::U => &[Relation::I],
            GroupKind::SO => &[Relation::I, Relation::II],
            GroupKind::SU => &[Relation::I, Relation::III],
            GroupKind::Sp => &[Relation::I, Relation::IV],
        }
    }

    fn creates_edge(self) -> bool {
        self != Relation::III
    }
}

/// One relation per matched point, in point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingChoice(pub Vec<Relation>);

impl GluingChoice {
    /// All points glued with relation I.
    pub fn all_type_one(k: usize) -> Self {
        Self(vec![Relation::I; k])
    }

    /// Checks every relation against the admissible set of `group`.
    pub fn validate(&self, group: &GroupSpec) -> Result<(), SurfaceError> {
        let allowed = Relation::admissible(group.kind());
        match self.0.iter().find(|r| !allowed.contains(r)) {
            Some(&relation) => Err(SurfaceError::InadmissibleRelation {
                relation,
                group: group.to_string(),
            }),
            None => Ok(()),
        }
    }
}

/// Topology of one connected component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub chi: i64,
    pub orientable: bool,
    /// Non-orientable genus `2 - χ`, zero for orientable components.
    pub mu: i64,
}

/// Topological summary of a glued complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceStats {
    /// Vertices on slot-bearing faces.
    pub v: usize,
    /// Edges, one per point glued with relation I, II or IV.
    pub e: usize,
    /// Faces, one per loop.
    pub f: usize,
    /// Sum of the component Euler characteristics. Equals `V - E + F` plus
    /// one for every face without slots, which is a sphere on its own.
    pub chi_total: i64,
    pub components: Vec<Component>,
    /// Number of points glued with relation I.
    pub alpha: usize,
    /// Number of contracted edges, two per relation III point.
    pub gamma: usize,
    /// `(-1)^{Σ μ}`.
    pub sign_sp: i8,
}

impl SurfaceStats {
    pub fn mu_total(&self) -> i64 {
        self.components.iter().map(|c| c.mu).sum()
    }

    pub fn is_orientable(&self) -> bool {
        self.components.iter().all(|c| c.orientable)
    }
}

/// Glues the slots of `pairing` according to `choice`.
///
/// # Panics
/// If `choice` does not have one relation per point or `n_loops` differs
/// from the number of faces of the pairing.
pub fn glue(pairing: &Pairing, choice: &GluingChoice, n_loops: usize) -> SurfaceStats {
    assert_eq!(
        choice.0.len(),
        pairing.n_points(),
        "one relation per point is required"
    );
    assert_eq!(n_loops, pairing.n_faces(), "face count mismatch");
    let size = pairing.size();
    let mut verts = Dsu::new(size);
    let mut faces = ParityDsu::new(n_loops);
    let mut e = 0;
    let mut alpha = 0;
    let mut gamma = 0;
    let mut face_edges = vec![0usize; n_loops];

    for (&(p, q), &rel) in pairing.point_slots().iter().zip(&choice.0) {
        let (sp, sq) = (pairing.succ(p), pairing.succ(q));
        match rel {
            Relation::I => {
                verts.union(p, sq);
                verts.union(sp, q);
                alpha += 1;
            }
            Relation::II | Relation::IV => {
                verts.union(p, q);
                verts.union(sp, sq);
            }
            Relation::III => {
                verts.union(p, sp);
                verts.union(q, sq);
                gamma += 2;
            }
        }
        if rel.creates_edge() {
            e += 1;
            let (fp, fq) = (pairing.face_of(p), pairing.face_of(q));
            let parity = if rel == Relation::I { 0 } else { 1 };
            faces.relate(fp, fq, parity);
            face_edges[fp] += 1;
        }
    }

    // Aggregate per component (indexed by the face-DSU root).
    let mut comp_v = vec![0i64; n_loops];
    let mut comp_e = vec![0i64; n_loops];
    let mut comp_f = vec![0i64; n_loops];
    let mut v = 0usize;
    for p in 0..size {
        if verts.find(p) == p {
            v += 1;
            let (root, _) = faces.find(pairing.face_of(p));
            comp_v[root] += 1;
        }
    }
    for face in 0..n_loops {
        let (root, _) = faces.find(face);
        comp_f[root] += 1;
        comp_e[root] += face_edges[face] as i64;
        if pairing.face_size(face) == 0 {
            // A boundary without slots bounds a disc capped into a sphere.
            comp_v[root] += 1;
        }
    }
    let mut components = Vec::new();
    for root in 0..n_loops {
        if faces.find(root).0 != root {
            continue;
        }
        let chi = comp_v[root] - comp_e[root] + comp_f[root];
        let orientable = !faces.has_conflict(root);
        let mu = if orientable { 0 } else { 2 - chi };
        components.push(Component {
            chi,
            orientable,
            mu,
        });
    }
    let chi_total = components.iter().map(|c| c.chi).sum();
    let mu_total: i64 = components.iter().map(|c| c.mu).sum();
    SurfaceStats {
        v,
        e,
        f: n_loops,
        chi_total,
        components,
        alpha,
        gamma,
        sign_sp: if mu_total % 2 == 0 { 1 } else { -1 },
    }
}

/// Vertex count of the all-relation-I gluing, computed as the number of
/// cycles of `p ↦ s(partner(p))`.
pub fn chi_crosscheck_orientable(pairing: &Pairing) -> usize {
    let size = pairing.size();
    let mut seen = vec![false; size];
    let mut cycles = 0;
    for start in 0..size {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            p = pairing.succ(pairing.partner(p));
        }
    }
    cycles
}

/// A weight `sign · N^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightTerm {
    pub sign: i8,
    pub power: i64,
}

/// Sign and power of `N` of the unnormalised weight of a glued surface:
/// `U: (-1)^E N^{χ-n}`, `SO: (-1)^α N^{χ-n}`, `SU: (-1)^α N^{χ-n-γ}`,
/// `Sp: (-1)^{α+Σμ} N^{χ-n}`.
pub fn weight_term(stats: &SurfaceStats, kind: GroupKind, n_loops: usize) -> WeightTerm {
    let base = stats.chi_total - n_loops as i64;
    let parity = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
    match kind {
        GroupKind::U => WeightTerm {
            sign: parity(stats.e),
            power: base,
        },
        GroupKind::SO => WeightTerm {
            sign: parity(stats.alpha),
            power: base,
        },
        GroupKind::SU => WeightTerm {
            sign: parity(stats.alpha),
            power: base - stats.gamma as i64,
        },
        GroupKind::Sp => WeightTerm {
            sign: parity(stats.alpha) * stats.sign_sp,
            power: base,
        },
    }
}

/// Unnormalised weight of a glued surface for `group` and `n_loops` loops.
pub fn weight(stats: &SurfaceStats, group: &GroupSpec, n_loops: usize) -> f64 {
    let t = weight_term(stats, group.kind(), n_loops);
    t.sign as f64 * group.n_f64().powi(t.power as i32)
}
