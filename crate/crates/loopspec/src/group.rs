//! Classical compact gauge groups and their Casimir drift constants.

use std::fmt;
use std::str::FromStr;

use crate::LoopspecError;

/// Family of the gauge group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    U,
    SO,
    SU,
    Sp,
}

impl GroupKind {
    pub const ALL: [GroupKind; 4] = [GroupKind::U, GroupKind::SO, GroupKind::SU, GroupKind::Sp];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::U => "U",
            GroupKind::SO => "SO",
            GroupKind::SU => "SU",
            GroupKind::Sp => "Sp",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupKind {
    type Err = LoopspecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "u" => Ok(GroupKind::U),
            "so" => Ok(GroupKind::SO),
            "su" => Ok(GroupKind::SU),
            "sp" => Ok(GroupKind::Sp),
            other => Err(LoopspecError::Group(format!(
                "unknown group kind `{other}`"
            ))),
        }
    }
}

/// A gauge group of matrix size `n`. For `Sp`, `n` is the size of the
/// complex matrices, so `Sp(n/2)` is meant and `n` must be even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kind: GroupKind,
    n: u32,
}

impl GroupSpec {
    pub fn new(kind: GroupKind, n: u32) -> Result<Self, LoopspecError> {
        if n == 0 {
            return Err(LoopspecError::Group("N must be at least 1".into()));
        }
        if kind == GroupKind::Sp && !n.is_multiple_of(2) {
            return Err(LoopspecError::Group(format!(
                "Sp needs an even matrix size N, got {n}"
            )));
        }
        Ok(Self { kind, n })
    }

    /// Shorthand for `U(n)`.
    pub fn unitary(n: u32) -> Self {
        Self::new(GroupKind::U, n).expect("U(N) is valid for N >= 1")
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    /// The constant `c` with `Σ_j X_j² = c·I` over an orthonormal basis of the
    /// Lie algebra, for the inner product `N·Tr(X*Y)`.
    pub fn casimir(&self) -> f64 {
        let n = self.n_f64();
        match self.kind {
            GroupKind::U => -1.0,
            GroupKind::SO => -1.0 + 1.0 / n,
            GroupKind::SU => -1.0 + 1.0 / (n * n),
            GroupKind::Sp => -1.0 - 1.0 / n,
        }
    }

    /// Number of admissible gluing relations per matched point.
    pub fn relation_count(&self) -> usize {
        match self.kind {
            GroupKind::U => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Sp => write!(f, "Sp({})", self.n / 2),
            k => write!(f, "{}({})", k, self.n),
        }
    }
}
