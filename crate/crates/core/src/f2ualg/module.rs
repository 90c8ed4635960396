use std::fmt;

use serde::{Deserialize, Serialize};

/// A cyclic summand `F[U]/U^order` whose top element sits in `grading`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct TorsionSummand {
    pub grading: i64,
    pub order: u32,
}

/// Finitely generated graded F2[U]-module, kept in sorted canonical form so
/// that structural equality is module isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct GradedModule {
    free: Vec<i64>,
    torsion: Vec<TorsionSummand>,
}

impl GradedModule {
    pub fn new(mut free: Vec<i64>, mut torsion: Vec<TorsionSummand>) -> Self {
        assert!(torsion.iter().all(|t| t.order > 0), "torsion orders must be positive");
        free.sort_unstable();
        torsion.sort_unstable();
        Self { free, torsion }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion(&self) -> &[TorsionSummand] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn is_zero(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }

    /// Top grading of a free summand.
    pub fn top_free_grading(&self) -> Option<i64> {
        self.free.last().copied()
    }

    /// Dimension over F2 of the part in grading `g`.
    pub fn dim_in_degree(&self, g: i64) -> usize {
        let free = self.free.iter().filter(|&&f| f >= g && (f - g) % 2 == 0).count();
        let tors = self
            .torsion
            .iter()
            .filter(|t| t.grading >= g && (t.grading - g) % 2 == 0 && (t.grading - g) / 2 < i64::from(t.order))
            .count();
        free + tors
    }

    pub fn shifted(&self, by: i64) -> Self {
        Self::new(
            self.free.iter().map(|g| g + by).collect(),
            self.torsion.iter().map(|t| TorsionSummand { grading: t.grading + by, order: t.order }).collect(),
        )
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut free = self.free.clone();
        free.extend_from_slice(&other.free);
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        Self::new(free, torsion)
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for g in &self.free {
            parts.push(format!("F[U]_({g})"));
        }
        for t in &self.torsion {
            parts.push(format!("F[U]/U^{}_({})", t.order, t.grading));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_gives_structural_equality() {
        let a = GradedModule::new(vec![0, -2], vec![TorsionSummand { grading: 1, order: 2 }, TorsionSummand { grading: 0, order: 1 }]);
        let b = GradedModule::new(vec![-2, 0], vec![TorsionSummand { grading: 0, order: 1 }, TorsionSummand { grading: 1, order: 2 }]);
        assert_eq!(a, b);
    }

    #[test]
    fn dimensions() {
        let m = GradedModule::new(vec![0], vec![TorsionSummand { grading: 0, order: 2 }]);
        assert_eq!(m.dim_in_degree(0), 2);
        assert_eq!(m.dim_in_degree(-2), 2);
        assert_eq!(m.dim_in_degree(-4), 1);
        assert_eq!(m.dim_in_degree(-1), 0);
        assert_eq!(m.dim_in_degree(2), 0);
        assert_eq!(m.to_string(), "F[U]_(0) ⊕ F[U]/U^2_(0)");
    }
}
