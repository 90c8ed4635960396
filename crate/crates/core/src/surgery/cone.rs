use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{Model, SurgeryError};
use crate::cfk::KnotComplex;
use crate::f2ualg::{homology, ChainComplex, GradedModule};

/// Absolute grading shift of the column `B_t` in `n`-surgery.
pub fn shift_b(n: i64, t: i64) -> Ratio<i64> {
    let c = 2 * t - n;
    Ratio::new(c * c - 5 * n, 4 * n)
}

/// Absolute grading shift of the column `A_s`; one more than `B_s` so that
/// `v_s` lowers the cone grading by one.
pub fn shift_a(n: i64, s: i64) -> Ratio<i64> {
    shift_b(n, s) + 1
}

/// Half-width `N` of the truncation: `A_s` for `|s| ≤ N`, `B_t` for
/// `n − N ≤ t ≤ N`. Needs `N ≥ max(g, 1) − 1` so that the dropped `v_s`,
/// `h_s` are isomorphisms, and `2N + 1 ≥ n` so that every label keeps an
/// `A` column.
pub fn truncation_half_width(genus: u32, n: i64) -> i64 {
    let b = i64::from(genus.max(1));
    (b - 1).max(n / 2)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum PieceKind {
    A,
    B,
}

/// A column of the cone: basis indices `start..start + len`, with integer
/// grading shift `shift` applied to the subcomplex gradings.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Piece {
    pub kind: PieceKind,
    pub s: i64,
    pub start: usize,
    pub len: usize,
    pub shift: i64,
}

/// The truncated cone restricted to one Spin^c label `s mod n`. Integer
/// gradings plus `offset` give absolute rational gradings.
#[derive(Clone, Debug)]
pub struct LabelComplex {
    pub label: i64,
    pub offset: Ratio<i64>,
    pub pieces: Vec<Piece>,
    pub complex: ChainComplex,
}

impl LabelComplex {
    pub fn piece(&self, kind: PieceKind, s: i64) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.kind == kind && p.s == s)
    }
}

#[derive(Clone, Debug)]
pub struct ConeComplex {
    pub n: i64,
    pub half_width: i64,
    pub labels: Vec<LabelComplex>,
}

impl ConeComplex {
    pub fn label(&self, s: i64) -> &LabelComplex {
        &self.labels[s.rem_euclid(self.n) as usize]
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LabelHomology {
    pub label: i64,
    pub offset: Ratio<i64>,
    pub module: GradedModule,
    /// Top grading of the free part, absolute.
    pub d: Option<Ratio<i64>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SurgeryHomology {
    pub knot: String,
    pub n: i64,
    pub half_width: i64,
    pub labels: Vec<LabelHomology>,
}

impl SurgeryHomology {
    pub fn total_free_rank(&self) -> usize {
        self.labels.iter().map(|l| l.module.free_rank()).sum()
    }

    /// The per-label data, which must not depend on the window.
    pub fn canonical(&self) -> Vec<(i64, Ratio<i64>, GradedModule)> {
        self.labels.iter().map(|l| (l.label, l.offset, l.module.clone())).collect()
    }
}

fn integer_part(x: Ratio<i64>) -> i64 {
    assert!(x.is_integer(), "grading shift {x} is not integral");
    x.to_integer()
}

pub(crate) fn cone_from_model(m: &Model<'_>, n: i64, extra: i64) -> Result<ConeComplex, SurgeryError> {
    if n < 1 {
        return Err(SurgeryError::BadCoefficient(n));
    }
    m.flip()?;
    let half = truncation_half_width(m.genus, n) + extra.max(0);
    let labels = (0..n).map(|r| label_complex(m, n, half, r)).collect::<Result<Vec<_>, _>>()?;
    Ok(ConeComplex { n, half_width: half, labels })
}

fn label_complex(m: &Model<'_>, n: i64, half: i64, r: i64) -> Result<LabelComplex, SurgeryError> {
    let sha = shift_a(n, r);
    let offset = sha - sha.floor();
    let mut pieces = Vec::new();
    let mut grades = Vec::new();
    let mut terms: Vec<(usize, usize, i64)> = Vec::new();
    let mut push_piece = |kind: PieceKind, s: i64, grades: &mut Vec<i64>, terms: &mut Vec<(usize, usize, i64)>| {
        let sub = m.sub(if kind == PieceKind::A { Some(s) } else { None })?;
        let sh = match kind {
            PieceKind::A => shift_a(n, s),
            PieceKind::B => shift_b(n, s),
        };
        let piece = Piece { kind, s, start: grades.len(), len: sub.basis.len(), shift: integer_part(sh - offset) };
        grades.extend(sub.grades().iter().map(|g| g + piece.shift));
        terms.extend(sub.complex.differential().entries().map(|(r, c, k)| (piece.start + r, piece.start + c, i64::from(k))));
        pieces.push(piece);
        Ok::<_, SurgeryError>(())
    };
    for s in (-half..=half).filter(|s| s.rem_euclid(n) == r) {
        push_piece(PieceKind::A, s, &mut grades, &mut terms)?;
    }
    for t in (n - half..=half).filter(|t| t.rem_euclid(n) == r) {
        push_piece(PieceKind::B, t, &mut grades, &mut terms)?;
    }
    let find = |kind: PieceKind, s: i64| pieces.iter().find(|p| p.kind == kind && p.s == s).copied();
    for a in pieces.iter().filter(|p| p.kind == PieceKind::A) {
        if let Some(b) = find(PieceKind::B, a.s) {
            terms.extend(m.v(a.s)?.entries().map(|(r, c, k)| (b.start + r, a.start + c, i64::from(k))));
        }
        if let Some(b) = find(PieceKind::B, a.s + n) {
            terms.extend(m.h(a.s)?.entries().map(|(r, c, k)| (b.start + r, a.start + c, i64::from(k))));
        }
    }
    let complex = ChainComplex::new(grades, terms)?;
    if !complex.squares_to_zero() {
        return Err(SurgeryError::Inconsistent(format!("cone differential for label {r} does not square to zero")));
    }
    Ok(LabelComplex { label: r, offset, pieces, complex })
}

pub(crate) fn homology_from_cone(m: &Model<'_>, cone: &ConeComplex) -> Result<SurgeryHomology, SurgeryError> {
    let labels = cone
        .labels
        .iter()
        .map(|l| {
            let module = homology(&l.complex)?.module;
            let d = module.top_free_grading().map(|g| Ratio::from_integer(g) + l.offset);
            Ok(LabelHomology { label: l.label, offset: l.offset, module, d })
        })
        .collect::<Result<Vec<_>, SurgeryError>>()?;
    let h = SurgeryHomology { knot: m.name().to_string(), n: cone.n, half_width: cone.half_width, labels };
    if h.total_free_rank() != cone.n as usize {
        return Err(SurgeryError::Inconsistent(format!(
            "cone homology has free rank {}, expected {}",
            h.total_free_rank(),
            cone.n
        )));
    }
    Ok(h)
}

/// Truncated mapping cone of `D_n` with the default window.
pub fn build_cone(c: &KnotComplex, n: i64) -> Result<ConeComplex, SurgeryError> {
    build_cone_with(c, n, 0)
}

/// Truncated cone with the window widened by `extra` columns on each side.
pub fn build_cone_with(c: &KnotComplex, n: i64, extra: i64) -> Result<ConeComplex, SurgeryError> {
    cone_from_model(&Model::new(c)?, n, extra)
}

pub fn cone_homology(c: &KnotComplex, n: i64) -> Result<SurgeryHomology, SurgeryError> {
    cone_homology_with(c, n, 0)
}

pub fn cone_homology_with(c: &KnotComplex, n: i64, extra: i64) -> Result<SurgeryHomology, SurgeryError> {
    let m = Model::new(c)?;
    homology_from_cone(&m, &cone_from_model(&m, n, extra)?)
}

/// Whether widening the window by `extra` leaves every label's homology
/// unchanged.
pub fn truncation_stability(c: &KnotComplex, n: i64, extra: i64) -> Result<bool, SurgeryError> {
    let m = Model::new(c)?;
    let base = homology_from_cone(&m, &cone_from_model(&m, n, 0)?)?;
    let wide = homology_from_cone(&m, &cone_from_model(&m, n, extra)?)?;
    Ok(base.canonical() == wide.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::{builtin, BUILTIN_NAMES};
    use crate::f2ualg::{truncated, TorsionSummand};

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn shifts_make_h_homogeneous() {
        for n in 1..6 {
            for s in -6..6 {
                assert_eq!(shift_b(n, s + n), shift_b(n, s) + 2 * s);
            }
        }
    }

    #[test]
    fn unknot_lens_space_d_invariants() {
        let u = builtin("unknot").unwrap();
        for n in [1, 2, 3, 5] {
            let h = cone_homology(&u, n).unwrap();
            assert_eq!(h.labels.len(), n as usize);
            for l in &h.labels {
                assert_eq!(l.module.free_rank(), 1);
                assert!(l.module.torsion().is_empty());
                let c = 2 * l.label - n;
                assert_eq!(l.d, Some(r(c * c - n, 4 * n)), "n={n} label={}", l.label);
            }
        }
    }

    #[test]
    fn trefoil_plus_one() {
        let h = cone_homology(&builtin("rh_trefoil").unwrap(), 1).unwrap();
        assert_eq!(h.labels[0].module, GradedModule::new(vec![-2], vec![]));
        assert_eq!(h.labels[0].d, Some(r(-2, 1)));
    }

    #[test]
    fn trefoil_window_is_a0() {
        let cone = build_cone(&builtin("rh_trefoil").unwrap(), 1).unwrap();
        let kinds: Vec<_> = cone.labels[0].pieces.iter().map(|p| (p.kind, p.s)).collect();
        assert_eq!(kinds, vec![(PieceKind::A, 0)]);
    }

    #[test]
    fn figure_eight_plus_one_has_torsion() {
        let h = cone_homology(&builtin("figure_eight").unwrap(), 1).unwrap();
        let m = &h.labels[0].module;
        assert_eq!(m.free(), &[0]);
        assert_eq!(m.torsion(), &[TorsionSummand { grading: 0, order: 1 }]);
    }

    #[test]
    fn free_rank_is_n() {
        for name in BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            for n in 1..=5 {
                assert_eq!(cone_homology(&c, n).unwrap().total_free_rank(), n as usize, "{name} n={n}");
            }
        }
    }

    #[test]
    fn stable_under_window_growth() {
        for name in BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            for n in 1..=3 {
                for extra in 1..=3 {
                    assert!(truncation_stability(&c, n, extra).unwrap(), "{name} n={n} extra={extra}");
                }
            }
        }
    }

    #[test]
    fn truncated_dimensions_agree() {
        for name in BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            for n in 1..=2 {
                let cone = build_cone(&c, n).unwrap();
                for l in &cone.labels {
                    let module = homology(&l.complex).unwrap().module;
                    let d = l.complex.differential();
                    let bound = truncated::default_bound(d.max_power(), c.genus(), n);
                    let top = l.complex.grades().iter().max().copied().unwrap_or(0);
                    for g in (top - 2 * bound as i64 + 1..=top).rev().take(8) {
                        assert_eq!(truncated::homology_dim(d, g, bound), module.dim_in_degree(g), "{name} n={n} g={g}");
                    }
                }
            }
        }
    }

    #[test]
    fn missing_flip_or_bad_n() {
        let mut t = builtin("rh_trefoil").unwrap();
        assert!(matches!(build_cone(&t, 0), Err(SurgeryError::BadCoefficient(0))));
        t.flip = None;
        assert!(matches!(build_cone(&t, 1), Err(SurgeryError::MissingFlip(_))));
    }
}
