//! The subcomplexes `A_s = C{i ≤ 0, j ≤ s}` and `B = C{i ≤ 0}`, the maps
//! `v_s` and `h_s` between them, the integers `V_s`, `H_s`, and the truncated
//! mapping cone computing the Floer homology of `n`-surgery.

mod cone;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cfk::{validate, CfkError, Indexed, KnotComplex};
use crate::f2ualg::{
    homology, induced_map, truncated, AlgebraError, Chain, ChainComplex, GeneratorKind, HomologyPresentation,
    MonomialMatrix,
};

pub use cone::{
    build_cone, build_cone_with, cone_homology, cone_homology_with, shift_a, shift_b, truncation_half_width,
    truncation_stability, ConeComplex, LabelComplex, LabelHomology, Piece, PieceKind, SurgeryHomology,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error(transparent)]
    Cfk(#[from] CfkError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("complex '{0}' has no flip map; only theorem mode is available")]
    MissingFlip(String),
    #[error("surgery coefficient must be positive, got {0}")]
    BadCoefficient(i64),
    #[error("{0}")]
    Inconsistent(String),
}

/// Basis element `U^upower · x_generator` of a subcomplex.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BasisElement {
    pub generator: usize,
    pub upower: u32,
}

/// `A_s` for `s = Some(s)`, `B` for `s = None`.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    pub s: Option<i64>,
    pub basis: Vec<BasisElement>,
    pub complex: ChainComplex,
}

impl Subcomplex {
    pub fn grades(&self) -> &[i64] {
        self.complex.grades()
    }
}

/// A validated complex in index form.
pub(crate) struct Model<'a> {
    pub c: &'a KnotComplex,
    pub ix: Indexed,
    pub genus: u32,
}

impl<'a> Model<'a> {
    pub fn new(c: &'a KnotComplex) -> Result<Self, SurgeryError> {
        validate(c)?;
        Ok(Self { c, ix: c.indexed()?, genus: c.genus() })
    }

    fn name(&self) -> &str {
        &self.c.name
    }

    fn flip(&self) -> Result<&[crate::cfk::IndexedTerm], SurgeryError> {
        self.ix.flip.as_deref().ok_or_else(|| SurgeryError::MissingFlip(self.name().to_string()))
    }

    fn upower(&self, x: usize, s: Option<i64>) -> u32 {
        match s {
            Some(s) => (self.ix.alexander[x] - s).max(0) as u32,
            None => 0,
        }
    }

    pub fn sub(&self, s: Option<i64>) -> Result<Subcomplex, SurgeryError> {
        let n = self.ix.len();
        let basis: Vec<BasisElement> = (0..n).map(|x| BasisElement { generator: x, upower: self.upower(x, s) }).collect();
        let grades = basis.iter().map(|b| self.ix.maslov[b.generator] - 2 * i64::from(b.upower)).collect();
        let terms = self
            .ix
            .differential
            .iter()
            .map(|t| (t.to, t.from, i64::from(basis[t.from].upower) + t.upower - i64::from(basis[t.to].upower)));
        let complex = ChainComplex::new(grades, terms)?;
        Ok(Subcomplex { s, basis, complex })
    }

    pub fn v(&self, s: i64) -> Result<MonomialMatrix, SurgeryError> {
        let src = self.sub(Some(s))?;
        let dst = self.sub(None)?;
        let terms = src.basis.iter().enumerate().map(|(i, b)| (i, i, i64::from(b.upower)));
        Ok(MonomialMatrix::from_terms(dst.grades().to_vec(), src.grades().to_vec(), 0, terms)?)
    }

    pub fn h(&self, s: i64) -> Result<MonomialMatrix, SurgeryError> {
        let flip = self.flip()?;
        let src = self.sub(Some(s))?;
        let dst = self.sub(None)?;
        let terms = flip.iter().map(|t| (t.to, t.from, i64::from(src.basis[t.from].upower) + s + t.upower));
        Ok(MonomialMatrix::from_terms(dst.grades().to_vec(), src.grades().to_vec(), -2 * s, terms)?)
    }

    /// Exponent of the induced map `H_*(A_s) → H_*(B)` on free parts.
    fn free_exponent(&self, s: i64, f: &MonomialMatrix) -> Result<u32, SurgeryError> {
        let src = homology(&self.sub(Some(s))?.complex)?;
        let dst = homology(&self.sub(None)?.complex)?;
        let map = induced_map(f, &src, &dst)?;
        let free = map.free_part();
        match free.as_slice() {
            [row] if row.len() == 1 => row[0].ok_or_else(|| {
                SurgeryError::Inconsistent(format!("map from A_{s} vanishes on the free part"))
            }),
            _ => Err(SurgeryError::Inconsistent(format!(
                "expected rank-one free homology for A_{s} and B, found {} and {}",
                src.module.free_rank(),
                dst.module.free_rank()
            ))),
        }
    }

    pub fn v_value(&self, s: i64) -> Result<u32, SurgeryError> {
        self.free_exponent(s, &self.v(s)?)
    }

    pub fn h_direct(&self, s: i64) -> Result<u32, SurgeryError> {
        self.free_exponent(s, &self.h(s)?)
    }

    pub fn h_value(&self, s: i64) -> Result<HValue, SurgeryError> {
        if self.ix.flip.is_some() {
            Ok(HValue { value: self.h_direct(s)?, provenance: Provenance::Direct })
        } else {
            Ok(HValue { value: self.v_value(-s)?, provenance: Provenance::Theorem })
        }
    }

    pub fn bound(&self, n: i64) -> u32 {
        truncated::default_bound(self.c.max_upower(), self.genus, n)
    }

    /// `V_s` or `H_s` by truncated F2 linear algebra, independent of the
    /// graded reductions; `T` and `2T` must agree.
    pub fn exponent_truncated(&self, s: i64, f: &MonomialMatrix) -> Result<Option<u32>, SurgeryError> {
        let src = self.sub(Some(s))?;
        let b = self.sub(None)?;
        let bh = homology(&b.complex)?;
        let target = free_representative(&bh)?;
        let bound = self.bound(0) + s.unsigned_abs() as u32;
        Ok(truncated::guarded(bound, |t| {
            truncated::cokernel_exponent(src.complex.differential(), f, b.complex.differential(), &target, t)
        })?)
    }
}

fn free_representative(p: &HomologyPresentation) -> Result<Chain, SurgeryError> {
    let g = p
        .generators
        .iter()
        .find(|g| g.kind == GeneratorKind::Free)
        .ok_or_else(|| SurgeryError::Inconsistent("no free homology generator".into()))?;
    Ok(p.representative(g))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Computed from the flip map.
    Direct,
    /// Filled in as `V_{-s}`.
    Theorem,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HValue {
    pub value: u32,
    pub provenance: Provenance,
}

pub fn build_as(c: &KnotComplex, s: i64) -> Result<Subcomplex, SurgeryError> {
    Model::new(c)?.sub(Some(s))
}

pub fn build_b(c: &KnotComplex) -> Result<Subcomplex, SurgeryError> {
    Model::new(c)?.sub(None)
}

/// `v_s : A_s → B`, the inclusion.
pub fn map_v(c: &KnotComplex, s: i64) -> Result<MonomialMatrix, SurgeryError> {
    Model::new(c)?.v(s)
}

/// `h_s : A_s → B`: include into `C{j ≤ s}`, multiply by `U^s`, apply the
/// flip. Has degree `−2s`. In the cone its target is the column `s + n`.
pub fn map_h(c: &KnotComplex, s: i64) -> Result<MonomialMatrix, SurgeryError> {
    Model::new(c)?.h(s)
}

pub fn compute_v(c: &KnotComplex, s: i64) -> Result<u32, SurgeryError> {
    Model::new(c)?.v_value(s)
}

pub fn compute_h(c: &KnotComplex, s: i64) -> Result<HValue, SurgeryError> {
    Model::new(c)?.h_value(s)
}

/// `V_s` from the truncated solver.
pub fn compute_v_truncated(c: &KnotComplex, s: i64) -> Result<Option<u32>, SurgeryError> {
    let m = Model::new(c)?;
    m.exponent_truncated(s, &m.v(s)?)
}

/// `H_s` from the truncated solver; needs the flip.
pub fn compute_h_truncated(c: &KnotComplex, s: i64) -> Result<Option<u32>, SurgeryError> {
    let m = Model::new(c)?;
    m.exponent_truncated(s, &m.h(s)?)
}

/// `d(S³₁(K)) = −2 V_0`.
pub fn d_one(c: &KnotComplex) -> Result<i64, SurgeryError> {
    Ok(-2 * i64::from(compute_v(c, 0)?))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VHRow {
    pub s: i64,
    pub v: u32,
    pub h: u32,
    pub h_mode: Provenance,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VHTable {
    pub knot: String,
    pub genus: u32,
    pub rows: Vec<VHRow>,
    pub d1: i64,
}

impl VHTable {
    pub fn row(&self, s: i64) -> Option<&VHRow> {
        self.rows.iter().find(|r| r.s == s)
    }
}

/// Default table window `[−b, b]`, `b = max(genus, 1)`.
pub fn default_window(c: &KnotComplex) -> (i64, i64) {
    let b = i64::from(c.genus().max(1));
    (-b, b)
}

pub fn vh_table(c: &KnotComplex, range: Option<(i64, i64)>) -> Result<VHTable, SurgeryError> {
    let m = Model::new(c)?;
    let (lo, hi) = range.unwrap_or_else(|| default_window(c));
    let rows = (lo..=hi)
        .map(|s| {
            let h = m.h_value(s)?;
            Ok(VHRow { s, v: m.v_value(s)?, h: h.value, h_mode: h.provenance })
        })
        .collect::<Result<Vec<_>, SurgeryError>>()?;
    Ok(VHTable { knot: c.name.clone(), genus: m.genus, rows, d1: -2 * i64::from(m.v_value(0)?) })
}
