//! Plain F2 linear algebra on one grading at a time, with U-powers cut off at
//! a bound `T`. Independent of the graded reductions in `homology`; used as a
//! fallback membership solver and as a cross-check.

use std::collections::HashMap;

use super::bits::BitRow;
use super::matrix::{implied_power, Chain, MonomialMatrix};
use super::AlgebraError;

/// Environment variable overriding the truncation bound.
pub const TRUNC_ENV: &str = "CONECALC_TRUNC_T";

/// Default bound `2·(max U-power + genus + |n| + 1)`, unless overridden by
/// `CONECALC_TRUNC_T`.
pub fn default_bound(max_power: u32, genus: u32, n: i64) -> u32 {
    if let Some(t) = std::env::var(TRUNC_ENV).ok().and_then(|v| v.trim().parse::<u32>().ok()) {
        return t.max(1);
    }
    2 * (max_power + genus + n.unsigned_abs() as u32 + 1)
}

/// F2 basis `{U^k e_i : grade_i − 2k = g, 0 ≤ k ≤ T}` of one grading.
struct DegreeSpace {
    elems: Vec<(usize, u32)>,
    index: HashMap<(usize, u32), usize>,
}

impl DegreeSpace {
    fn new(grades: &[i64], g: i64, bound: u32) -> Self {
        let elems: Vec<(usize, u32)> = grades
            .iter()
            .enumerate()
            .filter_map(|(i, &gi)| implied_power(gi, g, 0).filter(|&k| k <= bound).map(|k| (i, k)))
            .collect();
        let index = elems.iter().enumerate().map(|(pos, &e)| (e, pos)).collect();
        Self { elems, index }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    /// Vector of a homogeneous chain; `None` if it has a term above the bound.
    fn vector(&self, z: &Chain, grades: &[i64]) -> Option<BitRow> {
        let mut v = BitRow::zeros(self.len());
        for i in z.support.iter_ones() {
            let k = implied_power(grades[i], z.grading, 0)?;
            v.set(*self.index.get(&(i, k))?, true);
        }
        Some(v)
    }
}

/// Images of the basis of `src` under `m`, as vectors in `dst`. Terms above
/// the bound are dropped (the quotient by `U^(T+1)`).
fn images(m: &MonomialMatrix, src: &DegreeSpace, dst: &DegreeSpace) -> Vec<BitRow> {
    src.elems
        .iter()
        .map(|&(j, k)| {
            let mut v = BitRow::zeros(dst.len());
            for i in 0..m.nrows() {
                if m.bit(i, j) {
                    let p = m.implied(i, j).expect("stored entry has valid power");
                    if let Some(&pos) = dst.index.get(&(i, k + p)) {
                        v.toggle(pos);
                    }
                }
            }
            v
        })
        .collect()
}

/// Row-echelon span over F2 keyed by leading index.
#[derive(Default)]
pub(crate) struct Span {
    rows: Vec<(usize, BitRow)>,
}

impl Span {
    fn reduce(&self, v: &BitRow) -> BitRow {
        let mut v = v.clone();
        for (lead, row) in &self.rows {
            if v.get(*lead) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Inserts `v`; returns false if it was already in the span.
    pub(crate) fn insert(&mut self, v: &BitRow) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(lead) => {
                for (_, row) in &mut self.rows {
                    if row.get(lead) {
                        row.xor_assign(&r);
                    }
                }
                self.rows.push((lead, r));
                true
            }
        }
    }

    pub(crate) fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v).is_zero()
    }

    #[cfg(test)]
    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Kernel basis of the linear map whose column images are `cols`.
fn kernel(cols: &[BitRow], domain: usize) -> Vec<BitRow> {
    let mut pivots: Vec<(usize, BitRow, BitRow)> = Vec::new();
    let mut out = Vec::new();
    for (j, img) in cols.iter().enumerate() {
        let mut v = img.clone();
        let mut combo = BitRow::from_ones(domain, [j]);
        for (lead, row, c) in &pivots {
            if v.get(*lead) {
                v.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        match v.first_one() {
            None => out.push(combo),
            Some(lead) => pivots.push((lead, v, combo)),
        }
    }
    out
}

fn rank(cols: &[BitRow]) -> usize {
    let mut s = Span::default();
    cols.iter().filter(|c| s.insert(c)).count()
}

/// Dimension over F2 of homology in grading `g`, computed as
/// `dim ker − dim im` on the truncated grading spaces.
pub fn homology_dim(d: &MonomialMatrix, g: i64, bound: u32) -> usize {
    let grades = d.row_grades();
    let here = DegreeSpace::new(grades, g, bound);
    let above = DegreeSpace::new(grades, g + 1, bound);
    let below = DegreeSpace::new(grades, g - 1, bound);
    let out = images(d, &here, &below);
    let ker = here.len() - rank(&out);
    let im = rank(&images(d, &above, &here));
    ker - im
}

/// Whether the homogeneous cycle `z` is a boundary, in the truncated model.
pub fn is_boundary(d: &MonomialMatrix, z: &Chain, bound: u32) -> Result<bool, AlgebraError> {
    if !d.apply(z)?.is_zero() {
        return Err(AlgebraError::NotACycle);
    }
    let grades = d.row_grades();
    let here = DegreeSpace::new(grades, z.grading, bound);
    let above = DegreeSpace::new(grades, z.grading + 1, bound);
    let Some(v) = here.vector(z, grades) else {
        return Err(AlgebraError::TruncationTooSmall { bound });
    };
    let mut span = Span::default();
    for img in images(d, &above, &here) {
        span.insert(&img);
    }
    Ok(span.contains(&v))
}

/// Smallest `k ≤ bound` such that `U^k · target` lies in `f(cycles of src) +
/// boundaries of dst`; `None` if no such `k` exists below the bound.
///
/// For a map between complexes whose homologies have rank-one free parts,
/// with `target` representing the free generator, this is the exponent of the
/// induced map on free parts.
pub fn cokernel_exponent(
    src_d: &MonomialMatrix,
    f: &MonomialMatrix,
    dst_d: &MonomialMatrix,
    target: &Chain,
    bound: u32,
) -> Result<Option<u32>, AlgebraError> {
    let sg = src_d.row_grades();
    let tg = dst_d.row_grades();
    for k in 0..=bound {
        let z = target.times_u(k);
        let g = z.grading;
        let dst_here = DegreeSpace::new(tg, g, bound);
        let Some(zv) = dst_here.vector(&z, tg) else {
            return Err(AlgebraError::TruncationTooSmall { bound });
        };
        let mut span = Span::default();
        for img in images(dst_d, &DegreeSpace::new(tg, g + 1, bound), &dst_here) {
            span.insert(&img);
        }
        let src_g = g - f.degree();
        let src_here = DegreeSpace::new(sg, src_g, bound);
        let src_below = DegreeSpace::new(sg, src_g - 1, bound);
        let fimg = images(f, &src_here, &dst_here);
        for cyc in kernel(&images(src_d, &src_here, &src_below), src_here.len()) {
            let mut v = BitRow::zeros(dst_here.len());
            for j in cyc.iter_ones() {
                v.xor_assign(&fimg[j]);
            }
            span.insert(&v);
        }
        if span.contains(&zv) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Runs `f` at bound `t` and `2t` and insists on agreement.
pub fn guarded<R: PartialEq, F>(bound: u32, f: F) -> Result<R, AlgebraError>
where
    F: Fn(u32) -> Result<R, AlgebraError>,
{
    let a = f(bound)?;
    let b = f(bound.saturating_mul(2))?;
    if a == b {
        Ok(a)
    } else {
        Err(AlgebraError::TruncationUnstable { bound })
    }
}
