use super::matrix::MonomialMatrix;
use super::AlgebraError;

/// One surviving diagonal entry `U^power` at `(row, col)` of the normal form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DiagonalEntry {
    pub row: usize,
    pub col: usize,
    pub power: u32,
}

/// Graded Smith normal form `left · m · right = diagonal`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<DiagonalEntry>,
    pub left: MonomialMatrix,
    pub right: MonomialMatrix,
    pub reduced: MonomialMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn powers(&self) -> Vec<u32> {
        self.diagonal.iter().map(|d| d.power).collect()
    }

    /// Replays the transforms on `m` and compares with the stored diagonal.
    pub fn verify(&self, m: &MonomialMatrix) -> bool {
        let Ok(lm) = self.left.compose(m) else { return false };
        let Ok(lmr) = lm.compose(&self.right) else { return false };
        if lmr != self.reduced {
            return false;
        }
        let expected: Vec<(usize, usize, u32)> = {
            let mut v: Vec<_> = self.diagonal.iter().map(|d| (d.row, d.col, d.power)).collect();
            v.sort_unstable();
            v
        };
        lmr.entries().collect::<Vec<_>>() == expected
    }
}

/// Smith normal form over F2[U] for a matrix with monomial entries.
///
/// Pivots are taken at a globally minimal U-power (ties broken by row, then
/// column index), so every elimination multiplier is a nonnegative power and
/// all transforms stay graded.
pub fn snf_monomial(m: &MonomialMatrix) -> Result<SmithForm, AlgebraError> {
    let mut work = m.clone();
    let mut left = MonomialMatrix::identity(m.row_grades().to_vec());
    let mut right = MonomialMatrix::identity(m.col_grades().to_vec());
    let mut row_done = vec![false; m.nrows()];
    let mut col_done = vec![false; m.ncols()];
    let mut diagonal = Vec::new();

    while let Some((power, p, q)) = min_pivot(&work, &row_done, &col_done) {
        for i in work.column(q).iter_ones().filter(|&i| i != p).collect::<Vec<_>>() {
            work.add_row(i, p);
            left.add_row(i, p);
        }
        for j in work.row(p).iter_ones().filter(|&j| j != q).collect::<Vec<_>>() {
            work.add_col(j, q);
            right.add_col(j, q);
        }
        row_done[p] = true;
        col_done[q] = true;
        diagonal.push(DiagonalEntry { row: p, col: q, power });
    }
    Ok(SmithForm { diagonal, left, right, reduced: work })
}

pub(crate) fn min_pivot(work: &MonomialMatrix, row_done: &[bool], col_done: &[bool]) -> Option<(u32, usize, usize)> {
    let mut best: Option<(u32, usize, usize)> = None;
    for r in 0..work.nrows() {
        if row_done[r] {
            continue;
        }
        for c in work.row(r).iter_ones() {
            if col_done[c] {
                continue;
            }
            let k = work.implied(r, c).expect("stored entry has valid power");
            let cand = (k, r, c);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best
}
