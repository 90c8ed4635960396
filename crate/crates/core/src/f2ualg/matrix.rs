use super::bits::BitRow;
use super::AlgebraError;

/// Power of `U` carried by an entry between a row of grading `row` and a
/// column of grading `col` for a map of the given degree, if it is a
/// nonnegative integer.
#[inline]
pub fn implied_power(row: i64, col: i64, degree: i64) -> Option<u32> {
    let twice = row - col - degree;
    if twice < 0 || twice % 2 != 0 {
        None
    } else {
        u32::try_from(twice / 2).ok()
    }
}

/// Matrix over F2[U] whose nonzero entries are single monomials.
///
/// Rows and columns carry Maslov gradings and the map has a fixed degree, so
/// the U-power of entry `(r, c)` is determined by
/// `(row_grade[r] - col_grade[c] - degree) / 2`. Only the F2 support is stored.
/// A differential has degree `-1`; chain maps store their (even) degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialMatrix {
    row_grades: Vec<i64>,
    col_grades: Vec<i64>,
    degree: i64,
    rows: Vec<BitRow>,
}

impl MonomialMatrix {
    pub fn zeros(row_grades: Vec<i64>, col_grades: Vec<i64>, degree: i64) -> Self {
        let rows = vec![BitRow::zeros(col_grades.len()); row_grades.len()];
        Self { row_grades, col_grades, degree, rows }
    }

    pub fn identity(grades: Vec<i64>) -> Self {
        let mut m = Self::zeros(grades.clone(), grades, 0);
        for i in 0..m.nrows() {
            m.rows[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from `(row, col, upower)` terms, summing over F2.
    ///
    /// Every term must carry exactly the power implied by the gradings;
    /// anything else means two terms in one slot could disagree.
    pub fn from_terms<I>(row_grades: Vec<i64>, col_grades: Vec<i64>, degree: i64, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut m = Self::zeros(row_grades, col_grades, degree);
        for (r, c, power) in terms {
            if r >= m.nrows() || c >= m.ncols() {
                return Err(AlgebraError::IndexOutOfRange { row: r, col: c });
            }
            if power < 0 {
                return Err(AlgebraError::NegativePower { row: r, col: c, power });
            }
            let implied = m.implied(r, c);
            if implied != Some(power as u32) {
                return Err(AlgebraError::Homogeneity { row: r, col: c, given: power, implied: implied.map(i64::from) });
            }
            m.rows[r].toggle(c);
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.row_grades.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_grades.len()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn row_grades(&self) -> &[i64] {
        &self.row_grades
    }

    pub fn col_grades(&self) -> &[i64] {
        &self.col_grades
    }

    pub fn implied(&self, r: usize, c: usize) -> Option<u32> {
        implied_power(self.row_grades[r], self.col_grades[c], self.degree)
    }

    /// `Some(k)` when the entry is `U^k`, `None` when it is zero.
    pub fn entry(&self, r: usize, c: usize) -> Option<u32> {
        if self.rows[r].get(c) {
            self.implied(r, c)
        } else {
            None
        }
    }

    #[inline]
    pub fn bit(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn row(&self, r: usize) -> &BitRow {
        &self.rows[r]
    }

    pub fn column(&self, c: usize) -> BitRow {
        let mut out = BitRow::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitRow::is_zero)
    }

    /// Nonzero entries as `(row, col, upower)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            row.iter_ones().map(move |c| (r, c, self.implied(r, c).expect("stored entry has valid power")))
        })
    }

    pub fn max_power(&self) -> u32 {
        self.entries().map(|(_, _, k)| k).max().unwrap_or(0)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &MonomialMatrix) -> Result<MonomialMatrix, AlgebraError> {
        if self.col_grades != rhs.row_grades {
            return Err(AlgebraError::DimensionMismatch);
        }
        let mut out = Self::zeros(self.row_grades.clone(), rhs.col_grades.clone(), self.degree + rhs.degree);
        for (r, row) in self.rows.iter().enumerate() {
            for k in row.iter_ones() {
                out.rows[r].xor_assign(&rhs.rows[k]);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &MonomialMatrix) -> Result<MonomialMatrix, AlgebraError> {
        if self.row_grades != rhs.row_grades || self.col_grades != rhs.col_grades || self.degree != rhs.degree {
            return Err(AlgebraError::DimensionMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&rhs.rows) {
            a.xor_assign(b);
        }
        Ok(out)
    }

    pub fn apply(&self, z: &Chain) -> Result<Chain, AlgebraError> {
        if z.support.len() != self.ncols() {
            return Err(AlgebraError::DimensionMismatch);
        }
        let mut support = BitRow::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(&z.support) {
                support.set(r, true);
            }
        }
        Ok(Chain { grading: z.grading + self.degree, support })
    }

    // Elementary operations used by the reductions. The caller guarantees the
    // multiplier power is nonnegative.

    pub(crate) fn add_row(&mut self, target: usize, source: usize) {
        debug_assert_ne!(target, source);
        let src = self.rows[source].clone();
        self.rows[target].xor_assign(&src);
    }

    pub(crate) fn add_col(&mut self, target: usize, source: usize) {
        debug_assert_ne!(target, source);
        for row in &mut self.rows {
            if row.get(source) {
                row.toggle(target);
            }
        }
    }
}

/// A homogeneous element of a graded free F2[U]-module.
///
/// Support index `i` stands for `U^((grade[i] - grading)/2) · e_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain {
    pub grading: i64,
    pub support: BitRow,
}

impl Chain {
    pub fn new(grades: &[i64], grading: i64, support: BitRow) -> Result<Self, AlgebraError> {
        if support.len() != grades.len() {
            return Err(AlgebraError::DimensionMismatch);
        }
        for i in support.iter_ones() {
            if implied_power(grades[i], grading, 0).is_none() {
                return Err(AlgebraError::InhomogeneousChain { index: i });
            }
        }
        Ok(Self { grading, support })
    }

    pub fn zero(len: usize, grading: i64) -> Self {
        Self { grading, support: BitRow::zeros(len) }
    }

    pub fn basis(grades: &[i64], i: usize) -> Self {
        Self { grading: grades[i], support: BitRow::from_ones(grades.len(), [i]) }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_zero()
    }

    /// Multiplication by `U^k`.
    pub fn times_u(&self, k: u32) -> Self {
        Self { grading: self.grading - 2 * i64::from(k), support: self.support.clone() }
    }

    /// Places this chain into a larger basis at the given offset.
    pub fn embed(&self, total: usize, offset: usize, shift: i64) -> Self {
        let support = BitRow::from_ones(total, self.support.iter_ones().map(|i| i + offset));
        Self { grading: self.grading + shift, support }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_follow_gradings() {
        // y at -3, x at 0: d y = U^2 x.
        let m = MonomialMatrix::from_terms(vec![0, -3], vec![0, -3], -1, [(0, 1, 2)]).unwrap();
        assert_eq!(m.entry(0, 1), Some(2));
        assert!(matches!(
            MonomialMatrix::from_terms(vec![0, -3], vec![0, -3], -1, [(0, 1, 1)]),
            Err(AlgebraError::Homogeneity { .. })
        ));
        // the reverse arrow would need a negative power
        assert!(MonomialMatrix::from_terms(vec![0, -3], vec![0, -3], -1, [(1, 0, 0)]).is_err());
    }

    #[test]
    fn repeated_terms_cancel() {
        let m = MonomialMatrix::from_terms(vec![0], vec![1], -1, [(0, 0, 0), (0, 0, 0)]).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn compose_adds_degrees() {
        let a = MonomialMatrix::from_terms(vec![0], vec![2], -2, [(0, 0, 0)]).unwrap();
        let b = MonomialMatrix::from_terms(vec![2], vec![6], -4, [(0, 0, 0)]).unwrap();
        let c = a.compose(&b).unwrap();
        assert_eq!(c.degree(), -6);
        assert_eq!(c.entry(0, 0), Some(0));
    }

    #[test]
    fn chain_homogeneity() {
        let grades = [0, -1, 2];
        assert!(Chain::new(&grades, 0, BitRow::from_ones(3, [0, 2])).is_ok());
        assert!(Chain::new(&grades, 0, BitRow::from_ones(3, [1])).is_err());
        assert!(Chain::new(&grades, 1, BitRow::from_ones(3, [0])).is_err());
    }
}
