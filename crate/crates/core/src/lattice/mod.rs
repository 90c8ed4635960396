//! Integral symmetric bilinear forms under unimodular congruence.
//!
//! Every change of basis is recorded as a [`Move`]; the accumulated transform
//! `T` satisfies `Tᵀ · original · T = current` and can be replayed from the log.

mod definite;
mod scramble;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use definite::{is_positive_definite, is_standard_diagonal, leading_minors, norm_one_vector, DiagonalOutcome};
pub use scramble::{random_unimodular_moves, scramble, scrambled_block_form};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("integer overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Elementary change of basis vectors `b_0, …, b_(n−1)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    Swap { a: usize, b: usize },
    Negate { i: usize },
    /// `b_target += factor · b_source`.
    AddMultiple { target: usize, source: usize, factor: i64 },
}

/// A symmetric integer matrix with its congruence history.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SymIntMatrix {
    original: Vec<Vec<i64>>,
    current: Vec<Vec<i64>>,
    transform: Vec<Vec<i64>>,
    log: Vec<Move>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn add_scaled(x: i64, f: i64, y: i64) -> Result<i64, LatticeError> {
    f.checked_mul(y).and_then(|p| x.checked_add(p)).ok_or(LatticeError::Overflow)
}

impl SymIntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(Self { original: rows.clone(), current: rows, transform: identity(n), log: Vec::new() })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect();
        Self::new(rows).expect("diagonal is symmetric")
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1; n])
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut rows = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            rows[i][..n].copy_from_slice(&self.current[i]);
        }
        for i in 0..m {
            rows[n + i][n..].copy_from_slice(&other.current[i]);
        }
        Self::new(rows).expect("block sum is symmetric")
    }

    /// Parses a JSON array of integer rows.
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let rows: Vec<Vec<i64>> = serde_json::from_str(text).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.current.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.current
    }

    pub fn original(&self) -> &[Vec<i64>] {
        &self.original
    }

    /// Columns are the current basis vectors in original coordinates.
    pub fn transform(&self) -> &[Vec<i64>] {
        &self.transform
    }

    pub fn log(&self) -> &[Move] {
        &self.log
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.current[i][j]
    }

    /// Applies a move as a congruence and records it.
    pub fn apply(&mut self, mv: Move) -> Result<(), LatticeError> {
        apply_move(&mut self.current, &mut self.transform, mv)?;
        self.log.push(mv);
        Ok(())
    }

    pub fn apply_all(&mut self, moves: &[Move]) -> Result<(), LatticeError> {
        moves.iter().try_for_each(|&m| self.apply(m))
    }

    /// Starts a new history from the current matrix.
    pub fn rebased(&self) -> Self {
        Self::new(self.current.clone()).expect("current matrix stays symmetric")
    }

    /// Replays the log on the original and compares with the current
    /// matrix and transform, and checks `Tᵀ · original · T = current`.
    pub fn verify(&self) -> bool {
        let n = self.dim();
        let mut g = self.original.clone();
        let mut t = identity(n);
        for &mv in &self.log {
            if apply_move(&mut g, &mut t, mv).is_err() {
                return false;
            }
        }
        if g != self.current || t != self.transform {
            return false;
        }
        matches!(congruence(&self.original, &self.transform), Ok(c) if c == self.current)
            && matches!(determinant(&self.transform), Some(d) if d.abs() == 1)
    }
}

impl fmt::Display for SymIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.current {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

fn apply_move(g: &mut [Vec<i64>], t: &mut [Vec<i64>], mv: Move) -> Result<(), LatticeError> {
    let n = g.len();
    match mv {
        Move::Swap { a, b } => {
            g.swap(a, b);
            for row in g.iter_mut() {
                row.swap(a, b);
            }
            for row in t.iter_mut() {
                row.swap(a, b);
            }
        }
        Move::Negate { i } => {
            for j in 0..n {
                g[i][j] = -g[i][j];
            }
            for row in g.iter_mut() {
                row[i] = -row[i];
            }
            for row in t.iter_mut() {
                row[i] = -row[i];
            }
        }
        Move::AddMultiple { target, source, factor } => {
            if target == source {
                return Err(LatticeError::NotSquare);
            }
            // column target += factor · column source, then the same on rows
            for row in g.iter_mut() {
                row[target] = add_scaled(row[target], factor, row[source])?;
            }
            for j in 0..n {
                g[target][j] = add_scaled(g[target][j], factor, g[source][j])?;
            }
            for row in t.iter_mut() {
                row[target] = add_scaled(row[target], factor, row[source])?;
            }
        }
    }
    Ok(())
}

/// `Tᵀ · q · T` in i128, failing if an entry leaves the i64 range.
pub fn congruence(q: &[Vec<i64>], t: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, LatticeError> {
    let n = q.len();
    let mut qt = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            qt[i][j] = (0..n).map(|k| i128::from(q[i][k]) * i128::from(t[k][j])).sum();
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v: i128 = (0..n).map(|k| i128::from(t[k][i]) * qt[k][j]).sum();
                    i64::try_from(v).map_err(|_| LatticeError::Overflow)
                })
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free elimination; `None` on overflow.
pub fn determinant(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| i128::from(v)).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return Some(0) };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Result of splitting off the radical.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NullitySplit {
    pub rank: usize,
    pub nullity: usize,
    /// The invertible block `A`.
    pub a: Vec<Vec<i64>>,
    /// The matrix with history; its current value is `diag(A, 0_k)`.
    pub form: SymIntMatrix,
}

/// Brings `q` to `diag(A, 0_k)` by unimodular congruence, `k` the nullity.
///
/// Column operations put `q·U` into column echelon form `[H | 0]`; the last
/// `k` columns of `U` then span the integer kernel and `Uᵀ q U` has zero last
/// rows and columns.
pub fn nullity_split(q: &SymIntMatrix) -> Result<NullitySplit, LatticeError> {
    let n = q.dim();
    let mut m: Vec<Vec<i64>> = q.matrix().to_vec();
    let mut moves = Vec::new();
    let mut col = 0;
    let column_op = |m: &mut Vec<Vec<i64>>, mv: Move, moves: &mut Vec<Move>| -> Result<(), LatticeError> {
        match mv {
            Move::Swap { a, b } => m.iter_mut().for_each(|r| r.swap(a, b)),
            Move::Negate { i } => m.iter_mut().for_each(|r| r[i] = -r[i]),
            Move::AddMultiple { target, source, factor } => {
                for r in m.iter_mut() {
                    r[target] = add_scaled(r[target], factor, r[source])?;
                }
            }
        }
        moves.push(mv);
        Ok(())
    };
    for row in 0..n {
        if col == n {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (col..n).filter(|&j| m[row][j] != 0).collect();
            let Some(&p) = nonzero.iter().min_by_key(|&&j| (m[row][j].unsigned_abs(), j)) else { break };
            if p != col {
                column_op(&mut m, Move::Swap { a: col, b: p }, &mut moves)?;
            }
            if nonzero.len() == 1 {
                col += 1;
                break;
            }
            for j in col + 1..n {
                let f = m[row][j] / m[row][col];
                if f != 0 {
                    column_op(&mut m, Move::AddMultiple { target: j, source: col, factor: -f }, &mut moves)?;
                }
            }
        }
    }
    let rank = col;
    let mut form = q.clone();
    form.apply_all(&moves)?;
    debug_assert!((rank..n).all(|j| form.current.iter().all(|r| r[j] == 0)));
    let a = form.current[..rank].iter().map(|r| r[..rank].to_vec()).collect();
    Ok(NullitySplit { rank, nullity: n - rank, a, form })
}

/// Outcome of checking `q ≅ diag(I_(n−k), 0_k)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HandleSplitReport {
    pub n: usize,
    pub rank: usize,
    pub nullity: usize,
    pub congruent: bool,
    /// `T` with `Tᵀ q T` equal to `form`, when congruent.
    pub transform: Option<Vec<Vec<i64>>>,
    pub form: Vec<Vec<i64>>,
    pub moves: Vec<Move>,
    pub witness: Option<String>,
}

impl HandleSplitReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn handle_split_report(q: &SymIntMatrix) -> Result<HandleSplitReport, LatticeError> {
    let split = nullity_split(q)?;
    let mut form = split.form.clone();
    let (rank, nullity) = (split.rank, split.nullity);
    let witness = if !is_positive_definite(&split.a) {
        Some("the nonsingular block A is not positive definite".to_string())
    } else {
        match determinant(&split.a) {
            Some(1) => definite::diagonalize_leading(&mut form, rank)?,
            Some(d) => Some(format!("the nonsingular block A is not unimodular (determinant {d})")),
            None => return Err(LatticeError::Overflow),
        }
    };
    let congruent = witness.is_none();
    Ok(HandleSplitReport {
        n: q.dim(),
        rank,
        nullity,
        congruent,
        transform: congruent.then(|| form.transform.clone()),
        form: form.current.clone(),
        moves: form.log.clone(),
        witness,
    })
}

/// Gram matrix of the E8 root lattice (Cartan matrix).
pub fn e8() -> SymIntMatrix {
    let mut rows = vec![vec![0i64; 8]; 8];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        rows[a][b] = -1;
        rows[b][a] = -1;
    }
    SymIntMatrix::new(rows).expect("E8 is symmetric")
}
