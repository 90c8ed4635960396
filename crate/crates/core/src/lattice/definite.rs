use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{determinant, LatticeError, Move, SymIntMatrix};

type Q = Ratio<i128>;

/// Leading principal minors by fraction-free elimination, stopping at the
/// first zero pivot. `None` on overflow.
pub fn leading_minors(m: &[Vec<i64>]) -> Option<Vec<i128>> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| i128::from(v)).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 0..n {
        minors.push(a[k][k]);
        if a[k][k] == 0 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)? / prev;
            }
        }
        prev = a[k][k];
    }
    Some(minors)
}

pub fn is_positive_definite(m: &[Vec<i64>]) -> bool {
    matches!(leading_minors(m), Some(v) if v.len() == m.len() && v.iter().all(|&d| d > 0))
}

/// Gram–Schmidt data `q(x) = Σ d_i (x_i + Σ_(j>i) r_ij x_j)²`.
struct Cholesky {
    d: Vec<Q>,
    r: Vec<Vec<Q>>,
}

impl Cholesky {
    fn new(g: &[Vec<i64>]) -> Self {
        let n = g.len();
        let mut d = vec![Q::from_integer(0); n];
        let mut r = vec![vec![Q::from_integer(0); n]; n];
        for i in 0..n {
            let mut di = Q::from_integer(i128::from(g[i][i]));
            for k in 0..i {
                di -= d[k] * r[k][i] * r[k][i];
            }
            d[i] = di;
            for j in i + 1..n {
                let mut v = Q::from_integer(i128::from(g[i][j]));
                for k in 0..i {
                    v -= d[k] * r[k][i] * r[k][j];
                }
                r[i][j] = v / di;
            }
        }
        Self { d, r }
    }
}

/// Diagonal of the inverse of a unimodular form, exactly.
fn inverse_diagonal(g: &[Vec<i64>]) -> Vec<Q> {
    let n = g.len();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = g[i].iter().map(|&v| Q::from_integer(i128::from(v))).collect();
            row.extend((0..n).map(|j| Q::from_integer(i128::from(i == j))));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| a[i][k] != Q::from_integer(0)).expect("form is nonsingular");
        a.swap(k, p);
        let piv = a[k][k];
        for v in a[k].iter_mut() {
            *v /= piv;
        }
        for i in 0..n {
            if i != k && a[i][k] != Q::from_integer(0) {
                let f = a[i][k];
                for j in 0..2 * n {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n + i]).collect()
}

fn isqrt_floor(x: Q) -> i128 {
    let v = x.floor().to_integer().max(0);
    let mut s = (v as f64).sqrt() as i128;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}

/// A vector of norm 1 in a positive definite form, if one exists.
///
/// Coordinates are bounded by `x_i² ≤ (G⁻¹)_ii · q(x)`, and the search runs
/// from the last coordinate down with the exact partial sums of the
/// Cholesky form as pruning.
pub fn norm_one_vector(g: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = g.len();
    if n == 0 {
        return None;
    }
    let ch = Cholesky::new(g);
    let bounds: Vec<i128> = inverse_diagonal(g).into_iter().map(isqrt_floor).collect();
    let mut x = vec![0i128; n];
    search(&ch, &bounds, &mut x, n, Q::from_integer(0)).then(|| x.iter().map(|&v| v as i64).collect())
}

fn search(ch: &Cholesky, bounds: &[i128], x: &mut [i128], level: usize, partial: Q) -> bool {
    let one = Q::from_integer(1);
    if level == 0 {
        return partial == one;
    }
    let i = level - 1;
    let mut centre = Q::from_integer(0);
    for j in i + 1..x.len() {
        centre += ch.r[i][j] * Q::from_integer(x[j]);
    }
    for v in -bounds[i]..=bounds[i] {
        let t = Q::from_integer(v) + centre;
        let p = partial + ch.d[i] * t * t;
        if p > one {
            continue;
        }
        x[i] = v;
        if search(ch, bounds, x, i, p) {
            return true;
        }
    }
    x[i] = 0;
    false
}

/// Pairwise size reduction of the leading `r × r` block.
fn pair_reduce(m: &mut SymIntMatrix, r: usize) -> Result<(), LatticeError> {
    for _ in 0..64 * r.max(1) {
        let mut changed = false;
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let (gij, gjj) = (m.entry(i, j), m.entry(j, j));
                if gjj > 0 && 2 * gij.abs() > gjj {
                    let f = (2 * gij + gjj).div_euclid(2 * gjj);
                    if f != 0 {
                        m.apply(Move::AddMultiple { target: i, source: j, factor: -f })?;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(())
}

/// Moves turning the coordinate vector `v` (a primitive vector supported on
/// indices `from..`) into the basis vector `e_from`.
fn bring_to_front(m: &mut SymIntMatrix, mut v: Vec<i64>, from: usize) -> Result<(), LatticeError> {
    loop {
        let nz: Vec<usize> = (from..v.len()).filter(|&j| v[j] != 0).collect();
        let t = *nz.iter().min_by_key(|&&j| (v[j].unsigned_abs(), j)).expect("vector is nonzero");
        if nz.len() == 1 {
            if t != from {
                m.apply(Move::Swap { a: from, b: t })?;
                v.swap(from, t);
            }
            if v[from] < 0 {
                m.apply(Move::Negate { i: from })?;
            }
            return Ok(());
        }
        for &s in &nz {
            if s == t {
                continue;
            }
            // new b_t = b_t + f b_s leaves coordinate v_s − f v_t on b_s
            let f = v[s] / v[t];
            if f != 0 {
                m.apply(Move::AddMultiple { target: t, source: s, factor: f })?;
                v[s] -= f * v[t];
            }
        }
    }
}

/// Diagonalizes the leading `r × r` block to the identity if possible. On
/// failure returns a witness description; the moves made so far remain.
pub(crate) fn diagonalize_leading(m: &mut SymIntMatrix, r: usize) -> Result<Option<String>, LatticeError> {
    for i in 0..r {
        pair_reduce_tail(m, i, r)?;
        let block: Vec<Vec<i64>> = (i..r).map(|a| (i..r).map(|b| m.entry(a, b)).collect()).collect();
        let Some(v) = norm_one_vector(&block) else {
            return Ok(Some(format!(
                "after splitting off {i} unit vectors, the remaining rank {} form has no vector of norm 1",
                r - i
            )));
        };
        let mut full = vec![0i64; m.dim()];
        full[i..r].copy_from_slice(&v);
        bring_to_front(m, full, i)?;
        debug_assert_eq!(m.entry(i, i), 1);
        for j in i + 1..r {
            let g = m.entry(i, j);
            if g != 0 {
                m.apply(Move::AddMultiple { target: j, source: i, factor: -g })?;
            }
        }
    }
    Ok(None)
}

/// Size reduction restricted to indices `i..r`, done through a shifted copy
/// so the moves land on the right basis vectors.
fn pair_reduce_tail(m: &mut SymIntMatrix, i: usize, r: usize) -> Result<(), LatticeError> {
    let block: Vec<Vec<i64>> = (i..r).map(|a| (i..r).map(|b| m.entry(a, b)).collect()).collect();
    let mut sub = SymIntMatrix::new(block)?;
    pair_reduce(&mut sub, r - i)?;
    for &mv in sub.log() {
        m.apply(match mv {
            Move::Swap { a, b } => Move::Swap { a: a + i, b: b + i },
            Move::Negate { i: k } => Move::Negate { i: k + i },
            Move::AddMultiple { target, source, factor } => {
                Move::AddMultiple { target: target + i, source: source + i, factor }
            }
        })?;
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DiagonalOutcome {
    pub standard: bool,
    /// The matrix with its history; the identity when `standard`.
    pub form: SymIntMatrix,
    pub witness: Option<String>,
}

/// Decides whether a positive definite unimodular form is congruent to the
/// identity, by repeatedly splitting off a vector of norm 1.
pub fn is_standard_diagonal(a: &SymIntMatrix) -> Result<DiagonalOutcome, LatticeError> {
    if !is_positive_definite(a.matrix()) {
        return Err(LatticeError::NotPositiveDefinite);
    }
    match determinant(a.matrix()) {
        Some(1) => {}
        Some(d) => return Err(LatticeError::NotUnimodular(d)),
        None => return Err(LatticeError::Overflow),
    }
    let mut form = a.rebased();
    let witness = diagonalize_leading(&mut form, a.dim())?;
    Ok(DiagonalOutcome { standard: witness.is_none(), form, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::e8;

    #[test]
    fn minors() {
        assert_eq!(leading_minors(&[vec![2, 1], vec![1, 2]]), Some(vec![2, 3]));
        assert!(is_positive_definite(e8().matrix()));
        assert!(!is_positive_definite(&[vec![1, 2], vec![2, 1]]));
        assert!(!is_positive_definite(&[vec![0]]));
    }

    #[test]
    fn e8_has_no_unit_vectors() {
        assert_eq!(norm_one_vector(e8().matrix()), None);
        let out = is_standard_diagonal(&e8()).unwrap();
        assert!(!out.standard);
        assert!(out.witness.unwrap().contains("no vector of norm 1"));
    }

    #[test]
    fn identity_is_standard() {
        let out = is_standard_diagonal(&SymIntMatrix::identity(4)).unwrap();
        assert!(out.standard);
        assert_eq!(out.form.matrix(), SymIntMatrix::identity(4).matrix());
        assert!(out.form.verify());
    }

    #[test]
    fn hidden_identity() {
        // basis (1,0), (1,1) of Z^2
        let q = SymIntMatrix::new(vec![vec![1, 1], vec![1, 2]]).unwrap();
        let out = is_standard_diagonal(&q).unwrap();
        assert!(out.standard);
        assert!(out.form.verify());
        assert_eq!(norm_one_vector(q.matrix()).map(|v| v.iter().map(|x| x * x).sum::<i64>() > 0), Some(true));
    }

    #[test]
    fn input_checks() {
        assert_eq!(is_standard_diagonal(&SymIntMatrix::diagonal(&[1, -1])), Err(LatticeError::NotPositiveDefinite));
        assert_eq!(is_standard_diagonal(&SymIntMatrix::diagonal(&[1, 2])), Err(LatticeError::NotUnimodular(2)));
    }

    #[test]
    fn e8_plus_one_still_fails() {
        let q = e8().direct_sum(&SymIntMatrix::identity(1));
        let out = is_standard_diagonal(&q).unwrap();
        assert!(!out.standard);
        assert!(out.form.verify());
    }
}
