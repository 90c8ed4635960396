use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LatticeError, Move, SymIntMatrix};

/// `steps` random elementary moves on `n` basis vectors, factors in `±1, ±2`.
pub fn random_unimodular_moves(n: usize, seed: u64, steps: usize) -> Vec<Move> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_moves(&mut rng, n, steps)
}

fn random_moves(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> Vec<Move> {
    if n < 2 {
        return (0..steps.min(n)).map(|_| Move::Negate { i: 0 }).collect();
    }
    (0..steps)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            match rng.gen_range(0..10) {
                0 => Move::Swap { a, b },
                1 => Move::Negate { i: a },
                _ => {
                    let f = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    Move::AddMultiple { target: a, source: b, factor: f }
                }
            }
        })
        .collect()
}

/// A random form congruent to `q` with entries bounded by `max_entry`.
/// Moves that would exceed the bound are skipped. The result starts a fresh
/// history.
pub fn scramble(q: &SymIntMatrix, seed: u64, steps: usize, max_entry: i64) -> Result<SymIntMatrix, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = q.rebased();
    for mv in random_moves(&mut rng, q.dim(), steps) {
        let mut trial = m.clone();
        trial.apply(mv)?;
        if trial.matrix().iter().flatten().all(|v| v.abs() <= max_entry) {
            m = trial;
        }
    }
    Ok(m.rebased())
}

/// A scrambled copy of `diag(I_(n−k), 0_k)`.
pub fn scrambled_block_form(n: usize, k: usize, seed: u64) -> Result<SymIntMatrix, LatticeError> {
    let mut d = vec![1; n - k];
    d.extend(std::iter::repeat_n(0, k));
    scramble(&SymIntMatrix::diagonal(&d), seed, 6 * n, 10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::determinant;

    #[test]
    fn deterministic() {
        assert_eq!(random_unimodular_moves(5, 7, 20), random_unimodular_moves(5, 7, 20));
        assert_eq!(scrambled_block_form(6, 2, 3).unwrap(), scrambled_block_form(6, 2, 3).unwrap());
    }

    #[test]
    fn scramble_is_a_congruence() {
        let q = SymIntMatrix::diagonal(&[1, 1, 1, 0]);
        let mut m = q.clone();
        m.apply_all(&random_unimodular_moves(4, 11, 30)).unwrap();
        assert!(m.verify());
        assert_eq!(determinant(m.transform()).map(i128::abs), Some(1));
        let s = scramble(&q, 5, 30, 10).unwrap();
        assert!(s.matrix().iter().flatten().all(|v| v.abs() <= 10));
        assert_ne!(s.matrix(), q.matrix());
    }
}
