use conecalc::f2ualg::{homology, induced_map, snf_monomial, truncated, ChainComplex, MonomialMatrix};
use conecalc::lattice::{nullity_split, scramble, SymIntMatrix};
use proptest::prelude::*;

/// A complex built from cancelling pairs `x → U^k y` and free generators,
/// then hidden by a random graded change of basis.
#[derive(Debug, Clone)]
struct Blocks {
    pairs: Vec<(i64, u32)>,
    free: Vec<i64>,
    ops: Vec<(usize, usize)>,
}

fn blocks() -> impl Strategy<Value = Blocks> {
    (
        prop::collection::vec((-3i64..3, 0u32..3), 0..4),
        prop::collection::vec(-3i64..3, 0..3),
        prop::collection::vec((0usize..16, 0usize..16), 0..30),
    )
        .prop_map(|(pairs, free, ops)| Blocks { pairs, free, ops })
}

/// Grades and differential terms, before the change of basis.
fn raw(b: &Blocks) -> (Vec<i64>, Vec<(usize, usize, i64)>) {
    let mut grades = Vec::new();
    let mut terms = Vec::new();
    for &(g, k) in &b.pairs {
        // x in grading 2g+1 maps to U^k y, y in grading 2g + 2k
        let x = grades.len();
        grades.push(2 * g + 1);
        grades.push(2 * g + 2 * i64::from(k));
        terms.push((x + 1, x, i64::from(k)));
    }
    grades.extend(b.free.iter().map(|g| 2 * g));
    (grades, terms)
}

/// Applies `e_i ↦ e_i + U^m e_j` (when homogeneous) as a conjugation of `d`.
fn conjugated(b: &Blocks) -> ChainComplex {
    let (grades, terms) = raw(b);
    let n = grades.len();
    let d = MonomialMatrix::from_terms(grades.clone(), grades.clone(), -1, terms).unwrap();
    if n < 2 {
        return ChainComplex::from_matrix(d).unwrap();
    }
    let mut p = MonomialMatrix::identity(grades.clone());
    for &(i, j) in &b.ops {
        let (i, j) = (i % n, j % n);
        if i == j || grades[j] < grades[i] || (grades[j] - grades[i]) % 2 != 0 {
            continue;
        }
        let e = MonomialMatrix::from_terms(
            grades.clone(),
            grades.clone(),
            0,
            (0..n).map(|r| (r, r, 0)).chain(std::iter::once((j, i, (grades[j] - grades[i]) / 2))),
        )
        .unwrap();
        p = p.compose(&e).unwrap();
    }
    // each elementary matrix is its own inverse over F2
    let mut pinv = MonomialMatrix::identity(grades.clone());
    for &(i, j) in b.ops.iter().rev() {
        let (i, j) = (i % n, j % n);
        if i == j || grades[j] < grades[i] || (grades[j] - grades[i]) % 2 != 0 {
            continue;
        }
        let e = MonomialMatrix::from_terms(
            grades.clone(),
            grades.clone(),
            0,
            (0..n).map(|r| (r, r, 0)).chain(std::iter::once((j, i, (grades[j] - grades[i]) / 2))),
        )
        .unwrap();
        pinv = pinv.compose(&e).unwrap();
    }
    assert_eq!(p.compose(&pinv).unwrap(), MonomialMatrix::identity(grades.clone()));
    ChainComplex::from_matrix(pinv.compose(&d).unwrap().compose(&p).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn homology_recovers_the_blocks(b in blocks()) {
        let c = conjugated(&b);
        prop_assert!(c.squares_to_zero());
        let h = homology(&c).unwrap();
        prop_assert!(h.verify());
        let mut free = b.free.iter().map(|g| 2 * g).collect::<Vec<_>>();
        free.sort_unstable();
        prop_assert_eq!(h.module.free(), free.as_slice());
        let mut torsion: Vec<(i64, u32)> = b.pairs.iter().filter(|p| p.1 > 0).map(|&(g, k)| (2 * g + 2 * i64::from(k), k)).collect();
        torsion.sort_unstable();
        let got: Vec<(i64, u32)> = h.module.torsion().iter().map(|t| (t.grading, t.order)).collect();
        prop_assert_eq!(got, torsion);
    }

    #[test]
    fn truncated_dimensions_match(b in blocks()) {
        let c = conjugated(&b);
        let h = homology(&c).unwrap();
        let bound = 12;
        for g in -8..8 {
            prop_assert_eq!(truncated::homology_dim(c.differential(), g, bound), h.module.dim_in_degree(g), "g={}", g);
        }
    }

    #[test]
    fn smith_form_replays(b in blocks()) {
        let c = conjugated(&b);
        let s = snf_monomial(c.differential()).unwrap();
        prop_assert!(s.verify(c.differential()));
        let mut powers = s.powers();
        powers.sort_unstable();
        let mut expected: Vec<u32> = b.pairs.iter().map(|p| p.1).collect();
        expected.sort_unstable();
        prop_assert_eq!(powers, expected);
    }

    #[test]
    fn induced_maps_compose(k1 in 0u32..3, k2 in 0u32..3) {
        // F[U] in grading 0 mapped by U^k1 then U^k2
        let one = ChainComplex::new(vec![0], []).unwrap();
        let h = homology(&one).unwrap();
        let f = MonomialMatrix::from_terms(vec![0], vec![0], -2 * i64::from(k1), [(0, 0, i64::from(k1))]).unwrap();
        let g = MonomialMatrix::from_terms(vec![0], vec![0], -2 * i64::from(k2), [(0, 0, i64::from(k2))]).unwrap();
        let fi = induced_map(&f, &h, &h).unwrap();
        let gi = induced_map(&g, &h, &h).unwrap();
        let gf = induced_map(&g.compose(&f).unwrap(), &h, &h).unwrap();
        prop_assert_eq!(gf.entry(0, 0), Some(k1 + k2));
        prop_assert_eq!(gi.compose(&fi).unwrap(), gf);
    }

    #[test]
    fn nullity_split_recovers_rank(n in 1usize..=8, k_raw in 0usize..=8, seed in any::<u64>()) {
        let k = k_raw % (n + 1);
        let mut d = vec![1i64; n - k];
        d.extend(std::iter::repeat(0).take(k));
        let q = scramble(&SymIntMatrix::diagonal(&d), seed, 6 * n, 10).unwrap();
        let s = nullity_split(&q).unwrap();
        prop_assert_eq!((s.rank, s.nullity), (n - k, k));
        prop_assert!(s.form.verify());
    }
}
