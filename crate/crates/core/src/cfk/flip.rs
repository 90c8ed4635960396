use std::collections::BTreeMap;

use super::validate::compose_terms;
use super::{CfkError, Indexed, IndexedTerm, KnotComplex, Term};
use crate::f2ualg::{homology, ChainComplex};

/// Leaves visited by the matching search before giving up.
const SEARCH_LIMIT: usize = 50_000;

/// Everything wrong with a proposed flip map, as messages.
///
/// A flip must preserve Maslov grading, send filtration level `(i, j)` into
/// `{i' ≤ j, j' ≤ i}`, commute with the differential over `F[U, U^-1]`, and
/// restrict to a quasi-isomorphism `C{j ≤ 0} → C{i ≤ 0}`.
pub(crate) fn flip_problems(ix: &Indexed, flip: &[IndexedTerm], label: impl Fn(&IndexedTerm) -> String) -> Vec<String> {
    let (m, a) = (&ix.maslov, &ix.alexander);
    let mut problems = Vec::new();
    for t in flip {
        if m[t.to] - 2 * t.upower != m[t.from] {
            problems.push(format!("{}: does not preserve Maslov grading", label(t)));
        }
        if t.upower < -a[t.from] || t.upower < a[t.to] {
            problems.push(format!("{}: does not swap the two filtrations", label(t)));
        }
    }
    if !problems.is_empty() {
        return problems;
    }
    let n = ix.len();
    let lhs = compose_terms(&ix.differential, flip, n);
    let rhs = compose_terms(flip, &ix.differential, n);
    if lhs != rhs {
        problems.push("flip does not commute with the differential".to_string());
        return problems;
    }
    match restricted_cone_is_acyclic(ix, flip) {
        Ok(true) => {}
        Ok(false) => problems.push("flip is not a quasi-isomorphism C{j<=0} -> C{i<=0}".to_string()),
        Err(e) => problems.push(format!("flip cone could not be built: {e}")),
    }
    problems
}

/// Mapping cone of the flip restricted to `C{j ≤ 0} → C{i ≤ 0}`.
pub(crate) fn restricted_cone(ix: &Indexed, flip: &[IndexedTerm]) -> Result<ChainComplex, CfkError> {
    let n = ix.len();
    // C{j ≤ 0} is spanned by U^A(x) x, with A possibly negative
    let shift = &ix.alexander;
    let mut grades: Vec<i64> = (0..n).map(|x| ix.maslov[x] - 2 * shift[x] + 1).collect();
    grades.extend_from_slice(&ix.maslov);
    let mut terms = Vec::new();
    for t in &ix.differential {
        terms.push((t.to, t.from, shift[t.from] + t.upower - shift[t.to]));
        terms.push((n + t.to, n + t.from, t.upower));
    }
    for t in flip {
        terms.push((n + t.to, t.from, shift[t.from] + t.upower));
    }
    ChainComplex::new(grades, terms).map_err(|e| CfkError::InvalidFlip(e.to_string()))
}

fn restricted_cone_is_acyclic(ix: &Indexed, flip: &[IndexedTerm]) -> Result<bool, CfkError> {
    let cone = restricted_cone(ix, flip)?;
    let h = homology(&cone).map_err(|e| CfkError::InvalidFlip(e.to_string()))?;
    Ok(h.module.is_zero())
}

/// The flip `Φ(x) = U^(−A(x)) σ(x)` for a matching `σ` of generators with
/// `A(σx) = −A(x)` and `M(σx) = M(x) − 2A(x)`.
///
/// Matchings are searched depth-first in generator order, candidates in
/// generator order; the first one passing every flip check is returned.
pub fn default_flip(c: &KnotComplex) -> Result<Vec<Term>, CfkError> {
    let ix = c.indexed()?;
    let n = ix.len();
    let mut classes: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        classes.entry((ix.maslov[x], ix.alexander[x])).or_default().push(x);
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| classes.get(&(ix.maslov[x] - 2 * ix.alexander[x], -ix.alexander[x])).cloned().unwrap_or_default())
        .collect();
    if let Some(x) = (0..n).find(|&x| candidates[x].is_empty()) {
        return Err(CfkError::NoFlip(format!(
            "no generator matches '{}' under (M, A) -> (M - 2A, -A)",
            c.generators[x].id
        )));
    }

    let mut search = Search { ix: &ix, candidates: &candidates, sigma: vec![usize::MAX; n], used: vec![false; n], leaves: 0 };
    match search.run(0) {
        Some(sigma) => Ok(sigma
            .iter()
            .enumerate()
            .map(|(x, &y)| Term { from: c.generators[x].id.clone(), to: c.generators[y].id.clone(), upower: -ix.alexander[x] })
            .collect()),
        None if search.leaves >= SEARCH_LIMIT => Err(CfkError::NoFlip("matching search limit reached".to_string())),
        None => Err(CfkError::NoFlip("no matching gives a chain homotopy equivalence".to_string())),
    }
}

struct Search<'a> {
    ix: &'a Indexed,
    candidates: &'a [Vec<usize>],
    sigma: Vec<usize>,
    used: Vec<bool>,
    leaves: usize,
}

impl Search<'_> {
    fn run(&mut self, x: usize) -> Option<Vec<usize>> {
        if self.leaves >= SEARCH_LIMIT {
            return None;
        }
        if x == self.sigma.len() {
            self.leaves += 1;
            let flip: Vec<IndexedTerm> = self
                .sigma
                .iter()
                .enumerate()
                .map(|(x, &y)| IndexedTerm { from: x, to: y, upower: -self.ix.alexander[x] })
                .collect();
            return flip_problems(self.ix, &flip, |_| String::new()).is_empty().then(|| self.sigma.clone());
        }
        for &y in &self.candidates[x] {
            if self.used[y] {
                continue;
            }
            self.used[y] = true;
            self.sigma[x] = y;
            if let Some(found) = self.run(x + 1) {
                return Some(found);
            }
            self.used[y] = false;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::{builtin, Generator};

    #[test]
    fn unknot_flip_is_identity() {
        let c = builtin("unknot").unwrap();
        assert_eq!(default_flip(&c).unwrap(), vec![Term::new("x", "x", 0)]);
    }

    #[test]
    fn trefoil_flip_swaps_ends() {
        let mut c = builtin("rh_trefoil").unwrap();
        c.flip = None;
        let mut f = default_flip(&c).unwrap();
        f.sort();
        assert_eq!(f, vec![Term::new("a", "c", -1), Term::new("b", "b", 0), Term::new("c", "a", 1)]);
    }

    #[test]
    fn figure_eight_flip_fixes_the_box_diagonal() {
        let mut c = builtin("figure_eight").unwrap();
        c.flip = None;
        let mut f = default_flip(&c).unwrap();
        f.sort();
        assert!(f.contains(&Term::new("b", "c", -1)));
        assert!(f.contains(&Term::new("c", "b", 1)));
        assert_eq!(f.len(), 5);
    }

    #[test]
    fn asymmetric_complex_has_no_flip() {
        let c = KnotComplex {
            name: "asym".into(),
            generators: vec![Generator { id: "x".into(), maslov: 0, alexander: 1 }],
            differential: vec![],
            flip: None,
        };
        assert!(matches!(default_flip(&c), Err(CfkError::NoFlip(_))));
    }

    #[test]
    fn restricted_cones_of_builtin_flips_are_acyclic() {
        for name in crate::cfk::BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            let ix = c.indexed().unwrap();
            let cone = restricted_cone(&ix, ix.flip.as_ref().unwrap()).unwrap();
            assert!(homology(&cone).unwrap().module.is_zero(), "{name}");
        }
    }
}
