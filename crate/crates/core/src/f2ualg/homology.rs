use super::matrix::{implied_power, Chain, MonomialMatrix};
use super::module::{GradedModule, TorsionSummand};
use super::snf::min_pivot;
use super::AlgebraError;

/// A finitely generated free graded complex over F2[U] with a degree −1
/// differential. Basis labels are the indices `0..len`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    d: MonomialMatrix,
}

impl ChainComplex {
    pub fn new(grades: Vec<i64>, terms: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self, AlgebraError> {
        let d = MonomialMatrix::from_terms(grades.clone(), grades, -1, terms)?;
        Ok(Self { d })
    }

    pub fn from_matrix(d: MonomialMatrix) -> Result<Self, AlgebraError> {
        if d.degree() != -1 || d.row_grades() != d.col_grades() {
            return Err(AlgebraError::DimensionMismatch);
        }
        Ok(Self { d })
    }

    pub fn len(&self) -> usize {
        self.d.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn grades(&self) -> &[i64] {
        self.d.row_grades()
    }

    pub fn differential(&self) -> &MonomialMatrix {
        &self.d
    }

    pub fn squares_to_zero(&self) -> bool {
        self.d.compose(&self.d).map(|dd| dd.is_zero()).unwrap_or(false)
    }

    pub fn is_cycle(&self, z: &Chain) -> Result<bool, AlgebraError> {
        Ok(self.d.apply(z)?.is_zero())
    }
}

/// Kind of a homology generator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GeneratorKind {
    Free,
    Torsion(u32),
}

/// A generator of homology: adapted basis vector `index`, which is a cycle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HomologyGenerator {
    pub index: usize,
    pub grading: i64,
    pub kind: GeneratorKind,
}

/// `d(source) = U^power · target` in the adapted basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cancellation {
    pub source: usize,
    pub target: usize,
    pub power: u32,
}

/// Result of reducing a complex to a direct sum of `F[U]`, `F[U] → F[U]`
/// pieces by graded changes of basis.
///
/// `basis` has the adapted basis vectors as columns (in original coordinates),
/// `inverse` converts original coordinates into adapted ones, and
/// `inverse · d · basis = reduced`.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    pub differential: MonomialMatrix,
    pub basis: MonomialMatrix,
    pub inverse: MonomialMatrix,
    pub reduced: MonomialMatrix,
    pub cancellations: Vec<Cancellation>,
    pub generators: Vec<HomologyGenerator>,
    pub module: GradedModule,
}

impl HomologyPresentation {
    pub fn grades(&self) -> &[i64] {
        self.differential.row_grades()
    }

    /// Cycle representing generator `g`, in original coordinates.
    pub fn representative(&self, g: &HomologyGenerator) -> Chain {
        Chain { grading: g.grading, support: self.basis.column(g.index) }
    }

    pub fn free_generators(&self) -> impl Iterator<Item = &HomologyGenerator> {
        self.generators.iter().filter(|g| g.kind == GeneratorKind::Free)
    }

    /// Coordinates of `z` in the adapted basis.
    pub fn coordinates(&self, z: &Chain) -> Result<Chain, AlgebraError> {
        self.inverse.apply(z)
    }

    /// Checks the recorded transforms against the stored differential.
    pub fn verify(&self) -> bool {
        let n = self.grades().len();
        let id = MonomialMatrix::identity(self.grades().to_vec());
        let Ok(pq) = self.basis.compose(&self.inverse) else { return false };
        if pq != id {
            return false;
        }
        let Ok(qdp) = self.inverse.compose(&self.differential).and_then(|m| m.compose(&self.basis)) else {
            return false;
        };
        if qdp != self.reduced {
            return false;
        }
        let mut expected: Vec<(usize, usize, u32)> =
            self.cancellations.iter().map(|c| (c.target, c.source, c.power)).collect();
        expected.sort_unstable();
        if qdp.entries().collect::<Vec<_>>() != expected {
            return false;
        }
        self.generators.iter().all(|g| g.index < n && self.differential.apply(&self.representative(g)).is_ok_and(|b| b.is_zero()))
    }
}

/// Homology of a free graded complex over F2[U] with basis tracking.
///
/// The complex is split one pivot at a time: an entry of globally minimal
/// U-power `d(e_q) ∋ U^k e_p` is isolated by graded basis changes into a
/// summand `e_q → U^k e_p`, which contributes `F[U]/U^k` when `k > 0` and
/// nothing when `k = 0`. Unpaired basis vectors are free generators.
pub fn homology(c: &ChainComplex) -> Result<HomologyPresentation, AlgebraError> {
    if !c.squares_to_zero() {
        return Err(AlgebraError::NotSquareZero);
    }
    let grades = c.grades().to_vec();
    let n = grades.len();
    let mut red = Reduction {
        d: c.d.clone(),
        basis: MonomialMatrix::identity(grades.clone()),
        inverse: MonomialMatrix::identity(grades.clone()),
    };
    let mut done = vec![false; n];
    let mut cancellations = Vec::new();

    while let Some((power, p, q)) = min_pivot(&red.d, &done, &done) {
        // make d(e_q) = U^k e_p exactly
        for i in red.d.column(q).iter_ones().filter(|&i| i != p).collect::<Vec<_>>() {
            red.add_basis(p, i);
        }
        // remove e_p from every other boundary
        for j in red.d.row(p).iter_ones().filter(|&j| j != q).collect::<Vec<_>>() {
            red.add_basis(j, q);
        }
        if !red.d.column(p).is_zero() || !red.d.row(q).is_zero() {
            return Err(AlgebraError::NotSquareZero);
        }
        done[p] = true;
        done[q] = true;
        cancellations.push(Cancellation { source: q, target: p, power });
    }

    let mut generators: Vec<HomologyGenerator> = (0..n)
        .filter(|&i| !done[i])
        .map(|i| HomologyGenerator { index: i, grading: grades[i], kind: GeneratorKind::Free })
        .collect();
    generators.extend(cancellations.iter().filter(|c| c.power > 0).map(|c| HomologyGenerator {
        index: c.target,
        grading: grades[c.target],
        kind: GeneratorKind::Torsion(c.power),
    }));

    let module = GradedModule::new(
        generators.iter().filter(|g| g.kind == GeneratorKind::Free).map(|g| g.grading).collect(),
        generators
            .iter()
            .filter_map(|g| match g.kind {
                GeneratorKind::Torsion(order) => Some(TorsionSummand { grading: g.grading, order }),
                GeneratorKind::Free => None,
            })
            .collect(),
    );

    Ok(HomologyPresentation {
        differential: c.d.clone(),
        basis: red.basis,
        inverse: red.inverse,
        reduced: red.d,
        cancellations,
        generators,
        module,
    })
}

struct Reduction {
    d: MonomialMatrix,
    basis: MonomialMatrix,
    inverse: MonomialMatrix,
}

impl Reduction {
    /// Replaces adapted basis vector `f_a` by `f_a + U^m f_b`, where
    /// `m = (gr f_b − gr f_a)/2` must be nonnegative.
    fn add_basis(&mut self, a: usize, b: usize) {
        debug_assert!(implied_power(self.d.row_grades()[b], self.d.row_grades()[a], 0).is_some());
        self.d.add_col(a, b);
        self.d.add_row(b, a);
        self.basis.add_col(a, b);
        self.inverse.add_row(b, a);
    }
}

/// Matrix of a map on homology in the generator bases of two presentations.
/// Entry `[t][s]` is the U-power of the coefficient of target generator `t`
/// in the image of source generator `s`, reduced modulo torsion orders.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedMap {
    pub degree: i64,
    pub source: Vec<HomologyGenerator>,
    pub target: Vec<HomologyGenerator>,
    pub entries: Vec<Vec<Option<u32>>>,
}

impl InducedMap {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Option::is_none)
    }

    pub fn entry(&self, t: usize, s: usize) -> Option<u32> {
        self.entries[t][s]
    }

    /// `self ∘ rhs`, requires `rhs.target == self.source`.
    pub fn compose(&self, rhs: &InducedMap) -> Result<InducedMap, AlgebraError> {
        if rhs.target != self.source {
            return Err(AlgebraError::DimensionMismatch);
        }
        let mut entries = vec![vec![None; rhs.source.len()]; self.target.len()];
        for (t, tg) in self.target.iter().enumerate() {
            for s in 0..rhs.source.len() {
                let mut parity = false;
                let mut power = None;
                for m in 0..self.source.len() {
                    if let (Some(a), Some(b)) = (self.entries[t][m], rhs.entries[m][s]) {
                        parity ^= true;
                        power = Some(a + b);
                    }
                }
                entries[t][s] = match (parity, power) {
                    (true, Some(k)) => reduce_power(k, tg.kind),
                    _ => None,
                };
            }
        }
        Ok(InducedMap { degree: self.degree + rhs.degree, source: rhs.source.clone(), target: self.target.clone(), entries })
    }

    /// The restriction to free generators, as a list of U-powers indexed
    /// `[target][source]`.
    pub fn free_part(&self) -> Vec<Vec<Option<u32>>> {
        let ts: Vec<usize> = (0..self.target.len()).filter(|&t| self.target[t].kind == GeneratorKind::Free).collect();
        let ss: Vec<usize> = (0..self.source.len()).filter(|&s| self.source[s].kind == GeneratorKind::Free).collect();
        ts.iter().map(|&t| ss.iter().map(|&s| self.entries[t][s]).collect()).collect()
    }
}

fn reduce_power(k: u32, kind: GeneratorKind) -> Option<u32> {
    match kind {
        GeneratorKind::Free => Some(k),
        GeneratorKind::Torsion(order) if k < order => Some(k),
        GeneratorKind::Torsion(_) => None,
    }
}

/// Map induced on homology by the chain map `f` from `src` to `dst`.
pub fn induced_map(f: &MonomialMatrix, src: &HomologyPresentation, dst: &HomologyPresentation) -> Result<InducedMap, AlgebraError> {
    if f.col_grades() != src.grades() || f.row_grades() != dst.grades() {
        return Err(AlgebraError::DimensionMismatch);
    }
    let fd = f.compose(&src.differential)?;
    let df = dst.differential.compose(f)?;
    if fd != df {
        return Err(AlgebraError::NotChainMap);
    }
    let coords = dst.inverse.compose(f)?.compose(&src.basis)?;
    let entries = dst
        .generators
        .iter()
        .map(|t| {
            src.generators
                .iter()
                .map(|s| {
                    if coords.bit(t.index, s.index) {
                        let k = implied_power(t.grading, s.grading, f.degree()).ok_or(AlgebraError::NotChainMap)?;
                        Ok(reduce_power(k, t.kind))
                    } else {
                        Ok(None)
                    }
                })
                .collect::<Result<Vec<_>, AlgebraError>>()
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(InducedMap { degree: f.degree(), source: src.generators.clone(), target: dst.generators.clone(), entries })
}

/// Decides whether the cycle `z` is a boundary, exactly, from its adapted
/// coordinates.
pub fn class_is_zero(p: &HomologyPresentation, z: &Chain) -> Result<bool, AlgebraError> {
    if !p.differential.apply(z)?.is_zero() {
        return Err(AlgebraError::NotACycle);
    }
    let coords = p.coordinates(z)?;
    for g in &p.generators {
        if !coords.support.get(g.index) {
            continue;
        }
        let k = implied_power(g.grading, z.grading, 0).ok_or(AlgebraError::InhomogeneousChain { index: g.index })?;
        if reduce_power(k, g.kind).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Homology class of a cycle: `(generator position, U-power)` pairs.
pub fn class_of(p: &HomologyPresentation, z: &Chain) -> Result<Vec<(usize, u32)>, AlgebraError> {
    if !p.differential.apply(z)?.is_zero() {
        return Err(AlgebraError::NotACycle);
    }
    let coords = p.coordinates(z)?;
    let mut out = Vec::new();
    for (pos, g) in p.generators.iter().enumerate() {
        if coords.support.get(g.index) {
            let k = implied_power(g.grading, z.grading, 0).ok_or(AlgebraError::InhomogeneousChain { index: g.index })?;
            if let Some(k) = reduce_power(k, g.kind) {
                out.push((pos, k));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_b() -> ChainComplex {
        // a (0), b (-1), c (-2); d b = U a + c
        ChainComplex::new(vec![0, -1, -2], [(0, 1, 1), (2, 1, 0)]).unwrap()
    }

    #[test]
    fn single_generator() {
        let c = ChainComplex::new(vec![0], []).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.module, GradedModule::new(vec![0], vec![]));
        assert!(h.verify());
    }

    #[test]
    fn trefoil_b_is_one_tower() {
        let h = homology(&trefoil_b()).unwrap();
        assert_eq!(h.module.free_rank(), 1);
        assert!(h.module.torsion().is_empty());
        assert_eq!(h.module.free(), &[0]);
        assert!(h.verify());
    }

    #[test]
    fn single_arrow_torsion() {
        // x (-3), y (0): d x = U^2 y
        let c = ChainComplex::new(vec![-3, 0], [(1, 0, 2)]).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.module, GradedModule::new(vec![], vec![TorsionSummand { grading: 0, order: 2 }]));
    }

    #[test]
    fn rejects_nonzero_square() {
        // x (1) -> y (0) -> z (-1)
        let c = ChainComplex::new(vec![1, 0, -1], [(1, 0, 0), (2, 1, 0)]).unwrap();
        assert!(matches!(homology(&c), Err(AlgebraError::NotSquareZero)));
    }

    #[test]
    fn identity_and_zero_maps() {
        let c = trefoil_b();
        let h = homology(&c).unwrap();
        let id = MonomialMatrix::identity(c.grades().to_vec());
        let m = induced_map(&id, &h, &h).unwrap();
        assert_eq!(m.free_part(), vec![vec![Some(0)]]);
        let zero = MonomialMatrix::zeros(c.grades().to_vec(), c.grades().to_vec(), 0);
        assert!(induced_map(&zero, &h, &h).unwrap().is_zero());
    }

    #[test]
    fn inclusion_of_a0_is_multiplication_by_u() {
        // A0 = {Ua (-2), b (-1), c (-2)} inside B = {a, b, c}
        let a0 = ChainComplex::new(vec![-2, -1, -2], [(0, 1, 0), (2, 1, 0)]).unwrap();
        let b = trefoil_b();
        let incl = MonomialMatrix::from_terms(b.grades().to_vec(), a0.grades().to_vec(), 0, [(0, 0, 1), (1, 1, 0), (2, 2, 0)]).unwrap();
        let ha = homology(&a0).unwrap();
        let hb = homology(&b).unwrap();
        let m = induced_map(&incl, &ha, &hb).unwrap();
        assert_eq!(m.free_part(), vec![vec![Some(1)]]);
    }

    #[test]
    fn non_chain_map_rejected() {
        let b = trefoil_b();
        let h = homology(&b).unwrap();
        // sends b to b only: d f(b) = Ua + c but f(d b) = 0
        let f = MonomialMatrix::from_terms(b.grades().to_vec(), b.grades().to_vec(), 0, [(1, 1, 0)]).unwrap();
        assert!(matches!(induced_map(&f, &h, &h), Err(AlgebraError::NotChainMap)));
    }

    #[test]
    fn boundaries_and_zero_are_zero_classes() {
        let b = trefoil_b();
        let h = homology(&b).unwrap();
        let grades = b.grades().to_vec();
        assert!(class_is_zero(&h, &Chain::zero(3, 0)).unwrap());
        let db = b.differential().apply(&Chain::basis(&grades, 1)).unwrap();
        assert!(class_is_zero(&h, &db).unwrap());
        assert!(!class_is_zero(&h, &Chain::basis(&grades, 0)).unwrap());
        assert!(matches!(class_is_zero(&h, &Chain::basis(&grades, 1)), Err(AlgebraError::NotACycle)));
    }
}
