use serde::{Deserialize, Serialize};

use super::{default_flip, validate, CfkError, Generator, KnotComplex, Term};

pub const BUILTIN_NAMES: [&str; 6] = ["unknot", "rh_trefoil", "lh_trefoil", "figure_eight", "t25", "t34"];

/// Symmetrized Alexander polynomial of an L-space knot, coefficients listed
/// from the top degree `t^d` down to `t^-d`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StaircaseSpec {
    pub coefficients: Vec<i64>,
}

impl StaircaseSpec {
    pub fn new(coefficients: Vec<i64>) -> Self {
        Self { coefficients }
    }

    /// Exponents of the nonzero terms, top first, after checking that the
    /// polynomial is symmetric with alternating unit coefficients summing to 1.
    fn exponents(&self) -> Result<Vec<i64>, CfkError> {
        let c = &self.coefficients;
        if c.len() % 2 == 0 {
            return Err(CfkError::NonRealizable("coefficient list must have odd length".into()));
        }
        if c.iter().ne(c.iter().rev()) {
            return Err(CfkError::NonRealizable("coefficients are not symmetric".into()));
        }
        let top = (c.len() / 2) as i64;
        let nonzero: Vec<(i64, i64)> = c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(k, &v)| (top - k as i64, v)).collect();
        for (pos, &(_, v)) in nonzero.iter().enumerate() {
            let expected = if pos % 2 == 0 { 1 } else { -1 };
            if v != expected {
                return Err(CfkError::NonRealizable("nonzero coefficients must alternate +1, -1, ... starting at +1".into()));
            }
        }
        if nonzero.iter().map(|&(_, v)| v).sum::<i64>() != 1 {
            return Err(CfkError::NonRealizable("polynomial does not evaluate to 1 at t = 1".into()));
        }
        Ok(nonzero.into_iter().map(|(e, _)| e).collect())
    }
}

/// Staircase complex of an L-space knot.
///
/// Generators `x0, x1, …` sit at the exponents of the nonzero terms. Each odd
/// generator has a horizontal arrow to the previous one and a vertical arrow
/// to the next; the flip is the reflection `x_k ↔ x_(2m−k)`.
pub fn staircase_from_lspace(spec: &StaircaseSpec, name: &str) -> Result<KnotComplex, CfkError> {
    let exps = spec.exponents()?;
    let mut maslov = vec![0i64; exps.len()];
    let mut differential = Vec::new();
    for k in 1..exps.len() {
        if k % 2 == 1 {
            let len = exps[k - 1] - exps[k];
            maslov[k] = maslov[k - 1] - 2 * len + 1;
            differential.push(Term::new(&format!("x{k}"), &format!("x{}", k - 1), len));
        } else {
            maslov[k] = maslov[k - 1] - 1;
            differential.push(Term::new(&format!("x{}", k - 1), &format!("x{k}"), 0));
        }
    }
    let last = exps.len() - 1;
    let generators = exps
        .iter()
        .zip(&maslov)
        .enumerate()
        .map(|(k, (&a, &m))| Generator { id: format!("x{k}"), maslov: m, alexander: a })
        .collect();
    let flip = exps.iter().enumerate().map(|(k, &a)| Term::new(&format!("x{k}"), &format!("x{}", last - k), -a)).collect();
    let c = KnotComplex { name: name.to_string(), generators, differential, flip: Some(flip) };
    validate(&c)?;
    Ok(c)
}

fn gens(spec: &[(&str, i64, i64)]) -> Vec<Generator> {
    spec.iter().map(|&(id, m, a)| Generator { id: id.into(), maslov: m, alexander: a }).collect()
}

fn with_default_flip(mut c: KnotComplex) -> Result<KnotComplex, CfkError> {
    c.flip = Some(default_flip(&c)?);
    validate(&c)?;
    Ok(c)
}

/// A validated library complex with its flip map populated.
pub fn builtin(name: &str) -> Result<KnotComplex, CfkError> {
    match name {
        "unknot" => with_default_flip(KnotComplex { name: name.into(), generators: gens(&[("x", 0, 0)]), differential: vec![], flip: None }),
        "rh_trefoil" => with_default_flip(KnotComplex {
            name: name.into(),
            generators: gens(&[("a", 0, 1), ("b", -1, 0), ("c", -2, -1)]),
            differential: vec![Term::new("b", "a", 1), Term::new("b", "c", 0)],
            flip: None,
        }),
        "lh_trefoil" => with_default_flip(KnotComplex {
            name: name.into(),
            generators: gens(&[("a", 0, -1), ("b", 1, 0), ("c", 2, 1)]),
            differential: vec![Term::new("a", "b", 1), Term::new("c", "b", 0)],
            flip: None,
        }),
        // isolated generator x0 plus the 1x1 box a -> U b + c, b -> e, c -> U e
        "figure_eight" => with_default_flip(KnotComplex {
            name: name.into(),
            generators: gens(&[("x0", 0, 0), ("a", 0, 0), ("b", 1, 1), ("c", -1, -1), ("e", 0, 0)]),
            differential: vec![Term::new("a", "b", 1), Term::new("a", "c", 0), Term::new("b", "e", 0), Term::new("c", "e", 1)],
            flip: None,
        }),
        "t25" => staircase_from_lspace(&StaircaseSpec::new(vec![1, -1, 1, -1, 1]), name),
        "t34" => staircase_from_lspace(&StaircaseSpec::new(vec![1, -1, 0, 1, 0, -1, 1]), name),
        other => Err(CfkError::UnknownBuiltin(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_validates_with_flip() {
        for name in BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            assert!(c.flip.is_some(), "{name}");
            assert_eq!(validate(&c), Ok(()), "{name}");
        }
        assert!(matches!(builtin("8_20"), Err(CfkError::UnknownBuiltin(_))));
    }

    #[test]
    fn unknot_has_one_generator() {
        let c = builtin("unknot").unwrap();
        assert_eq!(c.generators, gens(&[("x", 0, 0)]));
    }

    #[test]
    fn trefoil_staircase_matches_builtin() {
        let s = staircase_from_lspace(&StaircaseSpec::new(vec![1, -1, 1]), "rh_trefoil").unwrap();
        let b = builtin("rh_trefoil").unwrap();
        assert_eq!(s.relabeled_by_gradings(), b.relabeled_by_gradings());
    }

    #[test]
    fn constant_polynomial_is_the_unknot() {
        let s = staircase_from_lspace(&StaircaseSpec::new(vec![1]), "unknot").unwrap();
        assert_eq!(s.relabeled_by_gradings(), builtin("unknot").unwrap().relabeled_by_gradings());
    }

    #[test]
    fn t25_staircase() {
        let c = builtin("t25").unwrap();
        let ma: Vec<(i64, i64)> = c.generators.iter().map(|g| (g.maslov, g.alexander)).collect();
        assert_eq!(ma, vec![(0, 2), (-1, 1), (-2, 0), (-3, -1), (-4, -2)]);
    }

    #[test]
    fn t34_staircase_gradings() {
        let c = builtin("t34").unwrap();
        let ma: Vec<(i64, i64)> = c.generators.iter().map(|g| (g.maslov, g.alexander)).collect();
        assert_eq!(ma, vec![(0, 3), (-1, 2), (-2, 0), (-5, -2), (-6, -3)]);
    }

    #[test]
    fn non_realizable_polynomials() {
        for bad in [vec![1, 1, 1], vec![1, -1], vec![1, 0, -1, 0, 1, 0], vec![-1, 3, -1], vec![1, -2, 1], vec![2, -3, 2]] {
            assert!(staircase_from_lspace(&StaircaseSpec::new(bad.clone()), "bad").is_err(), "{bad:?}");
        }
    }

    #[test]
    fn mirror_of_rh_is_lh() {
        let rh = builtin("rh_trefoil").unwrap();
        let lh = builtin("lh_trefoil").unwrap();
        assert!(rh.mirror().same_structure(&lh));
        assert_eq!(validate(&rh.mirror()), Ok(()));
    }

    #[test]
    fn mirror_is_an_involution_on_the_library() {
        for name in BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            assert_eq!(validate(&c.mirror()), Ok(()), "{name}");
            assert!(c.mirror().mirror().same_structure(&c), "{name}");
        }
        let u = builtin("unknot").unwrap();
        assert!(u.mirror().same_structure(&u));
    }
}
