//! Finite models of the full knot Floer complex.
//!
//! A model lists generators with Maslov and Alexander gradings and a
//! differential whose terms are `from → U^upower · to`. The `(i, j)` filtration
//! level of `U^a · x` is `(−a, A(x) − a)`. An optional flip map realizes the
//! identification of `C{j ≤ 0}` with `C{i ≤ 0}` needed by the `h_s` maps.

mod flip;
mod library;
mod validate;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use flip::default_flip;
pub use library::{builtin, staircase_from_lspace, StaircaseSpec, BUILTIN_NAMES};
pub use validate::{validate, validation_report, ValidationReport, Violation, ViolationKind};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub maslov: i64,
    pub alexander: i64,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Term {
    pub from: String,
    pub to: String,
    pub upower: i64,
}

impl Term {
    pub fn new(from: &str, to: &str, upower: i64) -> Self {
        Self { from: from.to_string(), to: to.to_string(), upower }
    }
}

/// The complex file format.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotComplex {
    pub name: String,
    pub generators: Vec<Generator>,
    pub differential: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip: Option<Vec<Term>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfkError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed generator list: {0}")]
    Structure(String),
    #[error("differential does not square to zero: {0}")]
    DSquaredNonzero(String),
    #[error("grading violation: {0}")]
    Grading(String),
    #[error("filtration violation: {0}")]
    Filtration(String),
    #[error("Alexander symmetry violation: {0}")]
    Symmetry(String),
    #[error("invalid flip map: {0}")]
    InvalidFlip(String),
    #[error("no valid symmetric matching for a flip map: {0}")]
    NoFlip(String),
    #[error("unknown builtin knot '{0}'")]
    UnknownBuiltin(String),
    #[error("staircase not realizable: {0}")]
    NonRealizable(String),
}

/// A term with generator ids resolved to indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IndexedTerm {
    pub from: usize,
    pub to: usize,
    pub upower: i64,
}

/// Index-resolved view of a complex used by all computations.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub maslov: Vec<i64>,
    pub alexander: Vec<i64>,
    pub differential: Vec<IndexedTerm>,
    pub flip: Option<Vec<IndexedTerm>>,
}

impl Indexed {
    pub fn len(&self) -> usize {
        self.maslov.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maslov.is_empty()
    }
}

impl KnotComplex {
    pub fn parse(text: &str) -> Result<Self, CfkError> {
        serde_json::from_str(text).map_err(|e| CfkError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }

    pub fn id_index(&self) -> Result<HashMap<&str, usize>, CfkError> {
        let mut index = HashMap::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if index.insert(g.id.as_str(), i).is_some() {
                return Err(CfkError::Structure(format!("duplicate generator id '{}'", g.id)));
            }
        }
        Ok(index)
    }

    /// Resolves ids; does not check any of the algebraic invariants.
    pub fn indexed(&self) -> Result<Indexed, CfkError> {
        let index = self.id_index()?;
        let resolve = |terms: &[Term], what: &str| -> Result<Vec<IndexedTerm>, CfkError> {
            terms
                .iter()
                .map(|t| {
                    let from = *index
                        .get(t.from.as_str())
                        .ok_or_else(|| CfkError::Structure(format!("{what} term refers to unknown generator '{}'", t.from)))?;
                    let to = *index
                        .get(t.to.as_str())
                        .ok_or_else(|| CfkError::Structure(format!("{what} term refers to unknown generator '{}'", t.to)))?;
                    Ok(IndexedTerm { from, to, upower: t.upower })
                })
                .collect()
        };
        Ok(Indexed {
            maslov: self.generators.iter().map(|g| g.maslov).collect(),
            alexander: self.generators.iter().map(|g| g.alexander).collect(),
            differential: resolve(&self.differential, "differential")?,
            flip: self.flip.as_deref().map(|f| resolve(f, "flip")).transpose()?,
        })
    }

    pub fn has_flip(&self) -> bool {
        self.flip.is_some()
    }

    /// Seifert genus of the model, taken as the largest `|A|`.
    pub fn genus(&self) -> u32 {
        self.generators.iter().map(|g| g.alexander.unsigned_abs() as u32).max().unwrap_or(0)
    }

    /// Largest U-power appearing in the differential.
    pub fn max_upower(&self) -> u32 {
        self.differential.iter().map(|t| t.upower.max(0) as u32).max().unwrap_or(0)
    }

    /// Sorted copy: generators by id, terms lexicographically.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        c.generators.sort_by(|a, b| a.id.cmp(&b.id));
        c.differential.sort();
        if let Some(f) = c.flip.as_mut() {
            f.sort();
        }
        c
    }

    /// Equality of everything except the name, after canonical sorting.
    pub fn same_structure(&self, other: &Self) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a.generators == b.generators && a.differential == b.differential && a.flip == b.flip
    }

    /// Renames generators by their position in `(maslov, alexander)` order.
    /// Only meaningful when no two generators share both gradings.
    pub fn relabeled_by_gradings(&self) -> Option<Self> {
        let mut order: Vec<usize> = (0..self.generators.len()).collect();
        order.sort_by_key(|&i| (self.generators[i].maslov, self.generators[i].alexander));
        if order
            .windows(2)
            .any(|w| (self.generators[w[0]].maslov, self.generators[w[0]].alexander) == (self.generators[w[1]].maslov, self.generators[w[1]].alexander))
        {
            return None;
        }
        let rename: HashMap<&str, String> =
            order.iter().enumerate().map(|(pos, &i)| (self.generators[i].id.as_str(), format!("g{pos}"))).collect();
        let map_terms = |ts: &[Term]| -> Vec<Term> {
            ts.iter().map(|t| Term { from: rename[t.from.as_str()].clone(), to: rename[t.to.as_str()].clone(), upower: t.upower }).collect()
        };
        Some(
            Self {
                name: self.name.clone(),
                generators: self
                    .generators
                    .iter()
                    .map(|g| Generator { id: rename[g.id.as_str()].clone(), ..g.clone() })
                    .collect(),
                differential: map_terms(&self.differential),
                flip: self.flip.as_deref().map(map_terms),
            }
            .canonical(),
        )
    }

    /// The mirror knot: dual complex with gradings negated and arrows
    /// reversed. Flip terms are reversed the same way.
    pub fn mirror(&self) -> Self {
        let name = match self.name.strip_prefix("mirror(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("mirror({})", self.name),
        };
        let rev = |ts: &[Term]| -> Vec<Term> { ts.iter().map(|t| Term { from: t.to.clone(), to: t.from.clone(), upower: t.upower }).collect() };
        Self {
            name,
            generators: self
                .generators
                .iter()
                .map(|g| Generator { id: g.id.clone(), maslov: -g.maslov, alexander: -g.alexander })
                .collect(),
            differential: rev(&self.differential),
            flip: self.flip.as_deref().map(rev),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_unknown_fields_and_bad_json() {
        assert!(matches!(KnotComplex::parse("{"), Err(CfkError::Parse(_))));
        let extra = r#"{"name":"u","generators":[],"differential":[],"bogus":1}"#;
        assert!(matches!(KnotComplex::parse(extra), Err(CfkError::Parse(_))));
    }

    #[test]
    fn flip_is_optional_in_the_file_format() {
        let text = r#"{"name":"unknot","generators":[{"id":"x","maslov":0,"alexander":0}],"differential":[]}"#;
        let c = KnotComplex::parse(text).unwrap();
        assert!(c.flip.is_none());
        assert!(!c.to_json().contains("flip"));
        assert_eq!(KnotComplex::parse(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn duplicate_and_unknown_ids() {
        let dup = KnotComplex {
            name: "d".into(),
            generators: vec![Generator { id: "x".into(), maslov: 0, alexander: 0 }; 2],
            differential: vec![],
            flip: None,
        };
        assert!(matches!(dup.indexed(), Err(CfkError::Structure(_))));
        let unk = KnotComplex {
            name: "u".into(),
            generators: vec![Generator { id: "x".into(), maslov: 0, alexander: 0 }],
            differential: vec![Term::new("x", "y", 0)],
            flip: None,
        };
        assert!(matches!(unk.indexed(), Err(CfkError::Structure(_))));
    }

    #[test]
    fn genus_of_builtins() {
        assert_eq!(builtin("unknot").unwrap().genus(), 0);
        assert_eq!(builtin("rh_trefoil").unwrap().genus(), 1);
        assert_eq!(builtin("figure_eight").unwrap().genus(), 1);
        assert_eq!(builtin("t25").unwrap().genus(), 2);
        assert_eq!(builtin("t34").unwrap().genus(), 3);
    }

    #[test]
    fn mirror_names_round_trip() {
        let t = builtin("rh_trefoil").unwrap();
        assert_eq!(t.mirror().name, "mirror(rh_trefoil)");
        assert_eq!(t.mirror().mirror(), t);
    }
}
