use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::flip::flip_problems;
use super::{CfkError, Indexed, IndexedTerm, KnotComplex};

/// Kinds of invariant failures, in reporting precedence order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Structure,
    Filtration,
    Grading,
    DSquared,
    Symmetry,
    Flip,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub name: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// The highest-precedence violation as an error.
    pub fn first_error(&self) -> Option<CfkError> {
        self.violations.iter().min_by_key(|v| v.kind).map(|v| {
            let m = v.message.clone();
            match v.kind {
                ViolationKind::Structure => CfkError::Structure(m),
                ViolationKind::Filtration => CfkError::Filtration(m),
                ViolationKind::Grading => CfkError::Grading(m),
                ViolationKind::DSquared => CfkError::DSquaredNonzero(m),
                ViolationKind::Symmetry => CfkError::Symmetry(m),
                ViolationKind::Flip => CfkError::InvalidFlip(m),
            }
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "{}: valid", self.name);
        }
        writeln!(f, "{}: {} violation(s)", self.name, self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  [{:?}] {}", v.kind, v.message)?;
        }
        Ok(())
    }
}

/// `then ∘ first` on generators, as parities of `(from, to, power)` terms.
pub(crate) fn compose_terms(first: &[IndexedTerm], then: &[IndexedTerm], n: usize) -> BTreeMap<(usize, usize, i64), bool> {
    let mut out_of: Vec<Vec<&IndexedTerm>> = vec![Vec::new(); n];
    for t in then {
        out_of[t.from].push(t);
    }
    let mut acc = BTreeMap::new();
    for a in first {
        for b in &out_of[a.to] {
            *acc.entry((a.from, b.to, a.upower + b.upower)).or_insert(false) ^= true;
        }
    }
    acc.retain(|_, v| *v);
    acc
}

fn term_label(c: &KnotComplex, t: &IndexedTerm) -> String {
    format!("{} -> U^{} {}", c.generators[t.from].id, t.upower, c.generators[t.to].id)
}

/// Checks every invariant of a complex and lists each violation.
pub fn validation_report(c: &KnotComplex) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |kind, message: String| violations.push(Violation { kind, message });
    let ix: Indexed = match c.indexed() {
        Ok(ix) => ix,
        Err(e) => {
            push(ViolationKind::Structure, e.to_string());
            return ValidationReport { name: c.name.clone(), violations };
        }
    };
    let (m, a) = (&ix.maslov, &ix.alexander);

    let mut local_ok = true;
    for t in &ix.differential {
        if t.upower < 0 {
            local_ok = false;
            push(ViolationKind::Filtration, format!("{}: negative U-power", term_label(c, t)));
        } else if a[t.to] - t.upower > a[t.from] {
            local_ok = false;
            push(ViolationKind::Filtration, format!("{}: raises the j filtration", term_label(c, t)));
        }
        if m[t.to] - 2 * t.upower != m[t.from] - 1 {
            local_ok = false;
            push(
                ViolationKind::Grading,
                format!("{}: Maslov {} -> {} is not a drop by one", term_label(c, t), m[t.from], m[t.to] - 2 * t.upower),
            );
        }
    }

    let dd = compose_terms(&ix.differential, &ix.differential, ix.len());
    for &(x, z, p) in dd.keys() {
        push(ViolationKind::DSquared, format!("d^2({}) contains U^{} {}", c.generators[x].id, p, c.generators[z].id));
    }

    let mut lhs: Vec<(i64, i64)> = m.iter().zip(a).map(|(&mm, &aa)| (mm, aa)).collect();
    let mut rhs: Vec<(i64, i64)> = m.iter().zip(a).map(|(&mm, &aa)| (mm - 2 * aa, -aa)).collect();
    lhs.sort_unstable();
    rhs.sort_unstable();
    if lhs != rhs {
        push(ViolationKind::Symmetry, "generator gradings are not symmetric under (M, A) -> (M - 2A, -A)".to_string());
    }

    if let Some(flip) = &ix.flip {
        if local_ok && dd.is_empty() {
            for p in flip_problems(&ix, flip, |t| term_label(c, t)) {
                push(ViolationKind::Flip, p);
            }
        } else {
            push(ViolationKind::Flip, "flip not checked: differential is invalid".to_string());
        }
    }
    ValidationReport { name: c.name.clone(), violations }
}

pub fn validate(c: &KnotComplex) -> Result<(), CfkError> {
    match validation_report(c).first_error() {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::{builtin, Generator, Term};

    fn gens(spec: &[(&str, i64, i64)]) -> Vec<Generator> {
        spec.iter().map(|&(id, m, a)| Generator { id: id.into(), maslov: m, alexander: a }).collect()
    }

    #[test]
    fn unknot_is_valid() {
        let c = KnotComplex { name: "unknot".into(), generators: gens(&[("x", 0, 0)]), differential: vec![], flip: None };
        assert!(validation_report(&c).is_valid());
    }

    #[test]
    fn hand_checked_trefoil_is_valid() {
        let c = KnotComplex {
            name: "t".into(),
            generators: gens(&[("a", 0, 1), ("b", -1, 0), ("c", -2, -1)]),
            differential: vec![Term::new("b", "a", 1), Term::new("b", "c", 0)],
            flip: None,
        };
        assert_eq!(validate(&c), Ok(()));
    }

    #[test]
    fn negative_power_is_a_filtration_violation() {
        let mut c = builtin("rh_trefoil").unwrap();
        c.flip = None;
        c.differential[0].upower = -1;
        assert!(matches!(validate(&c), Err(CfkError::Filtration(_))));
    }

    #[test]
    fn grading_violation() {
        let c = KnotComplex {
            name: "bad".into(),
            generators: gens(&[("x", 0, 0), ("y", 0, 0)]),
            differential: vec![Term::new("x", "y", 0)],
            flip: None,
        };
        let r = validation_report(&c);
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Grading));
        assert!(matches!(validate(&c), Err(CfkError::Grading(_))));
    }

    #[test]
    fn d_squared_violation() {
        // x -> y -> z with everything graded correctly
        let c = KnotComplex {
            name: "dd".into(),
            generators: gens(&[("x", 1, 0), ("y", 0, 0), ("z", -1, 0)]),
            differential: vec![Term::new("x", "y", 0), Term::new("y", "z", 0)],
            flip: None,
        };
        assert!(matches!(validate(&c), Err(CfkError::DSquaredNonzero(_))));
    }

    #[test]
    fn asymmetric_gradings() {
        let c = KnotComplex { name: "asym".into(), generators: gens(&[("x", 0, 1)]), differential: vec![], flip: None };
        assert!(matches!(validate(&c), Err(CfkError::Symmetry(_))));
    }

    #[test]
    fn broken_flip_is_reported() {
        let mut c = builtin("rh_trefoil").unwrap();
        // drop one flip term: no longer a chain map
        c.flip.as_mut().unwrap().pop();
        assert!(matches!(validate(&c), Err(CfkError::InvalidFlip(_))));
    }

    #[test]
    fn report_lists_every_violation() {
        let c = KnotComplex {
            name: "multi".into(),
            generators: gens(&[("x", 0, 0), ("y", 0, 0), ("z", 5, 2)]),
            differential: vec![Term::new("x", "y", 0), Term::new("x", "y", -3)],
            flip: None,
        };
        let r = validation_report(&c);
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::Grading));
        assert!(kinds.contains(&ViolationKind::Filtration));
        assert!(kinds.contains(&ViolationKind::Symmetry));
        assert!(matches!(r.first_error(), Some(CfkError::Filtration(_))));
    }
}
