//! Two-handle cobordism maps read off the mapping cone, the vanishing check
//! driven by `d(S³₁(K))`, and the filling obstruction verdict.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cfk::KnotComplex;
use crate::f2ualg::{class_of, homology, GeneratorKind};
use crate::surgery::{self, PieceKind, SurgeryError};

/// Spin^c structure `t_s` on the trace `W_n(K)` with `⟨c₁(t_s), [Σ̂]⟩ = 2s + n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpincLabel {
    pub n: i64,
    pub s: i64,
}

impl SpincLabel {
    pub fn evaluation(&self) -> i64 {
        2 * self.s + self.n
    }

    pub fn c1_squared(&self) -> Ratio<i64> {
        Ratio::new(self.evaluation().pow(2), self.n)
    }

    /// The structure whose map is the inclusion of the cone column `B_t`.
    /// Column `t` pairs to `n − 2t`, which is `2s + n` at `s = −t`.
    pub fn for_column(n: i64, t: i64) -> Self {
        Self { n, s: -t }
    }

    pub fn grading_shift(&self) -> Ratio<i64> {
        grading_shift(self.n, self.s)
    }
}

/// `(c₁² − 2χ − 3σ)/4` for the trace, `χ = σ = 1`.
pub fn grading_shift(n: i64, s: i64) -> Ratio<i64> {
    let e = 2 * s + n;
    Ratio::new(e * e - 5 * n, 4 * n)
}

/// Image of the generator of `H(B_s)` in the cone homology of its label.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HandleMapClass {
    pub n: i64,
    pub s: i64,
    pub spinc: SpincLabel,
    /// Whether `B_s` is one of the kept columns.
    pub in_window: bool,
    /// `(generator position, U-power)` in the homology of label `s mod n`.
    pub class: Vec<(usize, u32)>,
    pub is_zero: bool,
    /// Absolute grading of the image, i.e. of `1 ∈ HF⁻(S³)` shifted.
    pub grading: Ratio<i64>,
}

/// The map `HF⁻(S³) → HF⁻(S³_n(K))` of the two-handle cobordism in the
/// structure belonging to column `B_s`, evaluated on the generator.
///
/// Columns outside the truncation window lie in the acyclic kernel of the
/// projection to the truncated cone, so their maps vanish.
pub fn handle_map_class(c: &KnotComplex, n: i64, s: i64) -> Result<HandleMapClass, SurgeryError> {
    let cone = surgery::build_cone(c, n)?;
    let spinc = SpincLabel::for_column(n, s);
    let grading = surgery::shift_b(n, s);
    let label = cone.label(s);
    let Some(piece) = label.piece(PieceKind::B, s) else {
        return Ok(HandleMapClass { n, s, spinc, in_window: false, class: vec![], is_zero: true, grading });
    };
    let b = surgery::build_b(c)?;
    let bh = homology(&b.complex)?;
    let g = bh
        .generators
        .iter()
        .find(|g| g.kind == GeneratorKind::Free)
        .ok_or_else(|| SurgeryError::Inconsistent("H(B) has no free generator".into()))?;
    let z = bh.representative(g).embed(label.complex.len(), piece.start, piece.shift);
    let p = homology(&label.complex)?;
    let class = class_of(&p, &z)?;
    Ok(HandleMapClass { n, s, spinc, in_window: true, is_zero: class.is_empty(), class, grading })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Zero,
    Nonzero,
    Undetermined,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Read off the cone using the flip map.
    Direct,
    /// Predicted from `d(S³₁(K))` alone.
    Theorem,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SEntry {
    pub s: i64,
    pub verdict: Verdict,
    pub mode: Mode,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VanishingReport {
    pub knot: String,
    pub n: i64,
    pub d1: i64,
    pub per_s: Vec<SEntry>,
    pub conclusion: String,
}

impl VanishingReport {
    pub fn has_direct(&self) -> bool {
        self.per_s.iter().any(|e| e.mode == Mode::Direct)
    }

    /// All direct verdicts zero, or (without a flip) the theorem applies.
    pub fn all_zero(&self) -> bool {
        let mode = if self.has_direct() { Mode::Direct } else { Mode::Theorem };
        self.per_s.iter().filter(|e| e.mode == mode).all(|e| e.verdict == Verdict::Zero)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Columns examined by the report: the window plus one on each side.
pub fn report_range(c: &KnotComplex, n: i64) -> (i64, i64) {
    let half = surgery::truncation_half_width(c.genus(), n) + 1;
    (-half, half)
}

pub fn vanishing_report(c: &KnotComplex, n: i64) -> Result<VanishingReport, SurgeryError> {
    if n < 1 {
        return Err(SurgeryError::BadCoefficient(n));
    }
    let d1 = surgery::d_one(c)?;
    let theorem = if d1 == 0 { Verdict::Zero } else { Verdict::Undetermined };
    let (lo, hi) = report_range(c, n);
    let mut per_s = Vec::new();
    for s in lo..=hi {
        if c.has_flip() {
            let class = handle_map_class(c, n, s)?;
            let verdict = if class.is_zero { Verdict::Zero } else { Verdict::Nonzero };
            if theorem == Verdict::Zero && verdict != Verdict::Zero {
                return Err(SurgeryError::Inconsistent(format!(
                    "d(S³₁) = 0 but the map for column {s} of {n}-surgery is nonzero"
                )));
            }
            per_s.push(SEntry { s, verdict, mode: Mode::Direct });
        }
        per_s.push(SEntry { s, verdict: theorem, mode: Mode::Theorem });
    }
    let direct_zero = per_s.iter().filter(|e| e.mode == Mode::Direct).all(|e| e.verdict == Verdict::Zero);
    let conclusion = match (d1 == 0, c.has_flip()) {
        (true, true) => "d(S3_1(K)) = 0: every two-handle map of the trace vanishes; direct cone computation agrees".to_string(),
        (true, false) => "d(S3_1(K)) = 0: every two-handle map of the trace vanishes (no flip map, direct check skipped)".to_string(),
        (false, true) if direct_zero => format!(
            "d(S3_1(K)) = {d1}: vanishing theorem does not apply; direct computation finds every map in the window zero"
        ),
        (false, true) => format!("d(S3_1(K)) = {d1}: vanishing theorem does not apply; some maps are nonzero"),
        (false, false) => format!("d(S3_1(K)) = {d1}: vanishing theorem does not apply and no flip map is available"),
    };
    Ok(VanishingReport { knot: c.name.clone(), n, d1, per_s, conclusion })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Conclusion {
    Obstructed,
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::Obstructed => "OBSTRUCTED",
            Conclusion::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub knot: String,
    pub n: i64,
    pub d1: i64,
    pub conclusion: Conclusion,
    pub explanation: String,
    pub report: VanishingReport,
}

impl ObstructionVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

/// Whether the trace `W_n(K)` can be ruled out as a symplectic filling of
/// `S³_n(K)`.
pub fn obstruct_filling(c: &KnotComplex, n: i64) -> Result<ObstructionVerdict, SurgeryError> {
    let report = vanishing_report(c, n)?;
    let d1 = report.d1;
    let (conclusion, mut explanation) = if d1 == 0 {
        (
            Conclusion::Obstructed,
            format!(
                "d(S3_1(K)) = 0, so the cobordism maps of W_{n}(K) vanish in every Spin^c structure. \
                 A symplectic filling embeds in a closed symplectic 4-manifold, whose mixed invariant is \
                 nonzero in the canonical Spin^c structure. That invariant factors through the map of the \
                 filling, which is zero. So W_{n}(K) is not a symplectic filling of S3_{n}(K)."
            ),
        )
    } else {
        (
            Conclusion::Inconclusive,
            format!("d(S3_1(K)) = {d1} is nonzero, so the vanishing argument gives no information about W_{n}(K)."),
        )
    };
    if d1 == 0 && c.generators.len() == 1 {
        explanation.push_str(
            " This rules out the trace only: the surgered manifold may still carry fillable contact structures with other fillings.",
        );
    }
    Ok(ObstructionVerdict { knot: c.name.clone(), n, d1, conclusion, explanation, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::{builtin, BUILTIN_NAMES};

    #[test]
    fn shifts() {
        assert_eq!(grading_shift(1, 0), Ratio::from_integer(-1));
        assert_eq!(grading_shift(1, -1), Ratio::from_integer(-1));
        assert_eq!(grading_shift(2, 0), Ratio::new(-3, 4));
        for s in -5..5 {
            assert_eq!(grading_shift(1, s), grading_shift(1, -1 - s));
            for n in 1..5 {
                assert_eq!(SpincLabel::for_column(n, s).grading_shift(), surgery::shift_b(n, s));
            }
        }
        assert_eq!(SpincLabel { n: 1, s: 3 }.evaluation(), 7);
        assert_eq!(SpincLabel { n: 2, s: 1 }.c1_squared(), Ratio::new(8, 1));
    }

    #[test]
    fn plus_one_maps_vanish_for_small_knots() {
        // b2+ = 1 kills the map on HF^infinity, and these targets have no torsion
        for name in ["unknot", "rh_trefoil"] {
            let c = builtin(name).unwrap();
            for s in -2..=2 {
                assert!(handle_map_class(&c, 1, s).unwrap().is_zero, "{name} s={s}");
            }
        }
    }

    #[test]
    fn in_window_class_is_computed() {
        let c = builtin("figure_eight").unwrap();
        let m = handle_map_class(&c, 2, 1).unwrap();
        assert!(m.in_window);
        assert!(m.is_zero);
        assert_eq!(m.grading, surgery::shift_b(2, 1));
        assert!(!handle_map_class(&c, 3, 1).unwrap().in_window);
    }

    #[test]
    fn torus_knot_maps_hit_torsion() {
        let t = builtin("t25").unwrap();
        for s in [0, 1] {
            let m = handle_map_class(&t, 1, s).unwrap();
            assert!(m.in_window && !m.is_zero, "s={s}");
        }
        assert!(handle_map_class(&t, 3, 1).unwrap().is_zero);
        let r = vanishing_report(&builtin("t34").unwrap(), 4).unwrap();
        let nonzero: Vec<i64> = r.per_s.iter().filter(|e| e.verdict == Verdict::Nonzero).map(|e| e.s).collect();
        assert_eq!(nonzero, vec![2]);
    }

    #[test]
    fn d1_zero_means_all_zero() {
        for name in BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            for n in 1..=3 {
                let r = vanishing_report(&c, n).unwrap();
                if r.d1 == 0 {
                    assert!(r.all_zero(), "{name} n={n}");
                }
            }
        }
    }

    #[test]
    fn report_shape_and_json() {
        let r = vanishing_report(&builtin("lh_trefoil").unwrap(), 2).unwrap();
        assert_eq!(r.d1, 0);
        assert!(r.has_direct());
        let (lo, hi) = report_range(&builtin("lh_trefoil").unwrap(), 2);
        assert_eq!(r.per_s.len(), 2 * (hi - lo + 1) as usize);
        let back: VanishingReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn theorem_mode_only_without_flip() {
        let mut c = builtin("figure_eight").unwrap();
        c.flip = None;
        let r = vanishing_report(&c, 3).unwrap();
        assert!(!r.has_direct());
        assert!(r.all_zero());
    }

    #[test]
    fn verdicts() {
        let v = obstruct_filling(&builtin("lh_trefoil").unwrap(), 5).unwrap();
        assert_eq!(v.conclusion, Conclusion::Obstructed);
        assert_eq!(obstruct_filling(&builtin("rh_trefoil").unwrap(), 1).unwrap().conclusion, Conclusion::Inconclusive);
        let u = obstruct_filling(&builtin("unknot").unwrap(), 1).unwrap();
        assert_eq!(u.conclusion, Conclusion::Obstructed);
        assert!(u.explanation.contains("other fillings"));
        let back: ObstructionVerdict = serde_json::from_str(&v.to_json()).unwrap();
        assert_eq!(back, v);
    }
}
