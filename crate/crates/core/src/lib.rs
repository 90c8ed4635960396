//! Knot Floer mapping-cone calculator.
//!
//! From a finite model of the full knot Floer complex this crate computes the
//! integers `V_s`, `H_s`, the correction term of +1 surgery, the Floer
//! homology of positive integer surgeries via the truncated mapping cone, and
//! the classes of the two-handle cobordism maps. A separate lattice module
//! splits integral linking forms into a unimodular part and a radical and
//! decides whether a positive definite unimodular form is standard.

pub mod cfk;
pub mod cobordism;
pub mod f2ualg;
pub mod lattice;
pub mod surgery;
