//! Exact tools for curve systems on the torus.
//!
//! An *N-scheme* prescribes the pairwise algebraic intersection numbers
//! `m_ij` of `N` ordered, oriented simple closed curves. This crate decides
//! whether a scheme is realized on the torus, constructs and enumerates the
//! witness curve systems when it is, splits 3-schemes into two torus-realizable
//! summands, builds the endemic 4-scheme family and computes maximal curve
//! packings with bounded pairwise intersection.
//!
//! All arithmetic is exact: entries are [`BigInt`]s and the `toz` invariant is
//! a [`BigRational`].
//!
//! Curve indices are 1-based everywhere in the public API, matching the usual
//! `m_12; m_13, m_23; …` notation.

pub mod arith;
pub mod conditions;
mod error;
pub mod farey;
pub mod genus;
pub mod oracle;
pub mod scheme;
pub mod solver;

pub use error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use arith::{Factorization, ResidueClass};
pub use conditions::{decide_torus, Obstruction, Screen, Status, TozReport, Verdict};
pub use farey::{max_packing, CliqueResult, EdgeRule, SlopeClass};
pub use genus::{Decomposition, ThreeSchemeSplit};
pub use oracle::{oracle_realizable, OracleResult};
pub use scheme::{CurveClass, CurveSystem, Reduction, ReductionLog, ReductionStep, Scheme};
pub use solver::{KappaConstraintSet, NormalizedWitness, PrimeConstraint, XyWitness};
