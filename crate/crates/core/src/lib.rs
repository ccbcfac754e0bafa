//! Kubo-Ando operator connections and means on real symmetric positive
//! semidefinite matrices.
//!
//! A connection can be given as a builtin kind, by its representing
//! function, or by a finite measure on `[0, 1]`; the three descriptions are
//! interchangeable. The [`verify`] module holds randomized property suites
//! for the axioms and characterizations of positivity, betweenness and
//! strictness.

pub mod error;
pub mod format;
pub mod linalg;
pub mod means;
pub mod measures;
mod quadrature;
pub mod verify;

pub use error::{MeansError, Result};
pub use linalg::{SymMatrix, Tolerances};
pub use means::{BinaryOperation, ClassificationRecord, Connection, MeanKind, ReprFunction};
pub use measures::{BorelMeasure, Density, DensityFn, QuadraturePlan};
