//! Exact vector-lattice-valued measure theory on finite atomic spaces and on ℕ.
//!
//! The lattice `E` is `ℚ^m` with the coordinatewise order. The crate provides
//! positive (`E⁺ ∪ {∞}`-valued) and signed (`E`-valued) measures, their lattice
//! operations, the order integral of simple functions, regular operators into
//! `E`, and the operator/measure correspondence, together with brute-force
//! oracles and law suites that check these constructions against each other.

pub mod counterexample;
pub mod error;
pub mod fuzz;
pub mod gen;
pub mod instance;
pub mod integral;
pub mod lattice;
pub mod laws;
pub mod measure;
pub mod operator;
pub mod repr;
pub mod scalar;
pub mod space;
pub mod table;

pub use error::{Error, Result};
pub use integral::SimpleFunction;
pub use lattice::{ExtElement, LatticeElement, LatticeNorm, NormKind};
pub use measure::{Extremum, PosMeasure, SignedMeasure};
pub use operator::RegularOperator;
pub use scalar::Scalar;
pub use space::{FiniteSet, FiniteSpace, MeasurableSet, NatSet, Space};
