//! Decide whether an affine genus-zero curve over Q has infinitely many
//! S-integral points and, when it does, produce them.

pub mod arith;
pub mod curve;
pub mod decider;
pub mod engine;
pub mod error;
pub mod poly;
pub mod quad;
pub mod report;
pub mod scalar;

pub use arith::{PrimeSet, Rat};
pub use curve::{AffinePoint, CurveInput};
pub use decider::{decide, Case, Decision, FiniteReason, Generator, Verdict, Witness};
pub use engine::{enumerate_points, generate_points, search_point};
pub use error::{Error, Result};
pub use quad::{QuadElem, SplitType};
