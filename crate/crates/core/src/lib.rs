//! Poincaré self-duality of mod-p cohomology over the subalgebras `A(k)` of
//! the Steenrod algebra, and the resulting obstructions to orientability,
//! spin, string and 5-brane structures.

pub mod chart;
pub mod error;
pub mod field;
pub mod linalg;
pub mod manifold;
pub mod module;
pub mod spaces;
pub mod steenrod;
pub mod verify;

pub use error::{Error, Result};
pub use field::Prime;
pub use linalg::Matrix;
pub use module::{FiniteModule, GradedSpace, IsoVerdict};
pub use steenrod::{AlgebraElement, Letter, Monomial, SubalgebraSpec};
