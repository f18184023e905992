//! Exact symbolic calculus for the boundary of the tree `X = Λ⁺ * Λ⁺`,
//! where `Λ = Z^n` carries the lexicographic order, together with the
//! compact-open set algebra of the boundary, the bisection calculus of the
//! associated groupoid, the dense *-algebra spanned by the partial-isometry
//! generators, its AF core, and the crossed product by the gauge action.
//!
//! Everything here is computed exactly: word arithmetic over checked `i64`
//! coordinates, Gaussian-rational coefficients, and structural canonical
//! forms. The [`oracle`] module provides independent pointwise semantics
//! used to cross-check every symbolic operation.

pub mod af;
pub mod algebra;
pub mod crossed;
pub mod cylinder;
pub mod error;
pub mod groupoid;
pub mod lambda;
pub mod oracle;
pub mod sampling;
pub mod scalar;
pub mod suites;
pub mod witness;

pub use af::MatrixUnitSystem;
pub use algebra::{Element, GaugeElement, GaugePoint};
pub use crossed::{CPElement, CPTerm, IbAnswer};
pub use cylinder::{BasicSet, SetUnion};
pub use error::{Error, Result};
pub use groupoid::{Bisection, GroupoidPoint};
pub use lambda::{BoundaryLetter, BoundaryVector, BoundaryWord, Ext, GroupVector, Letter, Side, Word};
pub use scalar::Scalar;
