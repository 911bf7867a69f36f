//! Exact scalars and degree-windowed graded linear algebra.

pub mod field;
pub mod graded;
pub mod matrix;

pub use field::{Field, FieldElement};
pub use graded::{DegreeWindow, GradedMap, GradedSpace, Homology, KernelImage};
pub use matrix::Matrix;
