pub mod appendix_b;
pub mod atoms;
pub mod complexes;
pub mod error;
pub mod functors;
pub mod oracle;
pub mod exact_linalg;
pub mod poly;
pub mod rabinowitz;
pub mod rhom;
pub mod selftest;

pub use error::{Error, Result};
