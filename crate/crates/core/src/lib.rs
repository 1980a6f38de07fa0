//! Exact computations for Fano schemes of linear subspaces on loci cut out
//! by `r x r` minors or permanents of a generic `m x n` matrix.

pub mod classify;
pub mod error;
pub mod kplane;
pub mod linalg;
pub mod params;
pub mod patterns;
pub mod schubert;
pub mod symalg;
pub mod tangent;

pub use classify::{classify, Certificate, Classification, Family, TableRow, TriState, Verdict};
pub use error::{FanoError, Result};
pub use params::{CompressionIndex, FanoParams};
