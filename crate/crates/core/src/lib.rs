//! Exact symbolic engine for strong-homotopy Lie–Rinehart pairs and their
//! Chevalley–Eilenberg complexes.

pub mod cofib;
pub mod dgca;
pub mod error;
pub mod linalg;
pub mod random;
pub mod shlr;
pub mod sign;
pub mod weighted;

pub use error::{Error, Result};
pub use linalg::{q, qr, CohomologyDim, DegreeWindow, FiniteComplex, RationalMatrix, Q};
pub use sign::{koszul_sign, unshuffles, Permutation};
