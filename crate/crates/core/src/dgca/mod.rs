//! Semi-free dgcas, cell modules and derivations.

pub mod cell;
pub mod derivation;
pub mod lift;
pub mod ring;
pub mod semifree;
pub mod span;

pub use cell::{base_change, base_change_dual, dual_name, dualize_cell, primal_of, CellModule, DualCellModule, FreeModule};
pub use derivation::{apply_derivation, apply_morphism, DerivationOverMorphism, LeibnizReport};
pub use ring::{Generator, Monomial, Poly, Ring};
pub use semifree::{DgcaMorphism, SemiFreeDgca};
pub use lift::lift_differential;
