//! Model-categorical constructions on weighted semi-free algebras.

mod constructions;
mod cylinder;
mod derhom;
mod weq;

pub use constructions::{
    coproduct, is_cofibration, pushout_along_cofibration, suffixed, CofibrationReport, Coproduct, Pushout,
};
pub use cylinder::{
    base_cylinder, cylinder_ce, fiber_module, path_module, BaseCylinder, CylinderWitness, FactorizationConfig,
    ObstructionLog,
};
pub use derhom::{der_hom_transport, DerHomDegree, DerHomReport};
pub use weq::{base_complex, is_weak_equivalence, linear_complex, TruncatedComplex, Verdict, WeqConfig, WeqFailure, WeqReport};
