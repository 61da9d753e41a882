//! Polyvector calculus on polynomial coefficients.

pub mod examples;
mod json;
mod polyvector;
mod structure;

pub use json::PolyvectorJson;
pub(crate) use polyvector::sort_with_sign;
pub use polyvector::{bivector_pairing, lie_derivative, schouten, wedge, Polyvector};
pub use structure::{
    d_pi, hamiltonian_field, lie_poisson, nijenhuis_defect, poisson_bracket, LiePoissonJson,
    PoissonStructure, StructureConstant,
};
