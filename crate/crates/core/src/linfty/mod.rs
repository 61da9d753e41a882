//! Arity-truncated L∞-algebras, morphisms, derivations and their
//! Maurer–Cartan twists. Backends: finite tables, polyvector fields and
//! polydifferential operators.

mod algebra;
mod backends;
mod element;
mod exp;
mod finite;
mod identities;
mod mc;
mod sign;

pub use algebra::{
    homotopy, Cutoffs, Homotopy, LInftyAlgebra, LInftyDerivation, LInftyMorphism, MCElement, MapFamily,
    DEFAULT_ARITY_CUTOFF, DEFAULT_HBAR_CAP,
};
pub use backends::{dpoly, inner_op_derivation, lie_derivation, tpoly};
pub use element::{Element, FVec, GradedMap, Hom};
pub use exp::{exp_derivation, exp_derivation_truncated, inner_derivation};
pub use finite::{
    map_from_json, morphism_from_json, table_map, vector_to_json, BasisJson, EntryJson, FiniteAlgebraJson,
    FiniteDerivationJson, FiniteLInfty, FiniteMorphismJson, FiniteSpace, MapJson, TableRow, TermJson,
};
pub use identities::{derivation_defect, homotopy_defect, jacobi_defect, morphism_defect};
pub use mc::{
    mc_defect, nijenhuis_defects, push_mc, sweep, twist_derivation, twist_morphism, twist_structure,
    twisted_derivation_defect, x_of_pi, x_pi, DefectReport, Residual, Truncation,
};
pub use sign::{decalage_negative, koszul_sign, koszul_sign_symmetric, set_partitions, unshuffles};
