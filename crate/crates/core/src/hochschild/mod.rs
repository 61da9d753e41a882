//! Local Hochschild cochains, the Gerstenhaber bracket and star products.

mod hkr;
mod json;
mod op;
mod star;

pub use hkr::{hbar_component, hkr, lift_hbar, lift_hbar_polyvector};
pub use json::PolyDiffOpJson;
pub use op::{apply_op, gerstenhaber_bracket, hochschild_delta, MultiIndex, PolyDiffOp};
pub use star::{
    commutator_via_bracket, hbar_of, mc_defect_star, moyal, star_commutator, star_mul, StarProduct,
    StarProductJson,
};
