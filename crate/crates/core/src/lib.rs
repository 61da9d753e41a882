//! Exact symbolic machinery for the argument shift method: polyvector
//! calculus, local Hochschild cochains and star products, arity-truncated
//! L∞ algebras, and the classical and deformed shift engines.

pub mod error;
pub mod exact;
pub mod hochschild;
pub mod linfty;
pub mod poisson;
pub mod shift;

pub use error::{Error, Result};
