use std::sync::Arc;

use super::algebra::{LInftyAlgebra, LInftyDerivation};
use super::element::{GradedMap, Hom};
use crate::error::{Error, Result};
use crate::exact::Coefficient;
use crate::hochschild::{gerstenhaber_bracket, hochschild_delta, PolyDiffOp};
use crate::poisson::{schouten, Polyvector};

/// Polyvector fields as a DGLA: zero differential, Schouten bracket.
pub fn tpoly<C: Coefficient>(ring: &C::Ring, cutoff: usize) -> Result<LInftyAlgebra<Polyvector<C>>> {
    LInftyAlgebra::new(Polyvector::zero(ring, 0), cutoff)
        .with_map(GradedMap::new(2, 0, |a: &[Hom<Polyvector<C>>]| schouten(&a[0].value, &a[1].value)))
}

/// Polydifferential operators as a DGLA: `δ = [μ, ·]` and the Gerstenhaber
/// bracket.
pub fn dpoly<C: Coefficient>(ring: &C::Ring, cutoff: usize) -> Result<LInftyAlgebra<PolyDiffOp<C>>> {
    LInftyAlgebra::new(PolyDiffOp::zero(ring, 0), cutoff)
        .with_map(GradedMap::new(1, 1, |a: &[Hom<PolyDiffOp<C>>]| Ok(hochschild_delta(&a[0].value))))?
        .with_map(GradedMap::new(2, 0, |a: &[Hom<PolyDiffOp<C>>]| {
            gerstenhaber_bracket(&a[0].value, &a[1].value)
        }))
}

/// The strict derivation `X_1 = [ξ, ·]` of `T_poly` for a vector field `ξ`.
pub fn lie_derivation<C: Coefficient>(
    algebra: Arc<LInftyAlgebra<Polyvector<C>>>,
    xi: &Polyvector<C>,
) -> Result<LInftyDerivation<Polyvector<C>>> {
    if xi.rank() != 1 && !xi.is_zero() {
        return Err(Error::structural("Lie derivative along a polyvector of rank ≠ 1"));
    }
    let xi = xi.clone();
    LInftyDerivation::new(algebra).with_map(GradedMap::new(1, 0, move |a: &[Hom<Polyvector<C>>]| schouten(&xi, &a[0].value)))
}

/// The strict derivation `X_1 = [D, ·]` of `D_poly` for a unary operator `D`.
pub fn inner_op_derivation<C: Coefficient>(
    algebra: Arc<LInftyAlgebra<PolyDiffOp<C>>>,
    op: &PolyDiffOp<C>,
) -> Result<LInftyDerivation<PolyDiffOp<C>>> {
    if op.arity() != 1 && !op.is_zero() {
        return Err(Error::structural("inner derivation along an operator of arity ≠ 1"));
    }
    let op = op.clone();
    LInftyDerivation::new(algebra).with_map(GradedMap::new(1, 0, move |a: &[Hom<PolyDiffOp<C>>]| {
        gerstenhaber_bracket(&op, &a[0].value)
    }))
}
