use std::fmt::{Debug, Display};

use super::hbar::HbarPoly;
use super::poly::{Polynomial, Vars};
use super::rational::Rational;

/// Coefficient ring for polyvector fields and polydifferential operators:
/// commutative, carrying partial derivatives in the coordinate variables.
pub trait Coefficient: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    /// Data needed to build constants of the ring.
    type Ring: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn ring(&self) -> Self::Ring;
    fn ring_vars(ring: &Self::Ring) -> &Vars;
    fn zero(ring: &Self::Ring) -> Self;
    fn embed(ring: &Self::Ring, p: Polynomial) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn partial(&self, i: usize) -> Self;
    fn total_degree(&self) -> u32;

    fn constant(ring: &Self::Ring, c: Rational) -> Self {
        Self::embed(ring, Polynomial::constant(Self::ring_vars(ring), c))
    }

    fn partial_multi(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.partial(i);
            }
        }
        out
    }
}

impl Coefficient for Polynomial {
    type Ring = Vars;

    fn ring(&self) -> Vars {
        self.vars().clone()
    }
    fn ring_vars(ring: &Vars) -> &Vars {
        ring
    }
    fn zero(ring: &Vars) -> Self {
        Polynomial::zero(ring)
    }
    fn embed(_ring: &Vars, p: Polynomial) -> Self {
        p
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        Polynomial::scale(self, c)
    }
    fn partial(&self, i: usize) -> Self {
        Polynomial::partial(self, i)
    }
    fn partial_multi(&self, alpha: &[u32]) -> Self {
        Polynomial::partial_multi(self, alpha)
    }
    fn total_degree(&self) -> u32 {
        Polynomial::total_degree(self)
    }
}

/// Ring data for ħ-series: variables plus truncation order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HbarRing {
    pub vars: Vars,
    pub cap: usize,
}

impl Coefficient for HbarPoly {
    type Ring = HbarRing;

    fn ring(&self) -> HbarRing {
        HbarRing {
            vars: self.vars().clone(),
            cap: self.cap(),
        }
    }
    fn ring_vars(ring: &HbarRing) -> &Vars {
        &ring.vars
    }
    fn zero(ring: &HbarRing) -> Self {
        HbarPoly::zero(&ring.vars, ring.cap)
    }
    fn embed(ring: &HbarRing, p: Polynomial) -> Self {
        HbarPoly::from_poly(p, ring.cap)
    }
    fn is_zero(&self) -> bool {
        HbarPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        HbarPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        HbarPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        HbarPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        HbarPoly::neg(self)
    }
    fn scale(&self, c: &Rational) -> Self {
        HbarPoly::scale(self, c)
    }
    fn partial(&self, i: usize) -> Self {
        HbarPoly::partial(self, i)
    }
    fn partial_multi(&self, alpha: &[u32]) -> Self {
        HbarPoly::from_coeffs(
            self.vars(),
            self.cap(),
            self.coeffs().iter().map(|p| p.partial_multi(alpha)).collect(),
        )
    }
    fn total_degree(&self) -> u32 {
        HbarPoly::total_degree(self)
    }
}
