//! Standard fixtures used by tests, the CLI and benches.

use super::polyvector::Polyvector;
use super::structure::{lie_poisson, PoissonStructure};
use crate::exact::{rat, vars, Polynomial, Vars};

pub fn so3_vars() -> Vars {
    vars(&["x1", "x2", "x3"])
}

/// `x3 ∂1∧∂2 + x1 ∂2∧∂3 + x2 ∂3∧∂1`.
pub fn so3() -> PoissonStructure {
    let v = so3_vars();
    lie_poisson(&v, &[(0, 1, 2, rat(1)), (1, 2, 0, rat(1)), (2, 0, 1, rat(1))]).expect("so(3) is Lie")
}

/// `x1² + x2² + x3²`.
pub fn so3_casimir() -> Polynomial {
    let v = so3_vars();
    (0..3).fold(Polynomial::zero(&v), |acc, i| &acc + &Polynomial::var(&v, i).pow(2))
}

pub fn gl2_vars() -> Vars {
    vars(&["x11", "x12", "x21", "x22"])
}

/// Lie–Poisson structure of gl(2) on coordinates `x11, x12, x21, x22`.
pub fn gl2() -> PoissonStructure {
    let v = gl2_vars();
    lie_poisson(
        &v,
        &[
            (0, 1, 1, rat(1)),
            (0, 2, 2, rat(-1)),
            (1, 2, 0, rat(1)),
            (1, 2, 3, rat(-1)),
            (1, 3, 1, rat(1)),
            (2, 3, 2, rat(-1)),
        ],
    )
    .expect("gl(2) is Lie")
}

/// Trace and determinant.
pub fn gl2_casimirs() -> Vec<Polynomial> {
    let v = gl2_vars();
    let x = |i| Polynomial::var(&v, i);
    let c1 = &x(0) + &x(3);
    let c2 = &(&x(0) * &x(3)) - &(&x(1) * &x(2));
    vec![c1, c2]
}

/// `x1² ∂1`, not Nijenhuis for so(3).
pub fn non_nijenhuis_field() -> Polyvector {
    let v = so3_vars();
    Polyvector::from_terms(&v, 1, [(vec![0], Polynomial::var(&v, 0).pow(2))]).expect("rank 1")
}
