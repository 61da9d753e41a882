use serde::{Deserialize, Serialize};

use super::polyvector::{bivector_pairing, lie_derivative, schouten, Polyvector};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, Polynomial, Rational, Vars};

/// A bivector together with the outcome of its Jacobi check.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonStructure {
    bivector: Polyvector,
    jacobi_verified: bool,
}

impl PoissonStructure {
    /// Wraps a bivector and checks `[π, π] = 0`; fails with a domain error
    /// naming the defect otherwise.
    pub fn new(bivector: Polyvector) -> Result<Self> {
        let mut s = Self::unchecked(bivector)?;
        let defect = s.jacobi_defect();
        if !defect.is_zero() {
            return Err(Error::domain(format!("bivector is not Poisson: [π,π] = {defect}")));
        }
        s.jacobi_verified = true;
        Ok(s)
    }

    /// Wraps a bivector without checking Jacobi.
    pub fn unchecked(bivector: Polyvector) -> Result<Self> {
        if bivector.rank() != 2 {
            return Err(Error::structural(format!(
                "Poisson structure needs rank 2, got {}",
                bivector.rank()
            )));
        }
        Ok(PoissonStructure {
            bivector,
            jacobi_verified: false,
        })
    }

    pub fn bivector(&self) -> &Polyvector {
        &self.bivector
    }

    pub fn vars(&self) -> &Vars {
        self.bivector.vars()
    }

    pub fn jacobi_verified(&self) -> bool {
        self.jacobi_verified
    }

    /// `[π, π]`.
    pub fn jacobi_defect(&self) -> Polyvector {
        schouten(&self.bivector, &self.bivector).expect("same variables")
    }

    /// Runs the Jacobi check and records the result.
    pub fn is_poisson(&mut self) -> bool {
        self.jacobi_verified = self.jacobi_defect().is_zero();
        self.jacobi_verified
    }
}

/// `{f, g} = π(df, dg)`.
pub fn poisson_bracket(pi: &PoissonStructure, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    bivector_pairing(&pi.bivector, f, g)
}

/// Lichnerowicz differential `d_π a = [π, a]`.
pub fn d_pi(pi: &PoissonStructure, a: &Polyvector) -> Result<Polyvector> {
    schouten(&pi.bivector, a)
}

/// `L_ξ² π`; zero exactly when `ξ` is a Nijenhuis field for `π`.
pub fn nijenhuis_defect(xi: &Polyvector, pi: &PoissonStructure) -> Result<Polyvector> {
    let first = lie_derivative(xi, &pi.bivector)?;
    lie_derivative(xi, &first)
}

/// Hamiltonian vector field of `f`, `X_f = {f, ·}`.
pub fn hamiltonian_field(pi: &PoissonStructure, f: &Polynomial) -> Result<Polyvector> {
    let n = pi.vars().len();
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        let xi = Polynomial::var(pi.vars(), i);
        terms.push((vec![i], poisson_bracket(pi, f, &xi)?));
    }
    Polyvector::from_terms(pi.vars(), 1, terms)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

/// `{"dim":n,"structure_constants":[{"i":1,"j":2,"k":3,"c":"1"}]}`, indices
/// 1-based. Variables default to `x1..xn`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiePoissonJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub structure_constants: Vec<StructureConstant>,
}

/// Linear Poisson bivector `π = Σ c_{ij}^k x_k ∂_i∧∂_j` of a Lie algebra.
///
/// Entries with `i > j` are folded in by antisymmetry. The result is
/// checked for Jacobi, so inconsistent constants give a domain error.
pub fn lie_poisson(vars: &Vars, constants: &[(usize, usize, usize, Rational)]) -> Result<PoissonStructure> {
    let n = vars.len();
    let mut terms = Vec::new();
    for (i, j, k, c) in constants {
        if *i >= n || *j >= n || *k >= n {
            return Err(Error::structural(format!(
                "structure constant index ({i},{j},{k}) outside dimension {n}"
            )));
        }
        if i == j {
            return Err(Error::domain("structure constant with i = j"));
        }
        terms.push((vec![*i, *j], Polynomial::var(vars, *k).scale(c)));
    }
    PoissonStructure::new(Polyvector::from_terms(vars, 2, terms)?)
}

impl LiePoissonJson {
    pub fn build(&self) -> Result<PoissonStructure> {
        let names: Vec<String> = match &self.vars {
            Some(v) if v.len() == self.dim => v.clone(),
            Some(v) => {
                return Err(Error::structural(format!(
                    "{} variable names for dimension {}",
                    v.len(),
                    self.dim
                )))
            }
            None => (1..=self.dim).map(|i| format!("x{i}")).collect(),
        };
        let vars: Vars = names.into();
        let mut constants = Vec::new();
        for sc in &self.structure_constants {
            if sc.i == 0 || sc.j == 0 || sc.k == 0 {
                return Err(Error::Parse("structure constant indices are 1-based".into()));
            }
            constants.push((sc.i - 1, sc.j - 1, sc.k - 1, parse_rational(&sc.c)?));
        }
        lie_poisson(&vars, &constants)
    }
}
