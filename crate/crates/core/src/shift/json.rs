use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::binary::{binary_shift_check, vector_from_map, BinaryOpJson};
use super::classical::{classical_shift, ShiftOptions, DEFAULT_DEGREE_CAP, DEFAULT_KMAX};
use super::family::ShiftReport;
use super::quantum::{lift_classical, quantum_shift, QuantumOptions};
use crate::error::{Error, Result};
use crate::linfty::{
    nijenhuis_defects, DefectReport, FVec, FiniteDerivationJson, FiniteLInfty, Hom, LInftyDerivation, MCElement, TermJson,
    DEFAULT_ARITY_CUTOFF,
};
use crate::poisson::{LiePoissonJson, PoissonStructure, Polyvector};
use crate::exact::Polynomial;

/// Either structure constants or an explicit bivector. An explicit bivector
/// is not required to satisfy Jacobi; the engines log the defect.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PoissonJson {
    LiePoisson(LiePoissonJson),
    Bivector { bivector: Polyvector },
}

impl PoissonJson {
    pub fn build(&self) -> Result<PoissonStructure> {
        match self {
            PoissonJson::LiePoisson(l) => l.build(),
            PoissonJson::Bivector { bivector } => PoissonStructure::unchecked(bivector.clone()),
        }
    }
}

fn default_kmax() -> usize {
    DEFAULT_KMAX
}

fn default_degree_cap() -> u32 {
    DEFAULT_DEGREE_CAP
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalProblemJson {
    pub poisson: PoissonJson,
    pub shift_field: Polyvector,
    pub casimirs: Vec<Polynomial>,
    #[serde(default = "default_kmax")]
    pub kmax: usize,
    #[serde(default = "default_degree_cap")]
    pub degree_cap: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BinaryProblemJson {
    pub binary: BinaryOpJson,
    pub centrals: Vec<BTreeMap<String, String>>,
    #[serde(default = "default_kmax")]
    pub kmax: usize,
}

/// Input of the `classical` workflow: a Poisson problem or the
/// binary-operation variant.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShiftProblemJson {
    Poisson(ClassicalProblemJson),
    Binary(BinaryProblemJson),
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct CutoffsJson {
    #[serde(default)]
    pub arity: Option<usize>,
    /// Strong Nijenhuis arity; the arity cutoff when absent.
    #[serde(default)]
    pub nijenhuis_arity: Option<usize>,
}

/// Input of the `quantum` workflow.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
pub enum QuantumProblemJson {
    /// Polyvector fields; the MC element is the Poisson bivector and the
    /// derivation is `[ξ, ·]`.
    Tpoly {
        poisson: PoissonJson,
        shift_field: Polyvector,
        casimirs: Vec<Polynomial>,
        #[serde(default = "default_kmax")]
        kmax: usize,
        #[serde(default)]
        cutoffs: CutoffsJson,
    },
    Finite {
        derivation: FiniteDerivationJson,
        centrals: Vec<Vec<TermJson>>,
        #[serde(default = "default_kmax")]
        kmax: usize,
        #[serde(default)]
        cutoffs: CutoffsJson,
    },
}

/// Overrides applied on top of a problem file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub kmax: Option<usize>,
    pub arity_cutoff: Option<usize>,
}

pub fn run_classical(problem: &ShiftProblemJson, ov: Overrides) -> Result<ShiftReport> {
    match problem {
        ShiftProblemJson::Poisson(p) => {
            let pi = p.poisson.build()?;
            let opts = ShiftOptions {
                kmax: ov.kmax.unwrap_or(p.kmax),
                degree_cap: p.degree_cap,
            };
            Ok(classical_shift(&pi, &p.shift_field, &p.casimirs, opts)?.report())
        }
        ShiftProblemJson::Binary(b) => {
            let model = b.binary.build()?;
            let centrals = b.centrals.iter().map(|c| vector_from_map(&model, c)).collect::<Result<Vec<_>>>()?;
            Ok(binary_shift_check(&model, &centrals, ov.kmax.unwrap_or(b.kmax))?.report())
        }
    }
}

fn tpoly_parts(
    poisson: &PoissonJson,
    shift_field: &Polyvector,
    cutoff: usize,
) -> Result<(LInftyDerivation<Polyvector>, MCElement<Polyvector>)> {
    let pi = poisson.build()?;
    if shift_field.vars() != pi.vars() {
        return Err(Error::structural("shift field and Poisson bivector live in different rings"));
    }
    let x = lift_classical(shift_field, cutoff)?;
    let m = MCElement::verified(pi.bivector().clone(), &x.algebra)?;
    Ok((x, m))
}

fn finite_parts(
    derivation: &FiniteDerivationJson,
    cutoff: Option<usize>,
) -> Result<(FiniteLInfty, LInftyDerivation<FVec>, MCElement<FVec>)> {
    let mut alg = derivation.algebra.clone();
    if let Some(a) = cutoff {
        alg.cutoff = a;
    }
    let lin = FiniteLInfty::from_json(&alg)?;
    let x = lin.derivation_from_json(&derivation.x)?;
    let mc = lin.vector_from_json(derivation.mc.as_deref().unwrap_or(&[]))?;
    let m = MCElement::verified(mc, &lin.algebra)?;
    Ok((lin, x, m))
}

impl QuantumProblemJson {
    fn cutoffs(&self) -> &CutoffsJson {
        match self {
            QuantumProblemJson::Tpoly { cutoffs, .. } | QuantumProblemJson::Finite { cutoffs, .. } => cutoffs,
        }
    }

    /// Arity cutoff after overrides.
    pub fn arity_cutoff(&self, ov: Overrides) -> usize {
        let file = match self {
            QuantumProblemJson::Tpoly { .. } => None,
            QuantumProblemJson::Finite { derivation, .. } => Some(derivation.algebra.cutoff),
        };
        ov.arity_cutoff.or(self.cutoffs().arity).or(file).unwrap_or(DEFAULT_ARITY_CUTOFF)
    }
}

pub fn run_quantum(problem: &QuantumProblemJson, ov: Overrides) -> Result<ShiftReport> {
    let cutoff = problem.arity_cutoff(ov);
    match problem {
        QuantumProblemJson::Tpoly {
            poisson,
            shift_field,
            casimirs,
            kmax,
            cutoffs,
        } => {
            let (x, m) = tpoly_parts(poisson, shift_field, cutoff)?;
            let centrals = casimirs.iter().map(|f| Hom::from(Polyvector::function(f.clone()))).collect::<Vec<_>>();
            let opts = QuantumOptions {
                kmax: ov.kmax.unwrap_or(*kmax),
                nijenhuis_arity: cutoffs.nijenhuis_arity,
            };
            Ok(quantum_shift(&x, &m, &centrals, opts)?.report())
        }
        QuantumProblemJson::Finite {
            derivation,
            centrals,
            kmax,
            cutoffs,
        } => {
            let (lin, x, m) = finite_parts(derivation, Some(cutoff))?;
            let centrals = centrals
                .iter()
                .map(|c| lin.space.hom(lin.vector_from_json(c)?))
                .collect::<Result<Vec<_>>>()?;
            let opts = QuantumOptions {
                kmax: ov.kmax.unwrap_or(*kmax),
                nijenhuis_arity: cutoffs.nijenhuis_arity,
            };
            Ok(quantum_shift(&x, &m, &centrals, opts)?.report())
        }
    }
}

/// Weak and strong Nijenhuis defects for a quantum problem; centrals and
/// `kmax` are ignored.
pub fn run_nijenhuis(problem: &QuantumProblemJson, ov: Overrides) -> Result<DefectReport> {
    let cutoff = problem.arity_cutoff(ov);
    let arity = problem.cutoffs().nijenhuis_arity.unwrap_or(cutoff);
    match problem {
        QuantumProblemJson::Tpoly {
            poisson, shift_field, ..
        } => {
            let (x, m) = tpoly_parts(poisson, shift_field, cutoff)?;
            nijenhuis_defects(&x, &m, arity, x.algebra.probes())
        }
        QuantumProblemJson::Finite { derivation, .. } => {
            let (_, x, m) = finite_parts(derivation, Some(cutoff))?;
            nijenhuis_defects(&x, &m, arity, x.algebra.probes())
        }
    }
}
