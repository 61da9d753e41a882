use super::family::{fill_brackets, unordered_pairs, Generator, HypothesisCheck, ShiftFamily};
use crate::error::{Error, Result};
use crate::exact::Polynomial;
use crate::poisson::{bivector_pairing, d_pi, lie_derivative, nijenhuis_defect, poisson_bracket, PoissonStructure, Polyvector};

pub const DEFAULT_KMAX: usize = 3;
pub const DEFAULT_DEGREE_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftOptions {
    pub kmax: usize,
    /// Largest polynomial degree allowed in any generator.
    pub degree_cap: u32,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        ShiftOptions {
            kmax: DEFAULT_KMAX,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

fn lie_power(xi: &Polyvector, f: &Polynomial, k: usize, cap: u32) -> Result<Vec<Polynomial>> {
    let mut out = vec![f.clone()];
    let mut cur = Polyvector::function(f.clone());
    for _ in 0..k {
        cur = lie_derivative(xi, &cur)?;
        let p = cur.as_function().unwrap_or_else(|| Polynomial::zero(f.vars()));
        if p.total_degree() > cap {
            return Err(Error::resource(format!("generator degree {} above cap {cap}", p.total_degree())));
        }
        out.push(p);
    }
    Ok(out)
}

/// The family `{L_ξ^k f}` with all pairwise Poisson brackets. Every hypothesis
/// is checked and logged; a broken one is reported, not raised.
pub fn classical_shift(
    pi: &PoissonStructure,
    xi: &Polyvector,
    casimirs: &[Polynomial],
    opts: ShiftOptions,
) -> Result<ShiftFamily<Polynomial>> {
    if xi.rank() != 1 {
        return Err(Error::structural(format!("shift field must be a vector field, got rank {}", xi.rank())));
    }
    xi.check_compatible(pi.bivector())?;
    let mut log = Vec::new();

    let jac = pi.jacobi_defect();
    log.push(HypothesisCheck::new("jacobi", jac.is_zero(), format!("[π,π] = {jac}")));
    for (i, f) in casimirs.iter().enumerate() {
        if f.vars() != pi.vars() {
            return Err(Error::structural(format!("casimir {i} lives in another ring")));
        }
        let d = d_pi(pi, &Polyvector::function(f.clone()))?;
        log.push(HypothesisCheck::new(format!("casimir[{i}]"), d.is_zero(), format!("d_π f = {d}")));
    }
    let nij = nijenhuis_defect(xi, pi)?;
    log.push(HypothesisCheck::new("nijenhuis", nij.is_zero(), format!("L_ξ²π = {nij}")));

    let mut generators = Vec::new();
    let mut powers = Vec::new();
    for (i, f) in casimirs.iter().enumerate() {
        let fam = lie_power(xi, f, opts.kmax, opts.degree_cap)?;
        for (k, p) in fam.iter().enumerate() {
            generators.push(Generator {
                label: format!("L^{k} f{i}"),
                source: i,
                power: k,
                value: p.clone(),
            });
        }
        powers.push(fam);
    }

    log.push(induction_check(pi, xi, &powers)?);

    let brackets = fill_brackets(
        &generators,
        unordered_pairs(generators.len()),
        |a, b| poisson_bracket(pi, a, b),
        Polynomial::is_zero,
    )?;
    Ok(ShiftFamily::new(generators, brackets, log))
}

/// `(L_ξ^k π)(d L_ξ^l f, d L_ξ^m g) = 0` for `k + l + m ≤ 3`.
fn induction_check(pi: &PoissonStructure, xi: &Polyvector, powers: &[Vec<Polynomial>]) -> Result<HypothesisCheck> {
    let mut lie_pi = vec![pi.bivector().clone()];
    for k in 1..=3 {
        lie_pi.push(lie_derivative(xi, &lie_pi[k - 1])?);
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for (fi, fp) in powers.iter().enumerate() {
        for (gi, gp) in powers.iter().enumerate() {
            for k in 0..=3 {
                for l in 0..=(3 - k).min(fp.len() - 1) {
                    for m in 0..=(3 - k - l).min(gp.len() - 1) {
                        let v = bivector_pairing(&lie_pi[k], &fp[l], &gp[m])?;
                        checked += 1;
                        if !v.is_zero() {
                            failures.push(format!("k={k} l={l} m={m} f{fi} f{gi}: {v}"));
                        }
                    }
                }
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{checked} pairings vanish")
    } else {
        failures.join("; ")
    };
    Ok(HypothesisCheck::new("induction(k+l+m≤3)", failures.is_empty(), detail))
}
