use std::sync::Arc;

use super::family::{fill_brackets, unordered_pairs, Generator, HypothesisCheck, ShiftFamily};
use crate::error::{Error, Result};
use crate::exact::{rat, Polynomial, Vars};
use crate::linfty::{
    lie_derivation, mc_defect, nijenhuis_defects, tpoly, twist_structure, x_of_pi, x_pi, Element, Hom, LInftyAlgebra,
    LInftyDerivation, MCElement,
};
use crate::poisson::Polyvector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantumOptions {
    pub kmax: usize,
    /// Highest arity at which strong Nijenhuis defects are demanded to vanish.
    /// `None` means the algebra's arity cutoff.
    pub nijenhuis_arity: Option<usize>,
}

impl Default for QuantumOptions {
    fn default() -> Self {
        QuantumOptions {
            kmax: super::classical::DEFAULT_KMAX,
            nijenhuis_arity: None,
        }
    }
}

/// Coordinate functions, coordinate fields and constant bivectors.
pub fn standard_probes(vars: &Vars) -> Vec<(String, Hom<Polyvector>)> {
    let n = vars.len();
    let one = Polynomial::one(vars);
    let mut out = Vec::new();
    for i in 0..n {
        out.push((vars[i].clone(), Hom::from(Polyvector::function(Polynomial::var(vars, i)))));
    }
    for i in 0..n {
        out.push((format!("∂{}", vars[i]), Hom::from(Polyvector::coordinate_field(vars, i))));
    }
    for i in 0..n {
        for j in i + 1..n {
            let b = Polyvector::from_terms(vars, 2, [(vec![i, j], one.clone())]).expect("valid indices");
            out.push((format!("∂{}∧∂{}", vars[i], vars[j]), Hom::from(b)));
        }
    }
    out
}

/// The strict derivation `[ξ, ·]` of polyvector fields on the ring of `ξ`.
pub fn lift_classical(xi: &Polyvector, cutoff: usize) -> Result<LInftyDerivation<Polyvector>> {
    let vars = xi.vars().clone();
    let algebra = Arc::new(tpoly(&vars, cutoff)?.with_probes(standard_probes(&vars)));
    lie_derivation(algebra, xi)
}

fn bracket<E: Element>(alg: &LInftyAlgebra<E>, a: &Hom<E>, b: &Hom<E>) -> Result<Hom<E>> {
    alg.apply(&[a.clone(), b.clone()])
}

fn hom<E: Element>(value: E, deg: i32) -> Hom<E> {
    Hom::new(value, deg)
}

fn residual_check(name: &str, failures: Vec<String>, checked: usize) -> HypothesisCheck {
    let pass = failures.is_empty();
    let detail = if pass {
        format!("{checked} residuals vanish")
    } else {
        failures.join("; ")
    };
    HypothesisCheck::new(name, pass, detail)
}

/// The family `𝒳_{π,1}^k f` with brackets `[x, d_π y]`. Hypotheses that the
/// construction relies on raise domain errors; the derived identities are
/// computed and logged.
pub fn quantum_shift<E: Element>(
    x: &LInftyDerivation<E>,
    m: &MCElement<E>,
    centrals: &[Hom<E>],
    opts: QuantumOptions,
) -> Result<ShiftFamily<E>> {
    let alg = &x.algebra;
    let mut log = Vec::new();

    let mc = mc_defect(alg, m.value())?;
    if !mc.is_zero() || !m.is_verified() {
        return Err(Error::domain(format!("mc: Maurer–Cartan defect {mc}")));
    }
    log.push(HypothesisCheck::new("mc", true, "MC defect vanishes"));

    let tw = twist_structure(alg, m)?;
    let d_pi = |a: &Hom<E>| -> Result<Hom<E>> { tw.apply(std::slice::from_ref(a)) };
    for (i, f) in centrals.iter().enumerate() {
        if f.deg != -1 {
            return Err(Error::domain(format!("central[{i}] has degree {}, expected −1", f.deg)));
        }
        let d = d_pi(f)?.value;
        if !d.is_zero() {
            return Err(Error::domain(format!("central[{i}]: d_π f = {d}")));
        }
        log.push(HypothesisCheck::new(format!("central[{i}]"), true, "d_π f = 0"));
    }

    let arity = opts.nijenhuis_arity.unwrap_or(alg.cutoff());
    let nij = nijenhuis_defects(x, m, arity, alg.probes())?;
    if let Some(r) = nij.residuals.first() {
        let kind = if r.tuple.len() == 1 { "weak" } else { "strong" };
        return Err(Error::domain(format!(
            "{kind} Nijenhuis defect 𝒳_{{π,{}}}({}) = {}",
            r.tuple.len(),
            r.tuple.join(", "),
            r.value
        )));
    }
    log.push(HypothesisCheck::new(
        "nijenhuis",
        true,
        format!("{} tuples up to arity {}", nij.checked_tuples, nij.checked_arity),
    ));

    let c = hom(x_of_pi(x, m)?, 1);
    let xp = |a: &Hom<E>| -> Result<Hom<E>> { Ok(hom(x_pi(x, m, std::slice::from_ref(a))?, a.deg)) };

    let mut generators = Vec::new();
    let mut towers: Vec<Vec<Hom<E>>> = Vec::new();
    for (i, f) in centrals.iter().enumerate() {
        let mut tower = vec![f.clone()];
        for k in 1..=opts.kmax {
            let next = xp(&tower[k - 1])?;
            tower.push(next);
        }
        for (k, g) in tower.iter().enumerate() {
            generators.push(Generator {
                label: format!("𝒳^{k} f{i}"),
                source: i,
                power: k,
                value: g.value.clone(),
            });
        }
        towers.push(tower);
    }

    // d_π x_k + k [𝒳(π), x_{k−1}] = 0
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, tower) in towers.iter().enumerate() {
        for k in 1..tower.len() {
            let lhs = d_pi(&tower[k])?.value;
            let corr = bracket(alg, &c, &tower[k - 1])?.value.scale(&rat(k as i64));
            let r = lhs.add(&corr);
            checked += 1;
            if !r.is_zero() {
                failures.push(format!("f{i} k={k}: {r}"));
            }
        }
    }
    log.push(residual_check("lemma(d_π x_k)", failures, checked));

    // Both commutator identities on all pairs of generators.
    let flat: Vec<(String, Hom<E>)> = towers
        .iter()
        .enumerate()
        .flat_map(|(i, t)| t.iter().enumerate().map(move |(k, h)| (format!("𝒳^{k} f{i}"), h.clone())))
        .collect();
    let pb = |a: &Hom<E>, b: &Hom<E>| -> Result<Hom<E>> { bracket(alg, a, &d_pi(b)?) };
    let (mut f1, mut f2) = (Vec::new(), Vec::new());
    for (ln, a) in &flat {
        for (rn, b) in &flat {
            let (xa, xb) = (xp(a)?, xp(b)?);
            let cb = bracket(alg, &c, b)?;
            let acb = bracket(alg, a, &cb)?;
            let e1 = xp(&pb(a, b)?)?
                .value
                .sub(&pb(&xa, b)?.value)
                .sub(&pb(a, &xb)?.value)
                .sub(&acb.value);
            if !e1.is_zero() {
                f1.push(format!("({ln}, {rn}): {e1}"));
            }
            let e2 = xp(&acb)?
                .value
                .sub(&bracket(alg, &xa, &cb)?.value)
                .sub(&bracket(alg, a, &bracket(alg, &c, &xb)?)?.value);
            if !e2.is_zero() {
                f2.push(format!("({ln}, {rn}): {e2}"));
            }
        }
    }
    let n = flat.len() * flat.len();
    log.push(residual_check("commutator_identity", f1, n));
    log.push(residual_check("double_bracket_identity", f2, n));

    // Every generator has degree −1: centrals do and `𝒳_{π,1}` has degree 0.
    let brackets = fill_brackets(
        &generators,
        unordered_pairs(generators.len()),
        |a, b| Ok(pb(&hom(a.clone(), -1), &hom(b.clone(), -1))?.value),
        E::is_zero,
    )?;
    Ok(ShiftFamily::new(generators, brackets, log))
}
