use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::{LInftyAlgebra, LInftyDerivation, LInftyMorphism, MCElement, MapFamily};
use super::element::{Element, GradedMap, Hom};
use super::identities::{coderivation_commutator, normalize};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational};

fn inv_factorial(k: usize) -> Rational {
    let mut f = rat(1);
    for i in 2..=k {
        f /= rat(i as i64);
    }
    f
}

fn check_degree<E: Element>(pi: &Hom<E>) -> Result<()> {
    if pi.deg != 1 {
        return Err(Error::domain(format!("Maurer–Cartan elements have degree 1, got {}", pi.deg)));
    }
    Ok(())
}

/// `Σ_k 1/k! · M_{n+k}(Π, …, Π, a_1, …, a_n)` for `n + k` up to `max`.
fn twisted_value<I: Element, O: Element>(family: &MapFamily<I, O>, pi: &Hom<I>, args: &[Hom<I>], max: usize) -> Result<O> {
    let mut acc = family.zero().clone();
    let n = args.len();
    for m in family.arities().filter(|&m| m >= n.max(1) && m <= max) {
        let k = m - n;
        let mut full = vec![pi.clone(); k];
        full.extend_from_slice(args);
        let v = family.apply(&full)?.value;
        acc = acc.add(&v.scale(&inv_factorial(k)));
    }
    Ok(acc)
}

fn twisted_family<I: Element, O: Element>(family: &MapFamily<I, O>, pi: &Hom<I>, max: usize) -> Result<MapFamily<I, O>> {
    let mut out = MapFamily::new(family.offset(), family.zero().clone());
    let top = family.max_arity().min(max);
    for n in 1..=top {
        if family.arities().all(|m| m < n || m > max) {
            continue;
        }
        let fam = family.clone();
        let pi = pi.clone();
        out.insert(GradedMap::new(n, family.offset() - n as i32, move |a: &[Hom<I>]| {
            twisted_value(&fam, &pi, a, max)
        }))?;
    }
    Ok(out)
}

/// `Σ_n 1/n! · D_n(Π, …, Π)` truncated at the cutoff.
pub fn mc_defect<E: Element>(algebra: &LInftyAlgebra<E>, pi: &E) -> Result<E> {
    let pi = Hom::new(pi.clone(), 1);
    twisted_value(algebra.structure(), &pi, &[], algebra.cutoff())
}

/// The structure `D^Π`. Arity-0 curvature vanishes because `Π` is MC.
pub fn twist_structure<E: Element>(algebra: &LInftyAlgebra<E>, m: &MCElement<E>) -> Result<LInftyAlgebra<E>> {
    m.require_verified()?;
    check_degree(m.hom())?;
    let fam = twisted_family(algebra.structure(), m.hom(), algebra.cutoff())?;
    let mut out = LInftyAlgebra::new(algebra.zero().clone(), algebra.cutoff()).with_probes(algebra.probes().to_vec());
    for n in fam.arities().collect::<Vec<_>>() {
        out = out.with_map(fam.get(n).expect("present").clone())?;
    }
    Ok(out)
}

/// `F(Π) = Σ 1/n! · F_n(Π, …, Π)`, checked against the target MC equation.
pub fn push_mc<S: Element, T: Element>(f: &LInftyMorphism<S, T>, m: &MCElement<S>) -> Result<MCElement<T>> {
    m.require_verified()?;
    let value = twisted_value(&f.maps, m.hom(), &[], f.source.cutoff())?;
    let mut out = MCElement::new(value);
    out.check(&f.target)?;
    Ok(out)
}

/// `F^Π` between the twisted source and the target twisted by `F(Π)`.
pub fn twist_morphism<S: Element, T: Element>(f: &LInftyMorphism<S, T>, m: &MCElement<S>) -> Result<LInftyMorphism<S, T>> {
    let pushed = push_mc(f, m)?;
    if !pushed.is_verified() {
        return Err(Error::structural("pushed element fails the target MC equation within the arity cutoff"));
    }
    let source = Arc::new(twist_structure(&f.source, m)?);
    let target = Arc::new(twist_structure(&f.target, &pushed)?);
    let maps = twisted_family(&f.maps, m.hom(), f.source.cutoff())?;
    Ok(LInftyMorphism { source, target, maps })
}

/// `𝒳(Π) = Σ 1/n! · X_n(Π, …, Π)`.
pub fn x_of_pi<E: Element>(x: &LInftyDerivation<E>, m: &MCElement<E>) -> Result<E> {
    m.require_verified()?;
    twisted_value(&x.maps, m.hom(), &[], x.algebra.cutoff())
}

/// `𝒳_{Π,n}(a_1, …, a_n) = Σ_p 1/p! · X_{n+p}(Π, …, Π, a_1, …, a_n)`.
pub fn x_pi<E: Element>(x: &LInftyDerivation<E>, m: &MCElement<E>, args: &[Hom<E>]) -> Result<E> {
    m.require_verified()?;
    x.algebra.check_arity(args.len())?;
    twisted_value(&x.maps, m.hom(), args, x.algebra.cutoff())
}

/// The twisted derivation `𝒳_Π` on the twisted algebra, without its
/// arity-0 part `𝒳(Π)`.
pub fn twist_derivation<E: Element>(x: &LInftyDerivation<E>, m: &MCElement<E>) -> Result<LInftyDerivation<E>> {
    let algebra = Arc::new(twist_structure(&x.algebra, m)?);
    let maps = twisted_family(&x.maps, m.hom(), x.algebra.cutoff())?;
    Ok(LInftyDerivation { algebra, maps })
}

/// Residual of the twisted-derivation identity: the commutator of `D^Π`
/// with `𝒳_Π`, corrected by the constant term `𝒳(Π)`. Vanishes whenever
/// `X` is a derivation, within the arity cutoff.
pub fn twisted_derivation_defect<E: Element>(x: &LInftyDerivation<E>, m: &MCElement<E>, args: &[Hom<E>]) -> Result<E> {
    let tx = twist_derivation(x, m)?;
    tx.algebra.check_arity(args.len())?;
    let c = Hom::new(x_of_pi(x, m)?, 1);
    let comm = coderivation_commutator(tx.algebra.structure(), &tx.maps, args)?;
    let mut full = vec![c];
    full.extend_from_slice(args);
    let correction = normalize(args, tx.algebra.structure().apply_shifted(&full)?.value);
    Ok(comm.add(&correction))
}

/// Truncation recorded with every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub arity_cutoff: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub tuple: Vec<String>,
    pub value: String,
}

/// Outcome of an identity sweep: every nonzero residual and a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub checked_arity: usize,
    pub truncation: Truncation,
    pub checked_tuples: usize,
    pub residuals: Vec<Residual>,
    pub pass: bool,
}

impl DefectReport {
    pub fn new(checked_arity: usize, truncation: Truncation) -> Self {
        DefectReport {
            checked_arity,
            truncation,
            checked_tuples: 0,
            residuals: Vec::new(),
            pass: true,
        }
    }

    pub fn record<E: Element>(&mut self, tuple: Vec<String>, value: &E) {
        self.checked_tuples += 1;
        if !value.is_zero() {
            self.pass = false;
            self.residuals.push(Residual {
                tuple,
                value: value.to_string(),
            });
        }
    }
}

/// Non-decreasing index tuples of length `k` over `0..n`.
pub(crate) fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Runs `defect` on every multiset of probes of each arity in `arities`.
pub fn sweep<E: Element, O: Element>(
    probes: &[(String, Hom<E>)],
    arities: impl IntoIterator<Item = usize>,
    truncation: Truncation,
    mut defect: impl FnMut(&[Hom<E>]) -> Result<O>,
) -> Result<DefectReport> {
    let mut report = DefectReport::new(0, truncation);
    for n in arities {
        report.checked_arity = report.checked_arity.max(n);
        for idx in multisets(probes.len(), n) {
            let args: Vec<Hom<E>> = idx.iter().map(|&i| probes[i].1.clone()).collect();
            let v = defect(&args)?;
            report.record(idx.iter().map(|&i| probes[i].0.clone()).collect(), &v);
        }
    }
    Ok(report)
}

/// Weak and strong Nijenhuis defects: `𝒳_{Π,n}(𝒳(Π), a_2, …, a_n)` over all
/// probe fillings, `n = 1..=max_arity`. The `n = 1` entry is the weak defect.
pub fn nijenhuis_defects<E: Element>(
    x: &LInftyDerivation<E>,
    m: &MCElement<E>,
    max_arity: usize,
    probes: &[(String, Hom<E>)],
) -> Result<DefectReport> {
    let c = Hom::new(x_of_pi(x, m)?, 1);
    let max_arity = max_arity.min(x.algebra.cutoff());
    let truncation = Truncation {
        arity_cutoff: x.algebra.cutoff(),
        hbar_cap: None,
    };
    let mut report = DefectReport::new(max_arity, truncation);
    for n in 1..=max_arity {
        for idx in multisets(probes.len(), n - 1) {
            let mut args = vec![c.clone()];
            args.extend(idx.iter().map(|&i| probes[i].1.clone()));
            let v = x_pi(x, m, &args)?;
            let mut tuple = vec!["𝒳(π)".to_string()];
            tuple.extend(idx.iter().map(|&i| probes[i].0.clone()));
            report.record(tuple, &v);
        }
    }
    Ok(report)
}
