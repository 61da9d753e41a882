use std::sync::Arc;

use super::algebra::{Cutoffs, Homotopy, LInftyDerivation, LInftyMorphism};
use super::element::{Element, GradedMap, Hom};
use super::identities::{coderivation_anticommutator, normalize};
use super::sign::{symmetric_sign, unshuffles};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational};

type Word<E> = (Rational, Vec<Hom<E>>);

fn merge<E: Element>(words: Vec<Word<E>>) -> Vec<Word<E>> {
    let mut out: Vec<Word<E>> = Vec::new();
    for (c, w) in words {
        match out.iter_mut().find(|(_, v)| *v == w) {
            Some(slot) => slot.0 += c,
            None => out.push((c, w)),
        }
    }
    out.retain(|(c, _)| *c != rat(0));
    out
}

/// One application of the coderivation of `X` to a sum of words.
fn step<E: Element>(x: &LInftyDerivation<E>, words: &[Word<E>]) -> Result<Vec<Word<E>>> {
    let mut out = Vec::new();
    for (c, w) in words {
        let n = w.len();
        let sdeg: Vec<i32> = w.iter().map(|a| a.deg - 1).collect();
        for i in x.maps.arities().filter(|&i| i <= n) {
            for u in unshuffles(i, n - i) {
                let block: Vec<Hom<E>> = u[..i].iter().map(|&k| w[k].clone()).collect();
                let head = x.maps.apply_shifted(&block)?;
                if head.value.is_zero() {
                    continue;
                }
                let mut next = vec![head];
                next.extend(u[i..].iter().map(|&k| w[k].clone()));
                let coeff = if symmetric_sign(&u, &sdeg) { -c.clone() } else { c.clone() };
                out.push((coeff, next));
            }
        }
    }
    Ok(merge(out))
}

/// `Σ_k t^k/k! · proj(X^k(args))`. With `order = Some(N)` the series is cut
/// after `t^N`; otherwise it must terminate within `max_iterations` terms.
fn exp_component<E: Element>(
    x: &LInftyDerivation<E>,
    t: &Rational,
    max_iterations: usize,
    order: Option<usize>,
    args: &[Hom<E>],
) -> Result<E> {
    let zero = x.algebra.zero().clone();
    let mut words: Vec<Word<E>> = vec![(rat(1), args.to_vec())];
    let mut acc = if args.len() == 1 { args[0].value.clone() } else { zero.clone() };
    let mut factor = rat(1);
    for k in 1..=order.unwrap_or(max_iterations) {
        words = step(x, &words)?;
        if words.is_empty() {
            return Ok(normalize(args, acc));
        }
        factor = factor * t / rat(k as i64);
        for (c, w) in &words {
            if w.len() == 1 {
                acc = acc.add(&w[0].value.scale(&(c * &factor)));
            }
        }
    }
    if order.is_some() {
        return Ok(normalize(args, acc));
    }
    Err(Error::resource(format!(
        "exponential series did not terminate within {max_iterations} terms"
    )))
}

/// `exp(tX)`: the morphism whose coalgebra map is the exponential of the
/// coderivation of `X`, projected to cogenerators.
pub fn exp_derivation<E: Element>(x: &LInftyDerivation<E>, t: Rational, cutoffs: Cutoffs) -> Result<LInftyMorphism<E, E>> {
    exp_with_order(x, t, cutoffs, None)
}

/// Partial sum of `exp(tX)` through `t^order`, for non-nilpotent `X`.
pub fn exp_derivation_truncated<E: Element>(
    x: &LInftyDerivation<E>,
    t: Rational,
    order: usize,
    cutoffs: Cutoffs,
) -> Result<LInftyMorphism<E, E>> {
    exp_with_order(x, t, cutoffs, Some(order))
}

fn exp_with_order<E: Element>(
    x: &LInftyDerivation<E>,
    t: Rational,
    cutoffs: Cutoffs,
    order: Option<usize>,
) -> Result<LInftyMorphism<E, E>> {
    let algebra = x.algebra.clone();
    let mut f = LInftyMorphism::new(algebra.clone(), algebra.clone());
    let max_arity = if x.maps.arities().any(|i| i >= 2) { cutoffs.arity.min(algebra.cutoff()) } else { 1 };
    for n in 1..=max_arity {
        let x = x.clone();
        let t = t.clone();
        let iters = cutoffs.max_iterations;
        f = f.with_map(GradedMap::new(n, 1 - n as i32, move |a: &[Hom<E>]| exp_component(&x, &t, iters, order, a)))?;
    }
    Ok(f)
}

/// The inner derivation `[Q, H] = QH + HQ` of an odd coderivation with
/// coefficients `H_n` of degree `−n`.
pub fn inner_derivation<E: Element>(algebra: Arc<super::LInftyAlgebra<E>>, h: &Homotopy<E>) -> Result<LInftyDerivation<E>> {
    if h.offset() != 0 {
        return Err(Error::structural("inner derivations need coefficients of degree −n"));
    }
    let mut x = LInftyDerivation::new(algebra.clone());
    let top = (h.max_arity() + algebra.structure().max_arity()).saturating_sub(1).min(algebra.cutoff());
    for n in 1..=top {
        let alg = algebra.clone();
        let h = h.clone();
        x = x.with_map(GradedMap::new(n, 1 - n as i32, move |a: &[Hom<E>]| {
            coderivation_anticommutator(alg.structure(), &h, a)
        }))?;
    }
    Ok(x)
}
