//! Defects of the L∞ identities, evaluated through the symmetric maps on the
//! suspension and converted back by décalage.

use super::algebra::{Homotopy, LInftyAlgebra, LInftyDerivation, LInftyMorphism, MapFamily};
use super::element::{Element, Hom};
use super::sign::{decalage_negative, set_partitions, symmetric_sign, unshuffles};
use crate::error::{Error, Result};

fn shifted_degrees<E>(args: &[Hom<E>]) -> Vec<i32> {
    args.iter().map(|a| a.deg - 1).collect()
}

fn pick<E: Clone>(args: &[Hom<E>], idx: &[usize]) -> Vec<Hom<E>> {
    idx.iter().map(|&i| args[i].clone()).collect()
}

pub(crate) fn normalize<E: Element>(args: &[Hom<impl Clone>], value: E) -> E {
    let degs: Vec<i32> = args.iter().map(|a| a.deg).collect();
    if decalage_negative(&degs) {
        value.neg()
    } else {
        value
    }
}

/// `Σ_i Σ_{unshuffles} ε · outer'(inner'(block), rest)` on the suspension.
pub(crate) fn insertion_sum<E: Element, O: Element>(
    outer: &MapFamily<E, O>,
    inner: &MapFamily<E, E>,
    args: &[Hom<E>],
) -> Result<O> {
    let n = args.len();
    let sdeg = shifted_degrees(args);
    let mut acc = outer.zero().clone();
    for i in 1..=n {
        if inner.get(i).is_none() || outer.get(n - i + 1).is_none() {
            continue;
        }
        for u in unshuffles(i, n - i) {
            let block = pick(args, &u[..i]);
            let inner_val = inner.apply_shifted(&block)?;
            if inner_val.value.is_zero() {
                continue;
            }
            let mut outer_args = vec![inner_val];
            outer_args.extend(pick(args, &u[i..]));
            let v = outer.apply_shifted(&outer_args)?.value;
            acc = if symmetric_sign(&u, &sdeg) { acc.sub(&v) } else { acc.add(&v) };
        }
    }
    Ok(acc)
}

/// Generalized Jacobi defect `Σ_{i+j=n+1} D_j ∘ D_i` on `args`.
pub fn jacobi_defect<E: Element>(algebra: &LInftyAlgebra<E>, args: &[Hom<E>]) -> Result<E> {
    algebra.check_arity(args.len())?;
    let s = algebra.structure();
    Ok(normalize(args, insertion_sum(s, s, args)?))
}

/// `F∘Q − Q'∘F` in arity `args.len()`, zero exactly for L∞-morphisms.
pub fn morphism_defect<S: Element, T: Element>(f: &LInftyMorphism<S, T>, args: &[Hom<S>]) -> Result<T> {
    f.source.check_arity(args.len())?;
    let lhs = insertion_sum(&f.maps, f.source.structure(), args)?;
    let rhs = partition_sum(f, args)?;
    Ok(normalize(args, lhs.sub(&rhs)))
}

fn partition_sum<S: Element, T: Element>(f: &LInftyMorphism<S, T>, args: &[Hom<S>]) -> Result<T> {
    let sdeg = shifted_degrees(args);
    let target = f.target.structure();
    let mut acc = target.zero().clone();
    for p in set_partitions(args.len()) {
        if target.get(p.len()).is_none() || p.iter().any(|b| f.maps.get(b.len()).is_none()) {
            continue;
        }
        let order: Vec<usize> = p.iter().flatten().copied().collect();
        let mut images = Vec::with_capacity(p.len());
        for b in &p {
            images.push(f.maps.apply_shifted(&pick(args, b))?);
        }
        if images.iter().any(|h| h.value.is_zero()) {
            continue;
        }
        let v = target.apply_shifted(&images)?.value;
        acc = if symmetric_sign(&order, &sdeg) { acc.sub(&v) } else { acc.add(&v) };
    }
    Ok(acc)
}

/// Commutator `[Q, X]` of the coderivations; zero for L∞-derivations.
pub(crate) fn coderivation_commutator<E: Element>(
    structure: &MapFamily<E>,
    x: &MapFamily<E>,
    args: &[Hom<E>],
) -> Result<E> {
    let qx = insertion_sum(structure, x, args)?;
    let xq = insertion_sum(x, structure, args)?;
    Ok(normalize(args, qx.sub(&xq)))
}

/// Anticommutator `QH + HQ` for an odd coderivation `H`.
pub(crate) fn coderivation_anticommutator<E: Element>(
    structure: &MapFamily<E>,
    h: &MapFamily<E>,
    args: &[Hom<E>],
) -> Result<E> {
    let qh = insertion_sum(structure, h, args)?;
    let hq = insertion_sum(h, structure, args)?;
    Ok(normalize(args, qh.add(&hq)))
}

/// Derivation defect on the tuple `(a_0, …, a_n)`, for DGLA structures.
pub fn derivation_defect<E: Element>(x: &LInftyDerivation<E>, args: &[Hom<E>]) -> Result<E> {
    if !x.algebra.is_dgla() {
        return Err(Error::domain("derivation defects are only checked on DG Lie algebras"));
    }
    x.algebra.check_arity(args.len())?;
    coderivation_commutator(x.algebra.structure(), &x.maps, args)
}

/// `F_n − G_n − (QH + HQ)_n`; zero when `H` is a homotopy from `G` to `F`.
pub fn homotopy_defect<E: Element>(
    f: &LInftyMorphism<E, E>,
    g: &LInftyMorphism<E, E>,
    h: &Homotopy<E>,
    args: &[Hom<E>],
) -> Result<E> {
    if !std::sync::Arc::ptr_eq(&f.source, &g.source) || !std::sync::Arc::ptr_eq(&f.target, &g.target) {
        return Err(Error::structural("homotopy between morphisms with different algebras"));
    }
    if !std::sync::Arc::ptr_eq(&f.source, &f.target) {
        return Err(Error::structural("homotopies are only checked for endomorphisms"));
    }
    if h.offset() != 0 {
        return Err(Error::structural("homotopy coefficients must have degree −n"));
    }
    f.source.check_arity(args.len())?;
    let fv = f.maps.apply(args)?.value;
    let gv = g.maps.apply(args)?.value;
    let qh = coderivation_anticommutator(f.source.structure(), h, args)?;
    Ok(fv.sub(&gv).sub(&qh))
}
