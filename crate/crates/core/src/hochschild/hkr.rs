use super::op::PolyDiffOp;
use crate::exact::{Coefficient, HbarPoly, HbarRing, Polynomial};
use crate::poisson::{sort_with_sign, Polyvector};

/// HKR map, determinant convention:
/// `χ(∂_{i1}∧…∧∂_{ip})(f1..fp) = det(∂_{i_a} f_b)`.
pub fn hkr<C: Coefficient>(psi: &Polyvector<C>) -> PolyDiffOp<C> {
    let n = psi.nvars();
    let p = psi.rank();
    let mut op = PolyDiffOp::zero(psi.ring(), p);
    let perms = permutations(p);
    for (idx, c) in psi.terms() {
        for perm in &perms {
            let (neg, _) = sort_with_sign(perm).expect("permutation");
            let key = perm
                .iter()
                .map(|&a| {
                    let mut m = vec![0u32; n];
                    m[idx[a]] = 1;
                    m
                })
                .collect();
            op.add_term(key, if neg { c.neg() } else { c.clone() });
        }
    }
    op
}

fn permutations(p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(p - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, p - 1);
            out.push(v);
        }
    }
    out
}

/// `ħ^power · op` with ħ-series coefficients truncated at `cap`.
pub fn lift_hbar(op: &PolyDiffOp<Polynomial>, cap: usize, power: usize) -> PolyDiffOp<HbarPoly> {
    let ring = HbarRing {
        vars: op.vars().clone(),
        cap,
    };
    PolyDiffOp::from_terms(
        &ring,
        op.arity(),
        op.terms().map(|(k, c)| (k.clone(), HbarPoly::hbar_term(c.clone(), power, cap))),
    )
    .expect("same shape")
}

/// `ħ^power · psi` with ħ-series coefficients truncated at `cap`.
pub fn lift_hbar_polyvector(psi: &Polyvector<Polynomial>, cap: usize, power: usize) -> Polyvector<HbarPoly> {
    let ring = HbarRing {
        vars: psi.vars().clone(),
        cap,
    };
    Polyvector::from_terms(
        &ring,
        psi.rank(),
        psi.terms().map(|(k, c)| (k.clone(), HbarPoly::hbar_term(c.clone(), power, cap))),
    )
    .expect("same shape")
}

/// Coefficient of `ħ^power` in every term.
pub fn hbar_component(op: &PolyDiffOp<HbarPoly>, power: usize) -> PolyDiffOp<Polynomial> {
    PolyDiffOp::from_terms(
        op.vars(),
        op.arity(),
        op.terms().map(|(k, c)| {
            let p = if power <= c.cap() {
                c.coeff(power).clone()
            } else {
                Polynomial::zero(op.vars())
            };
            (k.clone(), p)
        }),
    )
    .expect("same shape")
}
