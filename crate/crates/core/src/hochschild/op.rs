use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat, Coefficient, Polynomial, Rational, Vars};
use crate::exact::rational::binomial;

/// Multi-index of a partial derivative, one exponent per variable.
pub type MultiIndex = Vec<u32>;

/// Local polydifferential operator
/// `C(f1..fp) = Σ c(x) ∂^{α1}f1 ··· ∂^{αp}fp`.
///
/// Arity-0 operators are functions. The shifted degree is `arity − 1`.
#[derive(Clone)]
pub struct PolyDiffOp<C: Coefficient = Polynomial> {
    ring: C::Ring,
    arity: usize,
    terms: BTreeMap<Vec<MultiIndex>, C>,
}

impl<C: Coefficient> PartialEq for PolyDiffOp<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.terms == other.terms
            && (self.arity == other.arity || self.terms.is_empty())
    }
}

impl<C: Coefficient> PolyDiffOp<C> {
    pub fn zero(ring: &C::Ring, arity: usize) -> Self {
        PolyDiffOp {
            ring: ring.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(f: C) -> Self {
        let mut op = Self::zero(&f.ring(), 0);
        op.add_term(vec![], f);
        op
    }

    /// Pointwise multiplication `μ(f, g) = fg`.
    pub fn multiplication(ring: &C::Ring) -> Self {
        let n = C::ring_vars(ring).len();
        let mut op = Self::zero(ring, 2);
        op.add_term(vec![vec![0; n], vec![0; n]], C::constant(ring, rat(1)));
        op
    }

    pub fn from_terms(ring: &C::Ring, arity: usize, terms: impl IntoIterator<Item = (Vec<MultiIndex>, C)>) -> Result<Self> {
        let n = C::ring_vars(ring).len();
        let mut op = Self::zero(ring, arity);
        for (key, c) in terms {
            if key.len() != arity {
                return Err(Error::structural(format!(
                    "{} multi-indices for an arity-{arity} operator",
                    key.len()
                )));
            }
            if key.iter().any(|a| a.len() != n) {
                return Err(Error::structural(format!("multi-index length differs from {n} variables")));
            }
            if c.ring() != *ring {
                return Err(Error::structural("coefficient ring does not match operator"));
            }
            op.add_term(key, c);
        }
        Ok(op)
    }

    pub(crate) fn add_term(&mut self, key: Vec<MultiIndex>, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn vars(&self) -> &Vars {
        C::ring_vars(&self.ring)
    }

    pub fn nvars(&self) -> usize {
        self.vars().len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i32 {
        self.arity as i32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<MultiIndex>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_function(&self) -> Option<C> {
        (self.arity == 0).then(|| self.terms.get(&vec![]).cloned().unwrap_or_else(|| C::zero(&self.ring)))
    }

    /// Highest total derivative order over all slots.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|a| a.iter().sum::<u32>()))
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::structural("operators live over different coefficient rings"));
        }
        Ok(())
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(&self.ring, self.arity);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "coefficient ring mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.arity, other.arity, "cannot add operators of different arity");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(C::neg)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(q))
    }

    /// `C ∘_i D`: `D` fed into slot `i` (0-based) of `C`.
    pub fn insert(&self, slot: usize, d: &Self) -> Self {
        assert!(slot < self.arity);
        let q = d.arity;
        let arity = self.arity + q - 1;
        let mut out = Self::zero(&self.ring, arity);
        for (ck, cc) in &self.terms {
            let alpha = &ck[slot];
            let splits = leibniz_splits(alpha, q + 1);
            for (dk, dc) in &d.terms {
                for (weight, parts) in &splits {
                    let coeff = cc.mul(&dc.partial_multi(&parts[0])).scale(weight);
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut key = Vec::with_capacity(arity);
                    key.extend(ck[..slot].iter().cloned());
                    for (j, beta) in dk.iter().enumerate() {
                        key.push(beta.iter().zip(&parts[j + 1]).map(|(a, b)| a + b).collect());
                    }
                    key.extend(ck[slot + 1..].iter().cloned());
                    out.add_term(key, coeff);
                }
            }
        }
        out
    }

    /// Braided composition `C ∘ D = Σ_i (−1)^{(q−1)(i−1)} C ∘_i D`.
    pub fn compose(&self, d: &Self) -> Self {
        let q = d.arity as i64;
        let mut out = Self::zero(&self.ring, (self.arity + d.arity).saturating_sub(1));
        for i in 0..self.arity {
            let t = self.insert(i, d);
            out = if ((q - 1) * i as i64) % 2 != 0 { out.sub(&t) } else { out.add(&t) };
        }
        out
    }
}

/// All ways to split `alpha` into `parts` multi-indices, each with its
/// multinomial weight.
pub(crate) fn leibniz_splits(alpha: &[u32], parts: usize) -> Vec<(Rational, Vec<MultiIndex>)> {
    let n = alpha.len();
    let mut out = vec![(rat(1), vec![vec![0u32; n]; parts])];
    for (k, &a) in alpha.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let comps = compositions(a, parts);
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for (w, base) in &out {
            for comp in &comps {
                let mut weight = w.clone();
                let mut rest = a as usize;
                for &c in comp {
                    weight *= binomial(rest, c as usize);
                    rest -= c as usize;
                }
                let mut m = base.clone();
                for (slot, &c) in comp.iter().enumerate() {
                    m[slot][k] = c;
                }
                next.push((weight, m));
            }
        }
        out = next;
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Gerstenhaber bracket `[C, D] = C∘D − (−1)^{(p−1)(q−1)} D∘C`.
pub fn gerstenhaber_bracket<C: Coefficient>(c: &PolyDiffOp<C>, d: &PolyDiffOp<C>) -> Result<PolyDiffOp<C>> {
    c.check_compatible(d)?;
    let (p, q) = (c.arity as i64, d.arity as i64);
    let cd = c.compose(d);
    let dc = d.compose(c);
    Ok(if ((p - 1) * (q - 1)) % 2 != 0 { cd.add(&dc) } else { cd.sub(&dc) })
}

/// Hochschild differential `δC = [μ, C]`.
///
/// On an arity-`p` cochain this is `(−1)^{p−1}` times the alternating
/// face sum `f0 C(..) + Σ ± C(.., f_i f_{i+1}, ..) ± C(..) f_p`.
pub fn hochschild_delta<C: Coefficient>(c: &PolyDiffOp<C>) -> PolyDiffOp<C> {
    let mu = PolyDiffOp::multiplication(&c.ring);
    gerstenhaber_bracket(&mu, c).expect("same ring")
}

/// Evaluates `C(f1, .., fp)`.
pub fn apply_op<C: Coefficient>(op: &PolyDiffOp<C>, args: &[C]) -> Result<C> {
    if args.len() != op.arity {
        return Err(Error::structural(format!(
            "operator of arity {} applied to {} arguments",
            op.arity,
            args.len()
        )));
    }
    if args.iter().any(|a| a.ring() != op.ring) {
        return Err(Error::structural("argument ring differs from operator ring"));
    }
    let mut acc = C::zero(&op.ring);
    for (key, c) in &op.terms {
        let mut t = c.clone();
        for (alpha, f) in key.iter().zip(args) {
            t = t.mul(&f.partial_multi(alpha));
            if t.is_zero() {
                break;
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

impl<C: Coefficient> fmt::Display for PolyDiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let slots: Vec<String> = k.iter().map(|a| format!("∂{a:?}")).collect();
                format!("({c})·{}", slots.join("⊗"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coefficient> fmt::Debug for PolyDiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyDiffOp[arity {}]({self})", self.arity)
    }
}
