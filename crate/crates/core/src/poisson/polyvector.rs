use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat, Coefficient, Polynomial, Rational, Vars};

/// Polyvector field with coefficients in `C`: a sum of `c(x) ∂_{i1}∧…∧∂_{ip}`
/// over strictly increasing index tuples. Functions are rank 0.
///
/// As an element of the graded Lie algebra of polyvectors the shifted
/// degree is `rank − 1`.
#[derive(Clone)]
pub struct Polyvector<C: Coefficient = Polynomial> {
    ring: C::Ring,
    rank: usize,
    terms: BTreeMap<Vec<usize>, C>,
}

// Zero carries no meaningful rank, so all zeros compare equal.
impl<C: Coefficient> PartialEq for Polyvector<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.terms == other.terms
            && (self.rank == other.rank || self.terms.is_empty())
    }
}

/// Sign and merged index set of `θ_I · θ_J`, or `None` when they overlap.
fn merge_sign(left: &[usize], right: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut negative = false;
    let mut merged = Vec::with_capacity(left.len() + right.len());
    let (mut i, mut j) = (0, 0);
    while i < left.len() || j < right.len() {
        if j == right.len() || (i < left.len() && left[i] < right[j]) {
            merged.push(left[i]);
            i += 1;
        } else if i == left.len() || right[j] < left[i] {
            // right[j] jumps over the remaining left entries
            if (left.len() - i) % 2 == 1 {
                negative = !negative;
            }
            merged.push(right[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((negative, merged))
}

/// Sorts an index tuple, returning the permutation parity, or `None` on a
/// repeated index.
pub(crate) fn sort_with_sign(idx: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((negative, v))
}

fn reversal_negative(p: usize) -> bool {
    (p * p.saturating_sub(1) / 2) % 2 == 1
}

impl<C: Coefficient> Polyvector<C> {
    pub fn zero(ring: &C::Ring, rank: usize) -> Self {
        Polyvector {
            ring: ring.clone(),
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(f: C) -> Self {
        let mut pv = Self::zero(&f.ring(), 0);
        pv.add_term(vec![], f);
        pv
    }

    /// Builds from arbitrary index tuples; antisymmetry is folded into signs
    /// and tuples with a repeated index vanish.
    pub fn from_terms(ring: &C::Ring, rank: usize, terms: impl IntoIterator<Item = (Vec<usize>, C)>) -> Result<Self> {
        let n = C::ring_vars(ring).len();
        let mut pv = Self::zero(ring, rank);
        for (idx, c) in terms {
            if idx.len() != rank {
                return Err(Error::structural(format!(
                    "index tuple {idx:?} does not have rank {rank}"
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                return Err(Error::structural(format!("index {bad} out of range for {n} variables")));
            }
            if c.ring() != *ring {
                return Err(Error::structural("coefficient ring does not match polyvector"));
            }
            if let Some((neg, sorted)) = sort_with_sign(&idx) {
                pv.add_term(sorted, if neg { c.neg() } else { c });
            }
        }
        Ok(pv)
    }

    /// The constant coordinate field `∂_i`.
    pub fn coordinate_field(ring: &C::Ring, i: usize) -> Self {
        let mut pv = Self::zero(ring, 1);
        pv.add_term(vec![i], C::constant(ring, rat(1)));
        pv
    }

    pub(crate) fn add_term(&mut self, idx: Vec<usize>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
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

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Degree in the shifted grading: `rank − 1`.
    pub fn degree(&self) -> i32 {
        self.rank as i32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> C {
        self.terms.get(idx).cloned().unwrap_or_else(|| C::zero(&self.ring))
    }

    /// The coefficient of a rank-0 polyvector.
    pub fn as_function(&self) -> Option<C> {
        (self.rank == 0).then(|| self.coeff(&[]))
    }

    pub fn max_coeff_degree(&self) -> u32 {
        self.terms.values().map(C::total_degree).max().unwrap_or(0)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::structural("polyvectors live over different variable lists"));
        }
        Ok(())
    }

    fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(&self.ring, self.rank);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "variable mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.rank, other.rank, "cannot add polyvectors of different rank");
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

    /// Multiplies every coefficient by a ring element.
    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    /// Coefficientwise derivative `∂/∂x_i`.
    pub fn partial_x(&self, i: usize) -> Self {
        self.map_coeffs(|c| c.partial(i))
    }

    /// Right derivative by the odd generator `θ_i`.
    fn right_theta_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ring, self.rank.saturating_sub(1));
        if self.rank == 0 {
            return out;
        }
        for (idx, c) in &self.terms {
            if let Some(pos) = idx.iter().position(|&j| j == i) {
                let mut rest = idx.clone();
                rest.remove(pos);
                let neg = (self.rank - 1 - pos) % 2 == 1;
                out.add_term(rest, if neg { c.neg() } else { c.clone() });
            }
        }
        out
    }

    fn theta_product(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring, self.rank + other.rank);
        for (i1, c1) in &self.terms {
            for (i2, c2) in &other.terms {
                if let Some((neg, merged)) = merge_sign(i1, i2) {
                    let c = c1.mul(c2);
                    out.add_term(merged, if neg { c.neg() } else { c });
                }
            }
        }
        out
    }
}

/// Wedge product of polyvector fields.
pub fn wedge<C: Coefficient>(a: &Polyvector<C>, b: &Polyvector<C>) -> Result<Polyvector<C>> {
    a.check_compatible(b)?;
    Ok(a.theta_product(b))
}

/// Schouten–Nijenhuis bracket.
///
/// Computed as the odd Poisson bracket of superfunctions in `(x, θ)` after
/// reversing the order of the `θ` factors, so that `[ξ, f] = ξ(f)`, the
/// bracket of vector fields is their commutator, and `{f, g} = [f, [π, g]]`.
pub fn schouten<C: Coefficient>(a: &Polyvector<C>, b: &Polyvector<C>) -> Result<Polyvector<C>> {
    a.check_compatible(b)?;
    let (p, q) = (a.rank, b.rank);
    if p + q == 0 {
        return Ok(Polyvector::zero(&a.ring, 0));
    }
    let rank = p + q - 1;
    let mut out = Polyvector::zero(&a.ring, rank);
    let n = a.nvars();
    let swap_negative = (p as i64 - 1) * (q as i64 - 1) % 2 != 0;
    for i in 0..n {
        if p > 0 {
            let da = a.right_theta_derivative(i);
            if !da.is_zero() {
                out = out.add(&da.theta_product(&b.partial_x(i)));
            }
        }
        if q > 0 {
            let db = b.right_theta_derivative(i);
            if !db.is_zero() {
                let t = db.theta_product(&a.partial_x(i));
                out = if swap_negative { out.add(&t) } else { out.sub(&t) };
            }
        }
    }
    let flip = reversal_negative(p) ^ reversal_negative(q) ^ reversal_negative(rank);
    Ok(if flip { out.neg() } else { out })
}

/// `L_ξ a = [ξ, a]`.
pub fn lie_derivative<C: Coefficient>(xi: &Polyvector<C>, a: &Polyvector<C>) -> Result<Polyvector<C>> {
    if xi.rank != 1 {
        return Err(Error::structural(format!(
            "Lie derivative needs a vector field, got rank {}",
            xi.rank
        )));
    }
    schouten(xi, a)
}

/// `β(df, dg) = Σ_{i<j} β^{ij} (∂_i f ∂_j g − ∂_j f ∂_i g)` for a bivector `β`.
pub fn bivector_pairing<C: Coefficient>(beta: &Polyvector<C>, f: &C, g: &C) -> Result<C> {
    if beta.rank != 2 {
        return Err(Error::structural("pairing needs a bivector"));
    }
    if f.ring() != beta.ring || g.ring() != beta.ring {
        return Err(Error::structural("functions and bivector use different variables"));
    }
    let mut acc = C::zero(&beta.ring);
    for (idx, c) in &beta.terms {
        let (i, j) = (idx[0], idx[1]);
        let t = f.partial(i).mul(&g.partial(j)).sub(&f.partial(j).mul(&g.partial(i)));
        acc = acc.add(&c.mul(&t));
    }
    Ok(acc)
}

impl<C: Coefficient> fmt::Display for Polyvector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.vars();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                if idx.is_empty() {
                    format!("{c}")
                } else {
                    let d: Vec<String> = idx.iter().map(|&i| format!("∂{}", names[i])).collect();
                    format!("({c}) {}", d.join("∧"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coefficient> fmt::Debug for Polyvector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polyvector[rank {}]({self})", self.rank)
    }
}
