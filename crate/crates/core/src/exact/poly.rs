use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, rat, Rational};
use crate::error::{Error, Result};

/// Default bound on the total degree of a checked product.
pub const DEFAULT_DEGREE_CAP: u32 = 40;

/// Ordered variable names shared by every polynomial of one problem.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The coordinate function of variable `i`.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, Monomial(e), Rational::one())
    }

    pub fn monomial(vars: &Vars, exp: Monomial, c: Rational) -> Self {
        assert_eq!(exp.0.len(), vars.len(), "exponent length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exp.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Constant term as a rational, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exp: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &Polynomial) {
        assert!(
            self.vars == other.vars,
            "polynomial variable lists differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] -= 1;
            out.add_term(Monomial(exp), c * rat(e as i64));
        }
        out
    }

    /// Applies `∂^alpha`.
    pub fn partial_multi(&self, alpha: &[u32]) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exp = m.0.clone();
            let mut vanished = false;
            for (i, &a) in alpha.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if exp[i] < a {
                    vanished = true;
                    break;
                }
                for k in 0..a {
                    coeff *= rat((exp[i] - k) as i64);
                }
                exp[i] -= a;
            }
            if !vanished {
                out.add_term(Monomial(exp), coeff);
            }
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

/// Checked product: variable lists must agree and the result must stay
/// within `degree_cap`.
pub fn poly_mul_capped(p: &Polynomial, q: &Polynomial, degree_cap: u32) -> Result<Polynomial> {
    if p.vars != q.vars {
        return Err(Error::structural(format!(
            "variable lists differ: {:?} vs {:?}",
            p.vars, q.vars
        )));
    }
    let deg = p.total_degree() + q.total_degree();
    if !p.is_zero() && !q.is_zero() && deg > degree_cap {
        return Err(Error::resource(format!(
            "product degree {deg} exceeds cap {degree_cap}"
        )));
    }
    Ok(p * q)
}

pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    poly_mul_capped(p, q, DEFAULT_DEGREE_CAP)
}

pub fn poly_partial(p: &Polynomial, var_index: usize) -> Result<Polynomial> {
    if var_index >= p.nvars() {
        return Err(Error::structural(format!(
            "variable index {var_index} out of range for {} variables",
            p.nvars()
        )));
    }
    Ok(p.partial(var_index))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_vars(rhs);
        let mut out = Polynomial::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest terms first reads more naturally
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = super::rational::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(self.vars.iter())
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coeff: String,
}

/// `{"vars":[..],"terms":[{"exp":[..],"coeff":"p/q"}]}`
#[derive(Serialize, Deserialize)]
pub struct PolynomialJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            vars: p.vars.to_vec(),
            terms: p
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exp: m.0.clone(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }
}

impl PolynomialJson {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn into_polynomial(self, shared: Option<&Vars>) -> Result<Polynomial> {
        let v: Vars = match shared {
            Some(s) if s.iter().eq(self.vars.iter()) => s.clone(),
            Some(s) => {
                return Err(Error::structural(format!(
                    "polynomial variables {:?} do not match {:?}",
                    self.vars, s
                )))
            }
            None => self.vars.into(),
        };
        let mut p = Polynomial::zero(&v);
        for t in self.terms {
            if t.exp.len() != v.len() {
                return Err(Error::Parse(format!(
                    "exponent {:?} has wrong length for {} variables",
                    t.exp,
                    v.len()
                )));
            }
            p.add_term(Monomial(t.exp), parse_rational(&t.coeff)?);
        }
        Ok(p)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolynomialJson::deserialize(d)?
            .into_polynomial(None)
            .map_err(serde::de::Error::custom)
    }
}
