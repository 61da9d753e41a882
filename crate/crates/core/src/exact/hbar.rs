use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::{Polynomial, PolynomialJson, Vars};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Polynomial-coefficient power series in a formal parameter ħ, truncated
/// above `order_cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct HbarPoly {
    cap: usize,
    coeffs: Vec<Polynomial>,
}

impl HbarPoly {
    pub fn zero(vars: &Vars, cap: usize) -> Self {
        HbarPoly {
            cap,
            coeffs: vec![Polynomial::zero(vars); cap + 1],
        }
    }

    /// Embeds a polynomial at ħ⁰.
    pub fn from_poly(p: Polynomial, cap: usize) -> Self {
        let mut h = Self::zero(p.vars(), cap);
        h.coeffs[0] = p;
        h
    }

    /// `ħ^power · p`, or zero when the power exceeds the cap.
    pub fn hbar_term(p: Polynomial, power: usize, cap: usize) -> Self {
        let mut h = Self::zero(p.vars(), cap);
        if power <= cap {
            h.coeffs[power] = p;
        }
        h
    }

    pub fn from_coeffs(vars: &Vars, cap: usize, coeffs: Vec<Polynomial>) -> Self {
        let mut h = Self::zero(vars, cap);
        for (k, p) in coeffs.into_iter().enumerate().take(cap + 1) {
            h.coeffs[k] = p;
        }
        h
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn vars(&self) -> &Vars {
        self.coeffs[0].vars()
    }

    pub fn coeff(&self, power: usize) -> &Polynomial {
        &self.coeffs[power]
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// Lowest ħ power carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|p| !p.is_zero())
    }

    fn check(&self, other: &HbarPoly) {
        assert_eq!(self.cap, other.cap, "ħ caps differ");
    }

    pub fn add(&self, other: &HbarPoly) -> HbarPoly {
        self.check(other);
        HbarPoly {
            cap: self.cap,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &HbarPoly) -> HbarPoly {
        self.check(other);
        HbarPoly {
            cap: self.cap,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> HbarPoly {
        HbarPoly {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> HbarPoly {
        HbarPoly {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Cauchy product, truncated at the cap.
    pub fn mul(&self, other: &HbarPoly) -> HbarPoly {
        self.check(other);
        let mut out = HbarPoly::zero(self.vars(), self.cap);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(self.cap + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> HbarPoly {
        HbarPoly {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|a| a.partial(i)).collect(),
        }
    }

    /// Drops every power above `cap` and re-labels the cap.
    pub fn truncate(&self, cap: usize) -> HbarPoly {
        let mut h = HbarPoly::zero(self.vars(), cap);
        for k in 0..=cap.min(self.cap) {
            h.coeffs[k] = self.coeffs[k].clone();
        }
        h
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.iter().map(Polynomial::total_degree).max().unwrap_or(0)
    }
}

pub fn hbar_mul(a: &HbarPoly, b: &HbarPoly) -> Result<HbarPoly> {
    if a.cap != b.cap {
        return Err(Error::structural(format!(
            "ħ caps differ: {} vs {}",
            a.cap, b.cap
        )));
    }
    if a.vars() != b.vars() {
        return Err(Error::structural("variable lists differ"));
    }
    Ok(a.mul(b))
}

impl fmt::Display for HbarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| match k {
                0 => format!("({p})"),
                1 => format!("ħ({p})"),
                _ => format!("ħ^{k}({p})"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for HbarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HbarPoly[cap {}]({self})", self.cap)
    }
}

/// `{"vars":[..],"hbar_cap":N,"powers":[Polynomial, ..]}`
#[derive(Serialize, Deserialize)]
pub struct HbarPolyJson {
    vars: Vec<String>,
    hbar_cap: usize,
    powers: Vec<PolynomialJson>,
}

impl Serialize for HbarPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HbarPolyJson {
            vars: self.vars().to_vec(),
            hbar_cap: self.cap,
            powers: self.coeffs.iter().map(PolynomialJson::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HbarPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HbarPolyJson::deserialize(d)?;
        let v: Vars = j.vars.into();
        let mut coeffs = Vec::new();
        for p in j.powers {
            coeffs.push(p.into_polynomial(Some(&v)).map_err(serde::de::Error::custom)?);
        }
        if coeffs.len() > j.hbar_cap + 1 {
            return Err(serde::de::Error::custom("more ħ powers than hbar_cap allows"));
        }
        Ok(HbarPoly::from_coeffs(&v, j.hbar_cap, coeffs))
    }
}
