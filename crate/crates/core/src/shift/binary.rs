use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::family::{fill_brackets, ordered_pairs, Generator, HypothesisCheck, ShiftFamily};
use crate::error::Result;
use crate::exact::{parse_rational, Rational};
use crate::linfty::{Element, FVec, FiniteSpace};

/// Arbitrary bilinear operation `m` and linear operator `ξ` on a finite
/// space, both given on basis elements.
#[derive(Clone, Debug)]
pub struct BinaryOpModel {
    space: FiniteSpace,
    m: BTreeMap<(usize, usize), FVec>,
    xi: Vec<FVec>,
}

impl BinaryOpModel {
    pub fn new(names: &[&str]) -> Result<Self> {
        let space = FiniteSpace::new(&names.iter().map(|n| (*n, 0)).collect::<Vec<_>>())?;
        let xi = vec![space.zero(); space.dim()];
        Ok(BinaryOpModel {
            space,
            m: BTreeMap::new(),
            xi,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn vector(&self, coeffs: &[(&str, Rational)]) -> Result<FVec> {
        self.space.vector(coeffs)
    }

    pub fn set_m(&mut self, a: &str, b: &str, value: &[(&str, Rational)]) -> Result<()> {
        let key = (self.space.index(a)?, self.space.index(b)?);
        let v = self.space.vector(value)?;
        self.m.insert(key, v);
        Ok(())
    }

    pub fn set_xi(&mut self, a: &str, value: &[(&str, Rational)]) -> Result<()> {
        let i = self.space.index(a)?;
        self.xi[i] = self.space.vector(value)?;
        Ok(())
    }

    pub fn m(&self, a: &FVec, b: &FVec) -> FVec {
        bilinear(&self.space, &self.m, a, b)
    }

    pub fn xi(&self, a: &FVec) -> FVec {
        a.iter().fold(self.space.zero(), |acc, (i, c)| acc.add(&self.xi[i].scale(c)))
    }

    /// `ξ(μ)(a, b) = ξ(μ(a, b)) − μ(ξa, b) − μ(a, ξb)` as a new table.
    fn act(&self, mu: &BTreeMap<(usize, usize), FVec>) -> BTreeMap<(usize, usize), FVec> {
        let n = self.dim();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.space.basis(i).value, self.space.basis(j).value);
                let v = self
                    .xi(&bilinear(&self.space, mu, &a, &b))
                    .sub(&bilinear(&self.space, mu, &self.xi(&a), &b))
                    .sub(&bilinear(&self.space, mu, &a, &self.xi(&b)));
                if !v.is_zero() {
                    out.insert((i, j), v);
                }
            }
        }
        out
    }

    /// Nonzero entries of `ξ²(m)`.
    pub fn xi_squared_m(&self) -> Vec<((String, String), FVec)> {
        let twice = self.act(&self.act(&self.m));
        twice
            .into_iter()
            .map(|((i, j), v)| ((self.space.names()[i].clone(), self.space.names()[j].clone()), v))
            .collect()
    }

    /// Basis elements `y` with `m(a, y) ≠ 0` or `m(y, a) ≠ 0`.
    pub fn centrality_violations(&self, a: &FVec) -> Vec<String> {
        let mut out = Vec::new();
        for j in 0..self.dim() {
            let y = self.space.basis(j).value;
            let name = &self.space.names()[j];
            let l = self.m(a, &y);
            if !l.is_zero() {
                out.push(format!("m(a, {name}) = {l}"));
            }
            let r = self.m(&y, a);
            if !r.is_zero() {
                out.push(format!("m({name}, a) = {r}"));
            }
        }
        out
    }
}

fn bilinear(space: &FiniteSpace, table: &BTreeMap<(usize, usize), FVec>, a: &FVec, b: &FVec) -> FVec {
    let mut acc = space.zero();
    for (i, ca) in a.iter() {
        for (j, cb) in b.iter() {
            if let Some(v) = table.get(&(i, j)) {
                acc = acc.add(&v.scale(&(ca * cb)));
            }
        }
    }
    acc
}

/// Checks `m(ξ^k a, ξ^l b) = 0` for central `a, b` when `ξ²(m) = 0`.
pub fn binary_shift_check(model: &BinaryOpModel, centrals: &[FVec], kmax: usize) -> Result<ShiftFamily<FVec>> {
    let mut log = Vec::new();
    let sq = model.xi_squared_m();
    let detail = if sq.is_empty() {
        "ξ²(m) = 0".to_string()
    } else {
        sq.iter().map(|((a, b), v)| format!("ξ²(m)({a}, {b}) = {v}")).collect::<Vec<_>>().join("; ")
    };
    log.push(HypothesisCheck::new("xi_squared", sq.is_empty(), detail));
    let mut generators = Vec::new();
    for (i, a) in centrals.iter().enumerate() {
        let bad = model.centrality_violations(a);
        log.push(HypothesisCheck::new(
            format!("central[{i}]"),
            bad.is_empty(),
            if bad.is_empty() { "central".to_string() } else { bad.join("; ") },
        ));
        let mut cur = a.clone();
        for k in 0..=kmax {
            generators.push(Generator {
                label: format!("ξ^{k} a{i}"),
                source: i,
                power: k,
                value: cur.clone(),
            });
            cur = model.xi(&cur);
        }
    }
    let brackets = fill_brackets(&generators, ordered_pairs(generators.len()), |a, b| Ok(model.m(a, b)), FVec::is_zero)?;
    Ok(ShiftFamily::new(generators, brackets, log))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BinaryEntryJson {
    pub args: [String; 2],
    pub value: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XiEntryJson {
    pub arg: String,
    pub value: BTreeMap<String, String>,
}

/// `{"basis":[…],"m":[{"args":["p","q"],"value":{"z":"1"}}],"xi":[{"arg":"z","value":{"1":"1"}}]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BinaryOpJson {
    pub basis: Vec<String>,
    #[serde(default)]
    pub m: Vec<BinaryEntryJson>,
    #[serde(default)]
    pub xi: Vec<XiEntryJson>,
}

fn coeffs(v: &BTreeMap<String, String>) -> Result<Vec<(&str, Rational)>> {
    v.iter().map(|(k, c)| Ok((k.as_str(), parse_rational(c)?))).collect()
}

impl BinaryOpJson {
    pub fn build(&self) -> Result<BinaryOpModel> {
        let names: Vec<&str> = self.basis.iter().map(String::as_str).collect();
        let mut model = BinaryOpModel::new(&names)?;
        for e in &self.m {
            model.set_m(&e.args[0], &e.args[1], &coeffs(&e.value)?)?;
        }
        for e in &self.xi {
            model.set_xi(&e.arg, &coeffs(&e.value)?)?;
        }
        Ok(model)
    }
}

pub fn vector_from_map(model: &BinaryOpModel, v: &BTreeMap<String, String>) -> Result<FVec> {
    model.vector(&coeffs(v)?)
}

impl From<&BinaryOpModel> for BinaryOpJson {
    fn from(m: &BinaryOpModel) -> Self {
        let names = m.space.names();
        let map = |v: &FVec| -> BTreeMap<String, String> {
            v.iter().map(|(i, c)| (names[i].clone(), crate::exact::format_rational(c))).collect()
        };
        BinaryOpJson {
            basis: names.to_vec(),
            m: m.m
                .iter()
                .map(|((i, j), v)| BinaryEntryJson {
                    args: [names[*i].clone(), names[*j].clone()],
                    value: map(v),
                })
                .collect(),
            xi: m
                .xi
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| XiEntryJson {
                    arg: names[i].clone(),
                    value: map(v),
                })
                .collect(),
        }
    }
}
