use serde::{Deserialize, Serialize};

use super::op::{MultiIndex, PolyDiffOp};
use crate::error::{Error, Result};
use crate::exact::{Polynomial, PolynomialJson, Vars};

#[derive(Serialize, Deserialize)]
struct OpTermJson {
    multi: Vec<MultiIndex>,
    coeff: PolynomialJson,
}

/// `{"vars":[..],"arity":p,"terms":[{"multi":[[..],..],"coeff":Polynomial}]}`.
#[derive(Serialize, Deserialize)]
pub struct PolyDiffOpJson {
    vars: Vec<String>,
    arity: usize,
    terms: Vec<OpTermJson>,
}

impl From<&PolyDiffOp> for PolyDiffOpJson {
    fn from(op: &PolyDiffOp) -> Self {
        PolyDiffOpJson {
            vars: op.vars().to_vec(),
            arity: op.arity(),
            terms: op
                .terms()
                .map(|(k, c)| OpTermJson {
                    multi: k.clone(),
                    coeff: PolynomialJson::from(c),
                })
                .collect(),
        }
    }
}

impl PolyDiffOpJson {
    pub fn into_op(self, shared: Option<&Vars>) -> Result<PolyDiffOp> {
        let v: Vars = match shared {
            Some(s) if s.iter().eq(self.vars.iter()) => s.clone(),
            Some(s) => {
                return Err(Error::structural(format!(
                    "operator variables {:?} do not match {:?}",
                    self.vars, s
                )))
            }
            None => self.vars.into(),
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            let c: Polynomial = t.coeff.into_polynomial(Some(&v))?;
            terms.push((t.multi, c));
        }
        PolyDiffOp::from_terms(&v, self.arity, terms)
    }
}

impl Serialize for PolyDiffOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyDiffOpJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyDiffOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolyDiffOpJson::deserialize(d)?
            .into_op(None)
            .map_err(serde::de::Error::custom)
    }
}
