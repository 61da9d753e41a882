use serde::{Deserialize, Serialize};

use super::polyvector::Polyvector;
use crate::error::{Error, Result};
use crate::exact::{Polynomial, PolynomialJson, Vars};

#[derive(Serialize, Deserialize)]
struct TermJson {
    idx: Vec<usize>,
    coeff: PolynomialJson,
}

/// `{"vars":[..],"rank":2,"terms":[{"idx":[1,2],"coeff":Polynomial}]}`,
/// indices 1-based.
#[derive(Serialize, Deserialize)]
pub struct PolyvectorJson {
    vars: Vec<String>,
    rank: usize,
    terms: Vec<TermJson>,
}

impl From<&Polyvector> for PolyvectorJson {
    fn from(pv: &Polyvector) -> Self {
        PolyvectorJson {
            vars: pv.vars().to_vec(),
            rank: pv.rank(),
            terms: pv
                .terms()
                .map(|(idx, c)| TermJson {
                    idx: idx.iter().map(|i| i + 1).collect(),
                    coeff: PolynomialJson::from(c),
                })
                .collect(),
        }
    }
}

impl PolyvectorJson {
    pub fn into_polyvector(self, shared: Option<&Vars>) -> Result<Polyvector> {
        let v: Vars = match shared {
            Some(s) if s.iter().eq(self.vars.iter()) => s.clone(),
            Some(s) => {
                return Err(Error::structural(format!(
                    "polyvector variables {:?} do not match {:?}",
                    self.vars, s
                )))
            }
            None => self.vars.into(),
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if t.idx.contains(&0) {
                return Err(Error::Parse("polyvector indices are 1-based".into()));
            }
            let c: Polynomial = t.coeff.into_polynomial(Some(&v))?;
            terms.push((t.idx.iter().map(|i| i - 1).collect(), c));
        }
        Polyvector::from_terms(&v, self.rank, terms)
    }
}

impl Serialize for Polyvector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyvectorJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polyvector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolyvectorJson::deserialize(d)?
            .into_polyvector(None)
            .map_err(serde::de::Error::custom)
    }
}
