use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Member `T^power(f_source)` of a shifted family.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator<T> {
    pub label: String,
    pub source: usize,
    pub power: usize,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketEntry<T> {
    pub left: usize,
    pub right: usize,
    pub value: T,
    pub is_zero: bool,
}

/// One verified hypothesis or intermediate identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl HypothesisCheck {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        HypothesisCheck {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Generators, their computed brackets and the verification log.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftFamily<T> {
    pub generators: Vec<Generator<T>>,
    pub brackets: Vec<BracketEntry<T>>,
    pub all_zero: bool,
    pub log: Vec<HypothesisCheck>,
}

impl<T: fmt::Display> ShiftFamily<T> {
    /// All hypotheses hold and every bracket vanishes.
    pub fn verified(&self) -> bool {
        self.all_zero && self.log.iter().all(|h| h.pass)
    }

    pub fn first_failure(&self) -> Option<&HypothesisCheck> {
        self.log.iter().find(|h| !h.pass)
    }

    pub fn nonzero_brackets(&self) -> impl Iterator<Item = &BracketEntry<T>> + '_ {
        self.brackets.iter().filter(|b| !b.is_zero)
    }

    pub(crate) fn new(generators: Vec<Generator<T>>, brackets: Vec<BracketEntry<T>>, log: Vec<HypothesisCheck>) -> Self {
        let all_zero = brackets.iter().all(|b| b.is_zero);
        ShiftFamily {
            generators,
            brackets,
            all_zero,
            log,
        }
    }

    pub fn report(&self) -> ShiftReport {
        ShiftReport {
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorReport {
                    label: g.label.clone(),
                    source: g.source,
                    power: g.power,
                    value: g.value.to_string(),
                })
                .collect(),
            brackets: self
                .brackets
                .iter()
                .map(|b| BracketReport {
                    left: self.generators[b.left].label.clone(),
                    right: self.generators[b.right].label.clone(),
                    value: b.value.to_string(),
                })
                .collect(),
            all_zero: self.all_zero,
            hypotheses: self.log.clone(),
            verified: self.verified(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub label: String,
    pub source: usize,
    pub power: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketReport {
    pub left: String,
    pub right: String,
    pub value: String,
}

/// Serializable form of a [`ShiftFamily`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub generators: Vec<GeneratorReport>,
    pub brackets: Vec<BracketReport>,
    pub all_zero: bool,
    pub hypotheses: Vec<HypothesisCheck>,
    pub verified: bool,
}

/// Evaluates `bracket` on the given index pairs in parallel, keeping order.
pub(crate) fn fill_brackets<T, F, Z>(
    generators: &[Generator<T>],
    pairs: Vec<(usize, usize)>,
    bracket: F,
    is_zero: Z,
) -> Result<Vec<BracketEntry<T>>>
where
    T: Send + Sync,
    F: Fn(&T, &T) -> Result<T> + Send + Sync,
    Z: Fn(&T) -> bool + Send + Sync,
{
    pairs
        .into_par_iter()
        .map(|(i, j)| {
            let value = bracket(&generators[i].value, &generators[j].value)?;
            Ok(BracketEntry {
                left: i,
                right: j,
                is_zero: is_zero(&value),
                value,
            })
        })
        .collect()
}

pub(crate) fn unordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

pub(crate) fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}
