use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, rat, Rational};
use crate::linfty::{
    derivation_defect, nijenhuis_defects, sweep, table_map, vector_to_json, Element, FVec, FiniteAlgebraJson,
    FiniteLInfty, LInftyDerivation, MCElement, TermJson, Truncation,
};

pub const DEFAULT_BUDGET: usize = 100_000;

/// One free coefficient: `X_arity(args) ∋ c · target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotJson {
    pub arity: usize,
    pub args: Vec<String>,
    pub target: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridJson {
    pub values: Vec<String>,
    pub slots: Vec<SlotJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanJson {
    pub dgla: FiniteAlgebraJson,
    #[serde(default)]
    pub mc: Vec<TermJson>,
    pub grid: GridJson,
    /// Candidate budget; the caller's default when absent.
    #[serde(default)]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    /// Coefficient of each slot, in grid order.
    pub coefficients: Vec<String>,
    pub trivial: bool,
    pub genuine: bool,
    /// `w` with `X_1 = [w, ·]`, when one exists.
    pub inner_witness: Option<Vec<TermJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub grid_size: u64,
    pub examined: usize,
    pub budget: usize,
    pub budget_exhausted: bool,
    pub found: Vec<Candidate>,
}

/// Finite problem ready to scan.
pub struct ScanProblem {
    lin: FiniteLInfty,
    mc: MCElement<FVec>,
    values: Vec<Rational>,
    slots: Vec<(usize, Vec<usize>, usize)>,
}

impl ScanProblem {
    pub fn from_json(json: &ScanJson) -> Result<Self> {
        let lin = FiniteLInfty::from_json(&json.dgla)?;
        if !lin.algebra.is_dgla() {
            return Err(Error::domain("the scanner needs a DGLA (no D_n with n ≥ 3)"));
        }
        let mc = MCElement::verified(lin.vector_from_json(&json.mc)?, &lin.algebra)?;
        let values = json.grid.values.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Error::parse("grid has no values"));
        }
        let mut slots = Vec::new();
        for s in &json.grid.slots {
            if s.arity == 0 || s.arity != s.args.len() {
                return Err(Error::parse(format!("slot {:?} has arity {} but {} args", s.args, s.arity, s.args.len())));
            }
            let args = s.args.iter().map(|a| lin.space.index(a)).collect::<Result<Vec<_>>>()?;
            let target = lin.space.index(&s.target)?;
            // Validates degrees once.
            table_map(&lin.space, &lin.space, s.arity, 1 - s.arity as i32, vec![(args.clone(), lin.space.basis(target).value)])?;
            slots.push((s.arity, args, target));
        }
        Ok(ScanProblem { lin, mc, values, slots })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let json: ScanJson = serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        Self::from_json(&json)
    }

    /// Number of candidates, saturating at `u64::MAX`.
    pub fn grid_size(&self) -> u64 {
        (self.values.len() as u64).saturating_pow(self.slots.len() as u32)
    }

    fn coefficients(&self, mut index: u64) -> Vec<Rational> {
        let base = self.values.len() as u64;
        (0..self.slots.len())
            .map(|_| {
                let v = self.values[(index % base) as usize].clone();
                index /= base;
                v
            })
            .collect()
    }

    fn derivation(&self, coeffs: &[Rational]) -> Result<LInftyDerivation<FVec>> {
        let mut tables: BTreeMap<usize, BTreeMap<Vec<usize>, FVec>> = BTreeMap::new();
        for ((arity, args, target), c) in self.slots.iter().zip(coeffs) {
            if c == &rat(0) {
                continue;
            }
            let v = self.lin.space.basis(*target).value.scale(c);
            let e = tables.entry(*arity).or_default().entry(args.clone()).or_insert_with(|| self.lin.space.zero());
            *e = e.add(&v);
        }
        let mut x = LInftyDerivation::new(self.lin.algebra.clone());
        for (arity, rows) in tables {
            x = x.with_map(table_map(&self.lin.space, &self.lin.space, arity, 1 - arity as i32, rows.into_iter().collect())?)?;
        }
        Ok(x)
    }

    fn passes(&self, x: &LInftyDerivation<FVec>) -> Result<bool> {
        let alg = &self.lin.algebra;
        let top = (x.maps.max_arity() + alg.structure().max_arity()).saturating_sub(1).clamp(1, alg.cutoff());
        let truncation = Truncation {
            arity_cutoff: alg.cutoff(),
            hbar_cap: None,
        };
        let der = sweep(alg.probes(), 1..=top, truncation, |a| derivation_defect(x, a))?;
        if !der.pass {
            return Ok(false);
        }
        Ok(nijenhuis_defects(x, &self.mc, alg.cutoff(), alg.probes())?.pass)
    }

    /// Solves `[w, e_i] = X_1(e_i)` for `w` of degree 0.
    fn inner_witness(&self, x: &LInftyDerivation<FVec>) -> Result<Option<FVec>> {
        let space = &self.lin.space;
        let alg = &self.lin.algebra;
        let unknowns: Vec<usize> = (0..space.dim()).filter(|&j| space.degree(j) == 0).collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..space.dim() {
            let e = space.basis(i);
            let rhs = x.maps.apply(std::slice::from_ref(&e))?.value;
            let cols = unknowns
                .iter()
                .map(|&j| Ok(alg.apply(&[space.basis(j), e.clone()])?.value))
                .collect::<Result<Vec<FVec>>>()?;
            for k in 0..space.dim() {
                let mut row: Vec<Rational> = cols.iter().map(|c| c.coeff(k)).collect();
                row.push(rhs.coeff(k));
                rows.push(row);
            }
        }
        Ok(solve(rows, unknowns.len())
            .map(|sol| FVec::from_coeffs(space.names(), unknowns.iter().copied().zip(sol))))
    }

    fn classify(&self, coeffs: &[Rational], x: &LInftyDerivation<FVec>) -> Result<Candidate> {
        let trivial = coeffs.iter().all(|c| c == &rat(0));
        let witness = self.inner_witness(x)?;
        let higher = x.maps.arities().any(|n| n >= 2);
        Ok(Candidate {
            coefficients: coeffs.iter().map(format_rational).collect(),
            trivial,
            genuine: higher || witness.is_none(),
            inner_witness: witness.map(|w| vector_to_json(&w)),
        })
    }

    /// Examines candidates in index order up to the budget. Survivors are
    /// reported in the same order.
    pub fn scan(&self, budget: usize) -> Result<ScanReport> {
        let size = self.grid_size();
        let examined = size.min(budget as u64) as usize;
        let found: Vec<Option<Candidate>> = (0..examined)
            .into_par_iter()
            .map(|i| {
                let coeffs = self.coefficients(i as u64);
                let x = self.derivation(&coeffs)?;
                if self.passes(&x)? {
                    Ok(Some(self.classify(&coeffs, &x)?))
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(ScanReport {
            grid_size: size,
            examined,
            budget,
            budget_exhausted: (examined as u64) < size,
            found: found.into_iter().flatten().collect(),
        })
    }
}

/// Runs a scan described by JSON. The file's budget wins over `default`,
/// which falls back to [`DEFAULT_BUDGET`].
pub fn scan_strong_nijenhuis(json: &ScanJson, default: Option<usize>) -> Result<ScanReport> {
    ScanProblem::from_json(json)?.scan(json.budget.or(default).unwrap_or(DEFAULT_BUDGET))
}

/// Gaussian elimination on an augmented matrix; `None` if inconsistent.
fn solve(mut rows: Vec<Vec<Rational>>, n: usize) -> Option<Vec<Rational>> {
    let zero = rat(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != zero) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rat(1) / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v *= inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != zero {
                let f = rows[i][col].clone();
                for j in 0..=n {
                    let d = rows[r][j].clone() * f.clone();
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != zero) {
        return None;
    }
    let mut sol = vec![zero; n];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][n].clone();
    }
    Some(sol)
}
