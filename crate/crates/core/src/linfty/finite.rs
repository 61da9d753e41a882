//! Finite-dimensional graded spaces with maps given by tables on basis
//! tuples.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::{homotopy, Homotopy, LInftyAlgebra, LInftyDerivation, LInftyMorphism, MapFamily, DEFAULT_ARITY_CUTOFF};
use super::element::{Element, FVec, GradedMap, Hom};
use super::sign::koszul_sign;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, rat, Rational};

/// Named homogeneous basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace {
    names: Arc<[String]>,
    degrees: Vec<i32>,
}

impl FiniteSpace {
    pub fn new(basis: &[(&str, i32)]) -> Result<Self> {
        Self::from_owned(basis.iter().map(|(n, d)| (n.to_string(), *d)).collect())
    }

    pub fn from_owned(basis: Vec<(String, i32)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (n, _) in &basis {
            if !seen.insert(n.clone()) {
                return Err(Error::parse(format!("duplicate basis element {n:?}")));
            }
        }
        let (names, degrees): (Vec<String>, Vec<i32>) = basis.into_iter().unzip();
        Ok(FiniteSpace {
            names: names.into(),
            degrees,
        })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::parse(format!("unknown basis element {name:?}")))
    }

    pub fn basis(&self, i: usize) -> Hom<FVec> {
        Hom::new(FVec::basis(&self.names, i), self.degrees[i])
    }

    pub fn element(&self, name: &str) -> Result<Hom<FVec>> {
        Ok(self.basis(self.index(name)?))
    }

    pub fn zero(&self) -> FVec {
        FVec::from_coeffs(&self.names, [])
    }

    pub fn vector(&self, coeffs: &[(&str, Rational)]) -> Result<FVec> {
        let mut out = Vec::new();
        for (n, c) in coeffs {
            out.push((self.index(n)?, c.clone()));
        }
        Ok(FVec::from_coeffs(&self.names, out))
    }

    /// Homogeneous element; all components must share one degree.
    pub fn hom(&self, v: FVec) -> Result<Hom<FVec>> {
        let mut deg = None;
        for (i, _) in v.iter() {
            match deg {
                None => deg = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => {
                    return Err(Error::structural("element is not homogeneous"));
                }
                _ => {}
            }
        }
        Ok(Hom::new(v, deg.unwrap_or(0)))
    }

    /// Basis elements with their names, used as sweep probes.
    pub fn probes(&self) -> Vec<(String, Hom<FVec>)> {
        (0..self.dim()).map(|i| (self.names[i].clone(), self.basis(i))).collect()
    }

    fn is_homogeneous_of(&self, v: &FVec, deg: i32) -> bool {
        v.iter().all(|(i, _)| self.degrees[i] == deg)
    }

    /// Sorts a basis tuple, returning the exterior sign, or `None` when an
    /// even element repeats (the value is forced to zero).
    fn normalize_key(&self, idx: &[usize]) -> Option<(Vec<usize>, bool)> {
        let mut perm: Vec<usize> = (0..idx.len()).collect();
        perm.sort_by_key(|&k| idx[k]);
        let degs: Vec<i32> = idx.iter().map(|&i| self.degrees[i]).collect();
        let sign = koszul_sign(&perm, &degs).expect("valid permutation");
        let key: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
        for w in key.windows(2) {
            if w[0] == w[1] && self.degrees[w[0]] % 2 == 0 {
                return None;
            }
        }
        Some((key, sign))
    }
}

/// Graded antisymmetric map `Λⁿ V → W` given on sorted basis tuples.
pub fn table_map(
    source: &FiniteSpace,
    target: &FiniteSpace,
    arity: usize,
    degree: i32,
    entries: Vec<(Vec<usize>, FVec)>,
) -> Result<GradedMap<FVec>> {
    let mut table: BTreeMap<Vec<usize>, FVec> = BTreeMap::new();
    for (idx, value) in entries {
        if idx.len() != arity {
            return Err(Error::structural(format!("table entry {idx:?} in a map of arity {arity}")));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= source.dim()) {
            return Err(Error::structural(format!("basis index {bad} out of range")));
        }
        let expected = idx.iter().map(|&i| source.degree(i)).sum::<i32>() + degree;
        if !target.is_homogeneous_of(&value, expected) {
            return Err(Error::structural(format!(
                "value {value} on {:?} is not of degree {expected}",
                idx.iter().map(|&i| source.names[i].as_str()).collect::<Vec<_>>()
            )));
        }
        let Some((key, sign)) = source.normalize_key(&idx) else {
            if value.is_zero() {
                continue;
            }
            return Err(Error::structural("repeated even basis element in an antisymmetric map"));
        };
        let value = if sign { value.neg() } else { value };
        if let Some(old) = table.get(&key) {
            if *old != value {
                return Err(Error::structural(format!("conflicting table entries for {key:?}")));
            }
        }
        table.insert(key, value);
    }
    let source = source.clone();
    let zero = target.zero();
    let table = Arc::new(table);
    Ok(GradedMap::new(arity, degree, move |args: &[Hom<FVec>]| {
        let mut acc = zero.clone();
        let mut idx = vec![0usize; args.len()];
        expand(&source, &table, args, 0, &rat(1), &mut idx, &mut acc);
        Ok(acc)
    }))
}

fn expand(
    space: &FiniteSpace,
    table: &BTreeMap<Vec<usize>, FVec>,
    args: &[Hom<FVec>],
    pos: usize,
    coeff: &Rational,
    idx: &mut Vec<usize>,
    acc: &mut FVec,
) {
    if pos == args.len() {
        if let Some((key, sign)) = space.normalize_key(idx) {
            if let Some(v) = table.get(&key) {
                let c = if sign { -coeff.clone() } else { coeff.clone() };
                *acc = acc.add(&v.scale(&c));
            }
        }
        return;
    }
    for (i, c) in args[pos].value.iter() {
        idx[pos] = i;
        expand(space, table, args, pos + 1, &(coeff * c), idx, acc);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisJson {
    pub name: String,
    pub deg: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub b: String,
    pub c: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    pub args: Vec<String>,
    pub value: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub arity: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteAlgebraJson {
    pub basis: Vec<BasisJson>,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    #[serde(rename = "D", default)]
    pub d: Vec<MapJson>,
}

fn default_cutoff() -> usize {
    DEFAULT_ARITY_CUTOFF
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteMorphismJson {
    pub source: FiniteAlgebraJson,
    #[serde(default)]
    pub target: Option<FiniteAlgebraJson>,
    #[serde(rename = "F", default)]
    pub f: Vec<MapJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteDerivationJson {
    pub algebra: FiniteAlgebraJson,
    #[serde(rename = "X", default)]
    pub x: Vec<MapJson>,
    /// Optional MC element for Nijenhuis checks.
    #[serde(default)]
    pub mc: Option<Vec<TermJson>>,
}

/// Finite L∞-algebra together with its basis.
#[derive(Clone)]
pub struct FiniteLInfty {
    pub space: FiniteSpace,
    pub algebra: Arc<LInftyAlgebra<FVec>>,
}

/// One table entry: argument names and the value as `(name, coefficient)` terms.
pub type TableRow<'a> = (&'a [&'a str], &'a [(&'a str, Rational)]);

impl FiniteLInfty {
    pub fn new(space: FiniteSpace, cutoff: usize) -> Self {
        let algebra = LInftyAlgebra::new(space.zero(), cutoff).with_probes(space.probes());
        FiniteLInfty {
            space,
            algebra: Arc::new(algebra),
        }
    }

    /// Adds `D_n` from `(args, value)` entries.
    pub fn with_table(self, arity: usize, entries: &[TableRow]) -> Result<Self> {
        let map = self.table(arity, 2 - arity as i32, entries)?;
        let algebra = (*self.algebra).clone().with_map(map)?;
        Ok(FiniteLInfty {
            space: self.space,
            algebra: Arc::new(algebra),
        })
    }

    pub fn table(&self, arity: usize, degree: i32, entries: &[TableRow]) -> Result<GradedMap<FVec>> {
        let mut rows = Vec::new();
        for (args, value) in entries {
            let idx = args.iter().map(|a| self.space.index(a)).collect::<Result<Vec<_>>>()?;
            rows.push((idx, self.space.vector(value)?));
        }
        table_map(&self.space, &self.space, arity, degree, rows)
    }

    pub fn element(&self, name: &str) -> Result<Hom<FVec>> {
        self.space.element(name)
    }

    pub fn from_json(json: &FiniteAlgebraJson) -> Result<Self> {
        let space = FiniteSpace::from_owned(json.basis.iter().map(|b| (b.name.clone(), b.deg)).collect())?;
        let mut algebra = LInftyAlgebra::new(space.zero(), json.cutoff).with_probes(space.probes());
        for m in &json.d {
            algebra = algebra.with_map(map_from_json(&space, &space, m, 2)?)?;
        }
        Ok(FiniteLInfty {
            space,
            algebra: Arc::new(algebra),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let json: FiniteAlgebraJson = serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn derivation_from_json(&self, maps: &[MapJson]) -> Result<LInftyDerivation<FVec>> {
        let mut x = LInftyDerivation::new(self.algebra.clone());
        for m in maps {
            x = x.with_map(map_from_json(&self.space, &self.space, m, 1)?)?;
        }
        Ok(x)
    }

    pub fn homotopy_from_json(&self, maps: &[MapJson]) -> Result<Homotopy<FVec>> {
        let mut h = homotopy(self.space.zero());
        for m in maps {
            h.insert(map_from_json(&self.space, &self.space, m, 0)?)?;
        }
        Ok(h)
    }

    pub fn vector_from_json(&self, terms: &[TermJson]) -> Result<FVec> {
        vector_from_json(&self.space, terms)
    }
}

fn vector_from_json(space: &FiniteSpace, terms: &[TermJson]) -> Result<FVec> {
    let mut coeffs = Vec::new();
    for t in terms {
        coeffs.push((space.index(&t.b)?, parse_rational(&t.c)?));
    }
    Ok(FVec::from_coeffs(space.names(), coeffs))
}

/// Table map of degree `offset − arity`.
pub fn map_from_json(source: &FiniteSpace, target: &FiniteSpace, m: &MapJson, offset: i32) -> Result<GradedMap<FVec>> {
    let mut rows = Vec::new();
    for e in &m.entries {
        let idx = e.args.iter().map(|a| source.index(a)).collect::<Result<Vec<_>>>()?;
        rows.push((idx, vector_from_json(target, &e.value)?));
    }
    table_map(source, target, m.arity, offset - m.arity as i32, rows)
}

/// Morphism between two finite algebras from JSON. A missing target means
/// the source.
pub fn morphism_from_json(json: &FiniteMorphismJson) -> Result<(FiniteLInfty, FiniteLInfty, LInftyMorphism<FVec>)> {
    let source = FiniteLInfty::from_json(&json.source)?;
    let target = match &json.target {
        Some(t) => FiniteLInfty::from_json(t)?,
        None => source.clone(),
    };
    let mut maps = MapFamily::new(1, target.space.zero());
    for m in &json.f {
        maps.insert(map_from_json(&source.space, &target.space, m, 1)?)?;
    }
    let f = LInftyMorphism {
        source: source.algebra.clone(),
        target: target.algebra.clone(),
        maps,
    };
    Ok((source, target, f))
}

/// JSON form of a vector.
pub fn vector_to_json(v: &FVec) -> Vec<TermJson> {
    v.iter()
        .map(|(i, c)| TermJson {
            b: v.names().map(|n| n[i].clone()).unwrap_or_else(|| format!("e{i}")),
            c: format_rational(c),
        })
        .collect()
}
