use std::collections::BTreeMap;
use std::sync::Arc;

use super::element::{Element, GradedMap, Hom};
use super::sign::decalage_negative;
use crate::error::{Error, Result};

pub const DEFAULT_ARITY_CUTOFF: usize = 4;
pub const DEFAULT_HBAR_CAP: usize = 4;

/// Truncation parameters shared by every engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoffs {
    pub arity: usize,
    pub hbar_cap: usize,
    /// Bound on the number of terms of any exponential series.
    pub max_iterations: usize,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs {
            arity: DEFAULT_ARITY_CUTOFF,
            hbar_cap: DEFAULT_HBAR_CAP,
            max_iterations: 64,
        }
    }
}

/// Taylor coefficients `M_n`, `n ≥ 1`, with `deg M_n = offset − n`.
/// Missing arities are zero.
pub struct MapFamily<I, O = I> {
    offset: i32,
    zero: O,
    maps: BTreeMap<usize, GradedMap<I, O>>,
}

impl<I, O: Clone> Clone for MapFamily<I, O> {
    fn clone(&self) -> Self {
        MapFamily {
            offset: self.offset,
            zero: self.zero.clone(),
            maps: self.maps.clone(),
        }
    }
}

impl<I: Element, O: Element> MapFamily<I, O> {
    pub fn new(offset: i32, zero: O) -> Self {
        MapFamily {
            offset,
            zero,
            maps: BTreeMap::new(),
        }
    }

    pub fn with(mut self, map: GradedMap<I, O>) -> Result<Self> {
        self.insert(map)?;
        Ok(self)
    }

    pub fn insert(&mut self, map: GradedMap<I, O>) -> Result<()> {
        let n = map.arity();
        if n == 0 {
            return Err(Error::structural("Taylor coefficients start at arity 1"));
        }
        let expected = self.offset - n as i32;
        if map.degree() != expected {
            return Err(Error::structural(format!(
                "arity-{n} coefficient has degree {}, expected {expected}",
                map.degree()
            )));
        }
        self.maps.insert(n, map);
        Ok(())
    }

    pub fn get(&self, n: usize) -> Option<&GradedMap<I, O>> {
        self.maps.get(&n)
    }

    pub fn zero(&self) -> &O {
        &self.zero
    }

    pub fn offset(&self) -> i32 {
        self.offset
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.maps.keys().copied()
    }

    pub fn max_arity(&self) -> usize {
        self.maps.keys().next_back().copied().unwrap_or(0)
    }

    /// `M_n(args)`, zero when the coefficient is absent.
    pub fn apply(&self, args: &[Hom<I>]) -> Result<Hom<O>> {
        let n = args.len();
        match self.maps.get(&n) {
            Some(m) => m.apply(args),
            None => Ok(Hom::new(
                self.zero.clone(),
                args.iter().map(|a| a.deg).sum::<i32>() + self.offset - n as i32,
            )),
        }
    }

    /// The symmetric map on `V[1]` attached to `M_n` by décalage.
    pub fn apply_shifted(&self, args: &[Hom<I>]) -> Result<Hom<O>> {
        let mut h = self.apply(args)?;
        if decalage_negative(&args.iter().map(|a| a.deg).collect::<Vec<_>>()) {
            h.value = h.value.neg();
        }
        Ok(h)
    }
}

/// Arity-truncated L∞-algebra: structure maps `D_n` of degree `2 − n`.
#[derive(Clone)]
pub struct LInftyAlgebra<E: Element> {
    structure: MapFamily<E>,
    cutoff: usize,
    probes: Vec<(String, Hom<E>)>,
}

impl<E: Element> LInftyAlgebra<E> {
    pub fn new(zero: E, cutoff: usize) -> Self {
        LInftyAlgebra {
            structure: MapFamily::new(2, zero),
            cutoff,
            probes: Vec::new(),
        }
    }

    pub fn with_map(mut self, map: GradedMap<E>) -> Result<Self> {
        if map.arity() > self.cutoff {
            return Err(Error::domain(format!(
                "structure map of arity {} beyond cutoff {}",
                map.arity(),
                self.cutoff
            )));
        }
        self.structure.insert(map)?;
        Ok(self)
    }

    /// Named elements used by sweeps; the whole basis for finite algebras.
    pub fn with_probes(mut self, probes: Vec<(String, Hom<E>)>) -> Self {
        self.probes = probes;
        self
    }

    pub fn structure(&self) -> &MapFamily<E> {
        &self.structure
    }

    pub fn d(&self, n: usize) -> Option<&GradedMap<E>> {
        self.structure.get(n)
    }

    pub fn apply(&self, args: &[Hom<E>]) -> Result<Hom<E>> {
        self.structure.apply(args)
    }

    pub fn zero(&self) -> &E {
        self.structure.zero()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn probes(&self) -> &[(String, Hom<E>)] {
        &self.probes
    }

    /// True when every `D_n` with `n ≥ 3` vanishes.
    pub fn is_dgla(&self) -> bool {
        self.structure.arities().all(|n| n <= 2)
    }

    pub(crate) fn check_arity(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.cutoff {
            return Err(Error::domain(format!(
                "arity {n} outside the checked range 1..={}",
                self.cutoff
            )));
        }
        Ok(())
    }
}

/// L∞-morphism `F: V → W` with coefficients `F_n` of degree `1 − n`.
#[derive(Clone)]
pub struct LInftyMorphism<S: Element, T: Element = S> {
    pub source: Arc<LInftyAlgebra<S>>,
    pub target: Arc<LInftyAlgebra<T>>,
    pub maps: MapFamily<S, T>,
}

impl<S: Element, T: Element> LInftyMorphism<S, T> {
    pub fn new(source: Arc<LInftyAlgebra<S>>, target: Arc<LInftyAlgebra<T>>) -> Self {
        let zero = target.zero().clone();
        LInftyMorphism {
            source,
            target,
            maps: MapFamily::new(1, zero),
        }
    }

    pub fn with_map(mut self, map: GradedMap<S, T>) -> Result<Self> {
        self.maps.insert(map)?;
        Ok(self)
    }
}

impl<E: Element> LInftyMorphism<E, E> {
    pub fn identity(algebra: Arc<LInftyAlgebra<E>>) -> Self {
        let id = GradedMap::new(1, 0, |a: &[Hom<E>]| Ok(a[0].value.clone()));
        LInftyMorphism::new(algebra.clone(), algebra).with_map(id).expect("degree 0")
    }
}

/// L∞-derivation: coefficients `X_n` of degree `1 − n`, so the induced
/// coderivation has degree 0.
#[derive(Clone)]
pub struct LInftyDerivation<E: Element> {
    pub algebra: Arc<LInftyAlgebra<E>>,
    pub maps: MapFamily<E>,
}

impl<E: Element> LInftyDerivation<E> {
    pub fn new(algebra: Arc<LInftyAlgebra<E>>) -> Self {
        let zero = algebra.zero().clone();
        LInftyDerivation {
            algebra,
            maps: MapFamily::new(1, zero),
        }
    }

    pub fn with_map(mut self, map: GradedMap<E>) -> Result<Self> {
        self.maps.insert(map)?;
        Ok(self)
    }
}

/// Homotopy coefficients `H_n` of degree `−n`.
pub type Homotopy<E> = MapFamily<E>;

pub fn homotopy<E: Element>(zero: E) -> Homotopy<E> {
    MapFamily::new(0, zero)
}

/// Degree-1 element together with the outcome of its MC check.
#[derive(Clone, Debug, PartialEq)]
pub struct MCElement<E> {
    value: Hom<E>,
    verified: bool,
}

impl<E: Element> MCElement<E> {
    pub fn new(value: E) -> Self {
        MCElement {
            value: Hom::new(value, 1),
            verified: false,
        }
    }

    /// Checks the MC equation in `algebra`; fails with a domain error naming
    /// the defect.
    pub fn verified(value: E, algebra: &LInftyAlgebra<E>) -> Result<Self> {
        let mut m = Self::new(value);
        let d = m.check(algebra)?;
        if !d.is_zero() {
            return Err(Error::domain(format!("not a Maurer–Cartan element: defect {d}")));
        }
        Ok(m)
    }

    pub fn value(&self) -> &E {
        &self.value.value
    }

    pub fn hom(&self) -> &Hom<E> {
        &self.value
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn check(&mut self, algebra: &LInftyAlgebra<E>) -> Result<E> {
        let d = super::mc::mc_defect(algebra, &self.value.value)?;
        self.verified = d.is_zero();
        Ok(d)
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        if !self.verified {
            return Err(Error::domain("Maurer–Cartan element has not been verified"));
        }
        Ok(())
    }
}
