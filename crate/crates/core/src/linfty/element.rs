use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{rat, Coefficient, Rational};
use crate::hochschild::PolyDiffOp;
use crate::poisson::Polyvector;

/// Vector space operations needed by the L∞ engines.
pub trait Element: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }
}

impl<C: Coefficient> Element for Polyvector<C> {
    fn add(&self, other: &Self) -> Self {
        Polyvector::add(self, other)
    }
    fn scale(&self, q: &Rational) -> Self {
        Polyvector::scale(self, q)
    }
    fn is_zero(&self) -> bool {
        Polyvector::is_zero(self)
    }
}

impl<C: Coefficient> Element for PolyDiffOp<C> {
    fn add(&self, other: &Self) -> Self {
        PolyDiffOp::add(self, other)
    }
    fn scale(&self, q: &Rational) -> Self {
        PolyDiffOp::scale(self, q)
    }
    fn is_zero(&self) -> bool {
        PolyDiffOp::is_zero(self)
    }
}

/// Sparse vector over a finite named basis.
#[derive(Clone, Default)]
pub struct FVec {
    names: Option<Arc<[String]>>,
    coeffs: BTreeMap<usize, Rational>,
}

impl FVec {
    pub fn zero() -> Self {
        FVec::default()
    }

    pub fn basis(names: &Arc<[String]>, i: usize) -> Self {
        let mut v = FVec {
            names: Some(names.clone()),
            coeffs: BTreeMap::new(),
        };
        v.coeffs.insert(i, rat(1));
        v
    }

    pub fn from_coeffs(names: &Arc<[String]>, coeffs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut v = FVec {
            names: Some(names.clone()),
            coeffs: BTreeMap::new(),
        };
        for (i, c) in coeffs {
            v.add_coeff(i, c);
        }
        v
    }

    fn add_coeff(&mut self, i: usize, c: Rational) {
        let e = self.coeffs.entry(i).or_insert_with(|| rat(0));
        *e += c;
        if e == &rat(0) {
            self.coeffs.remove(&i);
        }
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn names(&self) -> Option<&Arc<[String]>> {
        self.names.as_ref()
    }
}

impl Element for FVec {
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        if out.names.is_none() {
            out.names = other.names.clone();
        }
        for (i, c) in &other.coeffs {
            out.add_coeff(*i, c.clone());
        }
        out
    }
    fn scale(&self, q: &Rational) -> Self {
        let mut out = FVec {
            names: self.names.clone(),
            coeffs: BTreeMap::new(),
        };
        if q != &rat(0) {
            for (i, c) in &self.coeffs {
                out.coeffs.insert(*i, c * q);
            }
        }
        out
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

// names are labels only
impl PartialEq for FVec {
    fn eq(&self, other: &FVec) -> bool {
        self.coeffs == other.coeffs
    }
}

impl fmt::Display for FVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(i, c)| {
                let name = match &self.names {
                    Some(n) => n[*i].clone(),
                    None => format!("e{i}"),
                };
                format!("{}·{name}", crate::exact::format_rational(c))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FVec({self})")
    }
}

/// Homogeneous element with its (unshifted) degree.
#[derive(Clone, PartialEq, Debug)]
pub struct Hom<E> {
    pub value: E,
    pub deg: i32,
}

impl<E: Element> Hom<E> {
    pub fn new(value: E, deg: i32) -> Self {
        Hom { value, deg }
    }

    /// Degree in the suspension `V[1]`.
    pub fn shifted(&self) -> i32 {
        self.deg - 1
    }
}

impl<C: Coefficient> From<Polyvector<C>> for Hom<Polyvector<C>> {
    fn from(p: Polyvector<C>) -> Self {
        let deg = p.degree();
        Hom { value: p, deg }
    }
}

impl<C: Coefficient> From<PolyDiffOp<C>> for Hom<PolyDiffOp<C>> {
    fn from(p: PolyDiffOp<C>) -> Self {
        let deg = p.degree();
        Hom { value: p, deg }
    }
}

type EvalFn<I, O> = dyn Fn(&[Hom<I>]) -> Result<O> + Send + Sync;

/// Multilinear map `Λⁿ V → W` of fixed degree, evaluated on homogeneous
/// arguments.
pub struct GradedMap<I, O = I> {
    arity: usize,
    degree: i32,
    eval: Arc<EvalFn<I, O>>,
}

impl<I, O> Clone for GradedMap<I, O> {
    fn clone(&self) -> Self {
        GradedMap {
            arity: self.arity,
            degree: self.degree,
            eval: self.eval.clone(),
        }
    }
}

impl<I, O> fmt::Debug for GradedMap<I, O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedMap(arity {}, degree {})", self.arity, self.degree)
    }
}

impl<I: Element, O: Element> GradedMap<I, O> {
    pub fn new(arity: usize, degree: i32, eval: impl Fn(&[Hom<I>]) -> Result<O> + Send + Sync + 'static) -> Self {
        GradedMap {
            arity,
            degree,
            eval: Arc::new(eval),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn apply(&self, args: &[Hom<I>]) -> Result<Hom<O>> {
        if args.len() != self.arity {
            return Err(Error::structural(format!(
                "map of arity {} applied to {} arguments",
                self.arity,
                args.len()
            )));
        }
        let deg = args.iter().map(|a| a.deg).sum::<i32>() + self.degree;
        Ok(Hom::new((self.eval)(args)?, deg))
    }
}
