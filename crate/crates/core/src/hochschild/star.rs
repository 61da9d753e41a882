use serde::{Deserialize, Serialize};

use super::hkr::{hbar_component, hkr, lift_hbar};
use super::op::{apply_op, gerstenhaber_bracket, hochschild_delta, PolyDiffOp};
use crate::error::{Error, Result};
use crate::exact::rational::factorial;
use crate::exact::{hbar_mul, ratio, HbarPoly, HbarRing, Polynomial, PolynomialJson, Vars};
use crate::poisson::{PoissonStructure, Polyvector};

/// `f ⋆ g = fg + B(f, g)` with `B` an arity-2 operator over ħ-series that
/// vanishes at ħ⁰.
#[derive(Clone, Debug, PartialEq)]
pub struct StarProduct {
    b: PolyDiffOp<HbarPoly>,
    poisson: Option<PoissonStructure>,
    mc_verified: bool,
}

impl StarProduct {
    pub fn new(b: PolyDiffOp<HbarPoly>) -> Result<Self> {
        if b.arity() != 2 && !b.is_zero() {
            return Err(Error::structural(format!(
                "star product deformation must be bidifferential, got arity {}",
                b.arity()
            )));
        }
        if b.terms().any(|(_, c)| !c.coeff(0).is_zero()) {
            return Err(Error::domain("deformation B has an ħ⁰ part"));
        }
        Ok(StarProduct {
            b,
            poisson: None,
            mc_verified: false,
        })
    }

    /// Assembles `B = Σ_k ħ^k B_k` from polynomial-coefficient components.
    pub fn from_components(vars: &Vars, cap: usize, parts: &[(usize, PolyDiffOp<Polynomial>)]) -> Result<Self> {
        let ring = HbarRing { vars: vars.clone(), cap };
        let mut b = PolyDiffOp::zero(&ring, 2);
        for (k, op) in parts {
            if *k == 0 {
                return Err(Error::domain("deformation B has an ħ⁰ part"));
            }
            if op.vars() != vars {
                return Err(Error::structural("component variables differ"));
            }
            b = b.add(&lift_hbar(op, cap, *k));
        }
        Self::new(b)
    }

    /// The undeformed product.
    pub fn trivial(vars: &Vars, cap: usize) -> Self {
        Self::new(PolyDiffOp::zero(&HbarRing { vars: vars.clone(), cap }, 2)).expect("zero")
    }

    pub fn ring(&self) -> &HbarRing {
        self.b.ring()
    }

    pub fn vars(&self) -> &Vars {
        self.b.vars()
    }

    pub fn hbar_cap(&self) -> usize {
        self.ring().cap
    }

    pub fn deformation(&self) -> &PolyDiffOp<HbarPoly> {
        &self.b
    }

    /// `B_k` as a polynomial-coefficient operator.
    pub fn component(&self, k: usize) -> PolyDiffOp<Polynomial> {
        hbar_component(&self.b, k)
    }

    pub fn mc_verified(&self) -> bool {
        self.mc_verified
    }

    pub fn poisson(&self) -> Option<&PoissonStructure> {
        self.poisson.as_ref()
    }

    /// Declares the Poisson structure quantized here; requires
    /// `B_1 = ½ χ(π)`.
    pub fn attach_poisson(&mut self, pi: PoissonStructure) -> Result<()> {
        if pi.vars() != self.vars() {
            return Err(Error::structural("Poisson structure uses different variables"));
        }
        let expected = hkr(pi.bivector()).scale(&ratio(1, 2));
        let b1 = self.component(1);
        if b1 != expected {
            return Err(Error::domain(format!(
                "ħ¹ part of B is not ½{{,}}: B_1 − ½χ(π) = {}",
                b1.sub(&expected)
            )));
        }
        self.poisson = Some(pi);
        Ok(())
    }

    pub fn mul_unit(&self) -> PolyDiffOp<HbarPoly> {
        PolyDiffOp::multiplication(self.ring())
    }

    /// The full product cochain `μ + B`.
    pub fn full_product(&self) -> PolyDiffOp<HbarPoly> {
        self.mul_unit().add(&self.b)
    }

    /// `δB + ½[B, B]` mod ħ^{cap+1}; records the outcome.
    pub fn check_mc(&mut self) -> PolyDiffOp<HbarPoly> {
        let d = mc_defect_star(self);
        self.mc_verified = d.is_zero();
        d
    }
}

pub fn star_mul(s: &StarProduct, f: &HbarPoly, g: &HbarPoly) -> Result<HbarPoly> {
    for h in [f, g] {
        if h.cap() != s.hbar_cap() {
            return Err(Error::structural(format!(
                "ħ cap {} differs from star product cap {}",
                h.cap(),
                s.hbar_cap()
            )));
        }
        if h.vars() != s.vars() {
            return Err(Error::structural("argument variables differ from star product"));
        }
    }
    let fg = hbar_mul(f, g)?;
    if s.b.is_zero() {
        return Ok(fg);
    }
    Ok(fg.add(&apply_op(&s.b, &[f.clone(), g.clone()])?))
}

/// `δB + ½[B, B]`, zero exactly when ⋆ is associative mod ħ^{cap+1}.
pub fn mc_defect_star(s: &StarProduct) -> PolyDiffOp<HbarPoly> {
    if s.b.is_zero() {
        return PolyDiffOp::zero(s.ring(), 3);
    }
    let db = hochschild_delta(&s.b);
    let bb = gerstenhaber_bracket(&s.b, &s.b).expect("same ring");
    db.add(&bb.scale(&ratio(1, 2)))
}

/// Moyal product of a constant bivector:
/// `B_k = (1/k!) (1/2)^k (Σ π^{ij} ∂_i ⊗ ∂_j)^k`.
pub fn moyal(pi: &Polyvector, cap: usize) -> Result<StarProduct> {
    if pi.rank() != 2 {
        return Err(Error::structural("Moyal product needs a bivector"));
    }
    let n = pi.nvars();
    let mut matrix = Vec::new();
    for (idx, c) in pi.terms() {
        let c = c
            .as_constant()
            .ok_or_else(|| Error::domain(format!("Moyal product needs constant coefficients, got {c}")))?;
        matrix.push((idx[0], idx[1], c));
    }
    // symbol in 2n variables: left slot a_1..a_n, right slot b_1..b_n
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).chain((0..n).map(|i| format!("b{i}"))).collect();
    let sv: Vars = names.into();
    let mut symbol = Polynomial::zero(&sv);
    for (i, j, c) in &matrix {
        let ab = &Polynomial::var(&sv, *i) * &Polynomial::var(&sv, n + *j);
        let ba = &Polynomial::var(&sv, *j) * &Polynomial::var(&sv, n + *i);
        symbol = &symbol + &(&ab - &ba).scale(c);
    }
    let mut parts = Vec::new();
    let mut power = Polynomial::one(&sv);
    for k in 1..=cap {
        power = &power * &symbol;
        let w = ratio(1, 1 << k) / factorial(k);
        let terms = power.terms().map(|(m, c)| {
            let left = m.0[..n].to_vec();
            let right = m.0[n..].to_vec();
            (vec![left, right], Polynomial::constant(pi.vars(), c * &w))
        });
        parts.push((k, PolyDiffOp::from_terms(pi.vars(), 2, terms)?));
    }
    StarProduct::from_components(pi.vars(), cap, &parts)
}

#[derive(Serialize, Deserialize)]
struct StarTermJson {
    hbar_pow: usize,
    left_multi: Vec<u32>,
    right_multi: Vec<u32>,
    coeff: PolynomialJson,
}

/// `{"hbar_cap":N,"vars":[..],"terms":[{"hbar_pow":k,"left_multi":[..],"right_multi":[..],"coeff":Polynomial}]}`.
#[derive(Serialize, Deserialize)]
pub struct StarProductJson {
    hbar_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vars: Option<Vec<String>>,
    terms: Vec<StarTermJson>,
}

impl From<&StarProduct> for StarProductJson {
    fn from(s: &StarProduct) -> Self {
        let mut terms = Vec::new();
        for (key, c) in s.b.terms() {
            for (k, p) in c.coeffs().iter().enumerate() {
                if !p.is_zero() {
                    terms.push(StarTermJson {
                        hbar_pow: k,
                        left_multi: key[0].clone(),
                        right_multi: key[1].clone(),
                        coeff: PolynomialJson::from(p),
                    });
                }
            }
        }
        terms.sort_by(|a, b| {
            (a.hbar_pow, &a.left_multi, &a.right_multi).cmp(&(b.hbar_pow, &b.left_multi, &b.right_multi))
        });
        StarProductJson {
            hbar_cap: s.hbar_cap(),
            vars: Some(s.vars().to_vec()),
            terms,
        }
    }
}

impl StarProductJson {
    /// `shared` fixes the variable list when the file does not carry one.
    pub fn into_star_product(self, shared: Option<&Vars>) -> Result<StarProduct> {
        let vars: Vars = match (self.vars, shared) {
            (Some(v), Some(s)) if s.iter().eq(v.iter()) => s.clone(),
            (Some(v), Some(s)) => {
                return Err(Error::structural(format!("star product variables {v:?} do not match {s:?}")))
            }
            (Some(v), None) => v.into(),
            (None, Some(s)) => s.clone(),
            (None, None) => match self.terms.first() {
                Some(t) => t.coeff.vars().to_vec().into(),
                None => return Err(Error::Parse("star product without variables".into())),
            },
        };
        let n = vars.len();
        let mut parts: Vec<(usize, PolyDiffOp<Polynomial>)> = Vec::new();
        for t in self.terms {
            if t.hbar_pow == 0 {
                return Err(Error::domain("deformation B has an ħ⁰ part"));
            }
            if t.hbar_pow > self.hbar_cap {
                return Err(Error::Parse(format!("ħ power {} above cap {}", t.hbar_pow, self.hbar_cap)));
            }
            if t.left_multi.len() != n || t.right_multi.len() != n {
                return Err(Error::Parse("multi-index length differs from variable count".into()));
            }
            let c = t.coeff.into_polynomial(Some(&vars))?;
            let op = PolyDiffOp::from_terms(&vars, 2, [(vec![t.left_multi, t.right_multi], c)])?;
            parts.push((t.hbar_pow, op));
        }
        StarProduct::from_components(&vars, self.hbar_cap, &parts)
    }
}

impl Serialize for StarProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StarProductJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StarProduct {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        StarProductJson::deserialize(d)?
            .into_star_product(None)
            .map_err(serde::de::Error::custom)
    }
}

/// Embeds a polynomial at ħ⁰ with the star product's cap.
pub fn hbar_of(s: &StarProduct, p: &Polynomial) -> HbarPoly {
    HbarPoly::from_poly(p.clone(), s.hbar_cap())
}

/// `f⋆g − g⋆f`.
pub fn star_commutator(s: &StarProduct, f: &HbarPoly, g: &HbarPoly) -> Result<HbarPoly> {
    Ok(star_mul(s, f, g)?.sub(&star_mul(s, g, f)?))
}

/// `[f, [B, g]]` computed in the Gerstenhaber algebra.
pub fn commutator_via_bracket(s: &StarProduct, f: &HbarPoly, g: &HbarPoly) -> Result<HbarPoly> {
    let fo = PolyDiffOp::function(f.clone());
    let go = PolyDiffOp::function(g.clone());
    let inner = gerstenhaber_bracket(&s.b, &go)?;
    let outer = gerstenhaber_bracket(&fo, &inner)?;
    Ok(outer.as_function().unwrap_or_else(|| HbarPoly::zero(s.vars(), s.hbar_cap())))
}

