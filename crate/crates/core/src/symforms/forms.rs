//! Differential 1- and 2-forms with Laurent-polynomial coefficients.
//!
//! Basis covectors are `dx` for additive coordinates and `dlog t` for
//! toric ones; every formula of interest is stated in dlog coordinates,
//! which keeps coefficients polynomial in the cases that matter.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::symforms::coords::CoordSystem;
use crate::symforms::laurent::{Coeff, LaurentPoly};
use crate::symforms::maps::AffineMonomialMap;
use crate::{Error, Int, Rat, Result};

/// `Σ coeffᵢ · βᵢ` with `βᵢ` the basis covector of variable `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form1<C> {
    coords: CoordSystem,
    coeffs: BTreeMap<usize, LaurentPoly<C>>,
}

/// `Σ coeff₍ᵢⱼ₎ · βᵢ∧βⱼ` over ordered pairs `i < j`; each unordered pair
/// is stored once under its lexicographic representative.
#[derive(Debug, Clone, PartialEq)]
pub struct Form2<C> {
    coords: CoordSystem,
    coeffs: BTreeMap<(usize, usize), LaurentPoly<C>>,
}

impl<C: Coeff> Form1<C> {
    pub fn zero(coords: CoordSystem) -> Self {
        Form1 {
            coords,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn coords(&self) -> &CoordSystem {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, covector: usize) -> Option<&LaurentPoly<C>> {
        self.coeffs.get(&covector)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &LaurentPoly<C>)> {
        self.coeffs.iter().map(|(&i, p)| (i, p))
    }

    pub fn add_coeff(&mut self, covector: usize, poly: &LaurentPoly<C>) {
        assert!(covector < self.coords.len(), "covector index out of range");
        debug_assert_eq!(poly.nvars(), self.coords.len());
        if poly.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&covector) {
            Some(existing) => {
                *existing = existing.add(poly);
                if existing.is_zero() {
                    self.coeffs.remove(&covector);
                }
            }
            None => {
                self.coeffs.insert(covector, poly.clone());
            }
        }
    }

    pub fn from_coeffs(
        coords: CoordSystem,
        coeffs: impl IntoIterator<Item = (usize, LaurentPoly<C>)>,
    ) -> Self {
        let mut form = Form1::zero(coords);
        for (i, p) in coeffs {
            form.add_coeff(i, &p);
        }
        form
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.coords != other.coords {
            return Err(Error::contract("form addition across coordinate systems"));
        }
        let mut out = self.clone();
        for (&i, p) in &other.coeffs {
            out.add_coeff(i, p);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Form1 {
            coords: self.coords.clone(),
            coeffs: self.coeffs.iter().map(|(&i, p)| (i, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Exterior derivative. `d(f·βᵢ) = df ∧ βᵢ` with
    /// `df = Σ (∂f/∂xₖ)·dxₖ + Σ (tₖ·∂f/∂tₖ)·dlog tₖ`.
    pub fn exterior_derivative(&self) -> Form2<C> {
        let mut out = Form2::zero(self.coords.clone());
        for (&i, f) in &self.coeffs {
            for k in 0..self.coords.len() {
                let g = if self.coords.is_additive(k) {
                    f.derivative(k)
                } else {
                    f.log_derivative(k)
                };
                if g.is_zero() || k == i {
                    continue;
                }
                if k < i {
                    out.add_coeff(k, i, &g);
                } else {
                    out.add_coeff(i, k, &g.neg());
                }
            }
        }
        out
    }

    /// Pullback along `map`; `self` must live on the map's target.
    pub fn pullback(&self, map: &AffineMonomialMap) -> Result<Form1<C>> {
        if *map.target() != self.coords {
            return Err(Error::contract(
                "pullback: form does not live on the map target",
            ));
        }
        let mut out = Form1::zero(map.source().clone());
        for (&i, f) in &self.coeffs {
            let pulled_coeff = map.pull_poly(f)?;
            for (w, c) in map.pull_covector(i) {
                out.add_coeff(w, &pulled_coeff.scale(&c));
            }
        }
        Ok(out)
    }

    pub fn substitute_params(&self, values: &[Rat]) -> Form1<Rat>
    where
        C: ParamEval,
    {
        let mut out = Form1::zero(self.coords.clone());
        for (&i, f) in &self.coeffs {
            let mut poly = LaurentPoly::zero(self.coords.len());
            for (exps, c) in f.terms() {
                poly.add_term(exps.clone(), &c.eval_params(values));
            }
            out.add_coeff(i, &poly);
        }
        out
    }
}

/// Coefficient types whose parameters can be evaluated to rationals.
pub trait ParamEval: Coeff {
    fn eval_params(&self, values: &[Rat]) -> Rat;
}

impl ParamEval for crate::symforms::laurent::LinExpr {
    fn eval_params(&self, values: &[Rat]) -> Rat {
        self.eval(values)
    }
}

impl Form1<Rat> {
    /// `Σ mⱼ · dlog tⱼ` over the toric variables of `coords`.
    pub fn dlog_character(m: &[Int], coords: &CoordSystem) -> Result<Self> {
        let toric = coords.toric_indices();
        if m.len() != toric.len() {
            return Err(Error::contract(format!(
                "dlog_character: {} exponents for {} toric variables",
                m.len(),
                toric.len()
            )));
        }
        let n = coords.len();
        let mut form = Form1::zero(coords.clone());
        for (mi, &v) in m.iter().zip(&toric) {
            form.add_coeff(v, &LaurentPoly::constant(n, Rat::from_integer(mi.clone())));
        }
        Ok(form)
    }

    /// Is `μ*ω = p₁*ω + p₂*ω` for the group law on these coordinates?
    pub fn is_invariant(&self) -> Result<bool> {
        let group = &self.coords;
        let double = group.doubled("_a", "_b");
        let law = group_law(group, &double)?;
        let p1 = AffineMonomialMap::projection(&double, group, |name| format!("{name}_a"))?;
        let p2 = AffineMonomialMap::projection(&double, group, |name| format!("{name}_b"))?;
        let lhs = self.pullback(&law)?;
        let rhs = self.pullback(&p1)?.add(&self.pullback(&p2)?)?;
        Ok(lhs == rhs)
    }

    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let names: Vec<String> = self.coords.vars().iter().map(|v| v.name.clone()).collect();
        let mut parts = Vec::new();
        for (&i, f) in &self.coeffs {
            let coeff = f.display_with(&names);
            let covector = self.coords.covector_name(i);
            if coeff == "1" {
                parts.push(covector);
            } else if coeff.contains(" + ") || coeff.contains(" - ") {
                parts.push(format!("({coeff})·{covector}"));
            } else {
                parts.push(format!("{coeff}·{covector}"));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Form1<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// The group law `group × group → group` on a doubled coordinate system
/// whose variables are `{name}_a`, `{name}_b`.
pub fn group_law(group: &CoordSystem, double: &CoordSystem) -> Result<AffineMonomialMap> {
    use crate::symforms::maps::{AffineExpr, MonomialExpr, VarImage};
    let images = (0..group.len())
        .map(|i| {
            let name = &group.var(i).name;
            let ia = double
                .index_of(&format!("{name}_a"))
                .ok_or_else(|| Error::contract("group_law: missing _a copy"))?;
            let ib = double
                .index_of(&format!("{name}_b"))
                .ok_or_else(|| Error::contract("group_law: missing _b copy"))?;
            Ok(if group.is_additive(i) {
                VarImage::Additive(AffineExpr::sum_of_vars(&[ia, ib]))
            } else {
                VarImage::Toric(MonomialExpr::product_of_vars(&[ia, ib]))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AffineMonomialMap::new(double.clone(), group.clone(), images)
}

impl<C: Coeff> Form2<C> {
    pub fn zero(coords: CoordSystem) -> Self {
        Form2 {
            coords,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn coords(&self) -> &CoordSystem {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Option<&LaurentPoly<C>> {
        assert!(i < j, "Form2 keys are ordered pairs");
        self.coeffs.get(&(i, j))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ((usize, usize), &LaurentPoly<C>)> {
        self.coeffs.iter().map(|(&k, p)| (k, p))
    }

    pub fn add_coeff(&mut self, i: usize, j: usize, poly: &LaurentPoly<C>) {
        assert!(i < j, "Form2 keys are ordered pairs");
        assert!(j < self.coords.len(), "covector index out of range");
        if poly.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&(i, j)) {
            Some(existing) => {
                *existing = existing.add(poly);
                if existing.is_zero() {
                    self.coeffs.remove(&(i, j));
                }
            }
            None => {
                self.coeffs.insert((i, j), poly.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.coords != other.coords {
            return Err(Error::contract("form addition across coordinate systems"));
        }
        let mut out = self.clone();
        for (&(i, j), p) in &other.coeffs {
            out.add_coeff(i, j, p);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Form2 {
            coords: self.coords.clone(),
            coeffs: self.coeffs.iter().map(|(&k, p)| (k, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn pullback(&self, map: &AffineMonomialMap) -> Result<Form2<C>> {
        if *map.target() != self.coords {
            return Err(Error::contract(
                "pullback: form does not live on the map target",
            ));
        }
        let mut out = Form2::zero(map.source().clone());
        for (&(i, j), f) in &self.coeffs {
            let pulled_coeff = map.pull_poly(f)?;
            let bi = map.pull_covector(i);
            let bj = map.pull_covector(j);
            for (w1, c1) in &bi {
                for (w2, c2) in &bj {
                    if w1 == w2 {
                        continue;
                    }
                    let scaled = pulled_coeff.scale(&(c1 * c2));
                    if w1 < w2 {
                        out.add_coeff(*w1, *w2, &scaled);
                    } else {
                        out.add_coeff(*w2, *w1, &scaled.neg());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Evaluate at the group identity against a pair of tangent vectors
    /// indexed by basis covectors: bilinear and antisymmetric.
    pub fn eval_at_identity(&self, v: &[Rat], w: &[Rat]) -> Result<C> {
        let n = self.coords.len();
        if v.len() != n || w.len() != n {
            return Err(Error::contract("tangent vector length mismatch"));
        }
        let additive: Vec<bool> = (0..n).map(|i| self.coords.is_additive(i)).collect();
        let mut acc = C::zero();
        for (&(i, j), f) in &self.coeffs {
            let c = f.eval_at_identity(&additive);
            let pairing = &v[i] * &w[j] - &v[j] * &w[i];
            acc = acc + c.scale(&pairing);
        }
        Ok(acc)
    }
}

impl Form2<Rat> {
    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let names: Vec<String> = self.coords.vars().iter().map(|v| v.name.clone()).collect();
        let mut parts = Vec::new();
        for (&(i, j), f) in &self.coeffs {
            let coeff = f.display_with(&names);
            let wedge = format!(
                "{}∧{}",
                self.coords.covector_name(i),
                self.coords.covector_name(j)
            );
            if coeff == "1" {
                parts.push(wedge);
            } else if coeff.contains(" + ") || coeff.contains(" - ") {
                parts.push(format!("({coeff})·{wedge}"));
            } else {
                parts.push(format!("{coeff}·{wedge}"));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Form2<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Unit tangent vector along variable `i`.
pub fn basis_tangent(coords: &CoordSystem, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::from_integer(0.into()); coords.len()];
    v[i] = Rat::one();
    v
}
