//! Laurent polynomials with exact coefficients, generic over the
//! coefficient module so the same machinery serves both concrete forms
//! (ℚ coefficients) and parameterized ansätze (affine-linear expressions
//! in solver unknowns).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::{Rat, Result};

/// A module over ℚ that coefficients live in.
pub trait Coeff:
    Clone + PartialEq + fmt::Debug + Zero + Neg<Output = Self> + Sub<Output = Self>
{
    fn scale(&self, k: &Rat) -> Self;
}

impl Coeff for Rat {
    fn scale(&self, k: &Rat) -> Self {
        self * k
    }
}

/// An affine-linear expression `constant + Σ coeffᵢ·paramᵢ` in solver
/// parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinExpr {
    pub constant: Rat,
    pub terms: BTreeMap<usize, Rat>,
}

impl LinExpr {
    pub fn constant(c: Rat) -> Self {
        LinExpr {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn param(i: usize) -> Self {
        LinExpr {
            constant: Zero::zero(),
            terms: BTreeMap::from([(i, One::one())]),
        }
    }

    pub fn eval(&self, values: &[Rat]) -> Rat {
        let mut acc = self.constant.clone();
        for (&i, c) in &self.terms {
            acc += c * &values[i];
        }
        acc
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(self, other: LinExpr) -> LinExpr {
        let mut terms = self.terms;
        for (i, c) in other.terms {
            let entry = terms.entry(i).or_insert_with(Zero::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(&i);
            }
        }
        LinExpr {
            constant: self.constant + other.constant,
            terms,
        }
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        LinExpr {
            constant: -self.constant,
            terms: self.terms.into_iter().map(|(i, c)| (i, -c)).collect(),
        }
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, other: LinExpr) -> LinExpr {
        self + (-other)
    }
}

impl Zero for LinExpr {
    fn zero() -> Self {
        LinExpr::constant(Zero::zero())
    }
    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }
}

impl Coeff for LinExpr {
    fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Zero::zero();
        }
        LinExpr {
            constant: &self.constant * k,
            terms: self.terms.iter().map(|(&i, c)| (i, c * k)).collect(),
        }
    }
}

/// A Laurent polynomial in `nvars` variables: a finite map from exponent
/// vectors to nonzero coefficients. Whether a slot allows negative
/// exponents is a property of the coordinate system the polynomial is
/// used with, enforced at the form layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<i64>, c: C) -> Result<Self> {
        if exps.len() != nvars {
            return Err(crate::Error::contract("monomial exponent length mismatch"));
        }
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        Ok(p)
    }

    /// The variable `xᵢ` as a polynomial.
    pub fn var(nvars: usize, i: usize, unit: C) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::monomial(nvars, exps, unit).expect("exponent vector built to length")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> + '_ {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: &C) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing = existing.clone() + c.clone();
                if existing.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (exps, c) in &other.terms {
            out.add_term(exps.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale(k)))
                .collect(),
        }
    }

    /// ∂/∂xᵢ for an additive variable.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exps, c) in &self.terms {
            let e = exps[i];
            if e == 0 {
                continue;
            }
            let mut new_exps = exps.clone();
            new_exps[i] = e - 1;
            out.add_term(new_exps, &c.scale(&Rat::from_integer(e.into())));
        }
        out
    }

    /// `tᵢ·∂/∂tᵢ` for a toric variable: the coefficient against `dlog tᵢ`
    /// in the exterior derivative.
    pub fn log_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exps, c) in &self.terms {
            let e = exps[i];
            if e == 0 {
                continue;
            }
            out.add_term(exps.clone(), &c.scale(&Rat::from_integer(e.into())));
        }
        out
    }

    /// Value at the group identity (additive variables 0, toric 1):
    /// the sum of coefficients of terms with no additive part.
    pub fn eval_at_identity(&self, additive_slots: &[bool]) -> C {
        debug_assert_eq!(additive_slots.len(), self.nvars);
        let mut acc = C::zero();
        for (exps, c) in &self.terms {
            let survives = exps
                .iter()
                .zip(additive_slots)
                .all(|(&e, &is_add)| !is_add || e == 0);
            if survives {
                acc = acc + c.clone();
            }
        }
        acc
    }

    /// Multiply a concrete carrier polynomial into a coefficient,
    /// producing a polynomial with module coefficients.
    pub fn attach(carrier: &LaurentPoly<Rat>, c: &C) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero(carrier.nvars);
        for (exps, k) in &carrier.terms {
            out.add_term(exps.clone(), &c.scale(k));
        }
        out
    }
}

impl LaurentPoly<Rat> {
    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, One::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, &(ca * cb));
            }
        }
        out
    }

    /// Integer power; negative exponents are only valid for single
    /// invertible monomials.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.nvars));
        }
        if e < 0 {
            if self.terms.len() != 1 {
                return Err(crate::Error::domain(
                    "negative power of a non-monomial Laurent polynomial",
                ));
            }
            let (exps, c) = self.terms.iter().next().expect("checked nonempty");
            let inv_exps = exps.iter().map(|x| -x).collect();
            let inv = Self::monomial(self.nvars, inv_exps, Rat::one() / c.clone())?;
            return inv.pow(-e);
        }
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Render with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (exps, c) in &self.terms {
            let mut factors = Vec::new();
            if !c.abs().is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(c.abs().to_string());
            }
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let sign = if c.is_negative() { "-" } else { "" };
            parts.push(format!("{sign}{}", factors.join("·")));
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn x(n: usize, i: usize) -> LaurentPoly<Rat> {
        LaurentPoly::var(n, i, One::one())
    }

    #[test]
    fn arithmetic_normalizes() {
        let p = x(2, 0).add(&x(2, 1));
        let q = p.sub(&x(2, 1));
        assert_eq!(q, x(2, 0));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivative_of_square() {
        let p = x(1, 0).mul(&x(1, 0));
        assert_eq!(p.derivative(0), x(1, 0).scale(&rat(2, 1)));
    }

    #[test]
    fn log_derivative_scales_by_exponent() {
        // t^-3 ↦ −3·t^-3
        let p = LaurentPoly::monomial(1, vec![-3], rat(1, 1)).unwrap();
        assert_eq!(p.log_derivative(0), p.scale(&rat(-3, 1)));
    }

    #[test]
    fn identity_evaluation_drops_additive_terms() {
        // x·t + 2·t^5 at (x, t) = (0, 1) is 2; slot 0 additive, slot 1 toric.
        let p = LaurentPoly::monomial(2, vec![1, 1], rat(1, 1))
            .unwrap()
            .add(&LaurentPoly::monomial(2, vec![0, 5], rat(2, 1)).unwrap());
        assert_eq!(p.eval_at_identity(&[true, false]), rat(2, 1));
    }

    #[test]
    fn negative_powers_of_monomials() {
        let t = x(1, 0);
        let inv = t.pow(-2).unwrap();
        assert_eq!(t.mul(&t).mul(&inv), LaurentPoly::one(1));
        assert!(t.add(&LaurentPoly::one(1)).pow(-1).is_err());
    }

    #[test]
    fn linexpr_coeff_ops() {
        let e = LinExpr::param(0) + LinExpr::param(1).scale(&rat(2, 1));
        assert_eq!(e.eval(&[rat(1, 1), rat(3, 1)]), rat(7, 1));
        assert!((e.clone() - e).is_zero());
    }

    #[test]
    fn display_is_readable() {
        let names = vec!["x".to_string(), "t".to_string()];
        let p = x(2, 0)
            .scale(&rat(-1, 2))
            .add(&LaurentPoly::monomial(2, vec![0, -1], rat(3, 1)).unwrap());
        assert_eq!(p.display_with(&names), "3·t^-1 - 1/2·x");
    }
}
