//! Exact rational linear systems gathered from form constraints.
//!
//! An ansatz is a 1-form whose coefficients are affine-linear in
//! solver parameters; constraints assert that derived forms vanish
//! identically. Each (covector, monomial) slot of a constraint form
//! contributes one linear equation.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::symforms::coords::CoordSystem;
use crate::symforms::forms::{Form1, Form2};
use crate::symforms::laurent::{LaurentPoly, LinExpr};
use crate::{Rat, SolveFailure};

/// Default cap on the additive degree of ansatz coefficients. Degree 1 is
/// what the theory needs in characteristic 0; degree 2 exercises the
/// vanishing of the quadratic part.
pub const DEFAULT_ANSATZ_DEGREE: usize = 2;

/// Result of the solve: a unique rational value per parameter, or why not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<Rat>),
    NoSolution,
    NonUnique(usize),
}

impl SolveOutcome {
    pub fn failure(&self) -> Option<SolveFailure> {
        match self {
            SolveOutcome::Unique(_) => None,
            SolveOutcome::NoSolution => Some(SolveFailure::NoSolution),
            SolveOutcome::NonUnique(d) => Some(SolveFailure::NonUnique(*d)),
        }
    }
}

/// A parameterized 1-form: every coefficient of every basis covector is a
/// polynomial in the additive variables (degree ≤ `degree`, constant in
/// toric variables) with a fresh parameter per monomial slot.
pub fn ansatz_form1(coords: &CoordSystem, degree: usize) -> (Form1<LinExpr>, usize) {
    let n = coords.len();
    let additive = coords.additive_indices();
    let monomials = monomials_up_to_degree(n, &additive, degree);
    let mut next_param = 0;
    let mut form = Form1::zero(coords.clone());
    for covector in 0..n {
        let mut poly = LaurentPoly::zero(n);
        for exps in &monomials {
            poly.add_term(exps.clone(), &LinExpr::param(next_param));
            next_param += 1;
        }
        form.add_coeff(covector, &poly);
    }
    (form, next_param)
}

/// Exponent vectors supported on `additive` slots with total degree from 0
/// to `degree`, in graded lexicographic order.
fn monomials_up_to_degree(nvars: usize, additive: &[usize], degree: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; nvars]];
    let mut current = vec![vec![0i64; nvars]];
    for _ in 0..degree {
        let mut next = BTreeSet::new();
        for m in &current {
            for &slot in additive {
                let mut bumped = m.clone();
                bumped[slot] += 1;
                next.insert(bumped);
            }
        }
        current = next.into_iter().collect();
        out.extend(current.iter().cloned());
    }
    out
}

/// Accumulates `expr = 0` constraints and solves them exactly.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    nparams: usize,
    rows: BTreeSet<(Vec<(usize, Rat)>, Rat)>,
}

impl LinearSystem {
    pub fn new(nparams: usize) -> Self {
        LinearSystem {
            nparams,
            rows: BTreeSet::new(),
        }
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn require_zero(&mut self, e: &LinExpr) {
        if e.is_zero() {
            return;
        }
        let mut terms: Vec<(usize, Rat)> = e
            .terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&i, c)| (i, c.clone()))
            .collect();
        let mut constant = e.constant.clone();
        // Normalize so duplicated constraints collapse: leading coefficient 1.
        if let Some((_, lead)) = terms.first().cloned() {
            let inv = Rat::one() / lead;
            for (_, c) in &mut terms {
                *c *= &inv;
            }
            constant *= &inv;
        }
        self.rows.insert((terms, constant));
    }

    pub fn require_form1_zero(&mut self, form: &Form1<LinExpr>) {
        for (_, poly) in form.coeffs() {
            for (_, c) in poly.terms() {
                self.require_zero(c);
            }
        }
    }

    pub fn require_form2_zero(&mut self, form: &Form2<LinExpr>) {
        for (_, poly) in form.coeffs() {
            for (_, c) in poly.terms() {
                self.require_zero(c);
            }
        }
    }

    /// Solve by substitution of singleton equations, with a dense exact
    /// elimination fallback for whatever remains coupled.
    pub fn solve(&self) -> SolveOutcome {
        let mut assigned: Vec<Option<Rat>> = vec![None; self.nparams];
        let mut active: Vec<(Vec<(usize, Rat)>, Rat)> = self.rows.iter().cloned().collect();

        loop {
            let mut progressed = false;
            let mut next_active = Vec::new();
            for (terms, constant) in active.drain(..) {
                let mut constant = constant;
                let mut live: Vec<(usize, Rat)> = Vec::with_capacity(terms.len());
                for (p, c) in terms {
                    match &assigned[p] {
                        Some(v) => constant += &c * v,
                        None => live.push((p, c)),
                    }
                }
                match live.len() {
                    0 => {
                        if !constant.is_zero() {
                            return SolveOutcome::NoSolution;
                        }
                    }
                    1 => {
                        let (p, c) = live.pop().expect("checked length");
                        assigned[p] = Some(-constant / c);
                        progressed = true;
                    }
                    _ => next_active.push((live, constant)),
                }
            }
            active = next_active;
            if !progressed {
                break;
            }
        }

        let unknown: Vec<usize> = (0..self.nparams)
            .filter(|&p| assigned[p].is_none())
            .collect();
        if unknown.is_empty() {
            if !active.is_empty() {
                // All parameters pinned but coupled rows remain: they are
                // pure consistency conditions.
                unreachable!("rows with ≥2 live parameters cannot have all parameters assigned");
            }
            let values = assigned
                .into_iter()
                .map(|v| v.expect("all assigned"))
                .collect();
            return SolveOutcome::Unique(values);
        }

        // Dense fallback over the remaining unknowns.
        let col_of: BTreeMap<usize, usize> =
            unknown.iter().enumerate().map(|(c, &p)| (p, c)).collect();
        let ncols = unknown.len();
        let nrows = active.len();
        let mut aug = Matrix::<Rat>::zero(nrows, ncols + 1);
        for (r, (terms, constant)) in active.iter().enumerate() {
            for (p, c) in terms {
                aug[(r, col_of[p])] = c.clone();
            }
            aug[(r, ncols)] = -constant.clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&ncols) {
            return SolveOutcome::NoSolution;
        }
        if pivots.len() < ncols {
            return SolveOutcome::NonUnique(ncols - pivots.len());
        }
        for (r, &pc) in pivots.iter().enumerate() {
            assigned[unknown[pc]] = Some(red[(r, ncols)].clone());
        }
        let values = assigned
            .into_iter()
            .map(|v| v.expect("all assigned"))
            .collect();
        SolveOutcome::Unique(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::symforms::coords::CoordSystem;
    use crate::symforms::laurent::Coeff;

    fn expr(constant: i64, terms: &[(usize, i64)]) -> LinExpr {
        let mut e = LinExpr::constant(rat(constant, 1));
        for &(p, c) in terms {
            e = e + LinExpr::param(p).scale(&rat(c, 1));
        }
        e
    }

    #[test]
    fn singleton_substitution_solves() {
        // p0 = 1, p1 + p0 = 3 ⇒ p1 = 2
        let mut sys = LinearSystem::new(2);
        sys.require_zero(&expr(-1, &[(0, 1)]));
        sys.require_zero(&expr(-3, &[(0, 1), (1, 1)]));
        assert_eq!(
            sys.solve(),
            SolveOutcome::Unique(vec![rat(1, 1), rat(2, 1)])
        );
    }

    #[test]
    fn inconsistent_system_reports_no_solution() {
        let mut sys = LinearSystem::new(1);
        sys.require_zero(&expr(-1, &[(0, 1)]));
        sys.require_zero(&expr(-2, &[(0, 1)]));
        assert_eq!(sys.solve(), SolveOutcome::NoSolution);
    }

    #[test]
    fn underdetermined_reports_dimension() {
        // one equation, two unknowns: p0 + p1 = 0
        let mut sys = LinearSystem::new(2);
        sys.require_zero(&expr(0, &[(0, 1), (1, 1)]));
        assert_eq!(sys.solve(), SolveOutcome::NonUnique(1));
        // a parameter mentioned nowhere is free
        let mut sys = LinearSystem::new(2);
        sys.require_zero(&expr(-1, &[(0, 1)]));
        assert_eq!(sys.solve(), SolveOutcome::NonUnique(1));
    }

    #[test]
    fn coupled_rows_fall_back_to_dense() {
        // p0 + p1 = 3, p0 − p1 = 1 ⇒ (2, 1)
        let mut sys = LinearSystem::new(2);
        sys.require_zero(&expr(-3, &[(0, 1), (1, 1)]));
        sys.require_zero(&expr(-1, &[(0, 1), (1, -1)]));
        assert_eq!(
            sys.solve(),
            SolveOutcome::Unique(vec![rat(2, 1), rat(1, 1)])
        );
    }

    #[test]
    fn duplicate_rows_collapse() {
        let mut sys = LinearSystem::new(1);
        sys.require_zero(&expr(-1, &[(0, 2)]));
        sys.require_zero(&expr(-2, &[(0, 4)]));
        assert_eq!(sys.len(), 1);
    }

    #[test]
    fn ansatz_parameter_count() {
        // (x, t): degree-1 monomials over one additive variable are
        // {1, x}, so 2 covectors × 2 slots = 4 parameters.
        let coords = CoordSystem::group("x", 1, "t", 1);
        let (_, n) = ansatz_form1(&coords, 1);
        assert_eq!(n, 4);
        // degree 2 adds x².
        let (_, n) = ansatz_form1(&coords, 2);
        assert_eq!(n, 6);
    }

    #[test]
    fn empty_system_with_zero_params_is_unique() {
        let sys = LinearSystem::new(0);
        assert_eq!(sys.solve(), SolveOutcome::Unique(vec![]));
    }

    #[test]
    fn constant_ansatz_pinned_by_two_sections() {
        // Ansatz f·dx + g·dlog t with constant f, g. Pulling back along
        // the section (x ↦ 0, t ↦ t) must give dlog t, and along
        // (x ↦ x, t ↦ 1) must give 0; that forces f = 0, g = 1.
        use crate::ratmult::QStarElem;
        use crate::symforms::forms::Form1;
        use crate::symforms::maps::{AffineExpr, AffineMonomialMap, MonomialExpr, VarImage};
        use num_traits::Zero;

        let coords = CoordSystem::group("x", 1, "t", 1);
        let (ansatz, nparams) = ansatz_form1(&coords, 0);
        assert_eq!(nparams, 2);
        let mut sys = LinearSystem::new(nparams);

        let t_line = CoordSystem::group("x", 0, "t", 1);
        let toric_section = AffineMonomialMap::new(
            t_line.clone(),
            coords.clone(),
            vec![
                VarImage::Additive(AffineExpr::constant(Zero::zero())),
                VarImage::Toric(MonomialExpr::var(0)),
            ],
        )
        .unwrap();
        let mut dlog_t = Form1::zero(t_line.clone());
        dlog_t.add_coeff(0, &LaurentPoly::constant(1, LinExpr::constant(rat(1, 1))));
        sys.require_form1_zero(
            &ansatz
                .pullback(&toric_section)
                .unwrap()
                .sub(&dlog_t)
                .unwrap(),
        );

        let x_line = CoordSystem::group("x", 1, "t", 0);
        let additive_section = AffineMonomialMap::new(
            x_line,
            coords,
            vec![
                VarImage::Additive(AffineExpr::var(0)),
                VarImage::Toric(MonomialExpr::constant(QStarElem::one())),
            ],
        )
        .unwrap();
        sys.require_form1_zero(&ansatz.pullback(&additive_section).unwrap());

        // parameter 0 is the dx slot, parameter 1 the dlog t slot
        assert_eq!(
            sys.solve(),
            SolveOutcome::Unique(vec![rat(0, 1), rat(1, 1)])
        );
    }
}
