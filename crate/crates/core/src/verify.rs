//! Named verification checks for one motive inside one window,
//! aggregating the per-module invariants into a machine-checkable list.
//! The CLI `verify` command runs these and gates its exit code on them.

use crate::biext::{
    self, canonical_nat_structure, canonical_nat_structure_with_degree, connection_shape_matches,
    deligne_pairing, is_perfect, poincare, psi_inverse, psi_point, tautological_pairing_check,
    validate, weight_block_check,
};
use crate::extgroups::{
    hom_nabla, verify_nabla_intersection, verify_nat_restriction_sequence,
    verify_nat_to_ext_bookkeeping, verify_universal_quotient_sequence, ApproximationWindow,
};
use crate::motive::{cartier_dual, ToricOneMotive};
use crate::ratmult::QStarElem;
use crate::universal::{de_rham, is_universal, lie_dimension_check, universal_extension};
use crate::{rat, Rat, RatMatrix, Result};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

/// Run every invariant and exact-sequence check for one motive. Pure;
/// independent motives can be verified concurrently.
pub fn run_all(m: &ToricOneMotive, window: &ApproximationWindow) -> Result<Vec<CheckResult>> {
    let mut results = Vec::new();
    let b = poincare(m);

    let violations = validate(&b)?;
    results.push(check(
        "poincare-compatibility",
        violations.is_empty(),
        if violations.is_empty() {
            "trivializations agree on the corner".to_string()
        } else {
            violations[0].to_string()
        },
    ));

    match canonical_nat_structure(&b) {
        Ok(nat) => {
            let shape_ok = connection_shape_matches(&b, &nat);
            results.push(check(
                "connection-closed-form",
                shape_ok,
                format!("ω = {}", nat.connection_form.display()),
            ));

            let phi = deligne_pairing(&b)?;
            let report = is_perfect(&phi);
            results.push(check(
                "pairing-perfect-unimodular",
                report.perfect && report.unimodular,
                match &report.det {
                    Some(d) => format!("det Φ = {d}"),
                    None => "no determinant (non-square)".to_string(),
                },
            ));

            results.push(check(
                "weight-blocks",
                weight_block_check(m)?,
                "diagonal weight blocks vanish, cross blocks unimodular",
            ));
        }
        Err(e) => {
            results.push(check("connection-closed-form", false, e.to_string()));
        }
    }

    match canonical_nat_structure_with_degree(&b, 2) {
        Ok(nat2) => results.push(check(
            "connection-degree2-unique",
            connection_shape_matches(&b, &nat2),
            "quadratic ansatz coefficients all solve to zero",
        )),
        Err(e) => results.push(check("connection-degree2-unique", false, e.to_string())),
    }

    let taut = tautological_pairing_check(m.torus_rank());
    results.push(check(
        "tautological-duality",
        taut == RatMatrix::identity(m.torus_rank()),
        format!("d={} block is the identity", m.torus_rank()),
    ));

    results.push(check(
        "double-dual-identity",
        cartier_dual(&cartier_dual(m)) == *m,
        "cartier_dual is an involution on the data",
    ));

    let ext = universal_extension(m);
    results.push(check(
        "universality-criterion",
        is_universal(m, &ext.v, &ext.w)?,
        "canonical lift accepted",
    ));

    let dr = de_rham(m);
    results.push(check(
        "de-rham-dimensions",
        dr.dim == m.lattice_rank() + m.torus_rank()
            && dr.weight_minus2_rank == m.torus_rank()
            && lie_dimension_check(m),
        format!("dim = {}, W₋₂ rank = {}", dr.dim, dr.weight_minus2_rank),
    ));

    // points functor round trip on a nontrivial sample point
    let a: Vec<Rat> = (0..m.lattice_rank())
        .map(|i| rat(i as i64 + 2, 3))
        .collect();
    let t: Vec<QStarElem> = (0..m.torus_rank())
        .map(|j| {
            crate::ratmult::factorize(&rat(2 * j as i64 + 3, 2)).expect("nonzero sample point")
        })
        .collect();
    let (_, fiber) = psi_point(m, &a, &t)?;
    let round = psi_inverse(m, &fiber)?;
    results.push(check(
        "points-functor-round-trip",
        round == (a, t),
        "psi_inverse ∘ psi_point is the identity",
    ));

    results.push(check(
        "hom-nabla-trivial",
        hom_nabla(m).cols() == 0,
        "dlog is injective on characters",
    ));

    let restriction = verify_nat_restriction_sequence(m, window)?;
    results.push(check(
        "restriction-sequence-exact",
        restriction.all_exact(),
        restriction.to_string(),
    ));

    let quotient = verify_universal_quotient_sequence(m, window)?;
    results.push(check(
        "universal-quotient-sequence-exact",
        quotient.all_exact(),
        quotient.to_string(),
    ));

    results.push(check(
        "nabla-intersection",
        verify_nabla_intersection(m)?,
        "H∇(T′) ∩ H(M′) = H∇(M′)",
    ));

    results.push(check(
        "nat-to-ext-bookkeeping",
        verify_nat_to_ext_bookkeeping(m, window)?,
        "kernel of Ext♮ → Ext matches the ω-window modulo dlog H(M)",
    ));

    // Curvature restrictions to each factor vanish: deligne_pairing_of
    // verifies them before extracting the matrix and errors otherwise.
    let nat = canonical_nat_structure(&b)?;
    let curvature = biext::curvature(&nat);
    results.push(check(
        "curvature-factor-restrictions",
        biext::deligne_pairing_of(&b, &nat).is_ok(),
        format!("R = {}", curvature.display()),
    ));

    Ok(results)
}

/// Convenience: do all checks pass?
pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|c| c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motive::QStarMatrix;
    use crate::ratmult::parse_qstar;

    #[test]
    fn all_checks_pass_on_a_sample() {
        let entries = vec![parse_qstar("2").unwrap()];
        let m = ToricOneMotive::new(1, 1, QStarMatrix::new(1, 1, entries).unwrap()).unwrap();
        let window = ApproximationWindow::for_motive(&m, [2, 3, 5], 6).unwrap();
        let results = run_all(&m, &window).unwrap();
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert!(all_pass(&results));
    }

    #[test]
    fn empty_motive_verifies() {
        let m = ToricOneMotive::new(0, 0, QStarMatrix::ones(0, 0)).unwrap();
        let window = ApproximationWindow::new([2], 1).unwrap();
        let results = run_all(&m, &window).unwrap();
        assert!(all_pass(&results));
    }
}
