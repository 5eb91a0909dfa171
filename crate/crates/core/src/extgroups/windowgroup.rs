//! Finitely generated window groups with labeled generators, integer
//! maps between them, and exact lattice-level verdicts on kernels,
//! images and exactness. Because kernels and images are compared as
//! sublattices, a verdict of "exact" covers every element of the window
//! group, not a sample.

use std::fmt;

use num_traits::Zero;

use crate::zlinalg::{
    image_basis, lattice_subset, preimage_lattice, solve_integer, GroupPresentation,
};
use crate::{Error, Int, IntMatrix, Result};

/// `ℤ^labels / ⟨columns of relations⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedGroup {
    pub labels: Vec<String>,
    pub relations: IntMatrix,
}

impl WindowedGroup {
    pub fn new(labels: Vec<String>, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != labels.len() {
            return Err(Error::contract(
                "window group: relation columns must match generator count",
            ));
        }
        Ok(WindowedGroup { labels, relations })
    }

    pub fn n_gens(&self) -> usize {
        self.labels.len()
    }

    pub fn presentation(&self) -> GroupPresentation {
        GroupPresentation::from_relations(self.n_gens(), self.relations.clone())
            .expect("shape checked at construction")
    }

    pub fn describe_element(&self, coords: &[Int]) -> String {
        let mut parts = Vec::new();
        for (c, label) in coords.iter().zip(&self.labels) {
            if c.is_zero() {
                continue;
            }
            if c == &Int::from(1) {
                parts.push(label.clone());
            } else {
                parts.push(format!("{c}·{label}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// A homomorphism of window groups given on generators.
#[derive(Debug, Clone)]
pub struct WindowMap {
    pub matrix: IntMatrix,
}

impl WindowMap {
    pub fn new(matrix: IntMatrix, src: &WindowedGroup, dst: &WindowedGroup) -> Result<Self> {
        if matrix.rows() != dst.n_gens() || matrix.cols() != src.n_gens() {
            return Err(Error::contract("window map shape mismatch"));
        }
        // Well-definedness: relations must land in relations.
        let mapped = matrix.mul(&src.relations)?;
        if !lattice_subset(&mapped, &dst.relations)? {
            return Err(Error::contract(
                "window map does not send relations into relations",
            ));
        }
        Ok(WindowMap { matrix })
    }

    /// Generators of `{x : f(x) = 0 in dst}` inside the source generator
    /// lattice (contains the source relations whenever `f` is
    /// well defined).
    pub fn kernel_lattice(&self, dst: &WindowedGroup) -> Result<IntMatrix> {
        preimage_lattice(&self.matrix, &dst.relations)
    }

    /// Generators of the image together with the target relations.
    pub fn image_lattice(&self, dst: &WindowedGroup) -> Result<IntMatrix> {
        Ok(image_basis(&self.matrix.hstack(&dst.relations)?))
    }
}

/// Verdict at one junction of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JunctionVerdict {
    Exact,
    /// An element demonstrably in the kernel but not the image,
    /// re-checked on emission.
    Failure {
        witness: String,
    },
}

impl JunctionVerdict {
    pub fn is_exact(&self) -> bool {
        matches!(self, JunctionVerdict::Exact)
    }
}

impl fmt::Display for JunctionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JunctionVerdict::Exact => write!(f, "exact"),
            JunctionVerdict::Failure { witness } => write!(f, "FAILURE (witness: {witness})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactSequenceReport {
    pub sequence: String,
    pub window: String,
    pub junctions: Vec<(String, JunctionVerdict)>,
}

impl ExactSequenceReport {
    pub fn all_exact(&self) -> bool {
        self.junctions.iter().all(|(_, v)| v.is_exact())
    }
}

impl fmt::Display for ExactSequenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.sequence, self.window)?;
        for (name, verdict) in &self.junctions {
            writeln!(f, "  {name}: {verdict}")?;
        }
        Ok(())
    }
}

/// Injectivity of `f: src → dst`: its kernel lattice reduces to the
/// source relations.
pub fn injectivity_verdict(
    f: &WindowMap,
    src: &WindowedGroup,
    dst: &WindowedGroup,
) -> Result<JunctionVerdict> {
    let kernel = f.kernel_lattice(dst)?;
    sublattice_verdict(&kernel, &src.relations, f, src, dst)
}

/// Exactness at the middle of `src --f--> mid --g--> dst`:
/// `ker g = im f` as sublattices of the middle generator lattice.
pub fn middle_exactness_verdict(
    f: &WindowMap,
    g: &WindowMap,
    mid: &WindowedGroup,
    dst: &WindowedGroup,
) -> Result<JunctionVerdict> {
    let kernel = g.kernel_lattice(dst)?;
    let image = f.image_lattice(mid)?;
    // im f ⊆ ker g is the complex condition; check it too so a broken
    // composite is reported rather than silently passed.
    if !lattice_subset(&image, &kernel)? {
        for c in 0..image.cols() {
            let col = image.col(c);
            if solve_integer(&kernel, &col)?.is_none() {
                return Ok(JunctionVerdict::Failure {
                    witness: format!("im ⊄ ker at column {c}"),
                });
            }
        }
    }
    sublattice_verdict(&kernel, &image, g, mid, dst)
}

/// Surjectivity of `g: src → dst`: every target generator is hit.
pub fn surjectivity_verdict(g: &WindowMap, dst: &WindowedGroup) -> Result<JunctionVerdict> {
    let image = g.image_lattice(dst)?;
    for i in 0..dst.n_gens() {
        let mut e = vec![Int::zero(); dst.n_gens()];
        e[i] = Int::from(1);
        if solve_integer(&image, &e)?.is_none() {
            return Ok(JunctionVerdict::Failure {
                witness: dst.labels[i].clone(),
            });
        }
    }
    Ok(JunctionVerdict::Exact)
}

/// `kernel ⊆ image`? On failure, emit a witness column after re-checking
/// that it is genuinely in the kernel and genuinely not in the image.
fn sublattice_verdict(
    kernel: &IntMatrix,
    image: &IntMatrix,
    map: &WindowMap,
    src: &WindowedGroup,
    dst: &WindowedGroup,
) -> Result<JunctionVerdict> {
    for c in 0..kernel.cols() {
        let col = kernel.col(c);
        if solve_integer(image, &col)?.is_none() {
            let mapped = map.matrix.mul_vec(&col)?;
            let in_kernel = solve_integer(&dst.relations, &mapped)?.is_some();
            let in_image = solve_integer(image, &col)?.is_some();
            debug_assert!(in_kernel && !in_image);
            if !in_kernel || in_image {
                return Err(Error::contract("witness failed re-verification"));
            }
            return Ok(JunctionVerdict::Failure {
                witness: src.describe_element(&col),
            });
        }
    }
    Ok(JunctionVerdict::Exact)
}

/// Presentation of `L_sub / L_rel` for lattices `L_rel ⊆ L_sub` given by
/// generating matrices over the same ambient ℤⁿ.
pub fn subquotient_presentation(sub: &IntMatrix, rel: &IntMatrix) -> Result<GroupPresentation> {
    let basis = image_basis(sub);
    let mut rel_coords = Vec::new();
    for c in 0..rel.cols() {
        let col = rel.col(c);
        let coords = solve_integer(&basis, &col)?.ok_or_else(|| {
            Error::contract("subquotient: relation lattice is not inside the subgroup")
        })?;
        rel_coords.push(coords);
    }
    GroupPresentation::from_relations(
        basis.cols(),
        IntMatrix::from_cols(basis.cols(), rel_coords)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn im(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Int::from).collect())
                .collect(),
        )
        .unwrap()
    }

    fn zmod(n: i64) -> WindowedGroup {
        WindowedGroup::new(vec!["g".into()], im(vec![vec![n]])).unwrap()
    }

    #[test]
    fn multiplication_by_two_on_z4() {
        // ℤ/4 --×2--> ℤ/4: kernel {0, 2}, image {0, 2}: the three-term
        // sequence ℤ/4 → ℤ/4 → ℤ/4 with both maps ×2 is exact in the
        // middle.
        let g = zmod(4);
        let f = WindowMap::new(im(vec![vec![2]]), &g, &g).unwrap();
        let verdict = middle_exactness_verdict(&f, &f, &g, &g).unwrap();
        assert_eq!(verdict, JunctionVerdict::Exact);
        // but ×2 is neither injective nor surjective on ℤ/4
        assert!(!injectivity_verdict(&f, &g, &g).unwrap().is_exact());
        assert!(!surjectivity_verdict(&f, &g).unwrap().is_exact());
    }

    #[test]
    fn identity_is_iso() {
        let g = zmod(6);
        let id = WindowMap::new(IntMatrix::identity(1), &g, &g).unwrap();
        assert!(injectivity_verdict(&id, &g, &g).unwrap().is_exact());
        assert!(surjectivity_verdict(&id, &g).unwrap().is_exact());
    }

    #[test]
    fn ill_defined_map_rejected() {
        // ℤ/2 → ℤ/3 by 1 does not send 2·g to a relation.
        let a = zmod(2);
        let b = zmod(3);
        assert!(WindowMap::new(IntMatrix::identity(1), &a, &b).is_err());
    }

    #[test]
    fn failure_witness_is_emitted() {
        // ℤ --0--> ℤ --0--> ℤ is not exact in the middle: kernel is all
        // of ℤ, image is 0.
        let z = WindowedGroup::new(vec!["n".into()], IntMatrix::zero(1, 0)).unwrap();
        let zero = WindowMap::new(im(vec![vec![0]]), &z, &z).unwrap();
        let verdict = middle_exactness_verdict(&zero, &zero, &z, &z).unwrap();
        match verdict {
            JunctionVerdict::Failure { witness } => assert_eq!(witness, "n"),
            JunctionVerdict::Exact => panic!("expected failure"),
        }
    }

    #[test]
    fn subquotient_of_even_lattice() {
        // 2ℤ / 6ℤ ≅ ℤ/3.
        let p = subquotient_presentation(&im(vec![vec![2]]), &im(vec![vec![6]])).unwrap();
        assert_eq!(p.invariant_factors, vec![int(3)]);
        assert_eq!(p.free_rank, 0);
    }
}
