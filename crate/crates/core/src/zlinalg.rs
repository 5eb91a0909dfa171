//! Exact integer-matrix algebra: Smith normal form, kernels, cokernels,
//! finitely generated abelian group presentations and sublattice tests.
//!
//! Pivot selection is deterministic (smallest absolute value, then lowest
//! row-major index) so decompositions are reproducible across runs.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Int, IntMatrix, Result};

/// A Smith normal form decomposition `A = U·S·V` with `U`, `V` unimodular
/// and `S` diagonal with nonnegative entries `s₁ | s₂ | …`, zeros last.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfDecomposition {
    pub fn u_inv(&self) -> &IntMatrix {
        &self.u_inv
    }

    pub fn v_inv(&self) -> &IntMatrix {
        &self.v_inv
    }

    /// Diagonal of `S`, up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smallest-|entry| pivot in the trailing submatrix at `(k, k)`,
/// ties broken by lowest row-major index.
fn select_pivot(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for r in k..s.rows() {
        for c in k..s.cols() {
            if s[(r, c)].is_zero() {
                continue;
            }
            let a = s[(r, c)].abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, r, c)),
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Row op on S: row_i += q·row_k  ⇒  U: col_k -= q·col_i, U⁻¹: same row op.
    // Col op on S: col_j += q·col_k  ⇒  V: row_k -= q·row_j, V⁻¹: same col op.
    for k in 0..m.min(n) {
        'place: loop {
            let Some((pr, pc)) = select_pivot(&s, k) else {
                break 'place;
            };
            if pr != k {
                s.swap_rows(k, pr);
                u.swap_cols(k, pr);
                u_inv.swap_rows(k, pr);
            }
            if pc != k {
                s.swap_cols(k, pc);
                v.swap_rows(k, pc);
                v_inv.swap_cols(k, pc);
            }
            let mut clean = true;
            for i in k + 1..m {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = s[(i, k)].div_floor(&s[(k, k)]);
                if !q.is_zero() {
                    let neg_q = -q.clone();
                    s.add_multiple_of_row(i, k, &neg_q);
                    u.add_multiple_of_col(k, i, &q);
                    u_inv.add_multiple_of_row(i, k, &neg_q);
                }
                if !s[(i, k)].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = s[(k, j)].div_floor(&s[(k, k)]);
                if !q.is_zero() {
                    let neg_q = -q.clone();
                    s.add_multiple_of_col(j, k, &neg_q);
                    v.add_multiple_of_row(k, j, &q);
                    v_inv.add_multiple_of_col(j, k, &neg_q);
                }
                if !s[(k, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'place;
            }
            // Pivot must divide the whole trailing submatrix for the
            // divisibility chain; fold an offending row in and retry.
            let offender = (k + 1..m)
                .find(|&i| (k + 1..n).any(|j| !s[(i, j)].mod_floor(&s[(k, k)]).is_zero()));
            match offender {
                Some(i) => {
                    let one = Int::one();
                    let neg_one = -one.clone();
                    s.add_multiple_of_row(k, i, &one);
                    u.add_multiple_of_col(i, k, &neg_one);
                    u_inv.add_multiple_of_row(k, i, &one);
                }
                None => break 'place,
            }
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_col(k);
            u_inv.negate_row(k);
        }
    }

    debug_assert_eq!(u.mul(&s).unwrap().mul(&v).unwrap(), *a);
    debug_assert!(u.mul(&u_inv).unwrap().is_identity());
    debug_assert!(v.mul(&v_inv).unwrap().is_identity());
    SnfDecomposition {
        u,
        s,
        v,
        u_inv,
        v_inv,
    }
}

/// ℤ-basis of `ker A`, as matrix columns. Trivial kernel gives a matrix
/// with zero columns. Columns are primitive and sign-normalized so the
/// first nonzero entry of each is positive.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let n = a.cols();
    let min = a.rows().min(n);
    let mut cols = Vec::new();
    for i in 0..n {
        if i >= min || snf.s[(i, i)].is_zero() {
            let mut col = snf.v_inv().col(i);
            if let Some(first) = col.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    for x in &mut col {
                        *x = -x.clone();
                    }
                }
            }
            cols.push(col);
        }
    }
    IntMatrix::from_cols(n, cols).expect("kernel columns share the length cols(A)")
}

/// Solve `A·x = b` over ℤ exactly; `None` iff no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>> {
    if b.len() != a.rows() {
        return Err(Error::contract(format!(
            "solve_integer: rhs length {} does not match {} rows",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    let y = snf.u_inv().mul_vec(b)?;
    let (m, n) = (a.rows(), a.cols());
    let mut z = vec![Int::zero(); n];
    for i in 0..m {
        if i < n && !snf.s[(i, i)].is_zero() {
            let (q, r) = y[i].div_mod_floor(&snf.s[(i, i)]);
            if !r.is_zero() {
                return Ok(None);
            }
            z[i] = q;
        } else if !y[i].is_zero() {
            return Ok(None);
        }
    }
    let x = snf.v_inv().mul_vec(&z)?;
    debug_assert_eq!(a.mul_vec(&x).unwrap(), b);
    Ok(Some(x))
}

/// A basis for the lattice spanned by the columns of `A`
/// (columns `sᵢ · uᵢ` of the Smith decomposition).
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let mut cols = Vec::new();
    for i in 0..a.rows().min(a.cols()) {
        if snf.s[(i, i)].is_zero() {
            continue;
        }
        let col = snf
            .u
            .col(i)
            .into_iter()
            .map(|x| x * snf.s[(i, i)].clone())
            .collect();
        cols.push(col);
    }
    IntMatrix::from_cols(a.rows(), cols).expect("image columns share the length rows(A)")
}

/// Does the lattice spanned by `sub`'s columns lie inside the one spanned
/// by `sup`'s columns?
pub fn lattice_subset(sub: &IntMatrix, sup: &IntMatrix) -> Result<bool> {
    if sub.rows() != sup.rows() {
        return Err(Error::contract("lattice_subset: ambient rank mismatch"));
    }
    for c in 0..sub.cols() {
        if solve_integer(sup, &sub.col(c))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn lattice_eq(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    Ok(lattice_subset(a, b)? && lattice_subset(b, a)?)
}

/// Basis of the intersection of the two column lattices.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::contract(
            "lattice_intersection: ambient rank mismatch",
        ));
    }
    let stacked = a.hstack(&b.neg())?;
    let ker = kernel_basis(&stacked);
    let head = IntMatrix::from_fn(a.cols(), ker.cols(), |r, c| ker[(r, c)].clone());
    Ok(image_basis(&a.mul(&head)?))
}

/// Generators of `{x : M·x ∈ L}` for the column lattice `L` of `lat`.
pub fn preimage_lattice(map: &IntMatrix, lat: &IntMatrix) -> Result<IntMatrix> {
    if map.rows() != lat.rows() {
        return Err(Error::contract("preimage_lattice: ambient rank mismatch"));
    }
    let stacked = map.hstack(&lat.neg())?;
    let ker = kernel_basis(&stacked);
    let head = IntMatrix::from_fn(map.cols(), ker.cols(), |r, c| ker[(r, c)].clone());
    Ok(image_basis(&head))
}

/// A finitely generated abelian group `ℤ^nGens / ⟨columns of relations⟩`,
/// with the invariant factors and free rank derived from the Smith normal
/// form of the relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub n_gens: usize,
    pub relations: IntMatrix,
    /// Nontrivial (> 1) diagonal entries of the SNF, in divisibility order.
    pub invariant_factors: Vec<Int>,
    pub free_rank: usize,
}

impl GroupPresentation {
    pub fn from_relations(n_gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != n_gens {
            return Err(Error::contract(format!(
                "presentation with {n_gens} generators got relation columns of length {}",
                relations.rows()
            )));
        }
        let snf = smith_normal_form(&relations);
        let rank = snf.rank();
        let invariant_factors = snf
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        Ok(GroupPresentation {
            n_gens,
            relations,
            invariant_factors,
            free_rank: n_gens - rank,
        })
    }

    pub fn trivial() -> Self {
        GroupPresentation::from_relations(0, IntMatrix::zero(0, 0)).unwrap()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        if self.free_rank > 0 {
            return None;
        }
        Some(
            self.invariant_factors
                .iter()
                .fold(Int::one(), |acc, f| acc * f),
        )
    }

    /// Is the element with these generator coordinates the identity?
    pub fn is_identity(&self, element: &[Int]) -> Result<bool> {
        Ok(solve_integer(&self.relations, element)?.is_some())
    }

    /// Same isomorphism type: equal invariant factors and free rank.
    pub fn same_invariants(&self, other: &GroupPresentation) -> bool {
        self.invariant_factors == other.invariant_factors && self.free_rank == other.free_rank
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

pub fn cokernel_presentation(a: &IntMatrix) -> GroupPresentation {
    GroupPresentation::from_relations(a.rows(), a.clone())
        .expect("relation rows equal generator count by construction")
}
