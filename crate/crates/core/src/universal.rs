//! Universal extensions `M♮` of toric motives, the universality
//! criterion, and the de Rham realization functor with its weight
//! filtration.
//!
//! In the split toric case the vector group is `𝕍(M) = ℚʳ`, the group
//! part splits globally as `𝐆♮ = 𝔾ₐʳ × 𝔾ₘᵈ`, and the canonical lift of
//! `u` is `n ↦ (n, u(n))`.

use num_traits::Zero;

use crate::motive::{cartier_dual, MotiveMorphism, QStarMatrix, ToricOneMotive};
use crate::{Error, Rat, RatMatrix, Result};

/// `M♮` together with its lift data: the lift `X → 𝔾ₐʳ × 𝔾ₘᵈ` is stored
/// as a rational `r×r` matrix `V` (the vector-group coordinates) and a
/// `d×r` ℚ*-matrix `W` (the torus coordinates). `ρ∘v = u` forces `W = u`;
/// the canonical construction has `V = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalExtension {
    pub base: ToricOneMotive,
    pub v: RatMatrix,
    pub w: QStarMatrix,
}

impl UniversalExtension {
    pub fn vector_rank(&self) -> usize {
        self.base.lattice_rank()
    }
}

/// The canonical universal extension: `V = I`, `W = u`.
pub fn universal_extension(m: &ToricOneMotive) -> UniversalExtension {
    UniversalExtension {
        base: m.clone(),
        v: RatMatrix::identity(m.lattice_rank()),
        w: m.structure_map().clone(),
    }
}

/// Universality criterion for a candidate lift `(V, W)`: the lift
/// condition forces `W = u`, and the lattice part is universal iff the
/// induced map on the vector factor is invertible over ℚ.
pub fn is_universal(m: &ToricOneMotive, v: &RatMatrix, w: &QStarMatrix) -> Result<bool> {
    let r = m.lattice_rank();
    if v.rows() != r || v.cols() != r {
        return Err(Error::contract(format!(
            "candidate vector block must be {r}×{r}, got {}×{}",
            v.rows(),
            v.cols()
        )));
    }
    if w.rows() != m.torus_rank() || w.cols() != r {
        return Err(Error::contract("candidate torus block has wrong shape"));
    }
    Ok(*w == *m.structure_map() && !v.det()?.is_zero())
}

/// The de Rham realization as a based vector space: dimension `r + d`,
/// basis labels from the vector part then the Lie algebra of the torus,
/// with the weight step `W₋₂` spanned by the Lie block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeRhamSpace {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub weight_minus2_rank: usize,
}

impl DeRhamSpace {
    /// Indices of the vector (gr₀) block.
    pub fn vector_block(&self) -> std::ops::Range<usize> {
        0..self.dim - self.weight_minus2_rank
    }

    /// Indices of the Lie (gr₋₂) block.
    pub fn lie_block(&self) -> std::ops::Range<usize> {
        self.dim - self.weight_minus2_rank..self.dim
    }
}

pub fn de_rham(m: &ToricOneMotive) -> DeRhamSpace {
    let (r, d) = (m.lattice_rank(), m.torus_rank());
    let mut basis_labels = Vec::with_capacity(r + d);
    for i in 0..r {
        basis_labels.push(if r == 1 {
            "x".to_string()
        } else {
            format!("x{}", i + 1)
        });
    }
    for j in 0..d {
        basis_labels.push(if d == 1 {
            "ℓt".to_string()
        } else {
            format!("ℓt{}", j + 1)
        });
    }
    DeRhamSpace {
        dim: r + d,
        basis_labels,
        weight_minus2_rank: d,
    }
}

/// The induced map on de Rham realizations: block diagonal, `fX ⊗ ℚ` on
/// the vector block and `fT ⊗ ℚ` on the Lie block. Functorial, and maps
/// `W₋₂` into `W₋₂`.
pub fn de_rham_map(phi: &MotiveMorphism) -> Result<RatMatrix> {
    if !crate::motive::is_valid(phi) {
        return Err(Error::contract("de_rham_map: invalid morphism"));
    }
    let (r1, d1) = (phi.source.lattice_rank(), phi.source.torus_rank());
    let (r2, d2) = (phi.target.lattice_rank(), phi.target.torus_rank());
    Ok(RatMatrix::from_fn(r2 + d2, r1 + d1, |i, j| {
        if i < r2 && j < r1 {
            Rat::from_integer(phi.f_lattice[(i, j)].clone())
        } else if i >= r2 && j >= r1 {
            Rat::from_integer(phi.f_torus[(i - r2, j - r1)].clone())
        } else {
            Rat::zero()
        }
    }))
}

/// Dimension bookkeeping for the Lie algebra of the dual torus: the torus
/// rank of the Cartier dual of `[X → 0]` must equal
/// `r = dim Hom(X, 𝔾ₐ)`. Both sides are computed.
pub fn lie_dimension_check(m: &ToricOneMotive) -> bool {
    let dual_of_lattice_part = cartier_dual(&m.lattice_part());
    dual_of_lattice_part.torus_rank() == m.lattice_rank()
}
