//! Toric 1-motives over ℚ: objects `M = [u: ℤʳ → 𝔾ₘᵈ]`, morphisms,
//! Cartier duality and weight data.
//!
//! The lattice is always the constant split ℤʳ and the torus a split
//! 𝔾ₘᵈ, which is exactly what makes the structure map an explicit matrix
//! of nonzero rationals stored in factored form.

use std::fmt;

use num_traits::ToPrimitive;

use crate::ratmult::QStarElem;
use crate::{Error, Int, IntMatrix, Result};

/// A matrix with entries in ℚ*, acting multiplicatively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QStarMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<QStarElem>,
}

impl QStarMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<QStarElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::contract(format!(
                "Q* matrix of shape {rows}×{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(QStarMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        QStarMatrix {
            rows,
            cols,
            entries: vec![QStarElem::one(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &QStarElem {
        assert!(
            r < self.rows && c < self.cols,
            "Q* matrix index out of range"
        );
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[QStarElem] {
        &self.entries
    }

    pub fn transpose(&self) -> QStarMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.at(r, c).clone());
            }
        }
        QStarMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn column(&self, c: usize) -> Vec<QStarElem> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Apply to an integer vector: `(∏_c entries[r][c]^{n_c})_r`.
    pub fn apply(&self, n: &[Int]) -> Result<Vec<QStarElem>> {
        if n.len() != self.cols {
            return Err(Error::contract("Q* matrix apply: vector length mismatch"));
        }
        let exps: Vec<i64> = n
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::domain("exponent exceeds i64 at desk scale"))
            })
            .collect::<Result<_>>()?;
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = QStarElem::one();
                for c in 0..self.cols {
                    acc = acc.mul(&self.at(r, c).pow(exps[c]));
                }
                acc
            })
            .collect())
    }

    /// Compose multiplicatively with an integer matrix acting on rows:
    /// row `k` of the result is `∏_j (row j)^{m[k][j]}`.
    pub fn pow_left(&self, m: &IntMatrix) -> Result<QStarMatrix> {
        if m.cols() != self.rows {
            return Err(Error::contract("pow_left: shape mismatch"));
        }
        let mut entries = Vec::with_capacity(m.rows() * self.cols);
        for k in 0..m.rows() {
            for c in 0..self.cols {
                let mut acc = QStarElem::one();
                for j in 0..self.rows {
                    let e = m[(k, j)]
                        .to_i64()
                        .ok_or_else(|| Error::domain("exponent exceeds i64 at desk scale"))?;
                    acc = acc.mul(&self.at(j, c).pow(e));
                }
                entries.push(acc);
            }
        }
        QStarMatrix::new(m.rows(), self.cols, entries)
    }

    /// Precompose with an integer matrix: column `i` of the result is
    /// `self.apply(column i of m)`.
    pub fn compose_right(&self, m: &IntMatrix) -> Result<QStarMatrix> {
        if m.rows() != self.cols {
            return Err(Error::contract("compose_right: shape mismatch"));
        }
        let mut cols = Vec::with_capacity(m.cols());
        for i in 0..m.cols() {
            cols.push(self.apply(&m.col(i))?);
        }
        let mut entries = Vec::with_capacity(self.rows * m.cols());
        for r in 0..self.rows {
            for col in &cols {
                entries.push(col[r].clone());
            }
        }
        QStarMatrix::new(self.rows, m.cols(), entries)
    }
}

impl fmt::Display for QStarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// `M = [u: ℤʳ → 𝔾ₘᵈ]` with `u` a `d×r` matrix over ℚ*; column `i` is
/// `u(eᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricOneMotive {
    lattice_rank: usize,
    torus_rank: usize,
    u: QStarMatrix,
}

impl ToricOneMotive {
    pub fn new(lattice_rank: usize, torus_rank: usize, u: QStarMatrix) -> Result<Self> {
        if u.rows() != torus_rank || u.cols() != lattice_rank {
            return Err(Error::contract(format!(
                "structure map must be {torus_rank}×{lattice_rank}, got {}×{}",
                u.rows(),
                u.cols()
            )));
        }
        Ok(ToricOneMotive {
            lattice_rank,
            torus_rank,
            u,
        })
    }

    /// `[ℤʳ → 0]`.
    pub fn lattice_only(r: usize) -> Self {
        ToricOneMotive {
            lattice_rank: r,
            torus_rank: 0,
            u: QStarMatrix::ones(0, r),
        }
    }

    /// `[0 → 𝔾ₘᵈ]`.
    pub fn torus_only(d: usize) -> Self {
        ToricOneMotive {
            lattice_rank: 0,
            torus_rank: d,
            u: QStarMatrix::ones(d, 0),
        }
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn structure_map(&self) -> &QStarMatrix {
        &self.u
    }

    /// `u(n)` for `n ∈ ℤʳ`.
    pub fn apply(&self, n: &[Int]) -> Result<Vec<QStarElem>> {
        self.u.apply(n)
    }

    /// The underlying torus `[0 → 𝔾ₘᵈ]`.
    pub fn torus_part(&self) -> ToricOneMotive {
        ToricOneMotive::torus_only(self.torus_rank)
    }

    /// The lattice quotient `[ℤʳ → 0]`.
    pub fn lattice_part(&self) -> ToricOneMotive {
        ToricOneMotive::lattice_only(self.lattice_rank)
    }

    /// All primes appearing in the entries of `u`, sorted.
    pub fn support_primes(&self) -> Vec<u64> {
        let mut primes: Vec<u64> = self
            .u
            .entries
            .iter()
            .flat_map(|e| e.primes().collect::<Vec<_>>())
            .collect();
        primes.sort_unstable();
        primes.dedup();
        primes
    }
}

/// The dual motive `M′ = [u′: ℤᵈ → 𝔾ₘʳ]` with transposed structure
/// matrix, so that `⟨u(n), m⟩ = ⟨n, u′(m)⟩` in ℚ* for all `n ∈ ℤʳ`,
/// `m ∈ ℤᵈ`. The pairing identity is asserted on generators.
pub fn cartier_dual(m: &ToricOneMotive) -> ToricOneMotive {
    let dual = ToricOneMotive {
        lattice_rank: m.torus_rank,
        torus_rank: m.lattice_rank,
        u: m.u.transpose(),
    };
    debug_assert!(cartier_pairing_identity(m, &dual));
    dual
}

/// `⟨u(eᵢ), eⱼ⟩ = ⟨eᵢ, u′(eⱼ)⟩` on all generator pairs. The left side
/// reads off coordinate `j` of `u(eᵢ)`, the right side coordinate `i` of
/// `u′(eⱼ)`.
pub fn cartier_pairing_identity(m: &ToricOneMotive, dual: &ToricOneMotive) -> bool {
    if dual.lattice_rank != m.torus_rank || dual.torus_rank != m.lattice_rank {
        return false;
    }
    for i in 0..m.lattice_rank {
        for j in 0..m.torus_rank {
            if m.u.at(j, i) != dual.u.at(i, j) {
                return false;
            }
        }
    }
    true
}

/// A morphism of motives: `fX` on lattices, `fT` on tori (acting as a
/// monomial map), subject to `u₂∘fX = fT∘u₁` checked multiplicatively on
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotiveMorphism {
    pub source: ToricOneMotive,
    pub target: ToricOneMotive,
    pub f_lattice: IntMatrix,
    pub f_torus: IntMatrix,
}

impl MotiveMorphism {
    pub fn new(
        source: ToricOneMotive,
        target: ToricOneMotive,
        f_lattice: IntMatrix,
        f_torus: IntMatrix,
    ) -> Result<Self> {
        let phi = MotiveMorphism {
            source,
            target,
            f_lattice,
            f_torus,
        };
        phi.check_shapes()?;
        if !phi.is_compatible()? {
            return Err(Error::contract(
                "morphism does not commute with the structure maps",
            ));
        }
        Ok(phi)
    }

    fn check_shapes(&self) -> Result<()> {
        let ok = self.f_lattice.rows() == self.target.lattice_rank
            && self.f_lattice.cols() == self.source.lattice_rank
            && self.f_torus.rows() == self.target.torus_rank
            && self.f_torus.cols() == self.source.torus_rank;
        if ok {
            Ok(())
        } else {
            Err(Error::contract(
                "morphism matrix shapes do not match the motives",
            ))
        }
    }

    /// The compatibility square `u₂∘fX = fT∘u₁`, on lattice generators.
    pub fn is_compatible(&self) -> Result<bool> {
        let via_lattice = self.target.u.compose_right(&self.f_lattice)?;
        let via_torus = self.source.u.pow_left(&self.f_torus)?;
        Ok(via_lattice == via_torus)
    }

    pub fn identity(m: &ToricOneMotive) -> Self {
        MotiveMorphism {
            source: m.clone(),
            target: m.clone(),
            f_lattice: IntMatrix::identity(m.lattice_rank),
            f_torus: IntMatrix::identity(m.torus_rank),
        }
    }
}

/// Validity check for externally assembled morphism data.
pub fn is_valid(phi: &MotiveMorphism) -> bool {
    phi.check_shapes().is_ok() && phi.is_compatible().unwrap_or(false)
}

/// `compose(φ, ψ) = ψ∘φ` for `φ: M₁ → M₂`, `ψ: M₂ → M₃`.
pub fn compose(phi: &MotiveMorphism, psi: &MotiveMorphism) -> Result<MotiveMorphism> {
    if phi.target != psi.source {
        return Err(Error::contract("compose: middle motives differ"));
    }
    MotiveMorphism::new(
        phi.source.clone(),
        psi.target.clone(),
        psi.f_lattice.mul(&phi.f_lattice)?,
        psi.f_torus.mul(&phi.f_torus)?,
    )
}

/// Contravariant dual: `φ: M₁ → M₂` gives `φ′: M₂′ → M₁′` with the
/// lattice and torus blocks swapped and transposed.
pub fn dual_morphism(phi: &MotiveMorphism) -> Result<MotiveMorphism> {
    if !is_valid(phi) {
        return Err(Error::contract("dual_morphism: invalid morphism"));
    }
    MotiveMorphism::new(
        cartier_dual(&phi.target),
        cartier_dual(&phi.source),
        phi.f_torus.transpose(),
        phi.f_lattice.transpose(),
    )
}

/// Weight-graded ranks: gr₀ from the lattice, gr₋₂ from the torus
/// (gr₋₁ vanishes in the toric case).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightData {
    pub gr0_rank: usize,
    pub gr_minus2_rank: usize,
}

pub fn weight_data(m: &ToricOneMotive) -> WeightData {
    WeightData {
        gr0_rank: m.lattice_rank,
        gr_minus2_rank: m.torus_rank,
    }
}
