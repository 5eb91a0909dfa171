//! Maps between coordinate systems: rational-affine on additive
//! coordinates, monomial-times-constant on toric ones. These cover group
//! homomorphisms, projections, group laws and trivialization sections.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ratmult::QStarElem;
use crate::symforms::coords::{CoordSystem, VarKind};
use crate::symforms::laurent::{Coeff, LaurentPoly};
use crate::{Error, Rat, Result};

/// `constant + Σ coeffᵥ·v` over additive source variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    pub constant: Rat,
    pub terms: BTreeMap<usize, Rat>,
}

impl AffineExpr {
    pub fn constant(c: Rat) -> Self {
        AffineExpr {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(i: usize) -> Self {
        AffineExpr {
            constant: Rat::zero(),
            terms: BTreeMap::from([(i, Rat::from_integer(1.into()))]),
        }
    }

    pub fn sum_of_vars(indices: &[usize]) -> Self {
        AffineExpr {
            constant: Rat::zero(),
            terms: indices
                .iter()
                .map(|&i| (i, Rat::from_integer(1.into())))
                .collect(),
        }
    }
}

/// `constant · ∏ v^{expᵥ}` over toric source variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialExpr {
    pub constant: QStarElem,
    pub exps: BTreeMap<usize, i64>,
}

impl MonomialExpr {
    pub fn constant(c: QStarElem) -> Self {
        MonomialExpr {
            constant: c,
            exps: BTreeMap::new(),
        }
    }

    pub fn var(i: usize) -> Self {
        MonomialExpr {
            constant: QStarElem::one(),
            exps: BTreeMap::from([(i, 1)]),
        }
    }

    pub fn product_of_vars(indices: &[usize]) -> Self {
        MonomialExpr {
            constant: QStarElem::one(),
            exps: indices.iter().map(|&i| (i, 1)).collect(),
        }
    }
}

/// Image of one target variable.
#[derive(Debug, Clone, PartialEq)]
pub enum VarImage {
    Additive(AffineExpr),
    Toric(MonomialExpr),
}

/// A map `source → target` given variable-wise. Toric targets depend only
/// on toric sources (the group homomorphism constraint); section maps may
/// send toric targets to bare constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMonomialMap {
    source: CoordSystem,
    target: CoordSystem,
    images: Vec<VarImage>,
}

impl AffineMonomialMap {
    pub fn new(source: CoordSystem, target: CoordSystem, images: Vec<VarImage>) -> Result<Self> {
        if images.len() != target.len() {
            return Err(Error::contract(format!(
                "map needs {} variable images, got {}",
                target.len(),
                images.len()
            )));
        }
        for (i, image) in images.iter().enumerate() {
            match (target.var(i).kind, image) {
                (VarKind::Additive, VarImage::Additive(expr)) => {
                    if expr.terms.keys().any(|&v| !source.is_additive(v)) {
                        return Err(Error::contract(format!(
                            "additive target `{}` depends on a toric source variable",
                            target.var(i).name
                        )));
                    }
                }
                (VarKind::Toric, VarImage::Toric(expr)) => {
                    if expr.exps.keys().any(|&v| source.is_additive(v)) {
                        return Err(Error::contract(format!(
                            "toric target `{}` depends on an additive source variable",
                            target.var(i).name
                        )));
                    }
                }
                _ => {
                    return Err(Error::contract(format!(
                        "image kind mismatch for target variable `{}`",
                        target.var(i).name
                    )));
                }
            }
        }
        Ok(AffineMonomialMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(coords: &CoordSystem) -> Self {
        let images = (0..coords.len())
            .map(|i| match coords.var(i).kind {
                VarKind::Additive => VarImage::Additive(AffineExpr::var(i)),
                VarKind::Toric => VarImage::Toric(MonomialExpr::var(i)),
            })
            .collect();
        AffineMonomialMap {
            source: coords.clone(),
            target: coords.clone(),
            images,
        }
    }

    /// A map that renames target variables to source variables by name
    /// lookup through `rename`; used for projections out of products.
    pub fn projection(
        source: &CoordSystem,
        target: &CoordSystem,
        rename: impl Fn(&str) -> String,
    ) -> Result<Self> {
        let images = (0..target.len())
            .map(|i| {
                let tv = target.var(i);
                let sname = rename(&tv.name);
                let si = source.index_of(&sname).ok_or_else(|| {
                    Error::contract(format!("projection: no source variable `{sname}`"))
                })?;
                Ok(match tv.kind {
                    VarKind::Additive => VarImage::Additive(AffineExpr::var(si)),
                    VarKind::Toric => VarImage::Toric(MonomialExpr::var(si)),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        AffineMonomialMap::new(source.clone(), target.clone(), images)
    }

    pub fn source(&self) -> &CoordSystem {
        &self.source
    }

    pub fn target(&self) -> &CoordSystem {
        &self.target
    }

    pub fn image(&self, target_var: usize) -> &VarImage {
        &self.images[target_var]
    }

    /// `self ∘ inner`, with `inner: A → B` and `self: B → C`.
    pub fn compose(&self, inner: &AffineMonomialMap) -> Result<AffineMonomialMap> {
        if inner.target != self.source {
            return Err(Error::contract("compose: middle coordinate systems differ"));
        }
        let images = self
            .images
            .iter()
            .map(|image| match image {
                VarImage::Additive(expr) => {
                    let mut constant = expr.constant.clone();
                    let mut terms: BTreeMap<usize, Rat> = BTreeMap::new();
                    for (&v, coeff) in &expr.terms {
                        let VarImage::Additive(inner_expr) = &inner.images[v] else {
                            unreachable!("kind checked at construction");
                        };
                        constant += coeff * &inner_expr.constant;
                        for (&w, c) in &inner_expr.terms {
                            let entry = terms.entry(w).or_insert_with(Rat::zero);
                            *entry += coeff * c;
                            if entry.is_zero() {
                                terms.remove(&w);
                            }
                        }
                    }
                    VarImage::Additive(AffineExpr { constant, terms })
                }
                VarImage::Toric(expr) => {
                    let mut constant = expr.constant.clone();
                    let mut exps: BTreeMap<usize, i64> = BTreeMap::new();
                    for (&v, &e) in &expr.exps {
                        let VarImage::Toric(inner_expr) = &inner.images[v] else {
                            unreachable!("kind checked at construction");
                        };
                        constant = constant.mul(&inner_expr.constant.pow(e));
                        for (&w, &f) in &inner_expr.exps {
                            let entry = exps.entry(w).or_insert(0);
                            *entry += e * f;
                            if *entry == 0 {
                                exps.remove(&w);
                            }
                        }
                    }
                    VarImage::Toric(MonomialExpr { constant, exps })
                }
            })
            .collect();
        AffineMonomialMap::new(inner.source.clone(), self.target.clone(), images)
    }

    /// Substitute into a coefficient polynomial living on the target,
    /// producing one on the source.
    pub fn pull_poly<C: Coeff>(&self, poly: &LaurentPoly<C>) -> Result<LaurentPoly<C>> {
        let n_src = self.source.len();
        let mut out = LaurentPoly::zero(n_src);
        for (exps, c) in poly.terms() {
            let mut carrier = LaurentPoly::<Rat>::one(n_src);
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match &self.images[v] {
                    VarImage::Additive(expr) => {
                        if e < 0 {
                            return Err(Error::contract(
                                "negative exponent on an additive variable",
                            ));
                        }
                        let mut p = LaurentPoly::constant(n_src, expr.constant.clone());
                        for (&w, coeff) in &expr.terms {
                            p = p.add(&LaurentPoly::var(n_src, w, coeff.clone()));
                        }
                        p.pow(e)?
                    }
                    VarImage::Toric(expr) => {
                        let mut mono_exps = vec![0i64; n_src];
                        for (&w, &f) in &expr.exps {
                            mono_exps[w] = f * e;
                        }
                        let coeff = expr.constant.pow(e).reconstruct();
                        LaurentPoly::monomial(n_src, mono_exps, coeff)?
                    }
                };
                carrier = carrier.mul(&factor);
            }
            out = out.add(&LaurentPoly::attach(&carrier, c));
        }
        Ok(out)
    }

    /// Pullback of the basis covector of target variable `v`, as a
    /// constant-coefficient combination of source covectors. Constants die
    /// under both `d` and `dlog`.
    pub fn pull_covector(&self, v: usize) -> Vec<(usize, Rat)> {
        match &self.images[v] {
            VarImage::Additive(expr) => expr.terms.iter().map(|(&w, c)| (w, c.clone())).collect(),
            VarImage::Toric(expr) => expr
                .exps
                .iter()
                .map(|(&w, &e)| (w, Rat::from_integer(e.into())))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn kind_mismatch_rejected() {
        let src = CoordSystem::group("x", 1, "t", 1);
        let tgt = CoordSystem::group("y", 1, "z", 1);
        // toric target depending on additive source
        let bad = AffineMonomialMap::new(
            src.clone(),
            tgt.clone(),
            vec![
                VarImage::Additive(AffineExpr::var(0)),
                VarImage::Toric(MonomialExpr {
                    constant: QStarElem::one(),
                    exps: BTreeMap::from([(0, 1)]),
                }),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn compose_matches_pointwise_substitution() {
        // A = (a), B = (b), C = (c), all toric; b ↦ 5·a², c ↦ b³
        // composed: c ↦ 125·a⁶.
        let a = CoordSystem::group("", 0, "a", 1);
        let b = CoordSystem::group("", 0, "b", 1);
        let c = CoordSystem::group("", 0, "c", 1);
        let inner = AffineMonomialMap::new(
            a.clone(),
            b.clone(),
            vec![VarImage::Toric(MonomialExpr {
                constant: crate::ratmult::parse_qstar("5").unwrap(),
                exps: BTreeMap::from([(0, 2)]),
            })],
        )
        .unwrap();
        let outer = AffineMonomialMap::new(
            b,
            c,
            vec![VarImage::Toric(MonomialExpr {
                constant: QStarElem::one(),
                exps: BTreeMap::from([(0, 3)]),
            })],
        )
        .unwrap();
        let composed = outer.compose(&inner).unwrap();
        let VarImage::Toric(m) = composed.image(0) else {
            panic!()
        };
        assert_eq!(m.constant, crate::ratmult::parse_qstar("125").unwrap());
        assert_eq!(m.exps, BTreeMap::from([(0, 6)]));
    }

    #[test]
    fn covector_pullback_drops_constants() {
        let src = CoordSystem::group("x", 2, "t", 0);
        let tgt = CoordSystem::group("y", 1, "z", 1);
        let map = AffineMonomialMap::new(
            src,
            tgt,
            vec![
                VarImage::Additive(AffineExpr {
                    constant: rat(3, 1),
                    terms: BTreeMap::from([(0, rat(1, 1)), (1, rat(-2, 1))]),
                }),
                VarImage::Toric(MonomialExpr::constant(
                    crate::ratmult::parse_qstar("7").unwrap(),
                )),
            ],
        )
        .unwrap();
        assert_eq!(map.pull_covector(0), vec![(0, rat(1, 1)), (1, rat(-2, 1))]);
        assert_eq!(map.pull_covector(1), vec![]);
    }

    #[test]
    fn poly_pullback_expands_affine_powers() {
        // target poly y² pulled along y ↦ x₁ + x₂ is (x₁ + x₂)².
        let src = CoordSystem::group("x", 2, "t", 0);
        let tgt = CoordSystem::group("y", 1, "t", 0);
        let map = AffineMonomialMap::new(
            src,
            tgt,
            vec![VarImage::Additive(AffineExpr::sum_of_vars(&[0, 1]))],
        )
        .unwrap();
        let y_sq = LaurentPoly::monomial(1, vec![2], rat(1, 1)).unwrap();
        let pulled = map.pull_poly(&y_sq).unwrap();
        let expect = LaurentPoly::monomial(2, vec![2, 0], rat(1, 1))
            .unwrap()
            .add(&LaurentPoly::monomial(2, vec![1, 1], rat(2, 1)).unwrap())
            .add(&LaurentPoly::monomial(2, vec![0, 2], rat(1, 1)).unwrap());
        assert_eq!(pulled, expect);
    }
}
