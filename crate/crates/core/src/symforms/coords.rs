//! Coordinate systems on products of 𝔾ₐ and 𝔾ₘ factors.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarKind {
    /// A 𝔾ₐ coordinate; its basis covector is `dx`.
    Additive,
    /// A 𝔾ₘ coordinate; its basis covector is `dlog t`.
    Toric,
}

/// Which factor of a two-group product a variable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactorTag {
    Left,
    Right,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordVar {
    pub name: String,
    pub kind: VarKind,
    pub factor: FactorTag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordSystem {
    vars: Vec<CoordVar>,
}

impl CoordSystem {
    pub fn new(vars: Vec<CoordVar>) -> Result<Self> {
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                if vars[i].name == vars[j].name {
                    return Err(Error::contract(format!(
                        "duplicate coordinate name `{}`",
                        vars[i].name
                    )));
                }
            }
        }
        Ok(CoordSystem { vars })
    }

    /// `count` variables named `prefix` (bare when there is exactly one,
    /// `prefix1…prefixN` otherwise, matching the usual notation).
    pub fn family(prefix: &str, kind: VarKind, factor: FactorTag, count: usize) -> Vec<CoordVar> {
        (0..count)
            .map(|i| CoordVar {
                name: if count == 1 {
                    prefix.to_string()
                } else {
                    format!("{prefix}{}", i + 1)
                },
                kind,
                factor,
            })
            .collect()
    }

    /// Untagged group 𝔾ₐ^a × 𝔾ₘ^t.
    pub fn group(add_prefix: &str, additive: usize, toric_prefix: &str, toric: usize) -> Self {
        let mut vars = Self::family(add_prefix, VarKind::Additive, FactorTag::None, additive);
        vars.extend(Self::family(
            toric_prefix,
            VarKind::Toric,
            FactorTag::None,
            toric,
        ));
        CoordSystem::new(vars).expect("distinct prefixes give distinct names")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[CoordVar] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &CoordVar {
        &self.vars[i]
    }

    pub fn is_additive(&self, i: usize) -> bool {
        self.vars[i].kind == VarKind::Additive
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn additive_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_additive(i)).collect()
    }

    pub fn toric_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_additive(i)).collect()
    }

    pub fn indices_with_factor(&self, tag: FactorTag) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.vars[i].factor == tag)
            .collect()
    }

    /// Two renamed copies of this system side by side, names suffixed.
    pub fn doubled(&self, suffix_a: &str, suffix_b: &str) -> CoordSystem {
        let copy = |suffix: &str| -> Vec<CoordVar> {
            self.vars
                .iter()
                .map(|v| CoordVar {
                    name: format!("{}{}", v.name, suffix),
                    kind: v.kind,
                    factor: v.factor,
                })
                .collect()
        };
        let mut vars = copy(suffix_a);
        vars.extend(copy(suffix_b));
        CoordSystem::new(vars).expect("suffixed copies of unique names stay unique")
    }

    /// Covector display name: `dx` for additive, `dlog t` for toric.
    pub fn covector_name(&self, i: usize) -> String {
        let v = &self.vars[i];
        match v.kind {
            VarKind::Additive => format!("d{}", v.name),
            VarKind::Toric => format!("dlog {}", v.name),
        }
    }
}
