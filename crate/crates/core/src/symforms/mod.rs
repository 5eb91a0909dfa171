//! Symbolic differential forms on products of 𝔾ₐ and 𝔾ₘ factors over ℚ:
//! the engine behind connections, normal invariant differentials,
//! horizontality constraints and curvature.

mod coords;
mod forms;
mod laurent;
mod maps;
mod solve;

pub use coords::{CoordSystem, CoordVar, FactorTag, VarKind};
pub use forms::{basis_tangent, group_law, Form1, Form2, ParamEval};
pub use laurent::{Coeff, LaurentPoly, LinExpr};
pub use maps::{AffineExpr, AffineMonomialMap, MonomialExpr, VarImage};
pub use solve::{ansatz_form1, LinearSystem, SolveOutcome, DEFAULT_ANSATZ_DEGREE};
