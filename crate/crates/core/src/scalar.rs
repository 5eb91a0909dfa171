use std::fmt;

use num_traits::{Num, Signed};

/// Exact scalars the matrix core works over.
///
/// Both `Int` (ℤ) and `Rat` (ℚ) qualify; everything downstream is scalar
/// agnostic where the mathematics is, with integer-only algorithms
/// (Smith normal form) constrained further at their definition site.
pub trait Scalar: Num + Signed + Clone + Eq + Ord + fmt::Debug + fmt::Display + 'static {}

impl<T> Scalar for T where T: Num + Signed + Clone + Eq + Ord + fmt::Debug + fmt::Display + 'static {}
