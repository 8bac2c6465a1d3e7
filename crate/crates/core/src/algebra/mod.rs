//! Exact arithmetic: rationals, one quadratic extension at a time,
//! multivariate polynomials and rational functions, matrices and the
//! Hurwitz / Metzler sign decisions built on them.

pub mod field;
pub mod hurwitz;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod unipoly;

pub use field::{DecideSign, Field, Sign};
pub use hurwitz::{hurwitz_determinants, hurwitz_test, metzler_sign, quad_solve, HurwitzVerdict, RootSet};
pub use matrix::{ExactMatrix, Matrix};
pub use poly::{Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use scalar::{int, parse_rational, quadext_sign, rat, ExactScalar, Rational};
pub use unipoly::UniPoly;

/// Quotient-rule derivative of `f` in variable `v`.
pub fn differentiate(f: &RatFunc, v: usize) -> RatFunc {
    f.differentiate(v)
}

/// Characteristic polynomial `det(lambda I - M)`.
pub fn char_poly(m: &ExactMatrix) -> crate::Result<UniPoly<ExactScalar>> {
    m.char_poly_exact()
}
