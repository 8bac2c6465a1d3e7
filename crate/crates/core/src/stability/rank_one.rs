//! Stability of `J = A + kappa e_u e_v^T` from the open loop `A`.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix_hurwitz;
use crate::algebra::{ExactMatrix, ExactScalar, HurwitzVerdict, Matrix, Rational, Sign};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub a_hurwitz: Option<HurwitzVerdict>,
    pub a_metzler: Option<bool>,
    /// `-(A^-1)_{v,u}`, the transfer gain at `lambda = 0`; only computed for
    /// Metzler-Hurwitz `A`, where it dominates the right half-plane.
    pub dc_gain: Option<ExactScalar>,
    /// `|kappa| * dc_gain`.
    pub bound_value: Option<ExactScalar>,
    pub bound_holds: Option<bool>,
    pub j_hurwitz: Option<HurwitzVerdict>,
    /// `(lambda, det(lambda I - J) == det(lambda I - A) (1 - kappa e_v^T (lambda I - A)^-1 e_u))`.
    pub identity_checks: Vec<(String, bool)>,
}

fn perturbed(a: &ExactMatrix, u: usize, v: usize, kappa: &ExactScalar) -> ExactMatrix {
    let mut j = a.clone();
    j.set(u, v, a.get(u, v).clone() + kappa.clone());
    j
}

/// Determinant-lemma check at one `lambda`; `None` when `lambda I - A` is singular.
fn identity_at(a: &ExactMatrix, u: usize, v: usize, kappa: &ExactScalar, lambda: &ExactScalar) -> Result<Option<bool>> {
    let n = a.rows();
    let l = Matrix::identity(n).scale(lambda).sub(a);
    let Some(linv) = l.inverse()? else { return Ok(None) };
    let lhs = Matrix::identity(n).scale(lambda).sub(&perturbed(a, u, v, kappa)).det()?;
    let rhs = l.det()? * (ExactScalar::one() - kappa.clone() * linv.get(v, u).clone());
    Ok(Some(lhs == rhs))
}

pub fn rank_one_bound(a: &ExactMatrix, u: usize, v: usize, kappa: &Rational) -> Result<BoundReport> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    if u >= n || v >= n {
        return Err(Error::Precondition(format!("index out of range for a {n}x{n} matrix")));
    }
    let Some(ainv) = a.inverse()? else { return Err(Error::SingularA) };
    let k = ExactScalar::rational(kappa.clone());
    let a_hurwitz = matrix_hurwitz(a);
    let a_metzler = a.is_metzler();
    let (dc_gain, bound_value, bound_holds) = if a_metzler == Some(true) && a_hurwitz == Some(HurwitzVerdict::Hurwitz) {
        let g = -ainv.get(v, u).clone();
        let b = ExactScalar::rational(kappa.abs()) * g.clone();
        let holds = (b.clone() - ExactScalar::one()).sign() == Sign::Negative;
        (Some(g), Some(b), Some(holds))
    } else {
        (None, None, None)
    };
    let j_hurwitz = matrix_hurwitz(&perturbed(a, u, v, &k));

    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut identity_checks = Vec::new();
    let mut tries = 0;
    while identity_checks.len() < 3 && tries < 50 {
        tries += 1;
        let lam = Rational::new(rng.gen_range(-60..=60).into(), rng.gen_range(1..=7).into());
        if let Some(ok) = identity_at(a, u, v, &k, &ExactScalar::rational(lam.clone()))? {
            identity_checks.push((lam.to_string(), ok));
        }
    }
    Ok(BoundReport { a_hurwitz, a_metzler, dc_gain, bound_value, bound_holds, j_hurwitz, identity_checks })
}

/// Determinant-lemma check at a caller-chosen `lambda`.
pub fn determinant_identity(a: &ExactMatrix, u: usize, v: usize, kappa: &Rational, lambda: &Rational) -> Result<Option<bool>> {
    identity_at(a, u, v, &ExactScalar::rational(kappa.clone()), &ExactScalar::rational(lambda.clone()))
}
