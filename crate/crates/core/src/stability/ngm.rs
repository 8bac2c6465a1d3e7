use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{quad_solve, DecideSign, ExactScalar, Field, Matrix, RatFunc, Rational, Sign, UniPoly};
use crate::error::{Error, Result};
use crate::model::Model;

/// `M = F - V` with `F >= 0` and `V^-1 >= 0`, and `K = F V^-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularSplitting<T> {
    pub f: Matrix<T>,
    pub v: Matrix<T>,
    pub k: Matrix<T>,
    /// Entries of `M` routed to `F`; empty when `F` was given directly.
    pub mask: Vec<(usize, usize)>,
    /// `rho(K)` when the nonzero part of its characteristic polynomial has
    /// degree at most two over the scalars in play.
    pub rho: Option<T>,
}

pub trait SpectralRadius: Sized {
    fn spectral_radius(k: &Matrix<Self>) -> Option<Self>;
}

/// Characteristic polynomial of `k` with the factor `lambda^m` removed.
fn nonzero_part<T: Field>(k: &Matrix<T>) -> Option<UniPoly<T>> {
    let p = k.char_poly().ok()?;
    Some(p.shift_down(p.zero_multiplicity()))
}

impl SpectralRadius for ExactScalar {
    fn spectral_radius(k: &Matrix<Self>) -> Option<Self> {
        let p = nonzero_part(k)?;
        match p.degree() {
            0 => Some(ExactScalar::zero()),
            1 => Some(-(p.coeff(0) / p.coeff(1))),
            2 => {
                let c: Vec<Rational> = p.coeffs().iter().map(|c| c.as_rational().cloned()).collect::<Option<_>>()?;
                // a nonnegative matrix has its spectral radius as largest real root
                quad_solve(&c[2], &c[1], &c[0]).ok()?.roots().into_iter().last()
            }
            _ => None,
        }
    }
}

impl SpectralRadius for RatFunc {
    fn spectral_radius(k: &Matrix<Self>) -> Option<Self> {
        let p = nonzero_part(k)?;
        match p.degree() {
            0 => Some(RatFunc::zero()),
            1 => Some(-(p.coeff(0) / p.coeff(1))),
            _ => None,
        }
    }
}

fn decided<T: DecideSign>(x: &T, what: &str) -> Result<Sign> {
    x.decide_sign().ok_or_else(|| Error::UndecidableSign(what.to_string()))
}

/// Splits a Metzler `M` with `F` given by `mask` or, by default, by the
/// entrywise positive part of `M`.
pub fn ngm_split<T>(m: &Matrix<T>, mask: Option<&[(usize, usize)]>) -> Result<RegularSplitting<T>>
where
    T: Field + DecideSign + SpectralRadius,
{
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    match m.is_metzler() {
        Some(true) => {}
        Some(false) => return Err(Error::NotMetzler),
        None => return Err(Error::UndecidableSign("off-diagonal entry".into())),
    }
    let n = m.rows();
    let mask: Vec<(usize, usize)> = match mask {
        Some(mask) => mask.to_vec(),
        None => {
            let mut out = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if decided(m.get(i, j), "matrix entry")? == Sign::Positive {
                        out.push((i, j));
                    }
                }
            }
            out
        }
    };
    let f = Matrix::from_fn(n, n, |i, j| if mask.contains(&(i, j)) { m.get(i, j).clone() } else { T::zero() });
    split_with_f(m, f, mask)
}

/// Completes a splitting from a given `F`, checking regularity.
pub fn split_with_f<T>(m: &Matrix<T>, f: Matrix<T>, mask: Vec<(usize, usize)>) -> Result<RegularSplitting<T>>
where
    T: Field + DecideSign + SpectralRadius,
{
    match f.is_nonnegative() {
        Some(true) => {}
        Some(false) => return Err(Error::InvalidSplitting("F has a negative entry".into())),
        None => return Err(Error::UndecidableSign("entry of F".into())),
    }
    let v = f.sub(m);
    let Some(vinv) = v.inverse()? else {
        return Err(Error::InvalidSplitting("V is singular".into()));
    };
    match vinv.is_nonnegative() {
        Some(true) => {}
        Some(false) => return Err(Error::InvalidSplitting("V^-1 has a negative entry".into())),
        None => return Err(Error::UndecidableSign("entry of V^-1".into())),
    }
    let k = f.mul(&vinv);
    let rho = T::spectral_radius(&k);
    Ok(RegularSplitting { f, v, k, mask, rho })
}

/// Reproduction function of `sigma` with the other variables left free:
/// the splitting is taken on the symbolic transversal block restricted to
/// the face of `sigma`. Parameters stay symbolic.
pub fn reproduction_function(m: &Model, sigma: &[usize]) -> Result<Option<RatFunc>> {
    let rhs = m.rhs();
    let zeros: BTreeMap<usize, Rational> = sigma.iter().map(|&v| (v, Rational::zero())).collect();
    let on_face = |f: &RatFunc| f.substitute_values(&zeros);
    let k = sigma.len();
    let mut block = Matrix::zeros(k, k);
    for (r, &i) in sigma.iter().enumerate() {
        for (c, &j) in sigma.iter().enumerate() {
            block.set(r, c, on_face(&rhs[i].differentiate(j))?);
        }
    }
    let split = match m.ngm_spec(sigma) {
        Some(spec) => {
            let mut f = Matrix::zeros(k, k);
            for (v, terms) in &spec.new_terms {
                let Some(r) = sigma.iter().position(|s| s == v) else { continue };
                let total = terms.total();
                for (c, &s) in sigma.iter().enumerate() {
                    f.set(r, c, on_face(&total.differentiate(s))?);
                }
            }
            split_with_f(&block, f, Vec::new())?
        }
        None => ngm_split(&block, None)?,
    };
    Ok(split.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::builtin::builtin_model;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::rational(rat(n, d))
    }

    #[test]
    fn masked_strain_block() {
        let m = Matrix::from_rows(vec![vec![q(-1, 1), q(3, 2)], vec![q(1, 1), q(-1, 1)]]);
        let s = ngm_split(&m, Some(&[(0, 1)])).unwrap();
        assert_eq!(s.f, Matrix::from_rows(vec![vec![q(0, 1), q(3, 2)], vec![q(0, 1), q(0, 1)]]));
        assert_eq!(s.v, Matrix::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(-1, 1), q(1, 1)]]));
        assert_eq!(s.rho, Some(q(3, 2)));
        let d = ngm_split(&m, None).unwrap();
        // positive part: rho = sqrt(3/2), same side of one
        let rho = d.rho.unwrap();
        assert!(!rho.is_rational());
        assert_eq!((rho.clone() * rho - q(3, 2)).sign(), Sign::Zero);
    }

    #[test]
    fn minus_identity() {
        let m = Matrix::<ExactScalar>::identity(3).neg();
        let s = ngm_split(&m, Some(&[])).unwrap();
        assert_eq!(s.v, Matrix::identity(3));
        assert_eq!(s.rho, Some(q(0, 1)));
    }

    #[test]
    fn not_metzler_and_invalid() {
        let m = Matrix::from_rows(vec![vec![q(-1, 1), q(-1, 1)], vec![q(0, 1), q(-1, 1)]]);
        assert_eq!(ngm_split(&m, None), Err(Error::NotMetzler));
        let m = Matrix::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(-1, 1)]]);
        assert!(matches!(ngm_split(&m, Some(&[])), Err(Error::InvalidSplitting(_))));
    }

    #[test]
    fn strain_reproduction_function() {
        let m = builtin_model("osn_omega0").unwrap();
        let sigma = m.parse_var_set("S2,B2").unwrap();
        let r = reproduction_function(&m, &sigma).unwrap().unwrap();
        let want = crate::expr::parse_expr("beta2*U/(mu2*(1 + alpha2*U))", &m.symbols()).unwrap();
        assert_eq!(r, want);
    }
}
