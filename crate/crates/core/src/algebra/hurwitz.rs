use serde::Serialize;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::{DecideSign, Field, Sign};
use super::matrix::Matrix;
use super::scalar::{exact_isqrt, ExactScalar, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HurwitzVerdict {
    /// Every root has negative real part.
    Hurwitz,
    /// Some root has positive real part.
    NotHurwitz,
    /// No root in the open right half-plane, at least one on the imaginary axis.
    Boundary,
}

fn sign_of<T: DecideSign>(x: &T, what: &str) -> Result<Sign> {
    x.decide_sign().ok_or_else(|| Error::UndecidableSign(what.to_string()))
}

/// Hurwitz determinants `Delta_1..Delta_n` of `a0 l^n + a1 l^(n-1) + ... + an`.
pub fn hurwitz_determinants<T: Field>(p: &UniPoly<T>) -> Result<Vec<T>> {
    let n = p.degree();
    // a_k is the coefficient of lambda^(n-k)
    let a = |k: isize| -> T {
        if k < 0 || k as usize > n {
            T::zero()
        } else {
            p.coeff(n - k as usize)
        }
    };
    let h = Matrix::from_fn(n, n, |i, j| a(2 * (j as isize + 1) - (i as isize + 1)));
    h.leading_principal_minors()
}

/// Exact Routh-Hurwitz decision for a polynomial with decidable coefficient signs.
pub fn hurwitz_test<T: Field + DecideSign>(p: &UniPoly<T>) -> Result<HurwitzVerdict> {
    if p.is_zero() || p.leading().is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let p = if sign_of(&p.leading(), "leading coefficient")? == Sign::Negative { p.neg() } else { p.clone() };
    if p.degree() == 0 {
        return Ok(HurwitzVerdict::Hurwitz);
    }
    let mut any_zero_coeff = false;
    for c in p.coeffs() {
        match sign_of(c, "coefficient")? {
            Sign::Negative => return Ok(HurwitzVerdict::NotHurwitz),
            Sign::Zero => any_zero_coeff = true,
            Sign::Positive => {}
        }
    }
    if !any_zero_coeff {
        let dets = hurwitz_determinants(&p)?;
        let mut all_pos = true;
        for d in &dets {
            if sign_of(d, "Hurwitz determinant")? != Sign::Positive {
                all_pos = false;
                break;
            }
        }
        if all_pos {
            return Ok(HurwitzVerdict::Hurwitz);
        }
    }
    refine_degenerate(&p)
}

/// Separates `Boundary` from `NotHurwitz` once the determinant test failed:
/// roots shared by `p(l)` and `p(-l)` must all lie on the imaginary axis and
/// the remaining factor must be Hurwitz.
fn refine_degenerate<T: Field + DecideSign>(p: &UniPoly<T>) -> Result<HurwitzVerdict> {
    let g = p.gcd(&p.reflect());
    if g.degree() == 0 {
        return Ok(HurwitzVerdict::NotHurwitz);
    }
    let (q, _) = p.div_rem(&g);
    if q.degree() > 0 {
        let q = if sign_of(&q.leading(), "leading coefficient")? == Sign::Negative { q.neg() } else { q };
        for d in hurwitz_determinants(&q)? {
            if sign_of(&d, "Hurwitz determinant")? != Sign::Positive {
                return Ok(HurwitzVerdict::NotHurwitz);
            }
        }
        for c in q.coeffs() {
            if sign_of(c, "coefficient")? != Sign::Positive {
                return Ok(HurwitzVerdict::NotHurwitz);
            }
        }
    }
    // g is even or odd; strip the power of lambda, then read h(lambda^2).
    let g = g.shift_down(g.zero_multiplicity());
    if g.coeffs().iter().enumerate().any(|(k, c)| k % 2 == 1 && !c.is_zero()) {
        // still has odd part: a symmetric pair off the axis
        return Ok(HurwitzVerdict::NotHurwitz);
    }
    let h = UniPoly::new(g.coeffs().iter().step_by(2).cloned().collect());
    if h.degree() == 0 {
        return Ok(HurwitzVerdict::Boundary);
    }
    let hs = h.square_free();
    let distinct = hs.degree();
    if hs.count_nonpositive_roots()? == distinct {
        Ok(HurwitzVerdict::Boundary)
    } else {
        Ok(HurwitzVerdict::NotHurwitz)
    }
}

/// Sign of the spectral abscissa of a Metzler matrix, decided with principal minors.
pub fn metzler_sign<T: Field + DecideSign>(m: &Matrix<T>) -> Result<Sign> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    match m.is_metzler() {
        Some(true) => {}
        Some(false) => return Err(Error::NotMetzler),
        None => return Err(Error::UndecidableSign("off-diagonal entry".into())),
    }
    let neg = m.neg();
    let mut all_pos = true;
    for d in neg.leading_principal_minors()? {
        if sign_of(&d, "principal minor")? != Sign::Positive {
            all_pos = false;
            break;
        }
    }
    if all_pos {
        return Ok(Sign::Negative);
    }
    for (_, d) in neg.principal_minors()? {
        if sign_of(&d, "principal minor")? == Sign::Negative {
            return Ok(Sign::Positive);
        }
    }
    Ok(Sign::Zero)
}

/// Real roots of `a y^2 + b y + c` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RootSet {
    LinearRoot(ExactScalar),
    TwoRational(ExactScalar, ExactScalar),
    /// Two roots in `Q(sqrt d)`, smaller first.
    QuadExt { d: String, roots: [ExactScalar; 2] },
    NoRealRoot,
    DoubleRoot(ExactScalar),
}

impl RootSet {
    pub fn roots(&self) -> Vec<ExactScalar> {
        match self {
            RootSet::LinearRoot(r) | RootSet::DoubleRoot(r) => vec![r.clone()],
            RootSet::TwoRational(a, b) => vec![a.clone(), b.clone()],
            RootSet::QuadExt { roots, .. } => roots.to_vec(),
            RootSet::NoRealRoot => Vec::new(),
        }
    }
}

pub fn quad_solve(a: &Rational, b: &Rational, c: &Rational) -> Result<RootSet> {
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() { Err(Error::AllZero) } else { Ok(RootSet::NoRealRoot) };
        }
        return Ok(RootSet::LinearRoot(ExactScalar::rational(-c / b)));
    }
    let two_a = a * Rational::from_integer(2.into());
    let disc = b * b - Rational::from_integer(4.into()) * a * c;
    if disc.is_negative() {
        return Ok(RootSet::NoRealRoot);
    }
    let center = -b / &two_a;
    if disc.is_zero() {
        return Ok(RootSet::DoubleRoot(ExactScalar::rational(center)));
    }
    if let (Some(n), Some(d)) = (exact_isqrt(disc.numer()), exact_isqrt(disc.denom())) {
        let s = Rational::new(n, d) / two_a.abs();
        let (lo, hi) = (&center - &s, &center + &s);
        return Ok(RootSet::TwoRational(ExactScalar::rational(lo), ExactScalar::rational(hi)));
    }
    let root = ExactScalar::sqrt_rational(&disc).expect("non-negative discriminant");
    let half = ExactScalar::rational(Rational::one() / two_a.abs());
    let offset = root.try_mul(&half)?;
    let c0 = ExactScalar::rational(center);
    let lo = c0.try_sub(&offset)?;
    let hi = c0.try_add(&offset)?;
    let d: &BigInt = hi.d();
    Ok(RootSet::QuadExt { d: d.to_string(), roots: [lo, hi] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};

    fn p(c: &[Rational]) -> UniPoly<Rational> {
        UniPoly::new(c.to_vec())
    }

    #[test]
    fn hurwitz_examples() {
        assert_eq!(hurwitz_test(&p(&[int(1), int(1)])).unwrap(), HurwitzVerdict::Hurwitz);
        let cubic = p(&[rat(1, 2), rat(5, 4), int(2), int(1)]);
        assert_eq!(hurwitz_test(&cubic).unwrap(), HurwitzVerdict::Hurwitz);
        assert_eq!(hurwitz_test(&p(&[int(1), int(0), int(1)])).unwrap(), HurwitzVerdict::Boundary);
        assert_eq!(hurwitz_test(&p(&[int(-1), int(0), int(1)])).unwrap(), HurwitzVerdict::NotHurwitz);
        assert_eq!(hurwitz_test(&p(&[int(0), int(1)])).unwrap(), HurwitzVerdict::Boundary);
        assert_eq!(hurwitz_test(&p(&[int(0), int(0), int(1)])).unwrap(), HurwitzVerdict::Boundary);
        assert_eq!(hurwitz_test(&p(&[int(0), int(-1), int(1)])).unwrap(), HurwitzVerdict::NotHurwitz);
        // (l^2+1)(l+1)
        assert_eq!(hurwitz_test(&p(&[int(1), int(1), int(1), int(1)])).unwrap(), HurwitzVerdict::Boundary);
        // (l^2+1)^2 has a repeated imaginary pair: still no open right half-plane root
        assert_eq!(hurwitz_test(&p(&[int(1), int(0), int(2), int(0), int(1)])).unwrap(), HurwitzVerdict::Boundary);
        // (l^2 - l + 1)(l^2 + l + 1) = l^4 + l^2 + 1
        assert_eq!(hurwitz_test(&p(&[int(1), int(0), int(1), int(0), int(1)])).unwrap(), HurwitzVerdict::NotHurwitz);
        assert_eq!(hurwitz_test(&p(&[])), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn metzler_examples() {
        let neg_id: Matrix<Rational> = Matrix::identity(3).neg();
        assert_eq!(metzler_sign(&neg_id).unwrap(), Sign::Negative);
        assert_eq!(metzler_sign(&Matrix::from_rows(vec![vec![int(0)]])).unwrap(), Sign::Zero);
        let m = Matrix::from_rows(vec![vec![int(-1), rat(3, 2)], vec![int(1), int(-1)]]);
        assert_eq!(metzler_sign(&m).unwrap(), Sign::Positive);
        let bad = Matrix::from_rows(vec![vec![int(-1), int(-1)], vec![int(1), int(-1)]]);
        assert_eq!(metzler_sign(&bad), Err(Error::NotMetzler));
    }

    #[test]
    fn quad_solve_examples() {
        assert_eq!(
            quad_solve(&int(1), &int(-3), &int(2)).unwrap(),
            RootSet::TwoRational(ExactScalar::from_int(1), ExactScalar::from_int(2))
        );
        match quad_solve(&int(1), &int(0), &int(-2)).unwrap() {
            RootSet::QuadExt { d, roots } => {
                assert_eq!(d, "2");
                let s2 = ExactScalar::sqrt_rational(&int(2)).unwrap();
                assert_eq!(roots, [-s2.clone(), s2]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(quad_solve(&int(1), &int(0), &int(1)).unwrap(), RootSet::NoRealRoot);
        assert_eq!(quad_solve(&int(0), &int(0), &int(0)), Err(Error::AllZero));
    }
}
