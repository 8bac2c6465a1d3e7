use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::field::{DecideSign, Field, Sign};
use super::poly::MultiPoly;
use super::scalar::{ExactScalar, Rational};
use crate::error::{Error, Result};

/// Quotient of two multivariate polynomials in lowest terms.
///
/// The denominator has coprime integer coefficients and a positive leading
/// coefficient, so equal functions have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DenominatorZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: usize) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let mut c = den.content();
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn inv(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Quotient-rule derivative.
    pub fn differentiate(&self, v: usize) -> RatFunc {
        if !self.contains_var(v) {
            return RatFunc::zero();
        }
        if self.den.is_constant() {
            return RatFunc::normalized(self.num.derivative(v), self.den.clone());
        }
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        RatFunc::normalized(n, &self.den * &self.den)
    }

    /// Substitutes rational constants for some variables.
    pub fn substitute_values(&self, vals: &BTreeMap<usize, Rational>) -> Result<RatFunc> {
        RatFunc::new(self.num.substitute_values(vals), self.den.substitute_values(vals))
    }

    /// Substitutes rational functions for some variables.
    pub fn substitute(&self, subs: &BTreeMap<usize, RatFunc>) -> Result<RatFunc> {
        let n = subst_poly(&self.num, subs)?;
        let d = subst_poly(&self.den, subs)?;
        if d.is_zero() {
            return Err(Error::DenominatorZero);
        }
        Ok(n / d)
    }

    /// Exact value at a point; every variable must be assigned.
    pub fn evaluate<T: Field>(&self, point: &dyn Fn(usize) -> Option<T>) -> Result<T> {
        let n = self.num.eval(point).ok_or_else(|| Error::Precondition("unassigned variable".into()))?;
        let d = self.den.eval(point).ok_or_else(|| Error::Precondition("unassigned variable".into()))?;
        if d.is_zero() {
            return Err(Error::DenominatorZero);
        }
        Ok(n / d)
    }

    /// Evaluation over the quadratic extension, reporting mixed radicals as errors.
    pub fn evaluate_exact(&self, point: &dyn Fn(usize) -> Option<ExactScalar>) -> Result<ExactScalar> {
        let vars = self.vars();
        let vals: Vec<ExactScalar> = vars
            .iter()
            .map(|&v| point(v).ok_or_else(|| Error::Precondition(format!("variable {v} unassigned"))))
            .collect::<Result<_>>()?;
        ExactScalar::common_radicand(vals.iter())?;
        self.evaluate(point)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.display_with(names);
        }
        let n = self.num.display_with(names);
        let n = if self.num.num_terms() > 1 { format!("({n})") } else { n };
        let d = self.den.display_with(names);
        let single = self.den.num_terms() == 1
            && self.den.terms().next().map(|(m, c)| m.is_one() || (c.is_one() && m.degree() == 1)).unwrap_or(false);
        let d = if single { d } else { format!("({d})") };
        format!("{n}/{d}")
    }
}

fn subst_poly(p: &MultiPoly, subs: &BTreeMap<usize, RatFunc>) -> Result<RatFunc> {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut t = RatFunc::constant(c.clone());
        let mut rest = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match subs.get(&i) {
                Some(r) if e > 0 => {
                    rest.push(0);
                    for _ in 0..e {
                        t = t * r.clone();
                    }
                }
                _ => rest.push(e),
            }
        }
        let mono = super::poly::Monomial::from_exponents(rest);
        acc = acc + t * RatFunc::from_poly(MultiPoly::term(Rational::one(), mono));
    }
    Ok(acc)
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: MultiPoly::zero(), den: MultiPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::constant(Rational::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::normalized(self.num + o.num, self.den);
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::normalized(n, &self.den * &o.den)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::normalized(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function.
    fn div(self, o: RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by the zero rational function");
        RatFunc::normalized(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl Field for RatFunc {
    fn from_rational(q: &Rational) -> Self {
        RatFunc::constant(q.clone())
    }
}

impl DecideSign for RatFunc {
    /// Decided when numerator and denominator each have coefficients of a
    /// single sign, which is the sign for positive values of every symbol.
    fn decide_sign(&self) -> Option<Sign> {
        if self.num.is_zero() {
            return Some(Sign::Zero);
        }
        let sn = self.num.uniform_sign()?;
        let sd = self.den.uniform_sign()?;
        Some(if sn == sd { Sign::Positive } else { Sign::Negative })
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};

    fn v(i: usize) -> RatFunc {
        RatFunc::var(i)
    }

    #[test]
    fn cancels_common_factors() {
        let f = (v(0) * v(0) - RatFunc::one()) / (v(0) - RatFunc::one());
        assert_eq!(f, v(0) + RatFunc::one());
        assert!(f.is_polynomial());
    }

    #[test]
    fn derivative_of_saturating_rate() {
        // b*B*U/(B*e + a*U + 1) with indices B=0, U=1, b=2, e=3, a=4
        let rate = v(2) * v(0) * v(1) / (v(0) * v(3) + v(4) * v(1) + RatFunc::one());
        let d = rate.differentiate(0);
        let mut at = BTreeMap::new();
        at.insert(0, int(0));
        let d0 = d.substitute_values(&at).unwrap();
        assert_eq!(d0, v(2) * v(1) / (v(4) * v(1) + RatFunc::one()));
    }

    #[test]
    fn evaluation_reports_pole() {
        let f = RatFunc::one() / (v(0) - RatFunc::one());
        let r = f.evaluate::<Rational>(&|_| Some(int(1)));
        assert_eq!(r, Err(Error::DenominatorZero));
        assert_eq!(f.evaluate::<Rational>(&|_| Some(int(3))).unwrap(), rat(1, 2));
    }

    #[test]
    fn sign_of_positive_combinations() {
        let f = v(0) * v(1) / (v(0) + RatFunc::one());
        assert_eq!(f.decide_sign(), Some(Sign::Positive));
        assert_eq!((-f).decide_sign(), Some(Sign::Negative));
        assert_eq!((v(0) - v(1)).decide_sign(), None);
    }
}
