use std::fmt;

use num_traits::{One, Signed, Zero};

use super::field::{DecideSign, Field, Sign};
use super::scalar::{simplest_between, Rational};
use crate::error::{Error, Result};

/// Univariate polynomial, constant term first, leading coefficient nonzero.
#[derive(Clone, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `lambda`
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `prod (lambda - r)`
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::constant(T::one()), |acc, r| acc.mul(&Self::new(vec![-r.clone(), T::one()])))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * T::from_i64(k as i64)).collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|a| -a.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|a| a.clone() / l.clone()).collect())
    }

    /// `p(-lambda)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Euclidean division over the field.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let l = d.leading();
        if self.is_zero() || self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / l.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn square_free(&self) -> Self {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Multiplicity of zero as a root.
    pub fn zero_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out `lambda^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field + DecideSign> UniPoly<T> {
    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    /// Number of distinct real roots in `(-inf, 0]`.
    pub fn count_nonpositive_roots(&self) -> Result<usize> {
        let seq = self.sturm_sequence();
        let at_minus_inf: Vec<Sign> = seq
            .iter()
            .map(|p| {
                let s = p.leading().decide_sign().ok_or_else(|| Error::UndecidableSign("Sturm coefficient".into()))?;
                Ok(if p.degree() % 2 == 1 { s.flip() } else { s })
            })
            .collect::<Result<_>>()?;
        let at_zero: Vec<Sign> = seq
            .iter()
            .map(|p| p.coeff(0).decide_sign().ok_or_else(|| Error::UndecidableSign("Sturm coefficient".into())))
            .collect::<Result<_>>()?;
        Ok(variations(&at_minus_inf) - variations(&at_zero))
    }
}

fn variations(signs: &[Sign]) -> usize {
    let nz: Vec<Sign> = signs.iter().copied().filter(|s| *s != Sign::Zero).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

impl UniPoly<Rational> {
    fn sign_at(&self, x: &Rational) -> Sign {
        Sign::of_rational(&self.eval(x))
    }

    fn sturm_count(seq: &[Self], x: &Rational) -> usize {
        let s: Vec<Sign> = seq.iter().map(|p| p.sign_at(x)).collect();
        variations(&s)
    }

    /// Disjoint intervals `(lo, hi]` each containing exactly one distinct real root.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let p = self.square_free();
        let lc = p.leading().abs();
        let bound = Rational::one() + p.coeffs.iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
        let seq = p.sturm_sequence();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            let n = Self::sturm_count(&seq, &a) - Self::sturm_count(&seq, &b);
            match n {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let m = (&a + &b) / Rational::from_integer(2.into());
                    stack.push((m.clone(), b));
                    stack.push((a, m));
                }
            }
        }
        out.sort();
        out
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let p = self.square_free();
        // Clear denominators so that any rational root a/b has b | lead.
        let den_lcm = p
            .coeffs
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let lead = (p.leading() * Rational::from_integer(den_lcm)).abs();
        let lead2 = &lead * &lead;
        let seq = p.sturm_sequence();
        let mut roots = Vec::new();
        for (mut lo, mut hi) in p.isolate_real_roots() {
            if p.sign_at(&hi) == Sign::Zero {
                roots.push(hi);
                continue;
            }
            let found = loop {
                if (&hi - &lo) * &lead2 < Rational::one() {
                    let c = simplest_between(&lo, &hi);
                    break (p.sign_at(&c) == Sign::Zero).then_some(c);
                }
                let m = (&lo + &hi) / Rational::from_integer(2.into());
                if p.sign_at(&m) == Sign::Zero {
                    break Some(m);
                }
                if Self::sturm_count(&seq, &lo) - Self::sturm_count(&seq, &m) == 1 {
                    hi = m;
                } else {
                    lo = m;
                }
            };
            if let Some(r) = found {
                roots.push(r);
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

impl<T: Field + fmt::Display> UniPoly<T> {
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let cs = c.to_string();
            parts.push(if mono.is_empty() {
                format!("({cs})")
            } else if c.is_one() {
                mono
            } else {
                format!("({cs})*{mono}")
            });
        }
        parts.join(" + ")
    }
}

impl<T: fmt::Debug> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};

    #[test]
    fn rational_roots_of_products() {
        let p = UniPoly::from_roots(&[rat(3, 7), int(-2), rat(3, 7)]).mul(&UniPoly::new(vec![int(-2), int(0), int(1)]));
        assert_eq!(p.rational_roots(), vec![int(-2), rat(3, 7)]);
    }

    #[test]
    fn isolation_counts_irrational_roots() {
        let p = UniPoly::new(vec![int(-2), int(0), int(1)]);
        assert_eq!(p.isolate_real_roots().len(), 2);
        assert!(p.rational_roots().is_empty());
    }

    #[test]
    fn nonpositive_root_count() {
        // (x+1)(x+2)(x-3)
        let p = UniPoly::from_roots(&[int(-1), int(-2), int(3)]);
        assert_eq!(p.count_nonpositive_roots().unwrap(), 2);
        let q = UniPoly::from_roots(&[int(0), int(5)]);
        assert_eq!(q.count_nonpositive_roots().unwrap(), 1);
    }
}
