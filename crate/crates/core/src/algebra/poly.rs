use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::field::{Field, Sign};
use super::scalar::{fmt_rational, rational_gcd, Rational};

/// Exponent vector with trailing zeros trimmed, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, e: u32) -> Self {
        let mut x = vec![0; v + 1];
        x[v] = e;
        Monomial::from_exponents(x)
    }

    pub fn from_exponents(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let n = self.0.len().max(o.0.len());
        Monomial::from_exponents((0..n).map(|i| self.exp(i) + o.exp(i)).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e <= o.exp(i))
    }

    /// `o / self`, assuming divisibility.
    pub fn div_of(&self, o: &Monomial) -> Monomial {
        let n = o.0.len();
        Monomial::from_exponents((0..n).map(|i| o.exp(i) - self.exp(i)).collect())
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let n = self.0.len().min(o.0.len());
        Monomial::from_exponents((0..n).map(|i| self.exp(i).min(o.exp(i))).collect())
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn without(&self, v: usize) -> Monomial {
        if v >= self.0.len() {
            return self.clone();
        }
        let mut e = self.0.clone();
        e[v] = 0;
        Monomial::from_exponents(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            let n = self.0.len().max(o.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&o.exp(i)) {
                    Ordering::Equal => continue,
                    c => return c,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// Variables are plain indices; names live in the owning model.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = MultiPoly::default();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = MultiPoly::default();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn uses_any(&self, vars: &BTreeSet<usize>) -> bool {
        self.terms.keys().any(|m| m.vars().any(|v| vars.contains(&v)))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut r = MultiPoly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Positive rational with `self / content` having coprime integer coefficients.
    pub fn content(&self) -> Rational {
        rational_gcd(self.terms.values())
    }

    /// Gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(k, v)| (m.div_of(k), v.clone())).collect() }
    }

    pub fn derivative(&self, v: usize) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().filter(|(m, _)| m.exp(v) > 0).map(|(m, c)| {
            let e = m.exp(v);
            let mut ex = m.exponents().to_vec();
            ex[v] -= 1;
            (Monomial::from_exponents(ex), c * Rational::from_integer(e.into()))
        }))
    }

    /// Coefficients of `self` viewed as a polynomial in `v`, constant first.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].add_term(m.without(v), c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Inverse of `coeffs_in`.
    pub fn from_coeffs_in(v: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut r = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            r = r + c.mul_monomial(&Monomial::var_pow(v, k as u32));
        }
        r
    }

    /// Substitutes polynomials for some variables.
    pub fn substitute(&self, subs: &BTreeMap<usize, MultiPoly>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let mut cache: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = Vec::new();
            let mut factor = MultiPoly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    rest.push(0);
                    continue;
                }
                match subs.get(&i) {
                    Some(p) => {
                        rest.push(0);
                        let pw = cache.entry((i, e)).or_insert_with(|| p.pow(e)).clone();
                        factor = &factor * &pw;
                    }
                    None => rest.push(e),
                }
            }
            out = out + factor.mul_monomial(&Monomial::from_exponents(rest));
        }
        out
    }

    /// Substitutes rational constants for some variables.
    pub fn substitute_values(&self, vals: &BTreeMap<usize, Rational>) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut c = c.clone();
            let mut rest = Vec::with_capacity(m.exponents().len());
            for (i, &e) in m.exponents().iter().enumerate() {
                match vals.get(&i) {
                    Some(x) if e > 0 => {
                        c *= num_traits::pow(x.clone(), e as usize);
                        rest.push(0);
                    }
                    _ => rest.push(e),
                }
            }
            (Monomial::from_exponents(rest), c)
        }))
    }

    /// Evaluates with every variable of the polynomial assigned by `point`.
    pub fn eval<T: Field>(&self, point: &dyn Fn(usize) -> Option<T>) -> Option<T> {
        let mut acc = T::zero();
        let mut powers: BTreeMap<(usize, u32), T> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = T::from_rational(c);
            for v in m.vars() {
                let e = m.exp(v);
                let p = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let x = point(v)?;
                        let mut p = T::one();
                        for _ in 0..e {
                            p = p * x.clone();
                        }
                        powers.insert((v, e), p.clone());
                        p
                    }
                };
                t = t * p;
            }
            acc = acc + t;
        }
        Some(acc)
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        if d.num_terms() == 1 {
            if !self.terms.keys().all(|m| lm.divides(m)) {
                return None;
            }
            return Some(self.div_monomial(&lm).scale(&lc.recip()));
        }
        let mut rem = self.clone();
        let mut q = MultiPoly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let t = MultiPoly::term(c / &lc, lm.div_of(&m));
            rem = rem - &t * d;
            q = q + t;
        }
        Some(q)
    }

    /// Sign of every coefficient when they agree.
    pub fn uniform_sign(&self) -> Option<Sign> {
        let mut it = self.terms.values();
        let Some(first) = it.next() else { return Some(Sign::Zero) };
        let s = Sign::of_rational(first);
        it.all(|c| Sign::of_rational(c) == s).then_some(s)
    }

    /// Canonical text using the given symbol names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for v in m.vars() {
                let name = names.get(v).cloned().unwrap_or_else(|| format!("v{v}"));
                let e = m.exp(v);
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Gcd normalized to coprime integer coefficients and positive leading coefficient.
    pub fn gcd(&self, o: &MultiPoly) -> MultiPoly {
        normalize_gcd(gcd_rec(self, o))
    }

    /// `self / content` with positive leading coefficient.
    pub fn primitive(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }
}

fn normalize_gcd(g: MultiPoly) -> MultiPoly {
    if g.is_zero() {
        g
    } else {
        g.primitive()
    }
}

fn max_var(p: &MultiPoly) -> Option<usize> {
    p.terms.keys().filter_map(|m| m.vars().last()).max()
}

/// Gcd of the coefficients of `p` viewed in `v`.
fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.primitive() } else { gcd_rec(&g, &c) };
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    // Pull out the common monomial factor first; it keeps the recursion small.
    let mg = a.monomial_content().gcd(&b.monomial_content());
    let a = a.div_monomial(&a.monomial_content());
    let b = b.div_monomial(&b.monomial_content());
    let mono = MultiPoly::term(Rational::one(), mg);
    if a.is_constant() || b.is_constant() {
        return mono;
    }
    let va = max_var(&a);
    let vb = max_var(&b);
    let v = va.max(vb).expect("non-constant");
    let core = if !a.contains_var(v) {
        gcd_rec(&a, &content_in(&b, v))
    } else if !b.contains_var(v) {
        gcd_rec(&content_in(&a, v), &b)
    } else {
        let ca = content_in(&a, v);
        let cb = content_in(&b, v);
        let c = gcd_rec(&ca, &cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let g = prs_gcd(pa, pb, v);
        &c * &g
    };
    &mono * &core
}

/// Primitive polynomial remainder sequence gcd in variable `v` for
/// polynomials primitive with respect to `v`.
fn prs_gcd(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            return a.primitive();
        }
        if b.degree_in(v) == 0 {
            return MultiPoly::one();
        }
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return b.primitive();
        }
        let cr = content_in(&r, v);
        let r = r.div_exact(&cr).expect("content divides");
        a = b;
        b = r;
    }
}

fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let rc = r.coeffs_in(v);
        let lr = rc[dr as usize].clone();
        let shift = Monomial::var_pow(v, dr - db);
        r = &r * &lb - (&lr * b).mul_monomial(&shift);
    }
    r
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, o: MultiPoly) -> MultiPoly {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, o: MultiPoly) -> MultiPoly {
        for (m, c) in o.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut r = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: MultiPoly) -> MultiPoly {
        &self * &o
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    fn x(v: usize) -> MultiPoly {
        MultiPoly::var(v)
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::from_exponents(vec![1, 1]);
        let b = Monomial::from_exponents(vec![0, 3]);
        let c = Monomial::from_exponents(vec![2]);
        assert!(b > a);
        assert!(c > Monomial::from_exponents(vec![1, 1]));
    }

    #[test]
    fn exact_division_detects_non_divisors() {
        let p = &(&x(0) + &x(1)) * &(&x(0) - &MultiPoly::one());
        let d = &x(0) - &MultiPoly::one();
        assert_eq!(p.div_exact(&d).unwrap(), &x(0) + &x(1));
        assert!(p.div_exact(&(&x(1) + &MultiPoly::one())).is_none());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = &(&x(0) * &x(1)) + &MultiPoly::constant(int(3));
        let a = &f * &(&x(2) + &x(0));
        let b = &(&f * &f) * &(&x(1) - &x(2));
        assert_eq!(a.gcd(&b), f.primitive());
        let m = &x(0) * &x(0);
        assert_eq!((&m * &x(1)).gcd(&(&m * &x(2))), m);
    }

    #[test]
    fn substitution_composes() {
        let p = &(&x(0) * &x(0)) + &x(1);
        let mut s = BTreeMap::new();
        s.insert(0, &x(1) + &MultiPoly::one());
        let q = p.substitute(&s);
        let expect = &(&(&x(1) * &x(1)) + &x(1).scale(&int(3))) + &MultiPoly::one();
        assert_eq!(q, expect);
    }
}
