use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{DecideSign, Field, Sign};
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return None;
        }
        return Some(p / q);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = num_traits::pow(BigInt::from(10u32), fp.len());
    let q = Rational::new(n, den);
    Some(if neg { -q } else { q })
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled quotient for very large numerators/denominators.
        let shift = q.numer().bits().max(q.denom().bits()) as i64 - 60;
        let scale = BigInt::one() << shift.max(0) as usize;
        let n = (q.numer() / &scale).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() / &scale).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

const TRIAL_LIMIT: u64 = 50_000;

/// Writes a positive integer as `s^2 * d` with `d` free of square factors
/// below the trial-division limit (and not itself a perfect square).
pub fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "split_square expects a positive integer");
    if let Some(r) = exact_isqrt(n) {
        return (r, BigInt::one());
    }
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        let p2 = &pb * &pb;
        if p2 > rest {
            break;
        }
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            s *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = exact_isqrt(&rest) {
        return (s * r, BigInt::one());
    }
    (s, rest)
}

/// A number `a + b*sqrt(d)` with rational `a`, `b` and square-free `d`.
///
/// `d == 0` (and then `b == 0`) encodes a plain rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl ExactScalar {
    pub fn rational(a: Rational) -> Self {
        ExactScalar { a, b: Rational::zero(), d: BigInt::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// Builds `a + b*sqrt(d)`. `d` must be a non-negative integer; square
    /// factors are moved into `b`.
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        assert!(!d.is_negative(), "radicand must be non-negative");
        if b.is_zero() || d.is_zero() {
            return Self::rational(a);
        }
        let (s, core) = split_square(&d);
        let b = b * Rational::from_integer(s);
        if core.is_one() {
            return Self::rational(a + b);
        }
        ExactScalar { a, b, d: core }
    }

    /// `sqrt(q)` for a non-negative rational, `None` for negative input.
    pub fn sqrt_rational(q: &Rational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Self::zero());
        }
        // sqrt(p/r) = sqrt(p*r)/r
        let n = q.numer() * q.denom();
        Some(Self::new(Rational::zero(), Rational::new(BigInt::one(), q.denom().clone()), n))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Radicand; zero for plain rationals.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn sign(&self) -> Sign {
        let sa = Sign::of_rational(&self.a);
        let sb = Sign::of_rational(&self.b);
        if sb == Sign::Zero {
            return sa;
        }
        if sa == Sign::Zero || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Sign::Zero,
        }
    }

    /// Conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        ExactScalar { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = rational_to_f64(&self.a);
        if !self.b.is_zero() {
            v += rational_to_f64(&self.b) * rational_to_f64(&Rational::from_integer(self.d.clone())).sqrt();
        }
        v
    }

    fn common_d(&self, other: &Self) -> Result<BigInt> {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::MixedExtensions(self.d.to_string(), other.d.to_string())),
        }
    }

    fn build(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            ExactScalar { a, b, d }
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let d = self.common_d(o)?;
        Ok(Self::build(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        let d = self.common_d(o)?;
        Ok(Self::build(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let d = self.common_d(o)?;
        let dq = Rational::from_integer(d.clone());
        let a = &self.a * &o.a + &self.b * &o.b * dq;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::build(a, b, d))
    }

    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DenominatorZero);
        }
        if self.is_rational() {
            return Ok(Self::rational(self.a.recip()));
        }
        let norm = &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone());
        Ok(Self::build(&self.a / &norm, -&self.b / &norm, self.d.clone()))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.try_mul(&o.try_inv()?)
    }

    /// The common radicand of a collection, or an error if two differ.
    pub fn common_radicand<'a, I: IntoIterator<Item = &'a ExactScalar>>(it: I) -> Result<BigInt> {
        let mut d = BigInt::zero();
        for x in it {
            if x.d.is_zero() {
                continue;
            }
            if d.is_zero() {
                d = x.d.clone();
            } else if d != x.d {
                return Err(Error::MixedExtensions(d.to_string(), x.d.to_string()));
            }
        }
        Ok(d)
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            /// Panics when the operands live in different quadratic extensions;
            /// use the `try_` methods to handle that case.
            fn $m(self, o: ExactScalar) -> ExactScalar {
                self.$try(&o).expect("exact scalar arithmetic")
            }
        }
        impl<'a> $tr<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: &'a ExactScalar) -> ExactScalar {
                self.$try(o).expect("exact scalar arithmetic")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Field for ExactScalar {
    fn from_rational(q: &Rational) -> Self {
        Self::rational(q.clone())
    }
}

impl DecideSign for ExactScalar {
    fn decide_sign(&self) -> Option<Sign> {
        Some(self.sign())
    }
}

/// Sign of `a + b*sqrt(d)` decided by comparing squares.
pub fn quadext_sign(x: &ExactScalar) -> i8 {
    x.sign().as_i8()
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_rational(&self.a));
        }
        let (op, babs) = if self.b.is_negative() { ("-", -self.b.clone()) } else { ("+", self.b.clone()) };
        let coef = if babs.is_one() { String::new() } else { format!("{}*", fmt_rational(&babs)) };
        if self.a.is_zero() {
            let sign = if op == "-" { "-" } else { "" };
            write!(f, "{sign}{coef}sqrt({})", self.d)
        } else {
            write!(f, "{} {op} {coef}sqrt({})", fmt_rational(&self.a), self.d)
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The smallest-denominator rational in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if &fl + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // Both in (fl, fl+1): recurse on reciprocals of the fractional parts.
    let r = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + r.recip()
}

/// Rational gcd: the largest positive rational `g` with every input an
/// integer multiple of `g`.
pub fn rational_gcd<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for q in it {
        if q.is_zero() {
            continue;
        }
        num = num.gcd(q.numer());
        den = den.lcm(q.denom());
    }
    if num.is_zero() {
        Rational::one()
    } else {
        Rational::new(num, den)
    }
}
