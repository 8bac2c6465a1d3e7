use std::fmt;

use super::field::{DecideSign, Field, Sign};
use super::scalar::{ExactScalar, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ExactMatrix = Matrix<ExactScalar>;

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Field>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    /// Rows `ri` and columns `ci`, in the given order.
    pub fn submatrix(&self, ri: &[usize], ci: &[usize]) -> Self {
        Self::from_fn(ri.len(), ci.len(), |i, j| self.get(ri[i], ci[j]).clone())
    }

    pub fn principal(&self, idx: &[usize]) -> Self {
        self.submatrix(idx, idx)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * o.get(k, j).clone())
        })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare(self.rows, self.cols))
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(T::zero());
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det = det * piv.clone();
            for r in c + 1..n {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone() / piv.clone();
                for j in c..n {
                    let v = a.get(r, j).clone() - f.clone() * a.get(c, j).clone();
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(None);
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.get(c, c).clone();
            for j in 0..n {
                a.set(c, j, a.get(c, j).clone() / piv.clone());
                inv.set(c, j, inv.get(c, j).clone() / piv.clone());
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j).clone() - f.clone() * a.get(c, j).clone());
                    inv.set(r, j, inv.get(r, j).clone() - f.clone() * inv.get(c, j).clone());
                }
            }
        }
        Ok(Some(inv))
    }

    /// `det(lambda I - M)` by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Result<UniPoly<T>> {
        self.require_square()?;
        let n = self.rows;
        // c[n] = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&mk);
            for i in 0..n {
                let v = next.get(i, i).clone() + coeffs[n - k + 1].clone();
                next.set(i, i, v);
            }
            mk = next;
            let am = self.mul(&mk);
            coeffs[n - k] = -(am.trace() / T::from_i64(k as i64));
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Determinants of principal submatrices on every nonempty index subset
    /// (at most `2^n - 1` of them), keyed by the subset bitmask.
    pub fn principal_minors(&self) -> Result<Vec<(u64, T)>> {
        self.require_square()?;
        let n = self.rows;
        assert!(n < 64, "principal minor enumeration limited to n < 64");
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            out.push((mask, self.principal(&idx).det()?));
        }
        Ok(out)
    }

    pub fn leading_principal_minors(&self) -> Result<Vec<T>> {
        self.require_square()?;
        (1..=self.rows).map(|k| self.principal(&(0..k).collect::<Vec<_>>()).det()).collect()
    }
}

impl<T: Field + DecideSign> Matrix<T> {
    /// Off-diagonal entries all decidably non-negative.
    pub fn is_metzler(&self) -> Option<bool> {
        let mut undecided = false;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i == j {
                    continue;
                }
                match self.get(i, j).decide_sign() {
                    Some(Sign::Negative) => return Some(false),
                    None => undecided = true,
                    _ => {}
                }
            }
        }
        (!undecided).then_some(true)
    }

    /// Entrywise non-negative.
    pub fn is_nonnegative(&self) -> Option<bool> {
        let mut undecided = false;
        for x in &self.data {
            match x.decide_sign() {
                Some(Sign::Negative) => return Some(false),
                None => undecided = true,
                _ => {}
            }
        }
        (!undecided).then_some(true)
    }
}

impl ExactMatrix {
    /// The shared radicand of all entries.
    pub fn radicand(&self) -> Result<num_bigint::BigInt> {
        ExactScalar::common_radicand(self.data.iter())
    }

    /// Characteristic polynomial after checking that entries share one extension.
    pub fn char_poly_exact(&self) -> Result<UniPoly<ExactScalar>> {
        self.radicand()?;
        self.char_poly()
    }

    pub fn from_rational(m: &Matrix<Rational>) -> Self {
        m.map(|q| ExactScalar::rational(q.clone()))
    }

    pub fn to_rational(&self) -> Option<Matrix<Rational>> {
        if self.data.iter().all(|x| x.is_rational()) {
            Some(self.map(|x| x.a().clone()))
        } else {
            None
        }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_f64()).collect()).collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
