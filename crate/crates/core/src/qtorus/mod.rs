//! Exact arithmetic in a based quantum torus.
//!
//! Coefficients live in `Z[v, v^{-1}]` with `v^2 = q`, so the half-integer
//! powers of `q` that appear in the twisted product are ordinary integer
//! powers of `v`. Monomials multiply by
//!
//! ```text
//! X^e * X^f = v^{Λ(e,f)} X^{e+f}
//! ```
//!
//! for a skew-symmetric integer form `Λ`.

mod element;
pub(crate) mod json;
mod laurent;
mod vpoly;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;
use thiserror::Error;

pub use element::TorusElement;
pub use json::JsonError;
pub use laurent::LaurentPoly;
pub use vpoly::VPoly;

pub(crate) use vpoly::DenseAcc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not skew-symmetric at ({i}, {j})")]
    NotSkew { i: usize, j: usize },
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
}

/// An exponent vector in `Z^m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpVec(SmallVec<[i64; 4]>);

impl ExpVec {
    pub fn new(coords: impl IntoIterator<Item = i64>) -> Self {
        ExpVec(coords.into_iter().collect())
    }

    pub fn zero(m: usize) -> Self {
        ExpVec(SmallVec::from_elem(0, m))
    }

    /// The standard basis vector `e_i` (0-based).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = Self::zero(m);
        v.0[i] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        ExpVec(self.0.iter().map(|c| c * k).collect())
    }

    pub(crate) fn add_into(&self, other: &ExpVec, out: &mut ExpVec) {
        out.0.clear();
        out.0.extend(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b));
    }
}

impl From<&[i64]> for ExpVec {
    fn from(v: &[i64]) -> Self {
        ExpVec(SmallVec::from_slice(v))
    }
}

impl<const N: usize> From<[i64; N]> for ExpVec {
    fn from(v: [i64; N]) -> Self {
        ExpVec(SmallVec::from_slice(&v))
    }
}

impl std::ops::Index<usize> for ExpVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &ExpVec {
    type Output = ExpVec;
    fn add(self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.len(), rhs.len());
        ExpVec(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExpVec {
    type Output = ExpVec;
    fn sub(self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.len(), rhs.len());
        ExpVec(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExpVec {
    type Output = ExpVec;
    fn neg(self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A skew-symmetric bilinear form on `Z^m`, stored as its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewForm {
    m: usize,
    entries: Vec<i64>,
}

impl SkewForm {
    pub fn new(rows: &[Vec<i64>]) -> Result<Self, TorusError> {
        let m = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(TorusError::NotSquare { rows: m, row: r, len: row.len() });
            }
        }
        for i in 0..m {
            for j in i..m {
                if rows[i][j] != -rows[j][i] {
                    return Err(TorusError::NotSkew { i, j });
                }
            }
        }
        Ok(SkewForm { m, entries: rows.iter().flatten().copied().collect() })
    }

    pub fn zero(m: usize) -> Self {
        SkewForm { m, entries: vec![0; m * m] }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.m + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.m.max(1)).take(self.m).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// `e^T Λ f`.
    pub fn eval(&self, e: &ExpVec, f: &ExpVec) -> Result<i64, TorusError> {
        for v in [e, f] {
            if v.len() != self.m {
                return Err(TorusError::DimensionMismatch { expected: self.m, got: v.len() });
            }
        }
        Ok(self.pairing(e, f))
    }

    pub(crate) fn pairing(&self, e: &ExpVec, f: &ExpVec) -> i64 {
        let mut s = 0;
        for i in 0..self.m {
            let ei = e.0[i];
            if ei == 0 {
                continue;
            }
            let row = &self.entries[i * self.m..(i + 1) * self.m];
            let mut r = 0;
            for j in 0..self.m {
                r += row[j] * f.0[j];
            }
            s += ei * r;
        }
        s
    }

    /// `Λ f` as a plain vector, so that `Λ(e, f) = e · (Λ f)`.
    pub(crate) fn apply(&self, f: &ExpVec) -> SmallVec<[i64; 4]> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.entries[i * self.m + j] * f.0[j]).sum())
            .collect()
    }

    /// The twisted product; see [`torus_mul`] for the checked form.
    ///
    /// Panics if the element dimensions do not match the form.
    pub fn product(&self, x: &TorusElement, y: &TorusElement) -> TorusElement {
        torus_mul(self, x, y).expect("torus dimension mismatch")
    }
}

/// `Λ(e, f)`, checked.
pub fn skew_eval(lambda: &SkewForm, e: &ExpVec, f: &ExpVec) -> Result<i64, TorusError> {
    lambda.eval(e, f)
}

/// The twisted product `x · y` in the quantum torus of `lambda`.
pub fn torus_mul(
    lambda: &SkewForm,
    x: &TorusElement,
    y: &TorusElement,
) -> Result<TorusElement, TorusError> {
    for el in [x, y] {
        if el.dim() != lambda.dim() {
            return Err(TorusError::DimensionMismatch { expected: lambda.dim(), got: el.dim() });
        }
    }
    Ok(element::mul(lambda, x, y))
}

/// The bar involution: `v -> v^{-1}` on every coefficient.
pub fn bar(x: &TorusElement) -> TorusElement {
    x.bar()
}

/// Sends `v -> 1`, giving a commutative Laurent polynomial.
pub fn specialize_q1(x: &TorusElement) -> LaurentPoly {
    x.specialize_q1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_form_rejects_asymmetric() {
        let err = SkewForm::new(&[vec![0, 1], vec![1, 0]]).unwrap_err();
        assert_eq!(err, TorusError::NotSkew { i: 0, j: 1 });
        assert!(SkewForm::new(&[vec![1]]).is_err());
        assert!(matches!(
            SkewForm::new(&[vec![0, 1], vec![-1]]),
            Err(TorusError::NotSquare { .. })
        ));
    }

    #[test]
    fn eval_is_antisymmetric() {
        let l = SkewForm::new(&[vec![0, 3, -1], vec![-3, 0, 2], vec![1, -2, 0]]).unwrap();
        let e = ExpVec::from([1, -2, 5]);
        let f = ExpVec::from([0, 4, -1]);
        assert_eq!(l.eval(&e, &f).unwrap(), -l.eval(&f, &e).unwrap());
        assert_eq!(l.eval(&e, &e).unwrap(), 0);
        assert!(l.eval(&e, &ExpVec::from([1, 2])).is_err());
    }
}
