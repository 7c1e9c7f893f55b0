use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::int::Int;
use crate::qtorus::json::int_to_json;
use crate::qtorus::VPoly;

/// A polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrassPoly {
    coeffs: Vec<Int>,
}

impl GrassPoly {
    pub fn from_coeffs(coeffs: Vec<impl Into<Int>>) -> Self {
        let mut coeffs: Vec<Int> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().is_some_and(Int::is_zero) {
            coeffs.pop();
        }
        GrassPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: u64) -> Int {
        let q = Int::from(q);
        self.coeffs.iter().rev().fold(Int::ZERO, |acc, c| &(&acc * &q) + c)
    }

    /// The same polynomial with `q = v^2`.
    pub fn in_v(&self) -> VPoly {
        VPoly::from_terms(self.coeffs.iter().enumerate().map(|(i, c)| (2 * i as i64, c.clone())))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(int_to_json).collect())
    }

    /// The unique polynomial of degree `< points.len()` through the points,
    /// or `None` if its coefficients are not all integers.
    pub fn interpolate(points: &[(u64, u64)]) -> Option<GrassPoly> {
        let n = points.len();
        let mut total = vec![BigRational::zero(); n];
        for (i, &(xi, yi)) in points.iter().enumerate() {
            // basis polynomial Π_{j≠i} (q − x_j) / (x_i − x_j)
            let mut basis = vec![BigRational::one()];
            let mut denom = BigInt::one();
            for (j, &(xj, _)) in points.iter().enumerate() {
                if j == i {
                    continue;
                }
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                let root = BigRational::from_integer(BigInt::from(xj));
                for (k, c) in basis.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * &root;
                }
                basis = next;
                denom *= BigInt::from(xi) - BigInt::from(xj);
            }
            let scale = BigRational::new(BigInt::from(yi), denom);
            for (k, c) in basis.iter().enumerate() {
                total[k] += c * &scale;
            }
        }
        let mut coeffs = Vec::with_capacity(n);
        for c in total {
            if !c.is_integer() {
                return None;
            }
            coeffs.push(Int::from(c.numer().clone()));
        }
        Some(GrassPoly::from_coeffs(coeffs))
    }
}

impl fmt::Display for GrassPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_known_polynomials() {
        let pts: Vec<(u64, u64)> = [2u64, 3, 5, 7].iter().map(|&p| (p, p * p + p + 1)).collect();
        assert_eq!(GrassPoly::interpolate(&pts).unwrap(), GrassPoly::from_coeffs(vec![1, 1, 1]));
        let pts = [(2, 1), (3, 1), (5, 1)];
        assert_eq!(GrassPoly::interpolate(&pts).unwrap(), GrassPoly::from_coeffs(vec![1]));
    }

    #[test]
    fn rejects_non_integer_fit() {
        // through (2,0) and (3,1) the line is q - 2; through (2,0),(4,1) it is (q-2)/2
        assert!(GrassPoly::interpolate(&[(2, 0), (3, 1)]).is_some());
        assert!(GrassPoly::interpolate(&[(2, 0), (4, 1)]).is_none());
    }

    #[test]
    fn substitution_and_eval() {
        let g = GrassPoly::from_coeffs(vec![1, 0, 2]);
        assert_eq!(g.eval(3), Int::from(19));
        assert_eq!(g.in_v(), VPoly::from_terms([(0, 1), (4, 2)]));
        assert_eq!(g.to_string(), "2q^2 + 1");
    }
}
