use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::int::Int;

/// Integer Laurent polynomial in `v`, where `v^2 = q`.
///
/// Stored sparsely as `(exponent, coefficient)` pairs sorted by exponent,
/// with no zero coefficients. The empty vector is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VPoly {
    terms: Vec<(i64, Int)>,
}

impl VPoly {
    pub fn zero() -> Self {
        VPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Int::ONE)
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::monomial(0, c)
    }

    /// `c * v^k`.
    pub fn monomial(k: i64, c: impl Into<Int>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            VPoly { terms: vec![(k, c)] }
        }
    }

    /// `v^k`.
    pub fn vpow(k: i64) -> Self {
        Self::monomial(k, Int::ONE)
    }

    /// Builds from arbitrary pairs, summing duplicates and dropping zeros.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<Int>,
    {
        let mut v: Vec<(i64, Int)> = pairs.into_iter().map(|(k, c)| (k, c.into())).collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i64, Int)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => *lc += &c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        VPoly { terms: out }
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(i64, Int)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        VPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> &[(i64, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coeff(&self, k: i64) -> Int {
        match self.terms.binary_search_by_key(&k, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        VPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The bar involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        VPoly {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Value at `v = 1`.
    pub fn at_one(&self) -> Int {
        let mut s = Int::ZERO;
        for (_, c) in &self.terms {
            s += c;
        }
        s
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// `Some((c, k))` when the polynomial is `c * v^k` with `c = ±1`.
    pub fn as_unit(&self) -> Option<(i64, i64)> {
        match self.terms.as_slice() {
            [(k, c)] if c.is_one() => Some((1, *k)),
            [(k, c)] if *c == Int::from(-1) => Some((-1, *k)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Int) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        VPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Exact quotient in `Z[v, v^{-1}]`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &VPoly) -> Option<VPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dk, dc) = d.terms.last().cloned().unwrap();
        let dmin = d.terms[0].0;
        let mut rem = self.clone();
        let mut quot: Vec<(i64, Int)> = Vec::new();
        // Each step cancels the top term of the remainder; the bottom exponent
        // of any exact quotient is rem_min - dmin, so stop once we pass it.
        let floor = self.terms[0].0 - dmin;
        while let Some((rk, rc)) = rem.terms.last().cloned() {
            let qk = rk - dk;
            if qk < floor {
                return None;
            }
            let qc = rc.div_exact(&dc)?;
            let step = d.shift(qk).scale(&qc);
            rem = &rem - &step;
            quot.push((qk, qc));
        }
        quot.reverse();
        Some(VPoly::from_sorted_unchecked(quot))
    }
}

impl Add for &VPoly {
    type Output = VPoly;
    fn add(self, rhs: &VPoly) -> VPoly {
        merge(self, rhs, false)
    }
}

impl Sub for &VPoly {
    type Output = VPoly;
    fn sub(self, rhs: &VPoly) -> VPoly {
        merge(self, rhs, true)
    }
}

impl Neg for &VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        VPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &VPoly {
    type Output = VPoly;
    fn mul(self, rhs: &VPoly) -> VPoly {
        if self.is_zero() || rhs.is_zero() {
            return VPoly::zero();
        }
        let mut acc = DenseAcc::default();
        acc.add_product(self, rhs, 0);
        acc.into_vpoly()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for VPoly {
            type Output = VPoly;
            fn $m(self, rhs: VPoly) -> VPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

fn merge(a: &VPoly, b: &VPoly, negate_b: bool) -> VPoly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let take_a = j >= b.terms.len() || (i < a.terms.len() && a.terms[i].0 < b.terms[j].0);
        let take_b = i >= a.terms.len() || (j < b.terms.len() && b.terms[j].0 < a.terms[i].0);
        if take_a {
            out.push(a.terms[i].clone());
            i += 1;
        } else if take_b {
            let (e, c) = &b.terms[j];
            out.push((*e, if negate_b { -c } else { c.clone() }));
            j += 1;
        } else {
            let c = if negate_b {
                &a.terms[i].1 - &b.terms[j].1
            } else {
                &a.terms[i].1 + &b.terms[j].1
            };
            if !c.is_zero() {
                out.push((a.terms[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    VPoly { terms: out }
}

/// Dense scratch accumulator for sums of shifted products.
#[derive(Default, Debug)]
pub(crate) struct DenseAcc {
    offset: i64,
    coeffs: Vec<Int>,
}

impl DenseAcc {
    fn reserve_range(&mut self, lo: i64, hi: i64) {
        if self.coeffs.is_empty() {
            self.offset = lo;
            self.coeffs = vec![Int::ZERO; (hi - lo + 1) as usize];
            return;
        }
        if lo < self.offset {
            let extra = (self.offset - lo) as usize;
            let mut v = vec![Int::ZERO; extra];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.offset = lo;
        }
        let top = self.offset + self.coeffs.len() as i64 - 1;
        if hi > top {
            self.coeffs.resize(self.coeffs.len() + (hi - top) as usize, Int::ZERO);
        }
    }

    /// `self += a * b * v^shift`.
    pub(crate) fn add_product(&mut self, a: &VPoly, b: &VPoly, shift: i64) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let lo = a.terms[0].0 + b.terms[0].0 + shift;
        let hi = a.terms.last().unwrap().0 + b.terms.last().unwrap().0 + shift;
        self.reserve_range(lo, hi);
        let base = shift - self.offset;
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let idx = (ea + eb + base) as usize;
                self.coeffs[idx].add_mul(ca, cb);
            }
        }
    }

    pub(crate) fn into_vpoly(self) -> VPoly {
        let offset = self.offset;
        let terms = self
            .coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (offset + i as i64, c))
            .collect();
        VPoly { terms }
    }
}

impl fmt::Display for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*v^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_pair() {
        assert_eq!(&VPoly::vpow(1) * &VPoly::vpow(-1), VPoly::one());
    }

    #[test]
    fn difference_of_squares() {
        let a = VPoly::from_terms([(0, 1), (2, 1)]);
        let b = VPoly::from_terms([(0, 1), (2, -1)]);
        assert_eq!(&a * &b, VPoly::from_terms([(0, 1), (4, -1)]));
    }

    #[test]
    fn annihilation() {
        assert_eq!(&VPoly::monomial(1, 2) * &VPoly::zero(), VPoly::zero());
    }

    #[test]
    fn from_terms_normalizes() {
        let p = VPoly::from_terms([(3, 1), (1, 2), (3, -1), (0, 0)]);
        assert_eq!(p.terms(), &[(1, Int::from(2))]);
    }

    #[test]
    fn bar_reverses_exponents() {
        let p = VPoly::from_terms([(-5, 1), (3, 2)]);
        assert_eq!(p.bar(), VPoly::from_terms([(5, 1), (-3, 2)]));
        assert_eq!(p.bar().bar(), p);
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = VPoly::from_terms([(-1, 1), (1, 3), (2, -2)]);
        let b = VPoly::from_terms([(0, 2), (4, 1)]);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b), Some(a));
        assert_eq!(VPoly::from_terms([(0, 1), (1, 1)]).div_exact(&VPoly::constant(2)), None);
        assert_eq!(VPoly::one().div_exact(&VPoly::from_terms([(0, 1), (1, 1)])), None);
    }

    #[test]
    fn unit_detection() {
        assert_eq!(VPoly::vpow(-3).as_unit(), Some((1, -3)));
        assert_eq!(VPoly::monomial(2, -1).as_unit(), Some((-1, 2)));
        assert_eq!(VPoly::monomial(2, 2).as_unit(), None);
    }
}
