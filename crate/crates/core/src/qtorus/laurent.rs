use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::ExpVec;
use crate::int::Int;

/// A commutative Laurent polynomial over `Z` in `m` variables; the image
/// of a torus element under `v -> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    m: usize,
    terms: BTreeMap<ExpVec, Int>,
}

impl LaurentPoly {
    pub fn zero(m: usize) -> Self {
        LaurentPoly { m, terms: BTreeMap::new() }
    }

    pub fn one(m: usize) -> Self {
        Self::monomial(ExpVec::zero(m), Int::ONE)
    }

    pub fn monomial(e: ExpVec, c: Int) -> Self {
        let m = e.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { m, terms }
    }

    pub fn from_terms(m: usize, pairs: impl IntoIterator<Item = (ExpVec, Int)>) -> Self {
        let mut out = LaurentPoly::zero(m);
        for (e, c) in pairs {
            out.add_term(e, &c);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &ExpVec) -> Int {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExpVec, &Int)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: ExpVec, c: &Int) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }

    pub fn scale(&self, c: &Int) -> Self {
        LaurentPoly::from_terms(self.m, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "dimension mismatch");
        let mut acc: HashMap<ExpVec, Int> = HashMap::new();
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                acc.entry(e + f).or_default().add_mul(a, b);
            }
        }
        LaurentPoly {
            m: self.m,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*X^{e}")?;
        }
        Ok(())
    }
}
