use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{DenseAcc, ExpVec, LaurentPoly, SkewForm, VPoly};

/// A finite `Z[v^{±1}]`-combination of torus monomials `X^e`.
///
/// Canonical form: no zero coefficients stored; the map is ordered
/// lexicographically by exponent. The zero element is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElement {
    m: usize,
    terms: BTreeMap<ExpVec, VPoly>,
}

impl TorusElement {
    pub fn zero(m: usize) -> Self {
        TorusElement { m, terms: BTreeMap::new() }
    }

    /// The unit `X^0`.
    pub fn one(m: usize) -> Self {
        Self::monomial(ExpVec::zero(m), VPoly::one())
    }

    /// `c * X^e`.
    pub fn monomial(e: ExpVec, c: VPoly) -> Self {
        let m = e.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TorusElement { m, terms }
    }

    /// `X^e` with coefficient 1.
    pub fn x(e: impl Into<ExpVec>) -> Self {
        Self::monomial(e.into(), VPoly::one())
    }

    /// A scalar `c * X^0`.
    pub fn scalar(m: usize, c: VPoly) -> Self {
        Self::monomial(ExpVec::zero(m), c)
    }

    /// Builds from `(exponent, coefficient)` pairs; duplicates are summed.
    ///
    /// Panics if an exponent has length other than `m`.
    pub fn from_terms(m: usize, pairs: impl IntoIterator<Item = (ExpVec, VPoly)>) -> Self {
        let mut out = TorusElement::zero(m);
        for (e, c) in pairs {
            assert_eq!(e.len(), m, "exponent length mismatch");
            out.add_term(e, &c);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials in the support.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExpVec, &VPoly)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExpVec> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &ExpVec) -> VPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn first_term(&self) -> Option<(&ExpVec, &VPoly)> {
        self.terms.iter().next()
    }

    pub fn last_term(&self) -> Option<(&ExpVec, &VPoly)> {
        self.terms.iter().next_back()
    }

    /// Total number of nonzero integer coefficients.
    pub fn weight(&self) -> usize {
        self.terms.values().map(VPoly::len).sum()
    }

    /// `self += c * X^e`.
    pub fn add_term(&mut self, e: ExpVec, c: &VPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn remove_term(&mut self, e: &ExpVec) -> Option<VPoly> {
        self.terms.remove(e)
    }

    /// Multiplies every coefficient by `c` (a central scalar).
    pub fn scale(&self, c: &VPoly) -> Self {
        if c.is_zero() {
            return Self::zero(self.m);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        TorusElement { m: self.m, terms }
    }

    /// Multiplies by `v^k`.
    pub fn shift_v(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x.shift(k))).collect();
        TorusElement { m: self.m, terms }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&VPoly::constant(c))
    }

    pub fn bar(&self) -> Self {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x.bar())).collect();
        TorusElement { m: self.m, terms }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.values().all(VPoly::is_bar_invariant)
    }

    /// Every integer coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(VPoly::all_nonnegative)
    }

    pub fn specialize_q1(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.m, self.terms.iter().map(|(e, c)| (e.clone(), c.at_one())))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), -x)).collect();
        TorusElement { m: self.m, terms }
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.m, other.m, "torus dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            if negate {
                out.add_term(e.clone(), &-c);
            } else {
                out.add_term(e.clone(), c);
            }
        }
        out
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "X^{e}")?;
            } else {
                write!(f, "({c})X^{e}")?;
            }
        }
        Ok(())
    }
}

pub(super) fn mul(lambda: &SkewForm, x: &TorusElement, y: &TorusElement) -> TorusElement {
    let m = x.m;
    if x.is_zero() || y.is_zero() {
        return TorusElement::zero(m);
    }
    let ys: Vec<_> = y.terms.iter().map(|(f, b)| (f, lambda.apply(f), b)).collect();
    let mut acc: HashMap<ExpVec, DenseAcc> = HashMap::with_capacity(x.len() * y.len() / 2 + 1);
    let mut key = ExpVec::zero(m);
    for (e, a) in &x.terms {
        let ec = e.coords();
        for (f, lf, b) in &ys {
            let twist: i64 = ec.iter().zip(lf.iter()).map(|(p, q)| p * q).sum();
            e.add_into(f, &mut key);
            match acc.get_mut(&key) {
                Some(slot) => slot.add_product(a, b, twist),
                None => {
                    let mut slot = DenseAcc::default();
                    slot.add_product(a, b, twist);
                    acc.insert(key.clone(), slot);
                }
            }
        }
    }
    let terms = acc
        .into_iter()
        .map(|(e, d)| (e, d.into_vpoly()))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    TorusElement { m, terms }
}
