//! Pointed elements and decomposition over the two bases
//!
//! ```text
//! S = {cluster monomials} ⊔ {S_n : n ≥ 1}
//! B = {cluster monomials} ⊔ {F_n : n ≥ 1}
//! ```
//!
//! with coefficients in `Z[v^{±1}][y_1^{±1}, y_2^{±1}]`, stored as torus
//! elements supported on exponents `(0, 0, c, d)` and multiplied on the left.
//!
//! Every basis element `b` is pointed: among its exponents there is a unique
//! one whose principal part (first two coordinates) is componentwise
//! minimal, its coefficient is 1, and minus that principal part determines
//! `b` (see [`classify_point`]). Decomposition repeatedly strips the term of
//! lexicographically smallest exponent with the matching basis element.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::kronrec::{CaseResult, KronContext, Report};
use crate::qtorus::{ExpVec, TorusElement, VPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    S,
    B,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::S => "S",
            Basis::B => "B",
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = String;
    fn from_str(s: &str) -> Result<Basis, String> {
        match s {
            "S" | "s" => Ok(Basis::S),
            "B" | "b" => Ok(Basis::B),
            _ => Err(format!("unknown basis '{s}' (expected S or B)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisTag {
    Unit,
    /// `x_m^a x_{m+1}^b` (normalized), `a ≥ 1`.
    Cluster { m: i64, a: u32, b: u32 },
    ChebS(usize),
    ChebF(usize),
}

impl BasisTag {
    pub fn to_json(&self) -> Value {
        match *self {
            BasisTag::Unit => json!({"kind": "unit"}),
            BasisTag::Cluster { m, a, b } => json!({"kind": "cluster", "m": m, "a": a, "b": b}),
            BasisTag::ChebS(n) => json!({"kind": "chebS", "n": n}),
            BasisTag::ChebF(n) => json!({"kind": "chebF", "n": n}),
        }
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasisTag::Unit => write!(f, "1"),
            BasisTag::Cluster { m, a, b: 0 } => write!(f, "x_{m}^{a}"),
            BasisTag::Cluster { m, a, b } => write!(f, "x_{m}^{a} x_{}^{b}", m + 1),
            BasisTag::ChebS(n) => write!(f, "S_{n}"),
            BasisTag::ChebF(n) => write!(f, "F_{n}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("element is zero")]
    Zero,
    #[error("element is not pointed: minimal principal degrees {0:?}")]
    NotPointed(Vec<(i64, i64)>),
    #[error("basis element {tag} has leading coefficient {coeff}, not a unit")]
    NonUnitLeading { tag: BasisTag, coeff: String },
    #[error("basis element {tag} has minimal principal degree {found:?}, expected {expected:?}")]
    Misclassified { tag: BasisTag, expected: (i64, i64), found: (i64, i64) },
    #[error("no decomposition within {bound} steps; the element is likely outside the span")]
    IterationBound { bound: usize },
}

/// The first two coordinates of an exponent.
pub fn principal_degree(e: &ExpVec) -> (i64, i64) {
    (e[0], e[1])
}

/// The unique term whose principal degree is componentwise minimal.
///
/// Fails unless exactly one principal degree is minimal and exactly one
/// exponent carries it.
pub fn minimal_term(x: &TorusElement) -> Result<(ExpVec, VPoly), DecomposeError> {
    if x.is_zero() {
        return Err(DecomposeError::Zero);
    }
    let mut degrees: Vec<(i64, i64)> = x.support().map(principal_degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let minimal: Vec<(i64, i64)> = degrees
        .iter()
        .copied()
        .filter(|d| !degrees.iter().any(|o| o != d && o.0 <= d.0 && o.1 <= d.1))
        .collect();
    if minimal.len() != 1 {
        return Err(DecomposeError::NotPointed(minimal));
    }
    let mut at_min = x.iter().filter(|(e, _)| principal_degree(e) == minimal[0]);
    let (e, c) = at_min.next().expect("minimal degree comes from the support");
    if at_min.next().is_some() {
        return Err(DecomposeError::NotPointed(minimal));
    }
    Ok((e.clone(), c.clone()))
}

/// `-(principal degree of the minimal term of x_m)`: the dimension vector
/// of the module behind `x_m`, or minus a simple for `m = 1, 2`.
pub fn dvec(m: i64) -> (i64, i64) {
    match m {
        1 => (-1, 0),
        2 => (0, -1),
        m if m <= 0 => (-m, 1 - m),
        m => (m - 2, m - 3),
    }
}

/// The basis element whose minimal term has principal degree `-d`.
///
/// The cones `{a·dvec(m) + b·dvec(m+1) : a ≥ 1, b ≥ 0}` and the positive
/// diagonal tile `Z^2 \ {0}`.
pub fn classify_point(d: (i64, i64), basis: Basis) -> BasisTag {
    let (d1, d2) = d;
    let cluster = |m: i64, a: i64, b: i64| BasisTag::Cluster { m, a: a as u32, b: b as u32 };
    if d == (0, 0) {
        BasisTag::Unit
    } else if d1 == d2 && d1 > 0 {
        match basis {
            Basis::S => BasisTag::ChebS(d1 as usize),
            Basis::B => BasisTag::ChebF(d1 as usize),
        }
    } else if d1 <= 0 && d2 > 0 {
        cluster(0, d2, -d1)
    } else if d1 < 0 && d2 <= 0 {
        cluster(1, -d1, -d2)
    } else if d1 >= 0 && d2 < 0 {
        cluster(2, -d2, d1)
    } else if d1 > d2 {
        // d1 > d2 >= 0: between dvec(l+3) and dvec(l+4)
        let s = d1 - d2;
        let (l, b) = (d2.div_euclid(s), d2.rem_euclid(s));
        cluster(l + 3, s - b, b)
    } else {
        // d2 > d1 >= 1: between dvec(-(l+1)) and dvec(-l)
        let s = d2 - d1;
        let l = (d1 - 1).div_euclid(s);
        let a = d1 - s * l;
        cluster(-(l + 1), a, s - a)
    }
}

/// A basis element with its minimal exponent and leading coefficient.
pub type PointedElement = Arc<(TorusElement, ExpVec, VPoly)>;

/// Decomposes elements over one basis, caching basis elements.
pub struct Decomposer<'a> {
    ctx: &'a KronContext,
    basis: Basis,
    cache: RwLock<HashMap<BasisTag, PointedElement>>,
}

/// `x = Σ coeff · element(tag)` with each coefficient on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub basis: Basis,
    pub parts: BTreeMap<BasisTag, TorusElement>,
}

impl Decomposition {
    /// Every coefficient has only nonnegative integer coefficients.
    pub fn is_positive(&self) -> bool {
        self.parts.values().all(TorusElement::is_nonnegative)
    }

    pub fn coeff(&self, tag: &BasisTag) -> Option<&TorusElement> {
        self.parts.get(tag)
    }

    /// `{"basis":..,"parts":[{"coeff":..,"tag":..},..],"residual":n}`.
    pub fn to_json(&self, residual: usize) -> Value {
        let parts: Vec<Value> = self
            .parts
            .iter()
            .map(|(t, c)| json!({"tag": t.to_json(), "coeff": c.to_json()}))
            .collect();
        json!({"basis": self.basis.name(), "parts": parts, "residual": residual})
    }
}

impl<'a> Decomposer<'a> {
    pub fn new(ctx: &'a KronContext, basis: Basis) -> Self {
        Decomposer { ctx, basis, cache: RwLock::new(HashMap::new()) }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// The element denoted by `tag`, unchecked.
    pub fn raw_element(&self, tag: BasisTag) -> TorusElement {
        match tag {
            BasisTag::Unit => TorusElement::one(4),
            BasisTag::Cluster { m, a, b } => self.ctx.cluster_monomial(m, a, b),
            BasisTag::ChebS(n) => (*self.ctx.cheb_s(n)).clone(),
            BasisTag::ChebF(n) => (*self.ctx.cheb_f(n)).clone(),
        }
    }

    /// The element with its minimal term, checked for pointedness, a unit
    /// leading coefficient, and agreement with [`classify_point`].
    pub fn element(&self, tag: BasisTag) -> Result<PointedElement, DecomposeError> {
        if let Some(hit) = self.cache.read().unwrap().get(&tag) {
            return Ok(hit.clone());
        }
        let x = self.raw_element(tag);
        let (g, u) = minimal_term(&x)?;
        if u.as_unit().is_none() {
            return Err(DecomposeError::NonUnitLeading { tag, coeff: u.to_string() });
        }
        let found = principal_degree(&g);
        let expected = match tag {
            BasisTag::Unit => (0, 0),
            BasisTag::Cluster { m, a, b } => {
                let (p, q) = (dvec(m), dvec(m + 1));
                let (a, b) = (a as i64, b as i64);
                (-(a * p.0 + b * q.0), -(a * p.1 + b * q.1))
            }
            BasisTag::ChebS(n) | BasisTag::ChebF(n) => (-(n as i64), -(n as i64)),
        };
        if found != expected {
            return Err(DecomposeError::Misclassified { tag, expected, found });
        }
        let entry = Arc::new((x, g, u));
        self.cache.write().unwrap().insert(tag, entry.clone());
        Ok(entry)
    }

    /// Greedy stripping: take the lexicographically smallest exponent `e`
    /// of the remainder, find the basis element `b` pointed at its principal
    /// degree, and subtract `κ·b` with `κ` chosen to cancel `e`. Gives up
    /// after four times the input support size.
    pub fn decompose(&self, x: &TorusElement) -> Result<Decomposition, DecomposeError> {
        let bound = 4 * x.len().max(1);
        let torus = self.ctx.torus();
        let mut rem = x.clone();
        let mut parts: BTreeMap<BasisTag, TorusElement> = BTreeMap::new();
        let mut steps = 0;
        while let Some((e, c)) = rem.first_term() {
            if steps == bound {
                return Err(DecomposeError::IterationBound { bound });
            }
            steps += 1;
            let (d1, d2) = principal_degree(e);
            let tag = classify_point((-d1, -d2), self.basis);
            let entry = self.element(tag)?;
            let (b, g, u) = (&entry.0, &entry.1, &entry.2);
            // κ = c' X^f with X^f X^g = v^{Λ(f,g)} X^e and c' v^{Λ(f,g)} u = c
            let f = e - g;
            let (sign, k) = u.as_unit().expect("checked when cached");
            let twist = torus.pairing(&f, g);
            let mut coeff = c.shift(-twist - k);
            if sign < 0 {
                coeff = -&coeff;
            }
            let kappa = TorusElement::monomial(f, coeff);
            rem = rem.sub(&torus.product(&kappa, b));
            let slot = parts.entry(tag).or_insert_with(|| TorusElement::zero(4));
            *slot = slot.add(&kappa);
            if slot.is_zero() {
                parts.remove(&tag);
            }
        }
        Ok(Decomposition { basis: self.basis, parts })
    }

    /// `Σ coeff · element(tag)`.
    pub fn expand(&self, d: &Decomposition) -> Result<TorusElement, DecomposeError> {
        let mut acc = TorusElement::zero(4);
        for (tag, c) in &d.parts {
            let entry = self.element(*tag)?;
            acc = acc.add(&self.ctx.torus().product(c, &entry.0));
        }
        Ok(acc)
    }
}

/// Decomposes `x` over `basis`.
pub fn decompose(ctx: &KronContext, x: &TorusElement, basis: Basis) -> Result<Decomposition, DecomposeError> {
    Decomposer::new(ctx, basis).decompose(x)
}

/// Which basis elements an audit covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditRange {
    /// Cluster monomials `x_m^a x_{m+1}^b` with `|m| ≤ cluster_index`.
    pub cluster_index: i64,
    /// ... and `a ≥ 1`, `a + b ≤ cluster_degree`.
    pub cluster_degree: u32,
    /// Chebyshev elements `1 ≤ n ≤ cheb_index`.
    pub cheb_index: usize,
}

impl Default for AuditRange {
    fn default() -> Self {
        AuditRange { cluster_index: 4, cluster_degree: 3, cheb_index: 8 }
    }
}

impl AuditRange {
    pub fn tags(&self, basis: Basis) -> Vec<BasisTag> {
        let mut out = Vec::new();
        for m in -self.cluster_index..=self.cluster_index {
            for a in 1..=self.cluster_degree {
                for b in 0..=self.cluster_degree - a {
                    out.push(BasisTag::Cluster { m, a, b });
                }
            }
        }
        for n in 1..=self.cheb_index {
            out.push(match basis {
                Basis::S => BasisTag::ChebS(n),
                Basis::B => BasisTag::ChebF(n),
            });
        }
        out
    }
}

/// Per-element checks (bar-invariance, pointed with coefficient exactly 1,
/// classification recovers the tag) and, when `products` is set, every
/// ordered product of two audited elements: it must decompose, with all
/// structure constants nonnegative and zero re-expansion residual.
pub fn audit(ctx: &KronContext, basis: Basis, range: AuditRange, products: bool) -> Report {
    let dec = Decomposer::new(ctx, basis);
    let tags = range.tags(basis);
    let suite = format!("bases.{}", basis.name());
    let mut cases = Vec::new();
    let params = |tag: &BasisTag| -> Vec<(&'static str, i64)> {
        match *tag {
            BasisTag::Unit => vec![],
            BasisTag::Cluster { m, a, b } => vec![("m", m), ("a", a as i64), ("b", b as i64)],
            BasisTag::ChebS(n) | BasisTag::ChebF(n) => vec![("n", n as i64)],
        }
    };
    let kind = |tag: &BasisTag| match tag {
        BasisTag::Cluster { .. } => "cluster",
        _ => "cheb",
    };
    for tag in &tags {
        let x = dec.raw_element(*tag);
        let p = params(tag);
        let bar = x.bar().sub(&x);
        cases.push(CaseResult::new(format!("bases.bar.{}", kind(tag)), &p, bar.is_zero(), bar.len()));
        let pointed = minimal_term(&x);
        let unit = matches!(&pointed, Ok((_, c)) if c.is_one());
        cases.push(CaseResult::new(format!("bases.pointed.{}", kind(tag)), &p, unit, usize::from(!unit)));
        let back = pointed.map(|(g, _)| {
            let (d1, d2) = principal_degree(&g);
            classify_point((-d1, -d2), basis)
        });
        let ok = back == Ok(*tag);
        cases.push(CaseResult::new(format!("bases.classify.{}", kind(tag)), &p, ok, usize::from(!ok)));
    }
    if products {
        let pairs: Vec<(BasisTag, BasisTag)> =
            tags.iter().flat_map(|a| tags.iter().map(move |b| (*a, *b))).collect();
        let results: Vec<CaseResult> = pairs
            .par_iter()
            .map(|(a, b)| {
                let mut p = params(a).into_iter().map(|(k, v)| (left_key(k), v)).collect::<Vec<_>>();
                p.extend(params(b).into_iter().map(|(k, v)| (right_key(k), v)));
                let name = format!("bases.product.{}.{}", kind(a), kind(b));
                let prod = ctx.mul(&dec.raw_element(*a), &dec.raw_element(*b));
                match dec.decompose(&prod) {
                    Ok(d) => {
                        let residual = dec.expand(&d).map(|e| e.sub(&prod).len()).unwrap_or(usize::MAX);
                        let negative = d.parts.values().filter(|c| !c.is_nonnegative()).count();
                        CaseResult::new(name, &p, residual == 0 && negative == 0, residual + negative)
                    }
                    Err(_) => CaseResult::new(name, &p, false, prod.len()),
                }
            })
            .collect();
        cases.extend(results);
    }
    Report::new(suite, cases)
}

fn left_key(k: &'static str) -> &'static str {
    match k {
        "m" => "m1",
        "a" => "a1",
        "b" => "b1",
        _ => "n1",
    }
}

fn right_key(k: &'static str) -> &'static str {
    match k {
        "m" => "m2",
        "a" => "a2",
        "b" => "b2",
        _ => "n2",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{qh, s, t, x};

    fn cl(m: i64, a: u32, b: u32) -> BasisTag {
        BasisTag::Cluster { m, a, b }
    }

    #[test]
    fn principal_degree_projects() {
        assert_eq!(principal_degree(&ExpVec::from([1, -1, 1, 1])), (1, -1));
        assert_eq!(principal_degree(&ExpVec::from([0, 0, 1, 0])), (0, 0));
    }

    #[test]
    fn minimal_terms() {
        let ctx = KronContext::new();
        let (e, c) = minimal_term(&ctx.xdelta()).unwrap();
        assert_eq!((e, c), (ExpVec::from([-1, -1, 1, 0]), VPoly::one()));
        let (e, _) = minimal_term(&ctx.cluster_var(1)).unwrap();
        assert_eq!(e, ExpVec::from([1, 0, 0, 0]));
        let sum = ctx.cluster_var(1).add(&ctx.cluster_var(2));
        assert_eq!(minimal_term(&sum), Err(DecomposeError::NotPointed(vec![(0, 1), (1, 0)])));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_point((0, 0), Basis::S), BasisTag::Unit);
        assert_eq!(classify_point((0, 1), Basis::S), cl(0, 1, 0));
        assert_eq!(classify_point((3, 3), Basis::S), BasisTag::ChebS(3));
        assert_eq!(classify_point((3, 3), Basis::B), BasisTag::ChebF(3));
        assert_eq!(classify_point((2, 1), Basis::S), cl(4, 1, 0));
        assert_eq!(classify_point((1, 2), Basis::S), cl(-1, 1, 0));
        assert_eq!(classify_point((-1, 0), Basis::S), cl(1, 1, 0));
        assert_eq!(classify_point((0, -1), Basis::S), cl(2, 1, 0));
        assert_eq!(classify_point((1, 0), Basis::S), cl(3, 1, 0));
    }

    #[test]
    fn classification_inverts_dvec_combinations() {
        for m in -6..=6i64 {
            for a in 1..=4u32 {
                for b in 0..=4u32 {
                    let (p, q) = (dvec(m), dvec(m + 1));
                    let d = (a as i64 * p.0 + b as i64 * q.0, a as i64 * p.1 + b as i64 * q.1);
                    assert_eq!(classify_point(d, Basis::S), cl(m, a, b), "m={m} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn dvec_matches_cluster_variables() {
        let ctx = KronContext::new();
        for m in -5..=6 {
            let (g, c) = minimal_term(&ctx.cluster_var(m)).unwrap();
            let (d1, d2) = principal_degree(&g);
            assert_eq!((-d1, -d2), dvec(m), "m={m}");
            assert!(c.is_one());
        }
    }

    #[test]
    fn s1_squared() {
        let ctx = KronContext::new();
        let d = decompose(&ctx, &ctx.eval(&(s(1) * s(1))), Basis::S).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert_eq!(d.parts[&BasisTag::ChebS(2)], TorusElement::one(4));
        assert_eq!(d.parts[&BasisTag::Unit], ctx.t());
    }

    #[test]
    fn exchange_product_decomposes() {
        let ctx = KronContext::new();
        let d = decompose(&ctx, &ctx.eval(&(x(-1) * x(1))), Basis::S).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert_eq!(d.parts[&BasisTag::Unit], TorusElement::one(4));
        assert_eq!(d.parts[&cl(0, 2, 0)], ctx.eval(&(qh(1) * crate::expr::y1())));
    }

    #[test]
    fn non_adjacent_product() {
        let ctx = KronContext::new();
        let prod = ctx.eval(&(x(-2) * x(3)));
        let dec = Decomposer::new(&ctx, Basis::S);
        let d = dec.decompose(&prod).unwrap();
        let tags: Vec<_> = d.parts.keys().copied().collect();
        assert_eq!(tags, vec![cl(0, 1, 1), BasisTag::ChebS(1), BasisTag::ChebS(3)]);
        assert_eq!(d.parts[&BasisTag::ChebS(3)], TorusElement::one(4));
        assert_eq!(d.parts[&BasisTag::ChebS(1)], ctx.eval(&(qh(2) * t())));
        assert_eq!(dec.expand(&d).unwrap(), prod);
        assert!(d.is_positive());
    }

    #[test]
    fn s_in_b_basis() {
        let ctx = KronContext::new();
        for n in [4usize, 5] {
            let d = decompose(&ctx, &ctx.cheb_s(n), Basis::B).unwrap();
            let mut expect = BTreeMap::new();
            for k in 0..=n / 2 {
                let idx = n - 2 * k;
                let tag = if idx == 0 { BasisTag::Unit } else { BasisTag::ChebF(idx) };
                expect.insert(tag, TorusElement::x([0, 0, k as i64, k as i64]));
            }
            assert_eq!(d.parts, expect, "n={n}");
        }
    }

    #[test]
    fn out_of_span_hits_the_bound() {
        let ctx = KronContext::new();
        let inv = TorusElement::x([-1, 0, 0, 0]);
        assert!(matches!(decompose(&ctx, &inv, Basis::S), Err(DecomposeError::IterationBound { .. })));
    }

    #[test]
    fn small_audit_passes() {
        let ctx = KronContext::new();
        let range = AuditRange { cluster_index: 1, cluster_degree: 2, cheb_index: 2 };
        for basis in [Basis::S, Basis::B] {
            let r = audit(&ctx, basis, range, true);
            let bad: Vec<_> = r.failures().collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn decomposition_json() {
        let ctx = KronContext::new();
        let d = decompose(&ctx, &ctx.eval(&(s(1) * s(1))), Basis::S).unwrap();
        let v = d.to_json(0);
        assert_eq!(v["basis"], "S");
        assert_eq!(v["parts"][1]["tag"], json!({"kind": "chebS", "n": 2}));
        assert_eq!(v["residual"], 0);
    }
}
