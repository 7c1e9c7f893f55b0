//! Kronecker representations over `F_p`, subrepresentation counts, and the
//! quantum cluster character.
//!
//! A representation is a pair of `m2×m1` matrices `A, B` (the two arrows
//! `1 → 2`). A subrepresentation of dimension `(e1, e2)` is a pair of
//! subspaces `U1 ⊆ F_p^{m1}`, `U2 ⊆ F_p^{m2}` with `A U1 + B U1 ⊆ U2`. Counts
//! are taken by enumerating both subspaces in echelon form, then the count
//! as a function of `p` is recovered by interpolation and checked at one
//! further prime.
//!
//! For a module `M` of dimension `m` the character is
//!
//! ```text
//! X_M = Σ_e |Gr_e M|(q) · q^{-⟨e, m-e⟩/2} · X^{-B̃e - (Ĩ-R̃′)m}
//! ```
//!
//! with `⟨(a,b),(c,d)⟩ = ac + bd − 2ad`.

pub mod fp;
mod interp;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::int::Int;
use crate::kronrec::{CaseResult, KronContext, Report, BTILDE, I_MINUS_R};
use crate::qtorus::{ExpVec, TorusElement};
use fp::{first_primes, gaussian_binomial, is_prime, mat_vec, next_prime, subspaces};

pub use interp::GrassPoly;

/// Default cap on `(U1, U2)` pairs examined per count.
pub const DEFAULT_BUDGET: u128 = 10_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "KRONQ_BUDGET";

/// The budget from the environment, or the default.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension vector ({e1}, {e2}) outside the box [0, {m1}] × [0, {m2}]")]
    DimOutOfRange { e1: usize, e2: usize, m1: usize, m2: usize },
    #[error("need at least {needed} distinct primes, got {got}")]
    TooFewPrimes { needed: usize, got: usize },
    #[error("enumeration needs {needed} subspace pairs, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("counts for e = ({e1}, {e2}) do not interpolate to an integer polynomial")]
    NonInteger { e1: usize, e2: usize },
    #[error("held-out check failed for e = ({e1}, {e2}) at p = {prime}: polynomial gives {predicted}, count is {counted}")]
    HeldOut { e1: usize, e2: usize, prime: u64, predicted: Int, counted: Int },
}

/// The regular-family parameter `λ ∈ F_p ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lambda {
    Finite(u64),
    Infinity,
}

/// An indecomposable Kronecker module, named independently of the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `V(-l)`, dimension `(l, l+1)`.
    Preprojective(usize),
    /// `R(n, λ)`, dimension `(n, n)`, `n ≥ 1`.
    Regular(usize, Lambda),
    /// `V(l+3)`, dimension `(l+1, l)`.
    Preinjective(usize),
}

impl Family {
    /// The module whose character is the cluster variable `x_m`
    /// (`m ≤ 0` or `m ≥ 3`).
    pub fn cluster(m: i64) -> Result<Family, RepError> {
        match m {
            m if m <= 0 => Ok(Family::Preprojective((-m) as usize)),
            m if m >= 3 => Ok(Family::Preinjective((m - 3) as usize)),
            _ => Err(RepError::InvalidFamily(format!(
                "x_{m} is an initial variable (a shifted injective), not a module"
            ))),
        }
    }

    pub fn regular(n: usize) -> Family {
        Family::Regular(n, Lambda::Finite(0))
    }

    pub fn dims(&self) -> (usize, usize) {
        match *self {
            Family::Preprojective(l) => (l, l + 1),
            Family::Regular(n, _) => (n, n),
            Family::Preinjective(l) => (l + 1, l),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Preprojective(l) => write!(f, "v:{}", -(l as i64)),
            Family::Preinjective(l) => write!(f, "v:{}", l + 3),
            Family::Regular(n, Lambda::Finite(0)) => write!(f, "r:{n}"),
            Family::Regular(n, Lambda::Finite(x)) => write!(f, "r:{n}:{x}"),
            Family::Regular(n, Lambda::Infinity) => write!(f, "r:{n}:inf"),
        }
    }
}

/// `v:<int>` (`≤ 0` preprojective, `≥ 3` preinjective) or `r:<n>[:λ|inf]`.
impl FromStr for Family {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Family, RepError> {
        let bad = || RepError::InvalidFamily(s.to_string());
        if let Some(rest) = s.strip_prefix("v:") {
            return Family::cluster(rest.parse().map_err(|_| bad())?);
        }
        let rest = s.strip_prefix("r:").ok_or_else(bad)?;
        let mut parts = rest.splitn(2, ':');
        let n: usize = parts.next().unwrap_or("").parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(RepError::InvalidFamily("regular modules need n ≥ 1".into()));
        }
        let lambda = match parts.next() {
            None => Lambda::Finite(0),
            Some("inf") => Lambda::Infinity,
            Some(x) => Lambda::Finite(x.parse().map_err(|_| bad())?),
        };
        Ok(Family::Regular(n, lambda))
    }
}

/// A Kronecker representation over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KronRep {
    pub p: u64,
    pub m1: usize,
    pub m2: usize,
    /// `m2 × m1`
    pub a: Vec<Vec<u64>>,
    /// `m2 × m1`
    pub b: Vec<Vec<u64>>,
}

impl KronRep {
    pub fn new(p: u64, m1: usize, m2: usize, a: Vec<Vec<u64>>, b: Vec<Vec<u64>>) -> Result<Self, RepError> {
        if !is_prime(p) {
            return Err(RepError::NotPrime(p));
        }
        let ok = |mat: &Vec<Vec<u64>>| mat.len() == m2 && mat.iter().all(|r| r.len() == m1);
        if !ok(&a) || !ok(&b) {
            return Err(RepError::InvalidFamily(format!("matrices must be {m2}×{m1}")));
        }
        let reduce = |mat: Vec<Vec<u64>>| mat.into_iter().map(|r| r.into_iter().map(|x| x % p).collect()).collect();
        Ok(KronRep { p, m1, m2, a: reduce(a), b: reduce(b) })
    }
}

/// The explicit representative of `family` over `F_p`.
///
/// `V(-l)`: `A = [I_l; 0]`, `B = [0; I_l]`. `R(n, λ)`: `A = I`, `B = λI + J`
/// (`J` the nilpotent Jordan block), and `R(n, ∞)`: `A = J`, `B = I`.
/// `V(l+3)`: `A = [I_l | 0]`, `B = [0 | I_l]`.
pub fn make_rep(family: Family, p: u64) -> Result<KronRep, RepError> {
    if !is_prime(p) {
        return Err(RepError::NotPrime(p));
    }
    let (m1, m2) = family.dims();
    let zero = || vec![vec![0u64; m1]; m2];
    let (mut a, mut b) = (zero(), zero());
    match family {
        Family::Preprojective(l) => {
            for i in 0..l {
                a[i][i] = 1;
                b[i + 1][i] = 1;
            }
        }
        Family::Preinjective(l) => {
            for i in 0..l {
                a[i][i] = 1;
                b[i][i + 1] = 1;
            }
        }
        Family::Regular(n, lambda) => {
            if n == 0 {
                return Err(RepError::InvalidFamily("regular modules need n ≥ 1".into()));
            }
            let (diag, nil) = match lambda {
                Lambda::Finite(x) => {
                    for i in 0..n {
                        b[i][i] = x % p;
                    }
                    (&mut a, &mut b)
                }
                Lambda::Infinity => (&mut b, &mut a),
            };
            for i in 0..n {
                diag[i][i] = 1;
                if i + 1 < n {
                    nil[i][i + 1] = 1;
                }
            }
        }
    }
    KronRep::new(p, m1, m2, a, b)
}

/// `|Gr_e M|(F_p)` by enumerating all `(U1, U2)` pairs.
pub fn count_subreps(rep: &KronRep, e: (usize, usize), budget: u128) -> Result<u64, RepError> {
    let (e1, e2) = e;
    let (m1, m2, p) = (rep.m1, rep.m2, rep.p);
    if e1 > m1 || e2 > m2 {
        return Err(RepError::DimOutOfRange { e1, e2, m1, m2 });
    }
    let needed = gaussian_binomial(m1, e1, p).saturating_mul(gaussian_binomial(m2, e2, p));
    if needed > budget {
        return Err(RepError::BudgetExceeded { needed, budget });
    }
    let u1s = subspaces(m1, e1, p);
    let u2s = subspaces(m2, e2, p);
    let mut count = 0u64;
    for u1 in &u1s {
        let images: Vec<Vec<u64>> = u1
            .rows
            .iter()
            .flat_map(|r| [mat_vec(&rep.a, r, p), mat_vec(&rep.b, r, p)])
            .collect();
        for u2 in &u2s {
            if images.iter().all(|w| u2.contains(w, p)) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// How the primes for interpolation are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeChoice {
    /// The smallest `bound + 1` primes for each stratum.
    Auto,
    /// A fixed list, used for every stratum.
    Explicit(Vec<u64>),
}

impl PrimeChoice {
    fn resolve(&self, needed: usize) -> Result<Vec<u64>, RepError> {
        match self {
            PrimeChoice::Auto => Ok(first_primes(needed)),
            PrimeChoice::Explicit(ps) => {
                let mut ps = ps.clone();
                if let Some(&bad) = ps.iter().find(|&&p| !is_prime(p)) {
                    return Err(RepError::NotPrime(bad));
                }
                ps.sort_unstable();
                ps.dedup();
                if ps.len() < needed {
                    return Err(RepError::TooFewPrimes { needed, got: ps.len() });
                }
                Ok(ps)
            }
        }
    }
}

/// The counting polynomial of one stratum with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub e: (usize, usize),
    pub poly: GrassPoly,
    pub primes: Vec<u64>,
    pub held_out: u64,
}

impl Stratum {
    pub fn to_json(&self) -> Value {
        json!({
            "e": [self.e.0, self.e.1],
            "poly": self.poly.to_json(),
            "primes": self.primes,
            "held_out_prime": self.held_out,
        })
    }
}

/// The counting polynomial `|Gr_e M|(q)`, interpolated through `primes` and
/// confirmed at the next prime after them.
pub fn gr_poly(
    family: Family,
    e: (usize, usize),
    primes: &PrimeChoice,
    budget: u128,
) -> Result<Stratum, RepError> {
    let (m1, m2) = family.dims();
    let (e1, e2) = e;
    if e1 > m1 || e2 > m2 {
        return Err(RepError::DimOutOfRange { e1, e2, m1, m2 });
    }
    let bound = e1 * (m1 - e1) + e2 * (m2 - e2);
    let ps = primes.resolve(bound + 1)?;
    let mut points = Vec::with_capacity(ps.len());
    for &p in &ps {
        points.push((p, count_subreps(&make_rep(family, p)?, e, budget)?));
    }
    let poly = GrassPoly::interpolate(&points).ok_or(RepError::NonInteger { e1, e2 })?;
    let held_out = next_prime(*ps.last().expect("at least one prime"));
    let counted = Int::from(count_subreps(&make_rep(family, held_out)?, e, budget)?);
    let predicted = poly.eval(held_out);
    if predicted != counted {
        return Err(RepError::HeldOut { e1, e2, prime: held_out, predicted, counted });
    }
    Ok(Stratum { e, poly, primes: ps, held_out })
}

/// The Kronecker Euler form `⟨(a,b),(c,d)⟩ = ac + bd − 2ad`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EulerForm;

impl EulerForm {
    pub fn eval(&self, x: (i64, i64), y: (i64, i64)) -> i64 {
        x.0 * y.0 + x.1 * y.1 - 2 * x.0 * y.1
    }
}

/// The exponent `−B̃e − (Ĩ−R̃′)m`.
pub fn stratum_exponent(e: (usize, usize), m: (usize, usize)) -> ExpVec {
    let (e1, e2, m1, m2) = (e.0 as i64, e.1 as i64, m.0 as i64, m.1 as i64);
    ExpVec::new((0..4).map(|i| -(BTILDE[i][0] * e1 + BTILDE[i][1] * e2) - (I_MINUS_R[i][0] * m1 + I_MINUS_R[i][1] * m2)))
}

/// A character with the per-stratum evidence it was assembled from.
#[derive(Clone, Debug)]
pub struct Character {
    pub family: Family,
    pub element: TorusElement,
    pub strata: Vec<Stratum>,
}

impl Character {
    pub fn to_json(&self) -> Value {
        let primes: std::collections::BTreeSet<u64> =
            self.strata.iter().flat_map(|s| s.primes.iter().copied().chain([s.held_out])).collect();
        json!({
            "family": self.family.to_string(),
            "element": self.element.to_json(),
            "provenance": {
                "primes": primes,
                "strata": self.strata.iter().map(Stratum::to_json).collect::<Vec<_>>(),
            },
        })
    }
}

/// The quantum cluster character of a module (no shifted summand).
pub fn character(family: Family, primes: &PrimeChoice, budget: u128) -> Result<Character, RepError> {
    let m = family.dims();
    let es: Vec<(usize, usize)> = (0..=m.0).flat_map(|a| (0..=m.1).map(move |b| (a, b))).collect();
    let strata = es
        .par_iter()
        .map(|&e| gr_poly(family, e, primes, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let euler = EulerForm;
    let mut element = TorusElement::zero(4);
    for s in &strata {
        if s.poly.is_zero() {
            continue;
        }
        let (e1, e2) = (s.e.0 as i64, s.e.1 as i64);
        let w = euler.eval((e1, e2), (m.0 as i64 - e1, m.1 as i64 - e2));
        element.add_term(stratum_exponent(s.e, m), &s.poly.in_v().shift(-w));
    }
    Ok(Character { family, element, strata })
}

/// Character agreement: `X_{R(n)} = S_n` for `1 ≤ n ≤ bound`, and
/// `X_{V(-l)} = x_{-l}`, `X_{V(l+3)} = x_{l+3}` for `0 ≤ l < bound`.
pub fn verify_characters(
    ctx: &KronContext,
    bound: usize,
    primes: &PrimeChoice,
    budget: u128,
) -> Result<Report, RepError> {
    let mut jobs: Vec<(&'static str, Family, TorusElement)> = Vec::new();
    for n in 1..=bound {
        jobs.push(("char.regular", Family::regular(n), (*ctx.cheb_s(n)).clone()));
    }
    for l in 0..bound {
        jobs.push(("char.preprojective", Family::Preprojective(l), (*ctx.cluster_var(-(l as i64))).clone()));
        jobs.push(("char.preinjective", Family::Preinjective(l), (*ctx.cluster_var(l as i64 + 3)).clone()));
    }
    let mut cases = Vec::new();
    for (name, fam, expected) in jobs {
        let ch = character(fam, primes, budget)?;
        let residual = ch.element.sub(&expected);
        let key = match fam {
            Family::Regular(n, _) => ("n", n as i64),
            Family::Preprojective(l) => ("m", -(l as i64)),
            Family::Preinjective(l) => ("m", l as i64 + 3),
        };
        cases.push(CaseResult::new(name, &[key], residual.is_zero(), residual.len()));
    }
    Ok(Report::new("char", cases))
}

/// `λ`-independence of the regular counts: for each `n ≤ n_max`, every `e`
/// and every `p`, `R(n, 0)`, `R(n, 1)` and `R(n, ∞)` have equal counts.
pub fn verify_lambda_independence(n_max: usize, primes: &[u64], budget: u128) -> Result<Report, RepError> {
    let mut cases = Vec::new();
    for n in 1..=n_max {
        for &p in primes {
            let reps = [Lambda::Finite(0), Lambda::Finite(1), Lambda::Infinity]
                .map(|l| make_rep(Family::Regular(n, l), p));
            let reps: Vec<KronRep> = reps.into_iter().collect::<Result<_, _>>()?;
            for e1 in 0..=n {
                for e2 in 0..=n {
                    let counts: Vec<u64> =
                        reps.iter().map(|r| count_subreps(r, (e1, e2), budget)).collect::<Result<_, _>>()?;
                    let ok = counts.iter().all(|&c| c == counts[0]);
                    cases.push(CaseResult::new(
                        "lambda_independence",
                        &[("n", n as i64), ("p", p as i64), ("e1", e1 as i64), ("e2", e2 as i64)],
                        ok,
                        usize::from(!ok),
                    ));
                }
            }
        }
    }
    Ok(Report::new("lambda", cases))
}
