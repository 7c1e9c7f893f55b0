//! The recursive identities among `x_m`, `S_n`, `F_n`, stated as pairs of
//! expressions and checked by exact evaluation.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{KronContext, Mode};
use crate::expr::{f, mono, qh, s, t, x, y1, y2, Expr};

/// One instance `lhs = rhs` of a named identity.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub identity: &'static str,
    pub params: Vec<(&'static str, i64)>,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl IdentityCase {
    fn new(identity: &'static str, params: &[(&'static str, i64)], lhs: Expr, rhs: Expr) -> Self {
        IdentityCase { identity, params: params.to_vec(), lhs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseResult {
    pub identity: String,
    pub params: Vec<(String, i64)>,
    pub ok: bool,
    pub residual_terms: usize,
}

impl CaseResult {
    pub fn new(identity: impl Into<String>, params: &[(&str, i64)], ok: bool, residual_terms: usize) -> Self {
        CaseResult {
            identity: identity.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ok,
            residual_terms,
        }
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "identity": self.identity,
            "params": params,
            "ok": self.ok,
            "residual_terms": self.residual_terms,
        })
    }
}

/// Outcome of a verification sweep.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<CaseResult>,
}

impl Report {
    pub fn new(suite: impl Into<String>, cases: Vec<CaseResult>) -> Self {
        Report { suite: suite.into(), cases }
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.ok).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.ok)
    }

    /// Appends another report's cases; the suite name becomes a `+`-joined list.
    pub fn merge(&mut self, other: Report) {
        if self.suite.is_empty() {
            self.suite = other.suite;
        } else if !other.suite.is_empty() {
            self.suite = format!("{}+{}", self.suite, other.suite);
        }
        self.cases.extend(other.cases);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cases": self.cases.iter().map(CaseResult::to_json).collect::<Vec<_>>(),
            "summary": {
                "suite": self.suite,
                "total": self.cases.len(),
                "passed": self.passed(),
                "failed": self.failed(),
                "ok": self.all_passed(),
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Commutation of `y_1`, `y_2`, `t` and the `S_n` among themselves.
    Coef,
    /// `S_m S_n` expanded in the `S` family.
    SProduct,
    /// `S_n` against cluster variables.
    SCluster,
    /// Products of two cluster variables, plus the `X_δ` cross-check.
    Exchange,
    /// `F_m` against cluster variables, and `F_n = S_n − t S_{n−2}`.
    FFamily,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Coef, Suite::SProduct, Suite::SCluster, Suite::Exchange, Suite::FFamily];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Coef => "coef",
            Suite::SProduct => "sproduct",
            Suite::SCluster => "scluster",
            Suite::Exchange => "exchange",
            Suite::FFamily => "ffamily",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// The cases for ranges `n ≤ big_n`, `m ≤ big_m`.
    pub fn cases(self, big_n: usize, big_m: usize) -> Vec<IdentityCase> {
        let (nn, mm) = (big_n as i64, big_m as i64);
        match self {
            Suite::Coef => coef_cases(nn),
            Suite::SProduct => sproduct_cases(nn),
            Suite::SCluster => scluster_cases(nn, mm),
            Suite::Exchange => exchange_cases(nn, mm),
            Suite::FFamily => ffamily_cases(nn, mm),
        }
    }
}

fn su(n: i64) -> Expr {
    s(n as usize)
}

fn fu(n: i64) -> Expr {
    f(n as usize)
}

fn coef_cases(nn: i64) -> Vec<IdentityCase> {
    let mut out = Vec::new();
    for n in 0..=nn {
        out.push(IdentityCase::new("coef.y1", &[("n", n)], y1() * su(n), qh(-2 * n) * su(n) * y1()));
        out.push(IdentityCase::new("coef.y2", &[("n", n)], y2() * su(n), qh(2 * n) * su(n) * y2()));
        out.push(IdentityCase::new("coef.t", &[("n", n)], t() * su(n), su(n) * t()));
        for m in 0..=nn {
            out.push(IdentityCase::new("coef.s", &[("m", m), ("n", n)], su(m) * su(n), su(n) * su(m)));
        }
    }
    out
}

fn sproduct_cases(nn: i64) -> Vec<IdentityCase> {
    let mut out = Vec::new();
    for n in 1..=nn {
        for m in 1..=n {
            let rhs = (1..=m).fold(su(n + m), |acc, k| acc + mono([0, 0, k, k]) * su(n + m - 2 * k));
            out.push(IdentityCase::new("sproduct", &[("m", m), ("n", n)], su(m) * su(n), rhs));
        }
    }
    out
}

fn scluster_cases(nn: i64, mm: i64) -> Vec<IdentityCase> {
    let mut out = vec![IdentityCase::new(
        "scluster.base.x0",
        &[],
        s(1) * x(0),
        x(-1) + qh(-1) * mono([1, 0, 0, 1]),
    )];
    for m in 1..=mm {
        out.push(IdentityCase::new(
            "scluster.base.xneg",
            &[("m", m)],
            s(1) * x(-m),
            x(-(m + 1)) + t() * x(-(m - 1)),
        ));
    }
    for n in 1..=nn {
        out.push(IdentityCase::new(
            "scluster.1",
            &[("n", n)],
            su(n) * x(0),
            x(-n) + qh(-1) * su(n - 1) * mono([1, 0, 0, 1]),
        ));
        for m in 1..=mm {
            out.push(IdentityCase::new(
                "scluster.2",
                &[("m", m), ("n", n)],
                su(n) * x(-m),
                x(-(m + n)) + t() * su(n - 1) * x(-(m - 1)),
            ));
        }
        out.push(IdentityCase::new(
            "scluster.3",
            &[("n", n)],
            x(1) * su(n),
            x(n + 1) + qh(-1) * x(0) * y1() * su(n - 1),
        ));
        for m in 2..=mm {
            out.push(IdentityCase::new(
                "scluster.4",
                &[("m", m), ("n", n)],
                x(m) * su(n),
                x(n + m) + x(m - 1) * t() * su(n - 1),
            ));
        }
    }
    out
}

fn exchange_cases(nn: i64, mm: i64) -> Vec<IdentityCase> {
    let mut out = vec![IdentityCase::new(
        "exchange.xdelta",
        &[],
        x(0) * x(3) - qh(3) * x(1) * x(2) * y2(),
        mono([1, -1, 1, 1]) + mono([-1, -1, 1, 0]) + mono([-1, 1, 0, 0]),
    )];
    for n in 0..=nn {
        for m in 0..=mm {
            out.push(IdentityCase::new(
                "exchange.1",
                &[("m", m), ("n", n)],
                x(-(m + n + 2)) * x(-m),
                qh(-1) * su(n) * mono([0, 0, m, m + 1]) + x(-(n + m + 1)) * x(-(m + 1)),
            ));
        }
        for m in 1..=mm {
            out.push(IdentityCase::new(
                "exchange.2",
                &[("m", m), ("n", n)],
                x(m + n + 2) * x(m),
                qh(1) * su(n) * mono([0, 0, m, m - 1]) + x(n + m + 1) * x(m + 1),
            ));
        }
        out.push(IdentityCase::new(
            "exchange.3",
            &[("n", n)],
            x(0) * x(n + 2),
            qh(2 * n + 1) * x(1) * x(n + 1) * y2() + su(n),
        ));
    }
    for m in 1..=mm {
        out.push(IdentityCase::new(
            "exchange.4",
            &[("m", m)],
            x(-m) * x(1),
            su(m - 1) + qh(1) * x(-(m - 1)) * x(0) * y1(),
        ));
        for n in 2..=nn {
            out.push(IdentityCase::new(
                "exchange.5",
                &[("m", m), ("n", n)],
                x(-m) * x(n),
                qh(2) * x(-(m - 1)) * x(n - 1) * t() + su(m + n - 2),
            ));
        }
    }
    out
}

fn ffamily_cases(nn: i64, mm: i64) -> Vec<IdentityCase> {
    let mut out = Vec::new();
    for m in 1..=nn {
        let w = -(2 * m - 1);
        out.push(IdentityCase::new("ffamily.x0", &[("m", m)], fu(m) * x(0), x(-m) + qh(w) * y2() * x(m)));
        if m >= 2 {
            out.push(IdentityCase::new(
                "ffamily.xneg1",
                &[("m", m)],
                fu(m) * x(-1),
                x(-(m + 1)) + qh(w) * mono([0, 0, 1, 2]) * x(m - 1),
            ));
        }
        if m == 2 {
            out.push(IdentityCase::new(
                "ffamily.xneg2.special",
                &[("m", 2)],
                f(2) * x(-2),
                x(-4) + mono([0, 0, 2, 2]) * x(0),
            ));
        }
        if m >= 3 {
            out.push(IdentityCase::new(
                "ffamily.xneg2",
                &[("m", m)],
                fu(m) * x(-2),
                x(-(m + 2)) + qh(w) * mono([0, 0, 2, 3]) * x(m - 2),
            ));
        }
        out.push(IdentityCase::new("ffamily.x1", &[("m", m)], x(1) * fu(m), x(m + 1) + qh(w) * x(-(m - 1)) * y1()));
        if m >= 2 {
            out.push(IdentityCase::new(
                "ffamily.x2",
                &[("m", m)],
                x(2) * fu(m),
                x(m + 2) + qh(w) * x(-(m - 2)) * mono([0, 0, 2, 1]),
            ));
        }
        for n in 0..=mm {
            let rhs = if m <= n {
                x(-(n + m)) + mono([0, 0, m, m]) * x(-(n - m))
            } else {
                x(-(n + m)) + qh(w) * mono([0, 0, n, n + 1]) * x(m - n)
            };
            let name = if m <= n { "ffamily.left.m_le_n" } else { "ffamily.left.m_gt_n" };
            out.push(IdentityCase::new(name, &[("m", m), ("n", n)], fu(m) * x(-n), rhs));
        }
        for n in 1..=mm {
            let rhs = if m < n {
                x(n + m) + x(n - m) * mono([0, 0, m, m])
            } else {
                x(n + m) + qh(w) * x(-(m - n)) * mono([0, 0, n, n - 1])
            };
            let name = if m < n { "ffamily.right.m_lt_n" } else { "ffamily.right.m_ge_n" };
            out.push(IdentityCase::new(name, &[("m", m), ("n", n)], x(n) * fu(m), rhs));
        }
    }
    for n in 2..=nn {
        out.push(IdentityCase::new("ffamily.bridge", &[("n", n)], fu(n), su(n) - t() * su(n - 2)));
    }
    out
}

/// Evaluates every case exactly; a case passes iff `lhs − rhs` is zero.
pub fn verify_cases(ctx: &KronContext, suite: &str, cases: &[IdentityCase]) -> Report {
    let results = cases
        .par_iter()
        .map(|c| {
            let residual = ctx.eval(&c.lhs).sub(&ctx.eval(&c.rhs));
            CaseResult::new(c.identity, &c.params, residual.is_zero(), residual.len())
        })
        .collect();
    Report::new(suite, results)
}

/// The `q = 1` shadow of each case: the quantum sides specialized at
/// `v = 1` must agree with each other and with the classical pipeline's
/// evaluation of the same expressions, and the classical sides must agree.
pub fn verify_classical(
    quantum: &KronContext,
    classical: &KronContext,
    suite: &str,
    cases: &[IdentityCase],
) -> Report {
    assert_eq!(quantum.mode(), Mode::Quantum);
    assert_eq!(classical.mode(), Mode::Classical);
    let results = cases
        .par_iter()
        .map(|c| {
            let ql = quantum.eval(&c.lhs).specialize_q1();
            let qr = quantum.eval(&c.rhs).specialize_q1();
            let cl = classical.eval(&c.lhs).specialize_q1();
            let cr = classical.eval(&c.rhs).specialize_q1();
            let residual = ql.sub(&qr).len() + cl.sub(&cr).len() + ql.sub(&cl).len();
            CaseResult::new(c.identity, &c.params, residual == 0, residual)
        })
        .collect();
    Report::new(format!("classical.{suite}"), results)
}

/// Nonnegativity of every Laurent coefficient of `x_m` for `|m| ≤ bound` and
/// of `S_n`, `F_n` for `n ≤ bound`, in the initial torus. `residual_terms`
/// counts exponents carrying a negative coefficient.
pub fn positivity_report(ctx: &KronContext, bound: usize) -> Report {
    let b = bound as i64;
    let negatives = |x: &crate::qtorus::TorusElement| x.iter().filter(|(_, c)| !c.all_nonnegative()).count();
    let mut cases = Vec::new();
    for m in -b..=b {
        let k = negatives(&ctx.cluster_var(m));
        cases.push(CaseResult::new("positivity.x", &[("m", m)], k == 0, k));
    }
    for n in 0..=b {
        let k = negatives(&ctx.cheb_s(n as usize));
        cases.push(CaseResult::new("positivity.s", &[("n", n)], k == 0, k));
        let k = negatives(&ctx.cheb_f(n as usize));
        cases.push(CaseResult::new("positivity.f", &[("n", n)], k == 0, k));
    }
    Report::new("positivity", cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn coef_with_zero_range_is_trivial() {
        let cases = Suite::Coef.cases(0, 0);
        let r = verify_cases(&KronContext::new(), "coef", &cases);
        assert!(r.all_passed());
        assert_eq!(r.cases.len(), 4);
    }

    #[test]
    fn small_sweeps_pass() {
        let ctx = KronContext::new();
        for s in Suite::ALL {
            let r = verify_cases(&ctx, s.name(), &s.cases(3, 3));
            let bad: Vec<_> = r.failures().collect();
            assert!(bad.is_empty(), "{}: {bad:?}", s.name());
        }
    }

    #[test]
    fn a_wrong_identity_is_caught() {
        let ctx = KronContext::new();
        let case = IdentityCase::new("bogus", &[], x(3) * x(1), qh(-1) * y1() + x(2) * x(2));
        let r = verify_cases(&ctx, "bogus", &[case]);
        assert!(!r.all_passed());
        assert!(r.cases[0].residual_terms > 0);
    }

    #[test]
    fn report_json_shape() {
        let r = Report::new("demo", vec![CaseResult::new("exchange.2", &[("m", 1), ("n", 0)], true, 0)]);
        let v = r.to_json();
        assert_eq!(
            v["cases"][0].to_string(),
            r#"{"identity":"exchange.2","ok":true,"params":{"m":1,"n":0},"residual_terms":0}"#
        );
        assert_eq!(v["summary"]["passed"], 1);
    }
}
