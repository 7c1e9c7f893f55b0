//! The acceptance gate: twelve criteria, each run against a fresh context
//! with its own wall-clock limit. Prints one PASS/FAIL line per criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use kronq::basisdec::{audit, AuditRange, Basis};
use kronq::expr::{mono, qh, x, y2};
use kronq::kronrec::{
    kron_btilde, kron_lambda, positivity_report, verify_cases, verify_classical, KronContext, Report, Suite,
};
use kronq::repchar::{verify_characters, verify_lambda_independence, PrimeChoice, DEFAULT_BUDGET};
use kronq::seedmut::QuantumSeed;

struct Outcome {
    id: usize,
    what: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn run(id: usize, what: &'static str, limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let t0 = Instant::now();
    let (ok, detail) = f();
    let elapsed = t0.elapsed();
    let pass = ok && limit.is_none_or(|l| elapsed < l);
    Outcome { id, what, pass, detail, elapsed, limit }
}

fn summarize(r: &Report) -> (bool, String) {
    let mut detail = format!("{}/{} cases exact", r.passed(), r.cases.len());
    if let Some(f) = r.failures().next() {
        detail.push_str(&format!("; first failure {} {:?} ({} residual terms)", f.identity, f.params, f.residual_terms));
    }
    (r.all_passed() && !r.cases.is_empty(), detail)
}

fn sweep(suite: Suite, n: usize, m: usize) -> (bool, String) {
    let ctx = KronContext::new();
    summarize(&verify_cases(&ctx, suite.name(), &suite.cases(n, m)))
}

fn has_case(r: &Report, identity: &str, params: &[(&str, i64)]) -> bool {
    r.cases.iter().any(|c| {
        c.identity == identity && params.iter().all(|(k, v)| c.params.iter().any(|(pk, pv)| pk == k && pv == v))
    })
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = Vec::new();

    outcomes.push(run(1, "X_delta from mutated variables", secs(1), || {
        let ctx = KronContext::new();
        let lhs = ctx.eval(&(x(0) * x(3) - qh(3) * x(1) * x(2) * y2()));
        let rhs = ctx.eval(&(mono([1, -1, 1, 1]) + mono([-1, -1, 1, 0]) + mono([-1, 1, 0, 0])));
        let residual = lhs.sub(&rhs).len();
        (residual == 0, format!("{residual} residual terms"))
    }));

    outcomes.push(run(2, "commutation with y1, y2, t, S_m; m,n <= 10", secs(10), || sweep(Suite::Coef, 10, 10)));

    outcomes.push(run(3, "S_m S_n expansion; 1 <= m <= n <= 6", secs(30), || sweep(Suite::SProduct, 6, 6)));

    outcomes.push(run(4, "S_n against cluster variables; n, m <= 8", secs(60), || {
        let ctx = KronContext::new();
        let r = verify_cases(&ctx, "scluster", &Suite::SCluster.cases(8, 8));
        let (ok, detail) = summarize(&r);
        let bases = has_case(&r, "scluster.base.x0", &[]) && has_case(&r, "scluster.base.xneg", &[("m", 1)]);
        (ok && bases, detail)
    }));

    outcomes.push(run(5, "cluster variable products; m, n <= 8", secs(60), || {
        let ctx = KronContext::new();
        let r = verify_cases(&ctx, "exchange", &Suite::Exchange.cases(8, 8));
        let (ok, detail) = summarize(&r);
        let boundary = has_case(&r, "exchange.1", &[("m", 0)])
            && has_case(&r, "exchange.2", &[("m", 1)])
            && has_case(&r, "exchange.4", &[("m", 1)])
            && has_case(&r, "exchange.5", &[("m", 1), ("n", 2)]);
        (ok && boundary, detail)
    }));

    outcomes.push(run(6, "F_m against cluster variables; m, n <= 8", secs(60), || {
        let ctx = KronContext::new();
        let r = verify_cases(&ctx, "ffamily", &Suite::FFamily.cases(8, 8));
        let (ok, detail) = summarize(&r);
        let mut covered = has_case(&r, "ffamily.xneg2.special", &[("m", 2)]);
        for n in 1..=7 {
            covered &= has_case(&r, "ffamily.left.m_le_n", &[("m", n), ("n", n)]);
            covered &= has_case(&r, "ffamily.left.m_gt_n", &[("m", n + 1), ("n", n)]);
            covered &= has_case(&r, "ffamily.right.m_ge_n", &[("m", n), ("n", n)]);
            covered &= has_case(&r, "ffamily.right.m_lt_n", &[("m", n), ("n", n + 1)]);
        }
        (ok && covered, detail)
    }));

    outcomes.push(run(7, "characters of R(n), n <= 3, and V(m) against x_m", secs(300), || {
        let ctx = KronContext::new();
        let primes = PrimeChoice::Explicit(vec![2, 3, 5, 7, 11]);
        match verify_characters(&ctx, 3, &primes, DEFAULT_BUDGET) {
            Ok(r) => {
                let (ok, detail) = summarize(&r);
                let covered = [("char.preprojective", 0), ("char.preprojective", -1), ("char.preinjective", 3), ("char.preinjective", 4)]
                    .iter()
                    .all(|(id, m)| has_case(&r, id, &[("m", *m)]));
                (ok && covered, detail)
            }
            Err(e) => (false, e.to_string()),
        }
    }));

    outcomes.push(run(8, "regular counts independent of lambda in {0, 1, inf}", None, || {
        match verify_lambda_independence(3, &[2, 3], DEFAULT_BUDGET) {
            Ok(r) => summarize(&r),
            Err(e) => (false, e.to_string()),
        }
    }));

    outcomes.push(run(9, "basis audits: bar-invariant, pointed, positive products", secs(600), || {
        let ctx = KronContext::new();
        let mut r = audit(&ctx, Basis::S, AuditRange::default(), true);
        r.merge(audit(&ctx, Basis::B, AuditRange::default(), true));
        summarize(&r)
    }));

    outcomes.push(run(10, "nonnegative expansions of x_m, S_n, F_n up to 8", None, || {
        summarize(&positivity_report(&KronContext::new(), 8))
    }));

    outcomes.push(run(11, "q = 1 shadow of every identity matches the classical pipeline", None, || {
        let quantum = KronContext::new();
        let classical = KronContext::classical();
        let mut r = Report::default();
        for (suite, n, m) in [
            (Suite::Coef, 10, 10),
            (Suite::SProduct, 6, 6),
            (Suite::SCluster, 8, 8),
            (Suite::Exchange, 8, 8),
            (Suite::FFamily, 8, 8),
        ] {
            r.merge(verify_classical(&quantum, &classical, suite.name(), &suite.cases(n, m)));
        }
        summarize(&r)
    }));

    outcomes.push(run(12, "involution and compatibility on 100 random walks of length 10", None, || {
        let mut rng = StdRng::seed_from_u64(0x6b72_6f6e);
        let start = QuantumSeed::initial(kron_lambda(), kron_btilde()).expect("initial seed");
        let mut checks = 0;
        for walk in 0..100 {
            let mut seed = start.clone();
            for step in 0..10 {
                let k = rng.gen_range(1..=2);
                let next = match seed.mutate(k) {
                    Ok(s) => s,
                    Err(e) => return (false, format!("walk {walk} step {step}: {e}")),
                };
                if next.check_compatible().is_err() {
                    return (false, format!("walk {walk} step {step}: compatibility lost"));
                }
                match next.mutate(k) {
                    Ok(back) if back == seed => {}
                    _ => return (false, format!("walk {walk} step {step}: mutation at {k} is not an involution")),
                }
                checks += 1;
                seed = next;
            }
        }
        (true, format!("{checks} steps checked"))
    }));

    // written to the raw handle so the lines survive libtest output capture
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    for o in &outcomes {
        let limit = o.limit.map_or("no limit".to_string(), |l| format!("limit {} s", l.as_secs()));
        writeln!(
            err,
            "criterion {:>2} {}: {} ({}; {:.2} s, {})",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.what,
            o.detail,
            o.elapsed.as_secs_f64(),
            limit
        )
        .unwrap();
    }
    drop(err);
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
