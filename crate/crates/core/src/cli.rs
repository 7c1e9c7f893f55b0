//! The `kronq` command-line front end.
//!
//! Every command prints one JSON document (sorted keys, compact) to stdout
//! or to `--out`. Exit codes: 0 success, 1 verification failure, 2 usage or
//! parse error, 3 enumeration budget exceeded, 4 decomposition hit a
//! non-pointed element, 5 decomposition did not terminate (input outside
//! the span).

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::basisdec::{audit, AuditRange, Basis, DecomposeError, Decomposer};
use crate::expr::parse;
use crate::kronrec::{kron_btilde, kron_lambda, positivity_report, verify_cases, verify_classical, KronContext, Report, Suite};
use crate::qtorus::TorusElement;
use crate::repchar::{
    budget_from_env, character, count_subreps, gr_poly, make_rep, verify_characters, verify_lambda_independence,
    Family, PrimeChoice, RepError,
};
use crate::seedmut::{QuantumSeed, SeedError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_NOT_POINTED: i32 = 4;
pub const EXIT_OUT_OF_SPAN: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "kronq", version, about = "Exact computations in the Kronecker quantum cluster algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand an expression such as `x:-1`, `s:3` or `x:-2 * x:3` in the initial torus.
    Expand {
        expr: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Apply mutations (1-based positions, left to right) to a seed.
    Mutate {
        /// Seed JSON file; defaults to the initial Kronecker seed.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(required = true)]
        k: Vec<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Count subrepresentations, or interpolate the counting polynomial.
    Count {
        /// `v:<m>` (m ≤ 0 or m ≥ 3) or `r:<n>[:λ|inf]`.
        family: String,
        /// Dimension vector `e1,e2`.
        #[arg(long, value_parser = parse_pair)]
        e: (usize, usize),
        /// Count over this single prime instead of interpolating.
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        counting: CountingArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// The quantum cluster character of a module, with per-stratum provenance.
    Char {
        family: String,
        #[command(flatten)]
        counting: CountingArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decompose an expression, or `@file.json` holding a torus element, over a basis.
    Decompose {
        input: String,
        #[arg(long, default_value = "S")]
        basis: Basis,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountingArgs {
    /// Primes for interpolation, e.g. `2,3,5,7,11`; default picks the smallest sufficient set.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Maximum subspace pairs per count (default from KRONQ_BUDGET, else 10^7).
    #[arg(long)]
    pub budget: Option<u128>,
}

impl CountingArgs {
    fn prime_choice(&self) -> PrimeChoice {
        match &self.primes {
            Some(ps) => PrimeChoice::Explicit(ps.clone()),
            None => PrimeChoice::Auto,
        }
    }

    fn budget(&self) -> u128 {
        self.budget.unwrap_or_else(budget_from_env)
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// coef, sproduct, scluster, exchange, ffamily, char, bases, lambda, positivity, classical, or all.
    pub suite: String,
    /// Upper range for `n` (Chebyshev index); default 8, or 3 for `char`.
    #[arg(long = "N", alias = "n")]
    pub big_n: Option<usize>,
    /// Upper range for `m` (cluster index); default 8.
    #[arg(long = "M", alias = "m")]
    pub big_m: Option<usize>,
    /// Cluster monomial degree bound for `bases`.
    #[arg(long, default_value_t = 3)]
    pub deg: u32,
    /// Cluster index bound `|m|` for `bases`.
    #[arg(long, default_value_t = 4)]
    pub cluster_index: i64,
    #[command(flatten)]
    pub counting: CountingArgs,
    #[command(flatten)]
    pub out: OutArg,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected e1,e2, got '{s}'"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("'{x}': {e}"));
    Ok((p(a)?, p(b)?))
}

/// A failed command: message plus exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        let code = match e {
            RepError::BudgetExceeded { .. } => EXIT_BUDGET,
            RepError::NonInteger { .. } | RepError::HeldOut { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<SeedError> for CliError {
    fn from(e: SeedError) -> Self {
        let code = match e {
            SeedError::NotLaurent { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        let code = match e {
            DecomposeError::IterationBound { .. } => EXIT_OUT_OF_SPAN,
            DecomposeError::Zero => EXIT_USAGE,
            _ => EXIT_NOT_POINTED,
        };
        CliError { code, message: e.to_string() }
    }
}

/// The document a command produced and the exit code it implies.
pub struct Outcome {
    pub doc: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: EXIT_OK }
    }

    fn report(r: &Report) -> Self {
        let code = if r.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
        Outcome { doc: r.to_json(), code }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Expand { expr, .. } => {
            let e = parse(expr).map_err(|e| CliError::usage(e.to_string()))?;
            Ok(Outcome::ok(KronContext::new().eval(&e).to_json()))
        }
        Command::Mutate { seed, k, .. } => {
            let mut s = match seed {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(e.to_string()))?;
                    QuantumSeed::from_json(&v)?
                }
                None => QuantumSeed::initial(kron_lambda(), kron_btilde())?,
            };
            for &k in k {
                s = s.mutate(k)?;
            }
            Ok(Outcome::ok(s.to_json()))
        }
        Command::Verify(args) => verify(args),
        Command::Count { family, e, p, counting, .. } => {
            let fam: Family = family.parse()?;
            let budget = counting.budget();
            match p {
                Some(p) => {
                    let n = count_subreps(&make_rep(fam, *p)?, *e, budget)?;
                    Ok(Outcome::ok(json!({"family": fam.to_string(), "e": [e.0, e.1], "p": p, "count": n})))
                }
                None => {
                    let s = gr_poly(fam, *e, &counting.prime_choice(), budget)?;
                    let mut doc = s.to_json();
                    doc["family"] = json!(fam.to_string());
                    Ok(Outcome::ok(doc))
                }
            }
        }
        Command::Char { family, counting, .. } => {
            let fam: Family = family.parse()?;
            Ok(Outcome::ok(character(fam, &counting.prime_choice(), counting.budget())?.to_json()))
        }
        Command::Decompose { input, basis, .. } => {
            let ctx = KronContext::new();
            let x = match input.strip_prefix('@') {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}")))?;
                    TorusElement::from_json_str(&text).map_err(|e| CliError::usage(e.to_string()))?
                }
                None => ctx.eval(&parse(input).map_err(|e| CliError::usage(e.to_string()))?),
            };
            if x.dim() != 4 {
                return Err(CliError::usage(format!("expected a rank-4 torus element, got rank {}", x.dim())));
            }
            let dec = Decomposer::new(&ctx, *basis);
            let d = dec.decompose(&x)?;
            let residual = dec.expand(&d)?.sub(&x).len();
            let code = if residual == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED };
            Ok(Outcome { doc: d.to_json(residual), code })
        }
    }
}

const SUITES: [&str; 11] = [
    "coef", "sproduct", "scluster", "exchange", "ffamily", "char", "lambda", "positivity", "classical", "bases", "all",
];

fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let name = args.suite.as_str();
    if !SUITES.contains(&name) {
        return Err(CliError::usage(format!("unknown suite '{name}' (expected one of {})", SUITES.join(", "))));
    }
    let n = args.big_n.unwrap_or(8);
    let m = args.big_m.unwrap_or(8);
    let ctx = KronContext::new();
    let want = |s: &str| name == s || name == "all";
    let mut report = Report::default();
    for suite in Suite::ALL {
        if want(suite.name()) {
            report.merge(verify_cases(&ctx, suite.name(), &suite.cases(n, m)));
        }
    }
    if want("char") {
        let bound = args.big_n.unwrap_or(3);
        report.merge(verify_characters(&ctx, bound, &args.counting.prime_choice(), args.counting.budget())?);
    }
    if want("lambda") {
        let bound = args.big_n.unwrap_or(3);
        let primes = args.counting.primes.clone().unwrap_or_else(|| vec![2, 3]);
        report.merge(verify_lambda_independence(bound, &primes, args.counting.budget())?);
    }
    if want("positivity") {
        report.merge(positivity_report(&ctx, n));
    }
    if want("classical") {
        let classical = KronContext::classical();
        for suite in Suite::ALL {
            report.merge(verify_classical(&ctx, &classical, suite.name(), &suite.cases(n, m)));
        }
    }
    if want("bases") {
        let range = AuditRange { cluster_index: args.cluster_index, cluster_degree: args.deg, cheb_index: n };
        for basis in [Basis::S, Basis::B] {
            report.merge(audit(&ctx, basis, range, true));
        }
    }
    if name == "all" {
        report.suite = "all".into();
    }
    Ok(Outcome::report(&report))
}

fn out_path(cli: &Cli) -> Option<&PathBuf> {
    let o = match &cli.command {
        Command::Expand { out, .. }
        | Command::Mutate { out, .. }
        | Command::Count { out, .. }
        | Command::Char { out, .. }
        | Command::Decompose { out, .. } => out,
        Command::Verify(v) => &v.out,
    };
    o.out.as_ref()
}

/// Parses the process arguments, runs the command, writes its output, and
/// returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = format!("{}\n", outcome.doc);
            match out_path(&cli) {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                }
                None => print!("{text}"),
            }
            if let Some(summary) = outcome.doc.get("summary") {
                eprintln!("{} passed, {} failed", summary["passed"], summary["failed"]);
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
