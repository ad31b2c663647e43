//! The `weyl` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{AlgebraContext, Element, ExponentMode};
use crate::commutators::{series_term_k, Method};
use crate::error::Error;
use crate::output::element_json;
use crate::parser::{lower, parse_expr, Expr};
use crate::scalar::DEFAULT_TRUNCATION;
use crate::verify::{run_all, Report, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

pub const TRUNC_ENV: &str = "WEYL_TRUNC_DEFAULT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Polynomial,
    Laurent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Series,
    Grouped,
    Flat,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Counting,
    Axioms,
    Series,
    Laurent,
    Grouped,
    Oracle,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "weyl", version, about = "Normal ordering and commutators for canonical conjugate pairs")]
pub struct Cli {
    /// Number of conjugate pairs (default: largest index in the inputs)
    #[arg(long, global = true)]
    pub n: Option<u32>,

    #[arg(long, global = true, value_enum, default_value = "polynomial")]
    pub mode: ModeArg,

    /// Truncation order K; coefficients are kept modulo c^(K+1)
    #[arg(long, global = true)]
    pub trunc: Option<u32>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub output: OutputArg,

    /// Seed for the verification suites
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Number of random cases per verification suite
    #[arg(long, global = true)]
    pub cases: Option<usize>,

    /// Commutator evaluation method
    #[arg(long, global = true, value_enum, default_value = "direct")]
    pub method: MethodArg,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal-order an expression
    No {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Commutator [A, B]
    Comm {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Order-k term of the commutator series
    Term {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        k: u32,
    },
    /// Run a randomized verification suite
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

/// Resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n_pairs: Option<u32>,
    pub mode: ExponentMode,
    pub trunc_order: u32,
    /// Whether coefficients are truncated in polynomial mode.
    pub trunc_explicit: bool,
    pub output: OutputArg,
    pub seed: u64,
    pub cases: Option<usize>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli, env_trunc: Option<&str>) -> Result<Self, Failure> {
        let default = match env_trunc {
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{TRUNC_ENV} must be a non-negative integer, got `{v}`")))?,
            None => DEFAULT_TRUNCATION,
        };
        if cli.n == Some(0) {
            return Err(Failure::usage("--n must be at least 1"));
        }
        if cli.cases == Some(0) {
            return Err(Failure::usage("--cases must be at least 1"));
        }
        Ok(RunConfig {
            n_pairs: cli.n,
            mode: match cli.mode {
                ModeArg::Polynomial => ExponentMode::Polynomial,
                ModeArg::Laurent => ExponentMode::Laurent,
            },
            trunc_order: cli.trunc.unwrap_or(default),
            trunc_explicit: cli.trunc.is_some(),
            output: cli.output,
            seed: cli.seed,
            cases: cli.cases,
        })
    }

    /// The context for the given inputs, inferring `N` from their indices.
    pub fn context(&self, exprs: &[&Expr]) -> Result<AlgebraContext, Failure> {
        let inferred = exprs.iter().map(|e| e.max_index()).max().unwrap_or(0).max(1);
        let n = self.n_pairs.unwrap_or(inferred);
        let trunc = match self.mode {
            ExponentMode::Laurent => Some(self.trunc_order),
            ExponentMode::Polynomial => self.trunc_explicit.then_some(self.trunc_order),
        };
        Ok(AlgebraContext::new(n, self.mode, trunc)?)
    }

    fn render(&self, e: &Element) -> String {
        match self.output {
            OutputArg::Text => e.to_string(),
            OutputArg::Json => element_json(e, self.trunc_order).to_string(),
        }
    }
}

fn parse_all(cfg: &RunConfig, srcs: &[&str]) -> Result<(AlgebraContext, Vec<Element>), Failure> {
    let exprs = srcs
        .iter()
        .map(|s| parse_expr(s).map_err(|e| Failure::usage(format!("in `{s}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&Expr> = exprs.iter().collect();
    let ctx = cfg.context(&refs)?;
    let elements = exprs
        .iter()
        .zip(srcs)
        .map(|(e, s)| lower(e, &ctx).map_err(|err| Failure::usage(format!("in `{s}`: {err}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((ctx, elements))
}

fn commutator(cfg: &RunConfig, method: MethodArg, a: &Element, b: &Element) -> Result<String, Failure> {
    let single = match method {
        MethodArg::Direct => Some(Method::Direct),
        MethodArg::Series => Some(Method::Series),
        MethodArg::Grouped => Some(Method::Grouped),
        MethodArg::Flat => Some(Method::Flat),
        MethodArg::All => None,
    };
    if let Some(m) = single {
        return Ok(cfg.render(&m.apply(a, b)?));
    }
    let results = Method::ALL
        .iter()
        .map(|m| m.apply(a, b).map(|r| (*m, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let (_, first) = &results[0];
    if results.iter().any(|(_, r)| r != first) {
        let mut message = String::from("commutator methods disagree:");
        for (m, r) in &results {
            message.push_str(&format!("\n  {:<8} {r}", m.as_str()));
        }
        return Err(Failure {
            code: EXIT_DISAGREEMENT,
            message,
        });
    }
    Ok(cfg.render(first))
}

fn verify(cfg: &RunConfig, suite: SuiteArg) -> (String, bool) {
    let reports: Vec<Report> = match suite {
        SuiteArg::All => run_all(cfg.cases, cfg.seed),
        other => {
            let s = match other {
                SuiteArg::Counting => Suite::Counting,
                SuiteArg::Axioms => Suite::Axioms,
                SuiteArg::Series => Suite::Series,
                SuiteArg::Laurent => Suite::Laurent,
                SuiteArg::Grouped => Suite::Grouped,
                SuiteArg::Oracle => Suite::Oracle,
                SuiteArg::All => unreachable!("handled above"),
            };
            vec![s.run(cfg.cases.unwrap_or_else(|| s.default_cases()), cfg.seed)]
        }
    };
    let ok = reports.iter().all(Report::ok);
    let text = match cfg.output {
        OutputArg::Text => reports.iter().map(Report::to_string).collect::<Vec<_>>().join("\n"),
        OutputArg::Json => json!({ "ok": ok, "reports": reports }).to_string(),
    };
    (text, ok)
}

/// Executes a parsed command line, returning the text for stdout.
pub fn execute(cli: &Cli, env_trunc: Option<&str>) -> Result<String, Failure> {
    let cfg = RunConfig::from_cli(cli, env_trunc)?;
    match &cli.command {
        Command::No { expr } => {
            let (_, els) = parse_all(&cfg, &[expr])?;
            Ok(cfg.render(&els[0]))
        }
        Command::Comm { a, b } => {
            let (_, els) = parse_all(&cfg, &[a, b])?;
            commutator(&cfg, cli.method, &els[0], &els[1])
        }
        Command::Term { a, b, k } => {
            if *k == 0 {
                return Err(Failure::usage("k must be at least 1"));
            }
            let (_, els) = parse_all(&cfg, &[a, b])?;
            Ok(cfg.render(&series_term_k(&els[0], &els[1], *k)?))
        }
        Command::Verify { suite } => {
            let (text, ok) = verify(&cfg, *suite);
            if ok {
                Ok(text)
            } else {
                Err(Failure {
                    code: EXIT_VERIFY_FAILED,
                    message: text,
                })
            }
        }
    }
}

/// Full entry point: parses `args`, writes results to `out` and diagnostics
/// to `err`, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let env_trunc = std::env::var(TRUNC_ENV).ok();
    match execute(&cli, env_trunc.as_deref()) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(f) if f.code == EXIT_VERIFY_FAILED => {
            let _ = writeln!(out, "{}", f.message);
            f.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
