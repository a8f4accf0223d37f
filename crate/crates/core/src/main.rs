//! Batch command-line surface over the verification paths.
//!
//! Exit codes: 0 when every requested check passes, 1 on a mathematical
//! disagreement (an identity violation — should never happen), 2 on usage
//! errors.

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use altsum::error::Error;
use altsum::identity::{
    verify_numeric, verify_symbolic, VerifyMode, DEFAULT_NUMERIC_BUDGET, DEFAULT_SYMBOLIC_BUDGET,
};
use altsum::integral::{
    closed_form, cross_check, det_polynomial, mc_estimate, nested_simplex_integrate, perm_sum,
    RationalExponentVector,
};
use altsum::perm::Permutation;
use altsum::qlimit::{check_limit_identity, ExponentVector};
use altsum::rational::format_rational;
use altsum::report::{emit_json, IntegralJson, LimitJson, McJson, VerifyJson};

#[derive(Parser)]
#[command(name = "altsum", version, about = "Exact verifier for an antisymmetrized rational-function identity, its q -> 1 limit, and the matching simplex integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    PermSum,
    Nested,
    Mc,
    All,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::PermSum => "perm-sum",
            Method::Nested => "nested",
            Method::Mc => "mc",
            Method::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify the identity at a given k, symbolically or at random points.
    Verify {
        #[arg(long)]
        k: u32,
        /// Defaults to symbolic for k <= 4 and numeric above.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Number of random points for numeric mode.
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest k allowed on the symbolic route.
        #[arg(long, default_value_t = DEFAULT_SYMBOLIC_BUDGET)]
        max_symbolic_k: u32,
        /// Largest k allowed on the numeric route.
        #[arg(long, default_value_t = DEFAULT_NUMERIC_BUDGET)]
        max_numeric_k: u32,
        #[arg(long)]
        json: bool,
    },
    /// Compare the exact q -> 1 limits of both specialized sides.
    Limit {
        /// Comma-separated positive integers, e.g. 1,2,5. Order matters.
        #[arg(long)]
        a: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the limit value as an ordered-simplex integral.
    Integral {
        /// Comma-separated positive integers or slash rationals, e.g. 1/2,3/2.
        #[arg(long)]
        a: String,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Time the construction and verification paths; CSV on stdout.
    Bench {
        #[arg(long)]
        max_k: u32,
        #[arg(long, default_value_t = DEFAULT_SYMBOLIC_BUDGET)]
        max_symbolic_k: u32,
        #[arg(long, default_value_t = DEFAULT_NUMERIC_BUDGET)]
        max_numeric_k: u32,
        /// Random points per numeric row.
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32, Error> {
    match command {
        Command::Verify {
            k,
            mode,
            trials,
            seed,
            max_symbolic_k,
            max_numeric_k,
            json,
        } => {
            if k < 1 {
                return Err(Error::Parse("k must be >= 1".into()));
            }
            let mode = match mode {
                Some(Mode::Symbolic) => VerifyMode::Symbolic,
                Some(Mode::Numeric) => VerifyMode::Numeric,
                None if k <= 4 => VerifyMode::Symbolic,
                None => VerifyMode::Numeric,
            };
            let report = match mode {
                VerifyMode::Symbolic => verify_symbolic(k, max_symbolic_k)?,
                VerifyMode::Numeric => {
                    if trials < 1 {
                        return Err(Error::Parse("trials must be >= 1".into()));
                    }
                    if k > max_numeric_k {
                        return Err(Error::BudgetExceeded {
                            k,
                            budget: max_numeric_k,
                        });
                    }
                    verify_numeric(k, trials, seed)?
                }
            };
            let (trials, seed) = match mode {
                VerifyMode::Symbolic => (None, None),
                VerifyMode::Numeric => (Some(trials), Some(seed)),
            };
            if json {
                println!("{}", emit_json(&VerifyJson::new(&report, trials, seed)));
            } else {
                let detail = match mode {
                    VerifyMode::Symbolic => format!(
                        "{} terms, {} numerator monomials",
                        report.lhs_term_count,
                        report.numerator_monomials.unwrap_or(0)
                    ),
                    VerifyMode::Numeric => format!(
                        "{} terms, {} points",
                        report.lhs_term_count,
                        report.points_tested.unwrap_or(0)
                    ),
                };
                println!(
                    "verify k={} mode={}: equal={} ({}, {:.3}s)",
                    report.k, report.mode, report.equal, detail, report.elapsed_s
                );
                if let Some(w) = &report.witness {
                    println!("witness: {w}");
                }
            }
            Ok(if report.equal { 0 } else { 1 })
        }

        Command::Limit { a, json } => {
            let a: ExponentVector = a.parse()?;
            let start = Instant::now();
            let check = check_limit_identity(&a);
            let elapsed = start.elapsed().as_secs_f64();
            if json {
                println!("{}", emit_json(&LimitJson::new(&check, elapsed)));
            } else {
                println!(
                    "limit a={}: lhs={} rhs={} equal={}",
                    check.a,
                    format_rational(&check.lhs),
                    format_rational(&check.rhs),
                    check.equal
                );
            }
            Ok(if check.equal { 0 } else { 1 })
        }

        Command::Integral {
            a,
            method,
            samples,
            seed,
            json,
        } => {
            let a: RationalExponentVector = a.parse()?;
            if samples < 1 {
                return Err(Error::Parse("samples must be >= 1".into()));
            }
            let needs_integers = matches!(method, Method::Nested | Method::Mc);
            if needs_integers && a.as_integer_entries().is_none() {
                return Err(Error::NonIntegerExponent);
            }
            let start = Instant::now();
            let mut out = IntegralJson::empty(&a, method.name());
            let mut exit = 0;
            match method {
                Method::Closed => {
                    out.closed_form = Some(format_rational(&closed_form(&a)));
                }
                Method::PermSum => {
                    out.perm_sum = Some(format_rational(&perm_sum(&a)));
                }
                Method::Nested => {
                    let value = nested_simplex_integrate(&det_polynomial(&a)?, a.k());
                    out.nested = Some(format_rational(&value));
                    out.sign_factor = Some(sign_factor(a.k()));
                }
                Method::Mc => {
                    out.mc = Some(McJson::from(&mc_estimate(&a, samples, seed)));
                }
                Method::All => {
                    let check = cross_check(&a, samples, seed);
                    out = IntegralJson::from_cross_check(&check, 0.0);
                    exit = if check.agree { 0 } else { 1 };
                }
            }
            out.elapsed_s = start.elapsed().as_secs_f64();
            if json {
                println!("{}", emit_json(&out));
            } else {
                let mut parts = vec![format!("integral a={} method={}:", a, method.name())];
                if let Some(v) = &out.closed_form {
                    parts.push(format!("closed_form={v}"));
                }
                if let Some(v) = &out.perm_sum {
                    parts.push(format!("perm_sum={v}"));
                }
                if let Some(v) = &out.nested {
                    parts.push(format!("nested={v}"));
                }
                if let Some(v) = out.sign_factor {
                    parts.push(format!("sign_factor={v}"));
                }
                if let Some(mc) = &out.mc {
                    parts.push(format!("mc={}+/-{}", mc.estimate, mc.stderr));
                }
                if let Some(v) = out.agree {
                    parts.push(format!("agree={v}"));
                }
                println!("{}", parts.join(" "));
            }
            Ok(exit)
        }

        Command::Bench {
            max_k,
            max_symbolic_k,
            max_numeric_k,
            trials,
            seed,
        } => {
            if max_k < 1 {
                return Err(Error::Parse("max-k must be >= 1".into()));
            }
            println!("k,mode,terms,monomials,seconds");
            for k in 1..=max_k {
                if k <= max_symbolic_k {
                    let start = Instant::now();
                    let lhs = altsum::identity::build_lhs(k);
                    let secs = start.elapsed().as_secs_f64();
                    println!(
                        "{k},build_lhs,{},{},{secs:.6}",
                        Permutation::count(k),
                        lhs.numerator().nterms()
                    );
                    let report = verify_symbolic(k, max_symbolic_k)?;
                    println!(
                        "{k},symbolic,{},{},{:.6}",
                        report.lhs_term_count,
                        report.numerator_monomials.unwrap_or(0),
                        report.elapsed_s
                    );
                }
                if k <= max_numeric_k {
                    let report = verify_numeric(k, trials, seed)?;
                    println!(
                        "{k},numeric,{},,{:.6}",
                        report.lhs_term_count, report.elapsed_s
                    );
                }
            }
            Ok(0)
        }
    }
}

fn sign_factor(k: u32) -> i32 {
    if (k * (k - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}
