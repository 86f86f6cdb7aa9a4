use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use weyl_denom::analytic::{self, AnalyticReport, EvalConfig};
use weyl_denom::denominator::{self, DumpExpr};
use weyl_denom::jacobi::{self, JacobiRow};
use weyl_denom::report::timed;
use weyl_denom::{GradedSeries, QReport};

/// Caps the worker pool when set.
const THREADS_ENV: &str = "WEYL_DENOM_THREADS";

#[derive(Parser)]
#[command(name = "weyl-denom", version, about = "Exact checks of the affine gl(2|2) denominator identity")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Include wall time in reports (output is then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Product side against prefactor times orbit sum.
    VerifyDenom {
        #[arg(long, default_value_t = 24)]
        order: u32,
    },
    /// Prefactor product against its f_n expansion.
    VerifyPrefactor {
        #[arg(long, default_value_t = 40)]
        order: u32,
    },
    /// Finite gl(2|2) identity on the rank-3 lattice.
    VerifyFinite {
        #[arg(long, default_value_t = 24)]
        order: u32,
    },
    /// Affine sl(2|1) identity.
    VerifySl21 {
        #[arg(long, default_value_t = 18)]
        order: u32,
    },
    /// T_alpha and T_gamma orbit sums of R e^rho.
    VerifyTalphaTgamma {
        #[arg(long, default_value_t = 16)]
        order: u32,
    },
    /// Support shape of RHS/LHS and whether it equals 1.
    RatioSupport {
        #[arg(long, default_value_t = 24)]
        order: u32,
    },
    /// Eight-squares table: lattice-point count, theta^8 and the divisor formula.
    Jacobi {
        #[arg(long, default_value_t = 64)]
        max_n: u32,
    },
    /// Floating-point checks of the evaluation argument.
    Analytic {
        #[arg(long, default_value_t = 0.1)]
        q: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print a truncated series.
    Dump {
        #[arg(long, value_enum)]
        expr: Expr,
        #[arg(long, default_value_t = 8)]
        order: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Expr {
    Lhs,
    Rhs,
    Prefactor,
    OrbitSum,
    RhatRoots,
}

impl From<Expr> for DumpExpr {
    fn from(e: Expr) -> Self {
        match e {
            Expr::Lhs => DumpExpr::Lhs,
            Expr::Rhs => DumpExpr::Rhs,
            Expr::Prefactor => DumpExpr::Prefactor,
            Expr::OrbitSum => DumpExpr::OrbitSum,
            Expr::RhatRoots => DumpExpr::RhatRoots,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok((text, ok)) => {
            if let Err(e) = emit(&cli, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

type Outcome = Result<(String, bool), Box<dyn std::error::Error>>;

fn run(cli: &Cli) -> Outcome {
    let verify = |f: fn(u32) -> weyl_denom::Result<QReport>, n: u32| -> Outcome {
        let mut r = timed(|| f(n))?;
        if !cli.timing {
            r = r.strip_timing();
        }
        let ok = r.passed();
        Ok((render_reports(cli.format, &[r])?, ok))
    };
    match &cli.command {
        Command::VerifyDenom { order } => verify(denominator::verify_denominator, *order),
        Command::VerifyPrefactor { order } => verify(denominator::verify_prefactor, *order),
        Command::VerifyFinite { order } => verify(denominator::verify_finite_identity, *order),
        Command::VerifySl21 { order } => verify(denominator::verify_sl21, *order),
        Command::VerifyTalphaTgamma { order } => verify(denominator::verify_talpha_tgamma, *order),
        Command::RatioSupport { order } => verify(denominator::ratio_support_check, *order),
        Command::Jacobi { max_n } => run_jacobi(cli, *max_n),
        Command::Analytic { q, tol } => {
            let cfg = EvalConfig::new(*q, *tol);
            let reports = analytic::run_all(&cfg)?;
            let ok = reports.iter().all(|r| r.passed);
            Ok((render_analytic(cli.format, &reports)?, ok))
        }
        Command::Dump { expr, order } => {
            let s = denominator::build_expr((*expr).into(), *order)?;
            Ok((render_series(cli.format, &s)?, true))
        }
    }
}

fn run_jacobi(cli: &Cli, max_n: u32) -> Outcome {
    let rows = jacobi::jacobi_table(max_n)?;
    let ok = rows.iter().all(|r| r.matched);
    let text = match cli.format {
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                n: u32,
                r8_enum: String,
                r8_theta: &'a str,
                r8_formula: &'a str,
                #[serde(rename = "match")]
                matched: bool,
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(Row {
                    n: r.n,
                    r8_enum: r.r8_enum.map(|v| v.to_string()).unwrap_or_default(),
                    r8_theta: &r.r8_theta,
                    r8_formula: &r.r8_formula,
                    matched: r.matched,
                })?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows)?;
            s.push('\n');
            s
        }
        Format::Text => jacobi_text(&rows),
    };
    Ok((text, ok))
}

fn jacobi_text(rows: &[JacobiRow]) -> String {
    let mut out = format!("{:>4} {:>10} {:>10} {:>10} match\n", "n", "enum", "theta^8", "formula");
    for r in rows {
        let e = r.r8_enum.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:>4} {:>10} {:>10} {:>10} {}\n",
            r.n, e, r.r8_theta, r.r8_formula, r.matched
        ));
    }
    out
}

fn render_reports(format: Format, reports: &[QReport]) -> Result<String, Box<dyn std::error::Error>> {
    Ok(match format {
        Format::Json => {
            let mut s = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])?
            } else {
                serde_json::to_string_pretty(reports)?
            };
            s.push('\n');
            s
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                identity: &'a str,
                cutoff: u32,
                matched: bool,
                passed: bool,
                diffs: usize,
                lhs_terms: usize,
                rhs_terms: usize,
                millis: Option<u64>,
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in reports {
                w.serialize(Row {
                    identity: &r.identity,
                    cutoff: r.cutoff,
                    matched: r.matched,
                    passed: r.passed(),
                    diffs: r.first_diffs.len(),
                    lhs_terms: r.lhs_terms,
                    rhs_terms: r.rhs_terms,
                    millis: r.millis,
                })?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => reports.iter().map(report_text).collect(),
    })
}

fn report_text(r: &QReport) -> String {
    let mut out = format!(
        "{} N={}: {} ({} / {} terms)",
        r.identity,
        r.cutoff,
        if r.passed() { "MATCHED" } else { "MISMATCH" },
        r.lhs_terms,
        r.rhs_terms
    );
    if let Some(ms) = r.millis {
        out.push_str(&format!(" in {ms} ms"));
    }
    out.push('\n');
    for c in &r.subchecks {
        out.push_str(&format!("  [{}] {} {}\n", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
    }
    for d in &r.first_diffs {
        out.push_str(&format!("  diff {}: lhs {} rhs {}\n", d.monomial, d.lhs, d.rhs));
    }
    out
}

fn render_analytic(format: Format, reports: &[AnalyticReport]) -> Result<String, Box<dyn std::error::Error>> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                check: &'a str,
                passed: bool,
                max_deviation: f64,
                tol: f64,
                probes: usize,
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in reports {
                w.serialize(Row {
                    check: &r.check,
                    passed: r.passed,
                    max_deviation: r.max_deviation,
                    tol: r.tol,
                    probes: r.probes.len(),
                })?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => reports
            .iter()
            .map(|r| {
                format!(
                    "{:<22} {:<4} max deviation {:.3e} (tol {:.0e})\n",
                    r.check,
                    if r.passed { "ok" } else { "FAIL" },
                    r.max_deviation,
                    r.tol
                )
            })
            .collect(),
    })
}

fn render_series(format: Format, s: &GradedSeries) -> Result<String, Box<dyn std::error::Error>> {
    Ok(match format {
        Format::Json => s.to_json(),
        Format::Text => format!("{s}\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header: Vec<String> = s.lattice().vars().to_vec();
            header.push("coeff".into());
            w.write_record(&header)?;
            for (e, c) in s.terms() {
                let mut rec: Vec<String> = e.0.iter().map(i64::to_string).collect();
                rec.push(c.to_string());
                w.write_record(&rec)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    })
}
