//! Command-line front end: analyze a problem spec into a report, run the
//! verification suites, or print the polynomial comparison table.
//!
//! Exit codes: 0 success, 2 invalid input (spec validation, unknown suite,
//! degenerate polynomial), 3 numerical failure (solver iteration limit,
//! root finding).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use grunsky::analysis::{polynomial_comparison, run_analysis, ProblemSpec};
use grunsky::poly::Poly;
use grunsky::verify::{run_suite, Suite};
use grunsky::Error;

#[derive(Parser)]
#[command(name = "grunsky", version, about = "Grunsky operator workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a TOML problem spec and persist the report.
    Analyze {
        /// Problem specification file (TOML; see docs/formats.md).
        spec: PathBuf,
        /// Report output path; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the truncation sweep as a tab-separated table.
        #[arg(long)]
        convergence: Option<PathBuf>,
    },
    /// Run a property suite; nonzero exit on any violation.
    Verify {
        /// One of: grunsky, beltrami, extremal, schwarzian, domains, chain.
        suite: String,
        /// Seed for the randomized properties.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Compare polynomial quasiinvariant candidates side by side: largest
    /// Schwarzian pole coefficient, Grunsky norm of the inversion, and the
    /// exterior hyperbolic norm. Reports, never asserts agreement.
    Thm15 {
        /// Comma-separated coefficients a0,a1,... (each "x" or "x+yi").
        poly_spec: String,
        /// Grunsky truncation size.
        #[arg(long, default_value_t = 16)]
        matrix_size: usize,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Usage(_) | Error::Domain(_) | Error::Format(_) | Error::Construction(_) => 2,
        Error::IterationLimit { .. } | Error::Numeric(_) | Error::Io(_) => 3,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze {
            spec,
            output,
            convergence,
        } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Error::Usage(format!("cannot read spec {}: {e}", spec.display())))?;
            let spec = ProblemSpec::from_toml(&text)?;
            let report = run_analysis(&spec)?;
            let doc = report.to_toml()?;
            match output {
                Some(path) => std::fs::write(&path, doc)?,
                None => print!("{doc}"),
            }
            if let Some(path) = convergence {
                std::fs::write(&path, report.convergence_table())?;
            }
            Ok(())
        }
        Command::Verify { suite, seed } => {
            let suite = Suite::parse(&suite)
                .ok_or_else(|| Error::Usage(format!("unknown suite {suite:?}")))?;
            let checks = run_suite(suite, seed)?;
            let mut out = std::io::stdout().lock();
            let mut failures = 0usize;
            writeln!(out, "suite {} (seed {seed})", suite.name()).ok();
            writeln!(out, "{:<55} {:>12} {:>12}  status", "property", "measured", "bound").ok();
            for c in &checks {
                let status = if c.pass() { "pass" } else { "FAIL" };
                if !c.pass() {
                    failures += 1;
                }
                writeln!(
                    out,
                    "{:<55} {:>12.3e} {:>12.3e}  {status}",
                    c.name, c.measured, c.bound
                )
                .ok();
            }
            if failures > 0 {
                return Err(Error::Numeric(format!(
                    "{failures} propert{} violated",
                    if failures == 1 { "y" } else { "ies" }
                )));
            }
            Ok(())
        }
        Command::Thm15 {
            poly_spec,
            matrix_size,
        } => {
            let coeffs = parse_poly(&poly_spec)?;
            let p = Poly::new(coeffs);
            let cmp = polynomial_comparison(&p, matrix_size)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "polynomial degree {}", p.degree()).ok();
            if cmp.critical_points.is_empty() {
                writeln!(out, "no finite critical points").ok();
            } else {
                writeln!(out, "{:<44} {:>5} {:>10}", "critical point", "mult", "c_j").ok();
                for cp in &cmp.critical_points {
                    writeln!(
                        out,
                        "{:<44} {:>5} {:>10.4}",
                        format!("{:+.12} {:+.12}i", cp.location.re, cp.location.im),
                        cp.multiplicity,
                        cp.c2
                    )
                    .ok();
                }
            }
            writeln!(out, "max |c_j|                  = {:.12}", cmp.max_c2).ok();
            match &cmp.kappa {
                Some(est) => {
                    writeln!(
                        out,
                        "grunsky norm (N = {matrix_size}) = {:.12} (converged: {})",
                        est.value, est.converged
                    )
                    .ok();
                    if est.value > 0.0 && cmp.max_c2 > 0.0 {
                        writeln!(
                            out,
                            "ratio max|c_j| / norm      = {:.6}",
                            cmp.max_c2 / est.value
                        )
                        .ok();
                    }
                }
                None => {
                    writeln!(out, "grunsky norm unavailable").ok();
                }
            }
            writeln!(out, "interior hyperbolic norm   = {:.12}", cmp.b_norm_interior).ok();
            for note in &cmp.notes {
                writeln!(out, "note: {note}").ok();
            }
            Ok(())
        }
    }
}

fn parse_poly(spec: &str) -> Result<Vec<Complex64>, Error> {
    let coeffs: Result<Vec<Complex64>, Error> = spec
        .split(',')
        .map(|part| {
            let part = part.trim();
            Complex64::from_str(part)
                .or_else(|_| part.parse::<f64>().map(|re| Complex64::new(re, 0.0)))
                .map_err(|_| Error::Usage(format!("cannot parse coefficient {part:?}")))
        })
        .collect();
    let coeffs = coeffs?;
    if coeffs.len() < 2 {
        return Err(Error::Usage(
            "polynomial spec needs at least two coefficients a0,a1".into(),
        ));
    }
    Ok(coeffs)
}
