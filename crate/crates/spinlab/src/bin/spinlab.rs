//! Command-line front end: run verification suites, list the catalog, print
//! the instability certificate, and emit machine-readable reports.
//!
//! Exit codes: 0 all entries pass (or no entries), 1 at least one failure,
//! 2 usage or config error.

use clap::{Parser, Subcommand};
use spinlab::harness::{
    catalog_listing, emit_report, resolve_suite, run_suite, Report, Status, SuiteConfig,
};
use spinlab::sasaki::instability_certificate;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spinlab",
    about = "Numerical laboratory for spin geometry: Killing spinors, the Einstein operator, and Sasaki circle bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print one line per entry.
    Verify {
        /// Built-in suite name (`default`, `negative-control`) or a config path.
        suite: String,
        /// Multiply every entry tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
    /// List catalog spaces, operations, and built-in suites.
    List {
        /// What to list (only `catalog` is supported).
        what: String,
    },
    /// Print the product-base instability certificate.
    Certificate {
        #[arg(long)]
        p1: usize,
        #[arg(long)]
        p2: usize,
        /// Sample points for the numeric cross-check (p1 = p2 = 1 only).
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 84)]
        seed: u64,
    },
    /// Run a suite and write the report to a file.
    Report {
        /// Output format: json or csv.
        #[arg(long, default_value = "json")]
        format: String,
        /// Suite name or config path.
        #[arg(long, default_value = "default")]
        suite: String,
        /// Output path.
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

fn scaled(mut config: SuiteConfig, scale: f64) -> SuiteConfig {
    if scale != 1.0 {
        for e in &mut config.entries {
            e.tolerance *= scale;
        }
    }
    config
}

fn print_report(report: &Report) {
    for e in &report.entries {
        let status = match e.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Inconclusive => "inconclusive",
        };
        let note = e
            .note
            .as_deref()
            .map(|n| format!("  [{n}]"))
            .unwrap_or_default();
        println!(
            "{status:<12}  {:<28} {:<22} residual {}  tol {}  ({:.1} ms){note}",
            e.space, e.operation, e.residual, e.tolerance, e.wall_time_ms
        );
    }
    println!(
        "suite '{}' ({}): {} pass, {} fail, {} inconclusive of {}",
        report.suite,
        report.catalog_hash,
        report.summary.pass,
        report.summary.fail,
        report.summary.inconclusive,
        report.summary.total
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            suite,
            tolerance_scale,
        } => {
            let config = match resolve_suite(&suite) {
                Ok(c) => scaled(c, tolerance_scale),
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = run_suite(&config);
            print_report(&report);
            if report.has_failures() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::List { what } => {
            if what != "catalog" {
                eprintln!("unknown list target '{what}' (expected: catalog)");
                return ExitCode::from(2);
            }
            print!("{}", catalog_listing());
            ExitCode::SUCCESS
        }
        Command::Certificate {
            p1,
            p2,
            samples,
            seed,
        } => match instability_certificate(p1, p2, samples, seed) {
            Ok(cert) => {
                println!("p1 = {}, p2 = {}", cert.p1, cert.p2);
                println!("base quadratic form    : {}", cert.base_value);
                println!("lifted quadratic form  : {}", cert.lifted_value);
                println!("<h, h>                 : {}", cert.h_norm_sq);
                println!("Rayleigh quotient      : {}", cert.rayleigh_quotient);
                if let Some(n) = &cert.numeric {
                    println!(
                        "numeric cross-check    : base dev {:.3e}, lifted dev {:.3e} over {} samples",
                        n.base_quadratic_max_dev, n.lifted_quadratic_max_dev, n.samples
                    );
                }
                println!(
                    "verdict                : {}",
                    if cert.unstable { "UNSTABLE" } else { "stable" }
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("certificate error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Report {
            format,
            suite,
            out,
            tolerance_scale,
        } => {
            let config = match resolve_suite(&suite) {
                Ok(c) => scaled(c, tolerance_scale),
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = run_suite(&config);
            if let Err(e) = emit_report(&report, &format, &out) {
                eprintln!("report error: {e}");
                return ExitCode::from(2);
            }
            println!(
                "wrote {} ({} entries, {} fail)",
                out.display(),
                report.summary.total,
                report.summary.fail
            );
            if report.has_failures() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
