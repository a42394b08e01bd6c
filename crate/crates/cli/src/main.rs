//! `korder`: evaluate order derivatives of `K[s, x]` at `s = 1/2`, tabulate
//! them, run the verification suites and sum the `alpha_n` series.
//!
//! Data goes to stdout and diagnostics to stderr. Exit status is 0 on success,
//! 1 when `verify` finds a failing check, and 2 for bad input or numerical
//! failures such as quadrature non-convergence.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use korder::config::{Config, TOL_ENV_VAR};
use korder::derivatives::{k_half, k_jet_estimate, t_half, t_jet};
use korder::reference::{
    bessel_k, fd_order_derivative_with, richardson_derivative, OrderDerivativeRequest, Target,
};
use korder::verify::{run_suite, Suite};
use korder::zeta_link::{alpha_series_with, h_closed};
use korder::Error;

use output::{to_csv, to_json, AlphaReport, AlphaRow, CsvRow, EvalRecord, Format, ReportRow, TableRow};

#[derive(Debug, Parser)]
#[command(name = "korder", version, about = "Order derivatives of BesselK at s = 1/2")]
struct Cli {
    /// Quadrature tolerance.
    #[arg(long, global = true, env = TOL_ENV_VAR, value_parser = positive_real)]
    tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One derivative of T and K, checked against finite differences.
    Eval {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = positive_real)]
        x: f64,
    },
    /// Every order `0..=n-max` at every grid point.
    Table {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        /// Comma-separated, strictly increasing, positive.
        #[arg(long, value_parser = parse_grid)]
        x_grid: Grid,
    },
    /// Run a named suite of checks; exit 1 if any fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Partial sums of the alpha_n series with per-j terms.
    Alpha {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long, default_value_t = korder::config::DEFAULT.j_max, value_parser = clap::value_parser!(u64).range(1..))]
        j_max: u64,
    },
}

#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

fn positive_real(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(v) => Err(format!("expected a positive finite number, got {v}")),
        Err(e) => Err(format!("{s:?}: {e}")),
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let xs = s.split(',').map(positive_real).collect::<Result<Vec<_>, _>>()?;
    if xs.is_empty() {
        return Err("grid is empty".into());
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err("grid must be strictly increasing".into());
    }
    Ok(Grid(xs))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn emit<T: CsvRow + serde::Serialize>(format: Format, rows: &[T]) {
    match format {
        Format::Json => println!("{}", to_json(&rows)),
        Format::Csv => print!("{}", to_csv(rows)),
    }
}

/// Derivatives of `T` and `K` at one `x` for orders `0..=n_max`, as
/// `(t, k, k_error)` triples. Shared by `eval` and `table` so both print the
/// same bits.
fn derivative_rows(n_max: usize, x: f64, tol: f64) -> korder::Result<Vec<(f64, f64, f64)>> {
    let mut rows = vec![(t_half(x), k_half(x), 0.0)];
    if n_max > 0 {
        let (t, _) = t_jet(n_max, x, tol)?;
        let (k, k_err) = k_jet_estimate(n_max, x, tol)?;
        rows.extend((1..=n_max).map(|n| (t.values[n], k.values[n], k_err[n])));
    }
    Ok(rows)
}

fn cmd_eval(n: usize, x: f64, tol: f64, cfg: &Config, format: Format) -> korder::Result<ExitCode> {
    let (t, k, k_err) = derivative_rows(n, x, tol)?[n];
    let oracle = if n == 0 {
        Some(bessel_k(0.5, x)?)
    } else {
        match fd_order_derivative_with(OrderDerivativeRequest::new(n, x, Target::BesselK), cfg) {
            Ok(fd) => Some(fd.value),
            Err(e @ Error::LossOfSignificance { .. }) => {
                eprintln!("warning: no oracle value: {e}");
                None
            }
            Err(e) => return Err(e),
        }
    };
    let record = EvalRecord {
        n,
        x,
        t_derivative: t,
        k_derivative: k,
        k_error_estimate: k_err,
        oracle,
        rel_diff: oracle.map(|o| rel_diff(k, o)),
    };
    match format {
        Format::Json => println!("{}", to_json(&record)),
        Format::Csv => print!("{}", to_csv(&[record])),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(n_max: usize, grid: &Grid, tol: f64, format: Format) -> korder::Result<ExitCode> {
    let mut rows = Vec::new();
    for &x in &grid.0 {
        for (n, (t, k, err)) in derivative_rows(n_max, x, tol)?.into_iter().enumerate() {
            rows.push(TableRow { x, n, t_derivative: t, k_derivative: k, error_estimate: err });
        }
    }
    emit(format, &rows);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: Suite, tol: f64, format: Format) -> korder::Result<ExitCode> {
    let reports: Vec<ReportRow> = run_suite(suite, tol)?.into_iter().map(ReportRow::from).collect();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check_id.as_str()).collect();
    emit(format, &reports);
    if failed.is_empty() {
        eprintln!("{suite}: {} checks passed", reports.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{suite}: {} of {} checks failed: {}", failed.len(), reports.len(), failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

/// Narrows the finite-difference stencil so that, at order `n`, its outermost
/// points `1/2 +- (n/2) h0` stay inside `s > 0`, where `h` is defined.
fn comparator_config(n: usize, cfg: &Config) -> Config {
    let mut c = *cfg;
    c.fd_base_step = c.fd_base_step.min(0.4 / (n * n) as f64);
    c
}

fn cmd_alpha(n_max: usize, j_max: u64, tol: f64, cfg: &Config, format: Format) -> korder::Result<ExitCode> {
    let series = alpha_series_with(n_max, j_max, tol, cfg)?;
    let mut totals = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let comparator = if n == 0 {
            Some(h_closed(0.5)?)
        } else {
            match richardson_derivative(h_closed, 0.5, n, &comparator_config(n, cfg)) {
                Ok(fd) => Some(fd.value),
                Err(e @ Error::LossOfSignificance { .. }) => {
                    eprintln!("warning: no comparator for alpha_{n}: {e}");
                    None
                }
                Err(e) => return Err(e),
            }
        };
        let value = series.totals[n];
        totals.push(AlphaRow {
            j: None,
            n,
            value,
            tail_estimate: Some(series.tail_estimates[n]),
            comparator,
            rel_diff: comparator.map(|c| rel_diff(value, c)),
        });
    }
    let per_j: Vec<AlphaRow> = series
        .per_j
        .iter()
        .zip(1u64..)
        .flat_map(|(terms, j)| {
            terms.iter().enumerate().map(move |(n, &value)| AlphaRow {
                j: Some(j),
                n,
                value,
                tail_estimate: None,
                comparator: None,
                rel_diff: None,
            })
        })
        .collect();
    match format {
        Format::Json => println!("{}", to_json(&AlphaReport { n_max, j_max, totals, per_j })),
        Format::Csv => {
            let all: Vec<AlphaRow> = totals.into_iter().chain(per_j).collect();
            print!("{}", to_csv(&all));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = Config::from_env();
    if let Some(tol) = cli.tol {
        cfg.quad_tol = tol;
    }
    let tol = cfg.quad_tol;
    let result = match &cli.command {
        Command::Eval { n, x } => cmd_eval(*n, *x, tol, &cfg, cli.format),
        Command::Table { n_max, x_grid } => cmd_table(*n_max, x_grid, tol, cli.format),
        Command::Verify { suite } => cmd_verify(*suite, tol, cli.format),
        Command::Alpha { n_max, j_max } => cmd_alpha(*n_max, *j_max, tol, &cfg, cli.format),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
