mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use emit::{json_bytes, write_output, Cell, Format, Table};
use qwalk_core::asymptotics::{
    asymptotic_constant, extract_coefficients, pinned_constant, tail_fit, tau_tail_constant,
    tau_tail_constant_from_transfer, TailFit,
};
use qwalk_core::genfun::{h_parts, h_parts_adaptive, HOptions};
use qwalk_core::validate::{run_criterion, Suite};
use qwalk_core::voter::{estimate_distribution, BlockConfig, DEFAULT_CAP};
use qwalk_core::walk::{dp_absorption, dp_absorption_exact, AbsorptionTable, Axis, LatticePoint};

#[derive(Parser, Debug)]
#[command(name = "qwalk", version, about = "Absorption laws of the voter-model quarter-plane walk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Clone, Copy)]
struct Start {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    x0: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    y0: u32,
}

impl Start {
    fn point(self) -> LatticePoint {
        LatticePoint::new(self.x0, self.y0)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Absorption table by dynamic programming.
    Dp {
        #[command(flatten)]
        start: Start,
        #[arg(long)]
        kmax: usize,
        /// Exact rational arithmetic (kmax ≤ 200).
        #[arg(long)]
        exact: bool,
        /// Emit site-resolved hits instead of the per-step table.
        #[arg(long)]
        sites: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo law of the Heaviside hitting time.
    Simulate {
        /// Block sizes n1,m1[,n2,m2,...].
        #[arg(long, value_delimiter = ',', required = true)]
        config: Vec<u64>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Largest hitting time tabulated in the pmf.
        #[arg(long, default_value_t = 100)]
        kmax: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate h = h1 + h2 + h3 at complex points.
    Eval {
        /// Evaluation point(s) x, e.g. 1, -0.5+0.2i.
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        x: Vec<Complex64>,
        /// Evaluation point(s) z.
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Vec<Complex64>,
        #[command(flatten)]
        start: Start,
        /// Fixed quadrature order n (compared against 2n); adaptive when omitted.
        #[arg(long)]
        quad_order: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Taylor coefficients of h(1, z) by contour extraction, against DP.
    Coeffs {
        #[command(flatten)]
        start: Start,
        #[arg(long, default_value_t = 0.9)]
        r: f64,
        #[arg(long = "M", alias = "m", default_value_t = 4096)]
        m: usize,
        /// Largest k reported.
        #[arg(long, default_value_t = 64)]
        kmax: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Power-law fits of the DP tails.
    Asympt {
        #[command(flatten)]
        start: Start,
        #[arg(long, default_value_t = 2000)]
        kmax: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the numbered acceptance checks.
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Analytic,
    Oracle,
    Mc,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Analytic => Suite::Analytic,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Mc => Suite::Mc,
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<Complex64>()
        .map_err(|_| format!("not a complex number: {s:?} (expected forms like 0.5, -0.3+0.2i, 2i)"))
}

/// A failure of the run itself, as opposed to a failed validation.
enum Failure {
    /// Parameters rejected by the computation (exit 2).
    Usage(anyhow::Error),
    /// I/O and other runtime errors (exit 1).
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // Results never depend on the worker count.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether every requested check passed.
fn dispatch(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Dp {
            start,
            kmax,
            exact,
            sites,
            output,
        } => {
            let table = if exact {
                let t = dp_absorption_exact(start.point(), kmax, sites).map_err(usage)?;
                if sites {
                    site_table(&t, |p| Cell::Text(p.to_string()))
                } else {
                    step_table(&t, |p| Cell::Text(p.to_string()))
                }
            } else {
                let t = dp_absorption(start.point(), kmax, sites).map_err(usage)?;
                if sites {
                    site_table(&t, |&p| Cell::Float(p))
                } else {
                    step_table(&t, |&p| Cell::Float(p))
                }
            };
            emit_table(&table, &output, Format::Csv)
        }
        Command::Simulate {
            config,
            trials,
            seed,
            cap,
            kmax,
            output,
        } => {
            if config.len() % 2 != 0 {
                return Err(usage(anyhow::anyhow!(
                    "--config needs an even number of block sizes, got {}",
                    config.len()
                )));
            }
            if cap == 0 {
                return Err(usage(anyhow::anyhow!("--cap must be at least 1")));
            }
            let blocks = config.chunks(2).map(|c| (c[0], c[1])).collect();
            let cfg = BlockConfig::new(blocks).map_err(usage)?;
            let est = estimate_distribution(&cfg, trials, seed, kmax, cap).map_err(usage)?;
            let summary = est.summary();
            match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    write_output(&json_bytes(&summary)?, output.out.as_deref())?;
                }
                Format::Csv => {
                    let mut t = Table::new(vec!["k", "prob"]);
                    for (k, p) in summary.pmf {
                        t.push(vec![Cell::Int(k as i64), p.into()]);
                    }
                    write_output(&t.to_bytes(Format::Csv)?, output.out.as_deref())?;
                }
            }
            Ok(true)
        }
        Command::Eval {
            x,
            z,
            start,
            quad_order,
            output,
        } => {
            let mut t = Table::new(vec![
                "x_re", "x_im", "z_re", "z_im", "h1_re", "h1_im", "h2_re", "h2_im", "h3_re",
                "h3_im", "h_re", "h_im", "error_estimate",
            ]);
            for &xv in &x {
                for &zv in &z {
                    let parts = match quad_order {
                        Some(n) if n >= 1 => h_parts(xv, zv, start.point(), n),
                        Some(_) => return Err(usage(anyhow::anyhow!("--quad-order must be positive"))),
                        None => h_parts_adaptive(xv, zv, start.point(), &HOptions::default()),
                    }
                    .map_err(usage)?;
                    let total = parts.total();
                    let mut row: Vec<Cell> = Vec::new();
                    for v in [xv, zv, parts.h1.value, parts.h2.value, parts.h3.value, total.value] {
                        row.push(v.re.into());
                        row.push(v.im.into());
                    }
                    row.push(total.error_estimate.into());
                    t.push(row);
                }
            }
            emit_table(&t, &output, Format::Csv)
        }
        Command::Coeffs {
            start,
            r,
            m,
            kmax,
            output,
        } => {
            let series = extract_coefficients(start.point(), r, m).map_err(usage)?;
            let dp = dp_absorption(start.point(), kmax, false).map_err(usage)?;
            let mut t = Table::new(vec!["k", "p_dp", "p_extracted", "rel_err", "reliable"]);
            for k in 0..=kmax.min(m - 1) {
                let (p, c) = (dp.p_s[k], series.coefficients[k]);
                let rel = if p > 0.0 { (c - p).abs() / p } else { (c - p).abs() };
                t.push(vec![
                    k.into(),
                    p.into(),
                    c.into(),
                    rel.into(),
                    Cell::Text(series.is_reliable(k).to_string()),
                ]);
            }
            emit_table(&t, &output, Format::Csv)
        }
        Command::Asympt {
            start,
            kmax,
            output,
        } => {
            let report = asymptotic_report(start.point(), kmax).map_err(usage)?;
            match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    write_output(&json_bytes(&report)?, output.out.as_deref())?;
                }
                Format::Csv => {
                    let mut t = Table::new(vec!["quantity", "value"]);
                    for (name, v) in report.flat() {
                        t.push(vec![name.into(), v.into()]);
                    }
                    write_output(&t.to_bytes(Format::Csv)?, output.out.as_deref())?;
                }
            }
            Ok(true)
        }
        Command::Validate { suite, output } => {
            let mut outcomes = Vec::new();
            for id in Suite::from(suite).criteria() {
                let o = run_criterion(id);
                eprintln!("{o}");
                outcomes.push(o);
            }
            let all = outcomes.iter().all(|o| o.passed);
            match output.format {
                Some(Format::Json) => {
                    write_output(&json_bytes(&outcomes)?, output.out.as_deref())?;
                }
                Some(Format::Csv) => {
                    let mut t = Table::new(vec!["id", "title", "passed", "detail"]);
                    for o in &outcomes {
                        t.push(vec![
                            Cell::Int(o.id as i64),
                            o.title.into(),
                            Cell::Text(o.passed.to_string()),
                            o.detail.clone().into(),
                        ]);
                    }
                    write_output(&t.to_bytes(Format::Csv)?, output.out.as_deref())?;
                }
                None => {
                    let text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
                    write_output(text.as_bytes(), output.out.as_deref())?;
                }
            }
            Ok(all)
        }
    }
}

fn emit_table(t: &Table, output: &Output, default: Format) -> Result<bool, Failure> {
    let bytes = t.to_bytes(output.format.unwrap_or(default))?;
    write_output(&bytes, output.out.as_deref())?;
    Ok(true)
}

fn step_table<P>(t: &AbsorptionTable<P>, cell: impl Fn(&P) -> Cell) -> Table {
    let mut out = Table::new(vec!["k", "p_S", "p_T", "p_tau", "survival"]);
    for k in 0..=t.horizon {
        out.push(vec![
            k.into(),
            cell(&t.p_s[k]),
            cell(&t.p_t[k]),
            cell(&t.p_tau[k]),
            cell(&t.survival[k]),
        ]);
    }
    out
}

fn site_table<P>(t: &AbsorptionTable<P>, cell: impl Fn(&P) -> Cell) -> Table {
    let mut out = Table::new(vec!["k", "axis", "index", "prob"]);
    if let Some(sites) = &t.sites {
        for (k, axis, i, p) in sites.records() {
            let axis = match axis {
                Axis::X => "x",
                Axis::Y => "y",
            };
            out.push(vec![k.into(), axis.into(), i.into(), cell(p)]);
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct TauTail {
    value_at_kmax: f64,
    stated_constant: f64,
    transferred_constant: f64,
    fit: TailFit,
}

#[derive(Debug, Serialize)]
struct AsymptoticReport {
    x0: u32,
    y0: u32,
    kmax: usize,
    expected_constant: f64,
    ratio_at_kmax: f64,
    fit: TailFit,
    /// Constant with the exponent held at 5/2.
    pinned_constant: f64,
    tau_tail: TauTail,
}

impl AsymptoticReport {
    fn flat(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("expected_constant", self.expected_constant),
            ("ratio_at_kmax", self.ratio_at_kmax),
            ("slope", self.fit.slope),
            ("fitted_constant", self.fit.constant),
            ("fit_residual", self.fit.residual),
            ("pinned_constant", self.pinned_constant),
            ("tau_tail_value_at_kmax", self.tau_tail.value_at_kmax),
            ("tau_tail_stated_constant", self.tau_tail.stated_constant),
            ("tau_tail_transferred_constant", self.tau_tail.transferred_constant),
            ("tau_tail_slope", self.tau_tail.fit.slope),
        ]
    }
}

fn asymptotic_report(start: LatticePoint, kmax: usize) -> Result<AsymptoticReport> {
    let table = dp_absorption(start, kmax, false)?;
    let k_min = (kmax / 4).max(1);
    let fit = tail_fit(&table.p_s, k_min, kmax)?;
    let pinned = pinned_constant(&table.p_s, k_min, kmax, 2.5)?;
    let tail = table.tail();
    let tau_fit = tail_fit(&tail, k_min, kmax)?;
    let (x0, y0) = (start.x, start.y);
    let c = asymptotic_constant(x0, y0);
    let kf = kmax as f64;
    Ok(AsymptoticReport {
        x0,
        y0,
        kmax,
        expected_constant: c,
        ratio_at_kmax: table.p_s[kmax] * kf.powf(2.5) / c,
        fit,
        pinned_constant: pinned,
        tau_tail: TauTail {
            value_at_kmax: tail[kmax] * kf.powf(1.5),
            stated_constant: tau_tail_constant(x0, y0),
            transferred_constant: tau_tail_constant_from_transfer(x0, y0),
            fit: tau_fit,
        },
    })
}
