//! Command-line front end: runs the analytical, quadrature and Monte Carlo
//! secrecy pipelines over parameter sweeps and writes CSV curve data plus a
//! JSON sidecar with the fully resolved configuration.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use starsec::analytics::{self, EvalMethod, ProtocolMode, SecrecyResult};
use starsec::fading::{fit_user_gamma, CascadedStats};
use starsec::geometry::NetworkConfig;
use starsec::simulator::{self, SimOptions};

use config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration: exit code 2.
    Config(String),
    /// Numerical failure (non-convergent integral or series): exit code 3.
    Numerical(String),
    /// I/O trouble: exit code 1.
    Io(String),
}

impl From<starsec::Error> for CliError {
    fn from(e: starsec::Error) -> Self {
        match e {
            starsec::Error::Config(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "starsec",
    about = "Secrecy outage and average secrecy capacity curves for STAR-RIS-assisted NOMA downlinks",
    version
)]
struct Cli {
    /// TOML configuration file; omitted means the baseline defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override a config value, e.g. --set power.rho_b_db=90.
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,

    /// Random seed for the Monte Carlo method.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo trials per sweep point (overrides [simulation].trials).
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Worker threads (default: STARSEC_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output CSV path (default: <command>.csv).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Secrecy outage probability along a swept axis.
    SopCurve(CurveArgs),
    /// Average secrecy capacity along a swept axis.
    AscCurve(CurveArgs),
    /// Sweep the mode-operation parameter (T_s or beta_s) and flag the
    /// optimum of the chosen metric.
    SweepModeParam(SweepArgs),
    /// Cross-check the analytical, quadrature and Monte Carlo pipelines at
    /// the configured operating point.
    Validate,
    /// Empirical vs fitted channel-power CDFs of the user pair.
    ChannelCdf(ChannelCdfArgs),
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Swept quantity.
    #[arg(long, value_enum, default_value_t = Axis::RhoBDb)]
    axis: Axis,

    /// start:stop:steps (inclusive endpoints).
    #[arg(long, default_value = "60:120:13")]
    range: String,

    /// Comma-separated subset of analytic,quadrature,monte-carlo.
    #[arg(long, default_value = "analytic,monte-carlo")]
    methods: String,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// start:stop:steps over the mode parameter in [0, 1].
    #[arg(long, default_value = "0:1:21")]
    range: String,

    /// Metric whose optimum is flagged.
    #[arg(long, value_enum, default_value_t = Metric::SopPair)]
    metric: Metric,

    #[arg(long, default_value = "analytic")]
    methods: String,
}

#[derive(Args, Debug)]
struct ChannelCdfArgs {
    /// Number of grid points in the table.
    #[arg(long, default_value_t = 200)]
    points: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Axis {
    /// Transmit SNR toward the users, in dB.
    RhoBDb,
    /// Number of surface elements.
    N,
    /// Mode-operation parameter of the strong user.
    ParamS,
    /// Radius of the user disc in meters.
    RU,
}

impl Axis {
    fn column(&self) -> &'static str {
        match self {
            Axis::RhoBDb => "rho_b_db",
            Axis::N => "n_elements",
            Axis::ParamS => "param_s",
            Axis::RU => "r_u_m",
        }
    }

    fn apply(&self, file: &mut FileConfig, v: f64) {
        match self {
            Axis::RhoBDb => file.power.rho_b_db = v,
            Axis::N => file.star_ris.n_elements = v.round().max(1.0) as usize,
            Axis::ParamS => file.star_ris.param_s = v,
            Axis::RU => file.geometry.r_u_m = v,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Metric {
    SopPair,
    SopStrong,
    SopWeak,
    AscPair,
    AscStrong,
    AscWeak,
}

impl Metric {
    fn is_sop(&self) -> bool {
        matches!(self, Metric::SopPair | Metric::SopStrong | Metric::SopWeak)
    }

    fn column(&self) -> &'static str {
        match self {
            Metric::SopPair => "sop_pair",
            Metric::SopStrong => "sop_s",
            Metric::SopWeak => "sop_w",
            Metric::AscPair => "asc_pair",
            Metric::AscStrong => "asc_s",
            Metric::AscWeak => "asc_w",
        }
    }

    fn extract(&self, r: &SecrecyResult) -> Option<f64> {
        match self {
            Metric::SopPair => r.sop_pair,
            Metric::SopStrong => r.sop_strong,
            Metric::SopWeak => r.sop_weak,
            Metric::AscPair => r.asc_pair,
            Metric::AscStrong => r.asc_strong,
            Metric::AscWeak => r.asc_weak,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MethodSel {
    Analytic,
    Quadrature,
    MonteCarlo,
}

impl MethodSel {
    fn suffix(&self) -> &'static str {
        match self {
            MethodSel::Analytic => "analytic",
            MethodSel::Quadrature => "quad",
            MethodSel::MonteCarlo => "mc",
        }
    }
}

fn parse_methods(spec: &str) -> Result<Vec<MethodSel>, CliError> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m = match item {
            "analytic" | "adaptive" => MethodSel::Analytic,
            "quadrature" | "quad" => MethodSel::Quadrature,
            "monte-carlo" | "mc" => MethodSel::MonteCarlo,
            other => {
                return Err(CliError::Config(format!(
                    "unknown method '{other}' (expected analytic, quadrature, monte-carlo)"
                )))
            }
        };
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("at least one method is required".into()));
    }
    Ok(out)
}

fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "range '{spec}' is not start:stop:steps"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("bad range start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad range stop '{}'", parts[1])))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Config(format!("bad range steps '{}'", parts[2])))?;
    if steps < 2 {
        return Err(CliError::Config("sweep needs at least 2 steps".into()));
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps).map(|i| start + h * i as f64).collect())
}

/// Formats a float for CSV output; None becomes the NA sentinel.
fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x}"),
        _ => "NA".to_string(),
    }
}

struct PointResults {
    axis_value: f64,
    per_method: Vec<(MethodSel, SecrecyResult)>,
}

/// Evaluates one sweep point with every requested method.
fn evaluate_point(
    file: &FileConfig,
    methods: &[MethodSel],
    want_sop: bool,
    trials: usize,
    seed: u64,
) -> Result<Vec<(MethodSel, SecrecyResult)>, CliError> {
    let cfg: NetworkConfig = file.network()?;
    let mode: ProtocolMode = file.protocol()?;
    let stats: CascadedStats = fit_user_gamma(&cfg.fading, cfg.n_elements)?;
    let mut out = Vec::with_capacity(methods.len());
    for &m in methods {
        let r = match m {
            MethodSel::Analytic => {
                if want_sop {
                    analytics::sop(&mode, &cfg, &stats, EvalMethod::AdaptiveIntegral)?
                } else {
                    analytics::asc(&mode, &cfg, &stats, EvalMethod::AdaptiveIntegral)?
                }
            }
            MethodSel::Quadrature => {
                let order = file.numerics.quadrature_order;
                if want_sop {
                    analytics::sop(&mode, &cfg, &stats, EvalMethod::quadrature(order))?
                } else {
                    analytics::asc(&mode, &cfg, &stats, EvalMethod::quadrature(order))?
                }
            }
            MethodSel::MonteCarlo => {
                let opts = SimOptions {
                    seed,
                    shared_first_hop: file.simulation.shared_first_hop,
                };
                if want_sop {
                    simulator::estimate_sop(&cfg, &mode, trials, &opts)?
                } else {
                    simulator::estimate_asc(&cfg, &mode, trials, &opts)?
                }
            }
        };
        out.push((m, r));
    }
    Ok(out)
}

fn metric_columns(want_sop: bool) -> [(&'static str, fn(&SecrecyResult) -> Option<f64>); 3] {
    if want_sop {
        [
            ("sop_s", |r: &SecrecyResult| r.sop_strong),
            ("sop_w", |r: &SecrecyResult| r.sop_weak),
            ("sop_pair", |r: &SecrecyResult| r.sop_pair),
        ]
    } else {
        [
            ("asc_s", |r: &SecrecyResult| r.asc_strong),
            ("asc_w", |r: &SecrecyResult| r.asc_weak),
            ("asc_pair", |r: &SecrecyResult| r.asc_pair),
        ]
    }
}

fn ci_columns(want_sop: bool) -> [(&'static str, fn(&SecrecyResult) -> Option<f64>); 3] {
    if want_sop {
        [
            ("sop_s_mc_ci", |r: &SecrecyResult| {
                r.ci_halfwidth.map(|c| c.sop_strong)
            }),
            ("sop_w_mc_ci", |r: &SecrecyResult| {
                r.ci_halfwidth.map(|c| c.sop_weak)
            }),
            ("sop_pair_mc_ci", |r: &SecrecyResult| {
                r.ci_halfwidth.map(|c| c.sop_pair)
            }),
        ]
    } else {
        [
            ("asc_s_mc_ci", |r: &SecrecyResult| {
                r.ci_halfwidth.map(|c| c.asc_strong)
            }),
            ("asc_w_mc_ci", |r: &SecrecyResult| {
                r.ci_halfwidth.map(|c| c.asc_weak)
            }),
            ("asc_pair_mc_ci", |r: &SecrecyResult| {
                r.ci_halfwidth.map(|c| c.asc_pair)
            }),
        ]
    }
}

/// A Monte Carlo SOP point below the trial budget's resolution is masked.
fn masked(m: MethodSel, r: &SecrecyResult, v: Option<f64>) -> Option<f64> {
    if m == MethodSel::MonteCarlo && r.unresolved {
        None
    } else {
        v
    }
}

fn run_curve(
    cli: &Cli,
    args: &CurveArgs,
    want_sop: bool,
    out_default: &str,
) -> Result<(), CliError> {
    let methods = parse_methods(&args.methods)?;
    let values = parse_range(&args.range)?;
    let base = FileConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let trials = cli.trials.unwrap_or(base.simulation.trials);
    // validate the base configuration up front so bad invariants fail fast
    base.network()?;
    base.protocol()?;

    let points: Vec<PointResults> = values
        .par_iter()
        .map(|&v| -> Result<PointResults, CliError> {
            let mut file = base.clone();
            args.axis.apply(&mut file, v);
            Ok(PointResults {
                axis_value: v,
                per_method: evaluate_point(&file, &methods, want_sop, trials, cli.seed)?,
            })
        })
        .collect::<Result<_, _>>()?;

    let out_path = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{out_default}.csv")));
    let mut header = vec![args.axis.column().to_string()];
    for &m in &methods {
        for (name, _) in metric_columns(want_sop) {
            header.push(format!("{name}_{}", m.suffix()));
        }
        if m == MethodSel::MonteCarlo {
            for (name, _) in ci_columns(want_sop) {
                header.push(name.to_string());
            }
        }
    }
    let mut w = csv::Writer::from_path(&out_path)?;
    w.write_record(&header)?;
    for p in &points {
        let mut row = vec![format!("{}", p.axis_value)];
        for (m, r) in &p.per_method {
            for (_, getter) in metric_columns(want_sop) {
                row.push(cell(masked(*m, r, getter(r))));
            }
            if *m == MethodSel::MonteCarlo {
                for (_, getter) in ci_columns(want_sop) {
                    row.push(cell(getter(r)));
                }
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    write_sidecar(&out_path, cli, &base, trials, Some((args.axis, &values)))?;
    println!("wrote {} rows to {}", points.len(), out_path.display());
    Ok(())
}

fn run_sweep_mode_param(cli: &Cli, args: &SweepArgs) -> Result<(), CliError> {
    let methods = parse_methods(&args.methods)?;
    let values = parse_range(&args.range)?;
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(CliError::Config(
            "mode parameter sweep must stay within [0, 1]".into(),
        ));
    }
    let base = FileConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let trials = cli.trials.unwrap_or(base.simulation.trials);
    base.network()?;
    base.protocol()?;
    let want_sop = args.metric.is_sop();

    let points: Vec<PointResults> = values
        .par_iter()
        .map(|&v| -> Result<PointResults, CliError> {
            let mut file = base.clone();
            file.star_ris.param_s = v;
            Ok(PointResults {
                axis_value: v,
                per_method: evaluate_point(&file, &methods, want_sop, trials, cli.seed)?,
            })
        })
        .collect::<Result<_, _>>()?;

    // optimum of the requested metric under the first method
    let lead: Vec<Option<f64>> = points
        .iter()
        .map(|p| args.metric.extract(&p.per_method[0].1))
        .collect();
    let best = if args.metric.is_sop() {
        lead.iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|x| (i, x)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    } else {
        lead.iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|x| (i, x)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
    .map(|(i, _)| i);

    let out_path = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("sweep-mode-param.csv"));
    let mut header = vec!["param_s".to_string()];
    for &m in &methods {
        for (name, _) in metric_columns(want_sop) {
            header.push(format!("{name}_{}", m.suffix()));
        }
        if m == MethodSel::MonteCarlo {
            for (name, _) in ci_columns(want_sop) {
                header.push(name.to_string());
            }
        }
    }
    header.push("optimal".to_string());
    let mut w = csv::Writer::from_path(&out_path)?;
    w.write_record(&header)?;
    for (i, p) in points.iter().enumerate() {
        let mut row = vec![format!("{}", p.axis_value)];
        for (m, r) in &p.per_method {
            for (_, getter) in metric_columns(want_sop) {
                row.push(cell(masked(*m, r, getter(r))));
            }
            if *m == MethodSel::MonteCarlo {
                for (_, getter) in ci_columns(want_sop) {
                    row.push(cell(getter(r)));
                }
            }
        }
        row.push(if Some(i) == best { "1" } else { "0" }.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    write_sidecar(&out_path, cli, &base, trials, Some((Axis::ParamS, &values)))?;
    if let Some(i) = best {
        println!(
            "optimal param_s = {} ({} = {})",
            values[i],
            args.metric.column(),
            cell(lead[i])
        );
    }
    println!("wrote {} rows to {}", points.len(), out_path.display());
    Ok(())
}

fn run_validate(cli: &Cli) -> Result<(), CliError> {
    let base = FileConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let trials = cli.trials.unwrap_or(base.simulation.trials);
    let cfg = base.network()?;
    let mode = base.protocol()?;
    let stats = fit_user_gamma(&cfg.fading, cfg.n_elements)?;
    let order = base.numerics.quadrature_order;
    let opts = SimOptions {
        seed: cli.seed,
        shared_first_hop: base.simulation.shared_first_hop,
    };

    let sop_a = analytics::sop(&mode, &cfg, &stats, EvalMethod::AdaptiveIntegral)?;
    let sop_q = analytics::sop(&mode, &cfg, &stats, EvalMethod::quadrature(order))?;
    let sop_m = simulator::estimate_sop(&cfg, &mode, trials, &opts)?;
    let asc_a = analytics::asc(&mode, &cfg, &stats, EvalMethod::AdaptiveIntegral)?;
    let asc_q = analytics::asc(&mode, &cfg, &stats, EvalMethod::quadrature(order))?;
    let asc_m = simulator::estimate_asc(&cfg, &mode, trials, &opts)?;

    println!(
        "validate: {:?} protocol, param_s = {}, rho_b = {:.1} dB, N = {}, {} trials, seed {}",
        mode.kind,
        mode.param_s,
        starsec::geometry::linear_to_db(cfg.rho_b),
        cfg.n_elements,
        trials,
        cli.seed
    );
    println!(
        "{:<10} {:>14} {:>14} {:>14} {:>12} {:>12}",
        "metric", "analytic", "quadrature", "monte-carlo", "mc_ci", "|an-mc|"
    );
    let rows: Vec<(&str, Option<f64>, Option<f64>, Option<f64>, Option<f64>)> = vec![
        (
            "sop_s",
            sop_a.sop_strong,
            sop_q.sop_strong,
            sop_m.sop_strong,
            sop_m.ci_halfwidth.map(|c| c.sop_strong),
        ),
        (
            "sop_w",
            sop_a.sop_weak,
            sop_q.sop_weak,
            sop_m.sop_weak,
            sop_m.ci_halfwidth.map(|c| c.sop_weak),
        ),
        (
            "sop_pair",
            sop_a.sop_pair,
            sop_q.sop_pair,
            sop_m.sop_pair,
            sop_m.ci_halfwidth.map(|c| c.sop_pair),
        ),
        (
            "asc_s",
            asc_a.asc_strong,
            asc_q.asc_strong,
            asc_m.asc_strong,
            asc_m.ci_halfwidth.map(|c| c.asc_strong),
        ),
        (
            "asc_w",
            asc_a.asc_weak,
            asc_q.asc_weak,
            asc_m.asc_weak,
            asc_m.ci_halfwidth.map(|c| c.asc_weak),
        ),
        (
            "asc_pair",
            asc_a.asc_pair,
            asc_q.asc_pair,
            asc_m.asc_pair,
            asc_m.ci_halfwidth.map(|c| c.asc_pair),
        ),
    ];
    let sci = |v: Option<f64>| match v {
        Some(x) if x.is_finite() => format!("{x:.4e}"),
        _ => "NA".to_string(),
    };
    let mut csv_rows = Vec::new();
    for (name, a, q, m, ci) in rows {
        let delta = match (a, m) {
            (Some(a), Some(m)) => Some((a - m).abs()),
            _ => None,
        };
        println!(
            "{:<10} {:>14} {:>14} {:>14} {:>12} {:>12}",
            name,
            sci(a),
            sci(q),
            sci(m),
            sci(ci),
            sci(delta)
        );
        csv_rows.push((name.to_string(), a, q, m, ci, delta));
    }
    let out_path = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("validate.csv"));
    let mut w = csv::Writer::from_path(&out_path)?;
    w.write_record([
        "metric",
        "analytic",
        "quadrature",
        "monte_carlo",
        "mc_ci",
        "abs_delta_analytic_mc",
    ])?;
    for (name, a, q, m, ci, d) in csv_rows {
        w.write_record([name, cell(a), cell(q), cell(m), cell(ci), cell(d)])?;
    }
    w.flush()?;
    write_sidecar(&out_path, cli, &base, trials, None)?;
    println!("wrote {}", out_path.display());
    Ok(())
}

fn run_channel_cdf(cli: &Cli, args: &ChannelCdfArgs) -> Result<(), CliError> {
    let base = FileConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let trials = cli.trials.unwrap_or(base.simulation.trials).max(10_000);
    let cfg = base.network()?;
    let stats = fit_user_gamma(&cfg.fading, cfg.n_elements)?;
    let opts = SimOptions {
        seed: cli.seed,
        shared_first_hop: base.simulation.shared_first_hop,
    };
    let rows = simulator::empirical_channel_cdf(&cfg, trials, args.points, &opts)?;
    let out_path = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("channel-cdf.csv"));
    let mut w = csv::Writer::from_path(&out_path)?;
    w.write_record([
        "x",
        "f_strong_emp",
        "f_weak_emp",
        "f_unordered_emp",
        "f_strong_fit",
        "f_weak_fit",
        "f_unordered_fit",
    ])?;
    let mut max_dev: f64 = 0.0;
    for r in &rows {
        let f_hat = starsec::geometry::unordered_user_cdf(r.x, &stats, &cfg)?;
        let (fs, fw) = starsec::geometry::ordered_from_unordered(f_hat);
        max_dev = max_dev
            .max((fs - r.f_strong).abs())
            .max((fw - r.f_weak).abs());
        w.write_record([
            format!("{}", r.x),
            format!("{}", r.f_strong),
            format!("{}", r.f_weak),
            format!("{}", r.f_unordered),
            format!("{fs}"),
            format!("{fw}"),
            format!("{f_hat}"),
        ])?;
    }
    w.flush()?;
    write_sidecar(&out_path, cli, &base, trials, None)?;
    println!(
        "wrote {} rows to {} (max |empirical - fit| deviation {max_dev:.4})",
        rows.len(),
        out_path.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    command: String,
    seed: u64,
    trials: usize,
    axis: Option<SidecarAxis>,
    config: &'a FileConfig,
}

#[derive(Serialize)]
struct SidecarAxis {
    name: String,
    values: Vec<f64>,
}

fn write_sidecar(
    out_path: &std::path::Path,
    cli: &Cli,
    base: &FileConfig,
    trials: usize,
    axis: Option<(Axis, &[f64])>,
) -> Result<(), CliError> {
    let sidecar = Sidecar {
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        seed: cli.seed,
        trials,
        axis: axis.map(|(a, values)| SidecarAxis {
            name: a.column().to_string(),
            values: values.to_vec(),
        }),
        config: base,
    };
    let json_path = out_path.with_extension("json");
    let text = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| CliError::Io(format!("sidecar serialization: {e}")))?;
    std::fs::write(&json_path, text)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads.or_else(|| {
        std::env::var("STARSEC_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    }) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::SopCurve(args) => run_curve(cli, args, true, "sop-curve"),
        Command::AscCurve(args) => run_curve(cli, args, false, "asc-curve"),
        Command::SweepModeParam(args) => run_sweep_mode_param(cli, args),
        Command::Validate => run_validate(cli),
        Command::ChannelCdf(args) => run_channel_cdf(cli, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(1)
        }
    }
}

