//! Command-line front end: configuration files, dispatch to the numerical
//! modules, and CSV/JSON export.

mod config;

pub use config::{
    parse_angle, parse_range, AngleSpec, BandsConfig, CommandKind, GridConfig, LambdaSpec, ModelConfig, OutputConfig,
    Preset, QuenchConfig, RunConfig,
};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::band_spectra::{band_cut, find_weyl_points, gap_closures, Axis};
use crate::error::Error;
use crate::quantum_geometry::{
    curvature_field, metric_field, metric_row, qgt_perturbation, signed_curvature, tensor_curvature_estimated,
    tensor_phase_form, MapGrid, CURVATURE_COLUMNS, METRIC_COLUMNS,
};
use crate::quench_sim::{estimate_metric, evolve_family, quench_metric_field, QuenchSchedule};
use crate::qudit_models::{Angles, Coord, MonopoleFamily};
use crate::sweep::{Format, Metadata, SweepResult};
use crate::topo_invariants::{dd_invariant_for, lambda_sweep, Method, MetricSource, Rule, SWEEP_COLUMNS};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "TENSORMONO_OUT_DIR";

/// Failure of a run, mapped onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Numerical(_) => "numerical",
            RunError::Io(_) => "io",
        }
    }

    /// Single-line JSON record for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({"error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code()}).to_string()
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => RunError::Config(m),
            other => RunError::Numerical(other.to_string()),
        }
    }
}

type RunResult<T> = std::result::Result<T, RunError>;

fn family(config: &RunConfig, lambda: f64) -> MonopoleFamily {
    let f = MonopoleFamily::unit(lambda);
    if config.model.anti_monopole { f.anti() } else { f }
}

fn metric_source(config: &RunConfig) -> RunResult<MetricSource> {
    Ok(match config.model.method {
        Method::Analytic => MetricSource::Analytic,
        Method::Perturbation => MetricSource::Perturbation,
        Method::Quench => MetricSource::Quench(config.quench.schedule()?),
    })
}

fn map_grid(config: &RunConfig) -> RunResult<MapGrid> {
    Ok(MapGrid::new(config.grid.n_theta1, config.grid.n_theta2, config.grid.phi.value()?)?)
}

/// Per-point map evaluation in parallel, kept in grid order. Degenerate
/// points become NaN rows.
fn point_map<F>(grid: &MapGrid, columns: &[&str], f: F) -> RunResult<SweepResult>
where
    F: Fn(&Angles) -> crate::Result<Vec<f64>> + Sync,
{
    let rows: Vec<crate::Result<Vec<f64>>> = grid.points().par_iter().map(&f).collect();
    let mut table = SweepResult::new(columns.iter().copied());
    for (a, row) in grid.points().iter().zip(rows) {
        let row = match row {
            Ok(r) => r,
            Err(Error::Degenerate { .. }) => {
                let mut r = vec![f64::NAN; columns.len()];
                r[0] = a[0];
                r[1] = a[1];
                r
            }
            Err(e) => return Err(e.into()),
        };
        table.push(row)?;
    }
    Ok(table)
}

fn run_metric(config: &RunConfig) -> RunResult<SweepResult> {
    let grid = map_grid(config)?;
    let fam = family(config, config.model.lambda);
    match config.model.method {
        Method::Analytic => Ok(metric_field(&grid, &fam)?),
        Method::Perturbation => point_map(&grid, &METRIC_COLUMNS, |a| {
            if grid.is_pole(a) {
                return Ok(metric_row(a, &crate::quantum_geometry::metric_analytic_offset(&fam, a)?.metric()));
            }
            Ok(metric_row(a, &qgt_perturbation(&fam, a)?.metric()))
        }),
        Method::Quench => {
            if config.model.anti_monopole {
                return Err(RunError::Config("quench metric maps use the monopole family".into()));
            }
            Ok(quench_metric_field(&grid, &config.quench.schedule()?, config.model.lambda)?)
        }
    }
}

fn run_curvature(config: &RunConfig) -> RunResult<SweepResult> {
    let grid = map_grid(config)?;
    let fam = family(config, config.model.lambda);
    match config.model.method {
        Method::Analytic => Ok(curvature_field(&grid, &fam)?),
        Method::Perturbation => point_map(&grid, &CURVATURE_COLUMNS, |a| Ok(vec![a[0], a[1], signed_curvature(&fam, a)?.value()])),
        Method::Quench => {
            let s = config.quench.schedule()?;
            point_map(&grid, &CURVATURE_COLUMNS, |a| {
                if grid.is_pole(a) {
                    return Ok(vec![a[0], a[1], 0.0]);
                }
                let sign = tensor_phase_form(&fam, a)?.map_or(0.0, f64::signum);
                let g = estimate_metric(&fam, a, &s)?;
                Ok(vec![a[0], a[1], sign * tensor_curvature_estimated(&g).value()])
            })
        }
    }
}

fn run_charge(config: &RunConfig) -> RunResult<SweepResult> {
    let source = metric_source(config)?;
    let grid = config.grid.quadrature()?;
    let mut table = SweepResult::new(SWEEP_COLUMNS);
    let mut notes = Vec::new();
    for l in config.lambdas()? {
        let r = dd_invariant_for(&family(config, l), &source, &grid)?;
        if r.grid_shifted {
            notes.push(format!("lambda {l}: node on a band touching, midpoint grid used"));
        }
        table.push(vec![l, r.value, if r.grid_shifted { 1.0 } else { 0.0 }])?;
    }
    table.metadata.notes = notes;
    Ok(table)
}

fn run_sweep(config: &RunConfig) -> RunResult<SweepResult> {
    if config.model.anti_monopole {
        return run_charge(config);
    }
    let lambdas = config.lambdas()?;
    Ok(lambda_sweep(&lambdas, &metric_source(config)?, &config.grid.quadrature()?)?)
}

fn run_bands(config: &RunConfig) -> RunResult<SweepResult> {
    let b = &config.bands;
    let cut = band_cut(config.model.lambda, b.axis, b.fixed, b.samples)?;
    let mut table = cut.to_table();
    table.metadata.notes = gap_closures(&cut)
        .iter()
        .map(|c| format!("gap closure at k = {:.16e} (refined gap {:.3e})", c.k, c.gap))
        .collect();
    Ok(table)
}

/// Columns of the `weyl` table.
pub const WEYL_COLUMNS: [&str; 6] = ["lambda", "kx", "ky", "kz", "kw", "gap"];

fn run_weyl(config: &RunConfig) -> RunResult<SweepResult> {
    let lambdas = config.lambdas()?;
    let found: Vec<_> = lambdas.par_iter().map(|&l| find_weyl_points(l)).collect();
    let mut table = SweepResult::new(WEYL_COLUMNS);
    for (&l, points) in lambdas.iter().zip(found) {
        for p in points {
            table.push(vec![l, p.k[0], p.k[1], p.k[2], p.k[3], p.gap])?;
        }
    }
    Ok(table)
}

/// Columns of the `quench` table.
pub const QUENCH_COLUMNS: [&str; 8] =
    ["lambda", "delta_q", "ramp_time", "p_excited", "p_sudden", "metric_estimate", "steps_used", "converged"];

fn run_quench(config: &RunConfig) -> RunResult<SweepResult> {
    let schedule = config.quench.schedule()?;
    let start = config.quench.start()?;
    let mut table = SweepResult::new(QUENCH_COLUMNS);
    for l in config.lambdas()? {
        let fam = family(config, l);
        let out = evolve_family(&fam, &start, &schedule)?;
        let sudden = evolve_family(&fam, &start, &QuenchSchedule { ramp_time: 0.0, ..schedule })?;
        for w in &out.warnings {
            table.metadata.notes.push(format!("lambda {l}: {w}"));
        }
        let estimate = match schedule.direction {
            crate::quench_sim::Direction::Axis(_) => out.p_excited / (schedule.delta_q * schedule.delta_q),
            crate::quench_sim::Direction::Pair(..) => f64::NAN,
        };
        table.push(vec![
            l,
            schedule.delta_q,
            schedule.ramp_time,
            out.p_excited,
            sudden.p_excited,
            estimate,
            out.steps_used as f64,
            if out.converged { 1.0 } else { 0.0 },
        ])?;
    }
    Ok(table)
}

/// Runs one configuration and returns its table with metadata filled in.
pub fn run(config: &RunConfig) -> RunResult<SweepResult> {
    let started = Instant::now();
    let mut table = match config.command {
        CommandKind::Bands => run_bands(config),
        CommandKind::Metric => run_metric(config),
        CommandKind::Curvature => run_curvature(config),
        CommandKind::Charge => run_charge(config),
        CommandKind::Sweep => run_sweep(config),
        CommandKind::Quench => run_quench(config),
        CommandKind::Weyl => run_weyl(config),
    }?;
    let notes = std::mem::take(&mut table.metadata.notes);
    table.metadata = Metadata::new(serde_json::to_value(config).expect("config serializes"));
    table.metadata.notes = notes;
    table.metadata.wall_clock_seconds = started.elapsed().as_secs_f64();
    Ok(table)
}

/// Output path: explicit path, else `$TENSORMONO_OUT_DIR/<command>.<ext>`,
/// else standard output (`None`).
pub fn output_path(config: &RunConfig) -> Option<PathBuf> {
    if let Some(p) = &config.output.path {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_ENV)?;
    Some(Path::new(&dir).join(format!("{}.{}", config.command.name(), config.output.format.extension())))
}

fn write_output(config: &RunConfig, text: &str) -> RunResult<()> {
    match output_path(config) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| RunError::Io(e.to_string())),
    }
}

#[derive(Debug, Parser)]
#[command(name = "tensormono", version, about = "Tensor-monopole geometry, charges, quench protocol and band structure")]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML run configuration; subcommand flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Print the resolved configuration as TOML instead of running.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Band energies along a momentum cut.
    Bands(BandsArgs),
    /// Quantum-metric map over (theta1, theta2).
    Metric(MapArgs),
    /// 3-form curvature map over (theta1, theta2).
    Curvature(MapArgs),
    /// Dixmier-Douady charge.
    Charge(ChargeArgs),
    /// Charge versus offset.
    Sweep(ChargeArgs),
    /// One quench run at a point.
    Quench(QuenchArgs),
    /// Band touchings of the lattice model.
    Weyl(WeylArgs),
}

#[derive(Debug, Args, Default)]
struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    anti_monopole: bool,
}

#[derive(Debug, Args, Default)]
struct QuenchFlags {
    /// Quench step, e.g. `pi/8`.
    #[arg(long, allow_hyphen_values = true)]
    delta_q: Option<String>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Ramp time in seconds.
    #[arg(long)]
    ramp_time: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
}

#[derive(Debug, Args, Default)]
struct GridArgs {
    #[arg(long)]
    n_theta1: Option<usize>,
    #[arg(long)]
    n_theta2: Option<usize>,
    #[arg(long)]
    n_phi: Option<usize>,
    #[arg(long, value_enum)]
    rule: Option<Rule>,
}

#[derive(Debug, Args)]
struct BandsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum)]
    axis: Option<Axis>,
    #[arg(long)]
    samples: Option<usize>,
    /// Momenta `kx,ky,kz,kw` held fixed off the cut axis, e.g. `0,pi/2,0,0`.
    #[arg(long, allow_hyphen_values = true)]
    fixed: Option<String>,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    quench: QuenchFlags,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
}

#[derive(Debug, Args)]
struct ChargeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    quench: QuenchFlags,
}

#[derive(Debug, Args)]
struct QuenchArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    quench: QuenchFlags,
    /// Start point `theta1,theta2,phi`, e.g. `pi/3,pi/4,0`.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// One or two of theta1, theta2, phi, comma separated.
    #[arg(long, value_delimiter = ',')]
    direction: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct WeylArgs {
    #[command(flatten)]
    model: ModelArgs,
}

fn parse_coord(s: &str) -> RunResult<Coord> {
    match s.trim().to_lowercase().as_str() {
        "theta1" | "t1" => Ok(Coord::Theta1),
        "theta2" | "t2" => Ok(Coord::Theta2),
        "phi" | "p" => Ok(Coord::Phi),
        other => Err(RunError::Config(format!("unknown coordinate {other:?}"))),
    }
}

fn apply_model(c: &mut RunConfig, m: &ModelArgs) -> RunResult<()> {
    if let Some(l) = m.lambda {
        c.model.lambda = l;
    }
    if let Some(s) = &m.lambdas {
        c.model.lambdas = Some(if s.contains(':') {
            parse_range(s)?;
            LambdaSpec::Range(s.clone())
        } else {
            LambdaSpec::List(
                s.split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| RunError::Config(format!("bad lambda {x:?}"))))
                    .collect::<RunResult<_>>()?,
            )
        });
    }
    if let Some(method) = m.method {
        c.model.method = method;
    }
    if m.anti_monopole {
        c.model.anti_monopole = true;
    }
    Ok(())
}

fn apply_grid(c: &mut RunConfig, g: &GridArgs) {
    if let Some(n) = g.n_theta1 {
        c.grid.n_theta1 = n;
    }
    if let Some(n) = g.n_theta2 {
        c.grid.n_theta2 = n;
    }
    if let Some(n) = g.n_phi {
        c.grid.n_phi = n;
    }
    if let Some(r) = g.rule {
        c.grid.rule = r;
    }
}

fn apply_quench(c: &mut RunConfig, q: &QuenchFlags) -> RunResult<()> {
    if let Some(s) = &q.delta_q {
        parse_angle(s)?;
        c.quench.delta_q = Some(AngleSpec::Text(s.clone()));
    }
    if q.preset.is_some() {
        c.quench.preset = q.preset;
    }
    if q.ramp_time.is_some() {
        c.quench.ramp_time = q.ramp_time;
    }
    if let Some(n) = q.n_steps {
        c.quench.n_steps = n;
    }
    Ok(())
}

fn resolve(cli: &Cli) -> RunResult<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml(&text)?
        }
        None => {
            let Some(sub) = &cli.command else {
                return Err(RunError::Config("give a subcommand or --config".into()));
            };
            RunConfig::new(match sub {
                Sub::Bands(_) => CommandKind::Bands,
                Sub::Metric(_) => CommandKind::Metric,
                Sub::Curvature(_) => CommandKind::Curvature,
                Sub::Charge(_) => CommandKind::Charge,
                Sub::Sweep(_) => CommandKind::Sweep,
                Sub::Quench(_) => CommandKind::Quench,
                Sub::Weyl(_) => CommandKind::Weyl,
            })
        }
    };
    match &cli.command {
        None => {}
        Some(Sub::Bands(a)) => {
            config.command = CommandKind::Bands;
            apply_model(&mut config, &a.model)?;
            if let Some(axis) = a.axis {
                config.bands.axis = axis;
            }
            if let Some(n) = a.samples {
                config.bands.samples = n;
            }
            if let Some(text) = &a.fixed {
                let k: Vec<f64> = text.split(',').map(|s| parse_angle(s.trim())).collect::<crate::Result<_>>()?;
                config.bands.fixed =
                    k.try_into().map_err(|_| RunError::Config("--fixed needs four comma-separated momenta".into()))?;
            }
        }
        Some(Sub::Metric(a)) | Some(Sub::Curvature(a)) => {
            config.command =
                if matches!(cli.command, Some(Sub::Metric(_))) { CommandKind::Metric } else { CommandKind::Curvature };
            apply_model(&mut config, &a.model)?;
            apply_grid(&mut config, &a.grid);
            apply_quench(&mut config, &a.quench)?;
            if let Some(p) = &a.phi {
                parse_angle(p)?;
                config.grid.phi = AngleSpec::Text(p.clone());
            }
        }
        Some(Sub::Charge(a)) | Some(Sub::Sweep(a)) => {
            config.command = if matches!(cli.command, Some(Sub::Charge(_))) { CommandKind::Charge } else { CommandKind::Sweep };
            apply_model(&mut config, &a.model)?;
            apply_grid(&mut config, &a.grid);
            apply_quench(&mut config, &a.quench)?;
        }
        Some(Sub::Quench(a)) => {
            config.command = CommandKind::Quench;
            apply_model(&mut config, &a.model)?;
            apply_quench(&mut config, &a.quench)?;
            if let Some(p) = &a.point {
                let parts: Vec<&str> = p.split(',').collect();
                if parts.len() != 3 {
                    return Err(RunError::Config("point needs theta1,theta2,phi".into()));
                }
                for (slot, s) in config.quench.point.iter_mut().zip(parts) {
                    parse_angle(s)?;
                    *slot = AngleSpec::Text(s.trim().to_string());
                }
            }
            if let Some(d) = &a.direction {
                config.quench.direction = d.iter().map(|s| parse_coord(s)).collect::<RunResult<_>>()?;
            }
        }
        Some(Sub::Weyl(a)) => {
            config.command = CommandKind::Weyl;
            apply_model(&mut config, &a.model)?;
        }
    }
    if let Some(p) = &cli.output {
        config.output.path = Some(p.clone());
    }
    if let Some(f) = cli.format {
        config.output.format = f;
    }
    Ok(config)
}

fn execute(cli: &Cli) -> RunResult<()> {
    let config = resolve(cli)?;
    if cli.print_config {
        return std::io::stdout().write_all(config.to_toml().as_bytes()).map_err(|e| RunError::Io(e.to_string()));
    }
    let table = match cli.threads {
        Some(0) => return Err(RunError::Config("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Config(e.to_string()))?
            .install(|| run(&config))?,
        None => run(&config)?,
    };
    write_output(&config, &table.export(config.output.format))
}

/// Entry point of the binary: parses `args`, runs, and returns the exit status.
/// Errors are reported on stderr as one JSON record.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            eprintln!("{}", RunError::Config(e.to_string().trim().to_string()).to_json());
            return 2;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_args(args: &[&str]) -> RunResult<RunConfig> {
        resolve(&Cli::try_parse_from(args).map_err(|e| RunError::Config(e.to_string()))?)
    }

    #[test]
    fn negative_values_parse() {
        let c = resolve_args(&["tensormono", "sweep", "--method", "quench", "--delta-q", "pi/8", "--lambdas", "-2:2:0.1"]).unwrap();
        assert_eq!(c.lambdas().unwrap().len(), 41);
        let c = resolve_args(&["tensormono", "bands", "--lambda", "-1", "--axis", "kx"]).unwrap();
        assert_eq!(c.model.lambda, -1.0);
    }

    #[test]
    fn charge_command_runs() {
        let c = resolve_args(&["tensormono", "charge", "--method", "analytic", "--lambda", "0"]).unwrap();
        let t = run(&c).unwrap();
        assert_eq!(t.columns, SWEEP_COLUMNS);
        assert!((t.rows[0][1] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn metric_map_header_and_size() {
        let c = resolve_args(&["tensormono", "metric", "--n-theta1", "5", "--n-theta2", "4"]).unwrap();
        let t = run(&c).unwrap();
        assert_eq!(t.to_csv().lines().next().unwrap(), "theta1,theta2,g_t1t1,g_t2t2,g_pp,g_t1t2,g_t1p,g_t2p");
        assert_eq!(t.rows.len(), 20);
    }

    #[test]
    fn quench_without_step_is_a_config_error() {
        let c = resolve_args(&["tensormono", "charge", "--method", "quench"]).unwrap();
        assert_eq!(run(&c).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn error_record_is_json() {
        let e = RunError::Io("disk full".into());
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["exit_code"], 4);
        assert_eq!(v["error"], "io");
    }
}
