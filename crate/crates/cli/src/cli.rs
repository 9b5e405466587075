//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chfis_core::stability::{
    generate_perturbation, verify_stability, BoundTerms, PerturbKind, StabilityReport,
};
use chfis_core::surface::{solve_surface_capped, DEFAULT_MAX_DEPTH};
use chfis_core::{
    eval_point, validate_parameters, Cell, IfsModel, IfsParameters, ParamValue, ParameterInput, StabilityConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::export::{read_grid_csv, write_grid_csv, write_heightmap_pgm, GridSource};
use crate::format::{fmt_g17, parse_dataset, write_dataset, DatasetFile, FormatError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable that overrides the depth cap.
pub const MAX_DEPTH_ENV: &str = "CHFIS_MAX_DEPTH";

#[derive(Parser, Debug)]
#[command(name = "chfis", version, about = "Coalescence hidden-variable fractal interpolation surfaces")]
pub struct Cli {
    /// Write a JSON-lines record of the result or error to this file
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct ParamFlags {
    /// Scaling factor alpha for every cell (overrides the file)
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Coupling factor beta for every cell (overrides the file)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Hidden scaling factor gamma for every cell (overrides the file)
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct CalibrationFlags {
    /// Hölder constant used by the independent-variable bound
    #[arg(long, default_value_t = StabilityConfig::DEFAULT_M_BAR)]
    mbar: f64,
    /// Hölder exponent used by the independent-variable bound
    #[arg(long, default_value_t = StabilityConfig::DEFAULT_DELTA)]
    delta: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum GridFormat {
    Csv,
    Pgm,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum KindArg {
    X,
    Y,
    Z,
    T,
    All,
}

impl From<KindArg> for PerturbKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::X => PerturbKind::X,
            KindArg::Y => PerturbKind::Y,
            KindArg::Z => PerturbKind::Z,
            KindArg::T => PerturbKind::T,
            KindArg::All => PerturbKind::All,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the surface on an address grid and write it out
    Solve {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: GridFormat,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the surface at one point
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, default_value_t = chfis_core::point::DEFAULT_EVAL_DEPTH)]
        depth: u32,
    },
    /// Print the map coefficients of one cell
    Coeffs {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        /// One-based cell index as n,m
        #[arg(long, value_parser = parse_cell)]
        cell: Cell,
    },
    /// Validate a dataset and its parameters
    Check {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Print the perturbation bounds between two datasets
    Bounds {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        perturbed: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        #[command(flatten)]
        calibration: CalibrationFlags,
    },
    /// Compare measured surface distances with the bounds
    Verify {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        perturbed: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        #[command(flatten)]
        calibration: CalibrationFlags,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Write a seeded perturbation of a dataset
    Perturb {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        magnitude: f64,
        #[arg(long)]
        rng_seed: u64,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a CSV grid to another format
    Export {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, value_enum)]
        format: GridFormat,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Eval { .. } => "eval",
            Command::Coeffs { .. } => "coeffs",
            Command::Check { .. } => "check",
            Command::Bounds { .. } => "bounds",
            Command::Verify { .. } => "verify",
            Command::Perturb { .. } => "perturb",
            Command::Export { .. } => "export",
        }
    }
}

fn parse_cell(s: &str) -> Result<Cell, String> {
    let (n, m) = s.split_once(',').ok_or_else(|| format!("expected n,m, found `{s}`"))?;
    let n = n.trim().parse::<usize>().map_err(|e| format!("cell row: {e}"))?;
    let m = m.trim().parse::<usize>().map_err(|e| format!("cell column: {e}"))?;
    Ok(Cell::new(n, m))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("reading {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{context}: {source}")]
    Core { context: String, source: chfis_core::Error },
    #[error("{0}")]
    Usage(String),
    #[error("writing {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write { .. } => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        }
    }
}

fn core(context: impl Into<String>) -> impl FnOnce(chfis_core::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Core { context, source }
}

/// What a successful command produced.
struct Outcome {
    record: Value,
    violated: bool,
}

impl Outcome {
    fn ok(record: Value) -> Self {
        Outcome { record, violated: false }
    }
}

fn load(path: &Path) -> Result<DatasetFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    parse_dataset(&text).map_err(|source| CliError::Format { path: path.into(), source })
}

fn resolve_params(file: &DatasetFile, flags: &ParamFlags) -> Result<IfsParameters, CliError> {
    let pick = |name: &str, flag: Option<f64>, from_file: &Option<ParamValue>| match (flag, from_file) {
        (Some(_), Some(ParamValue::PerCell(_))) => {
            Err(CliError::Usage(format!("--{name} conflicts with the {name}_matrix section of the data file")))
        }
        (Some(v), _) => Ok(ParamValue::Scalar(v)),
        (None, Some(p)) => Ok(p.clone()),
        (None, None) => Err(CliError::Usage(format!("no {name} given: pass --{name} or add an `{name}` section"))),
    };
    let raw = ParameterInput {
        alpha: pick("alpha", flags.alpha, &file.params.alpha)?,
        beta: pick("beta", flags.beta, &file.params.beta)?,
        gamma: pick("gamma", flags.gamma, &file.params.gamma)?,
    };
    let d = &file.dataset;
    validate_parameters(&raw, d.n_cells_x(), d.n_cells_y()).map_err(core("parameters"))
}

fn build(path: &Path, flags: &ParamFlags) -> Result<IfsModel, CliError> {
    let file = load(path)?;
    let params = resolve_params(&file, flags)?;
    IfsModel::build(file.dataset, params).map_err(core(path.display().to_string()))
}

fn depth_cap() -> Result<u32, CliError> {
    match std::env::var(MAX_DEPTH_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_DEPTH_ENV} must be a non-negative integer, found `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_DEPTH),
    }
}

fn emit(out: &mut dyn Write, target: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match target {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => out.write_all(bytes).map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

fn render_grid(grid: &impl GridSource, format: GridFormat) -> Vec<u8> {
    match format {
        GridFormat::Csv => write_grid_csv(grid).into_bytes(),
        GridFormat::Pgm => write_heightmap_pgm(grid),
    }
}

fn print_pairs(out: &mut dyn Write, pairs: &[(&str, f64)]) -> Result<(), CliError> {
    let mut text = String::new();
    for (k, v) in pairs {
        text.push_str(k);
        text.push(' ');
        text.push_str(&fmt_g17(*v));
        text.push('\n');
    }
    emit(out, &None, text.as_bytes())
}

fn report_pairs(r: &StabilityReport) -> Vec<(&'static str, f64)> {
    vec![
        ("max_xy_manhattan", r.max_xy_manhattan),
        ("max_dz", r.max_dz),
        ("max_dt", r.max_dt),
        ("bound_xy", r.bound_xy),
        ("bound_z", r.bound_z),
        ("bound_t", r.bound_t),
        ("bound_t_hidden_surface", r.bound_t_hidden_surface),
        ("metric_d", r.metric_d),
        ("empirical_sup_f1", r.empirical_sup_f1),
        ("empirical_sup_f2", r.empirical_sup_f2),
    ]
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match command {
        Command::Solve { data, params, depth, format, out: target } => {
            let model = build(data, params)?;
            let grid = solve_surface_capped(&model, *depth, depth_cap()?).map_err(core("solve"))?;
            emit(out, target, &render_grid(&grid, *format))?;
            Ok(Outcome::ok(json!({
                "depth": depth,
                "nx": grid.xs.len(),
                "ny": grid.ys.len(),
                "out": target.as_ref().map(|p| p.display().to_string()),
            })))
        }
        Command::Eval { data, params, x, y, depth } => {
            let model = build(data, params)?;
            let e = eval_point(&model, *x, *y, *depth).map_err(core("eval"))?;
            print_pairs(out, &[("f1", e.f1), ("f2", e.f2), ("err1", e.err1), ("err2", e.err2)])?;
            emit(out, &None, format!("levels {}\nexact {}\n", e.levels, e.exact).as_bytes())?;
            Ok(Outcome::ok(json!({
                "x": x, "y": y, "f1": e.f1, "f2": e.f2, "err1": e.err1, "err2": e.err2,
                "levels": e.levels, "exact": e.exact,
            })))
        }
        Command::Coeffs { data, params, cell } => {
            let model = build(data, params)?;
            let c = *model.coefficients(*cell).map_err(core(format!("cell {cell}")))?;
            let residual = model
                .verify_joinup(*cell)
                .map_err(core(format!("cell {cell}")))?
                .iter()
                .fold(0.0f64, |m, r| m.max(r.dz.abs()).max(r.dt.abs()));
            let pairs = [
                ("e", c.e), ("f", c.f), ("g", c.g), ("k", c.k),
                ("e_t", c.e_t), ("f_t", c.f_t), ("g_t", c.g_t), ("k_t", c.k_t),
                ("z_eva", c.z_eva), ("t_eva", c.t_eva), ("joinup_residual", residual),
            ];
            emit(out, &None, format!("cell {cell}\n").as_bytes())?;
            print_pairs(out, &pairs)?;
            let mut record = serde_json::Map::new();
            record.insert("cell".into(), json!([cell.n, cell.m]));
            for (k, v) in pairs {
                record.insert(k.into(), json!(v));
            }
            Ok(Outcome::ok(Value::Object(record)))
        }
        Command::Check { data, params } => {
            let model = build(data, params)?;
            let mut worst = 0.0f64;
            for n in 1..=model.n_cells_x() {
                for m in 1..=model.n_cells_y() {
                    for r in model.verify_joinup(Cell::new(n, m)).map_err(core("check"))? {
                        worst = worst.max(r.dz.abs()).max(r.dt.abs());
                    }
                }
            }
            let (nx, ny) = (model.n_cells_x(), model.n_cells_y());
            emit(out, &None, format!("ok {nx}x{ny} cells, max join-up residual {}\n", fmt_g17(worst)).as_bytes())?;
            Ok(Outcome::ok(json!({ "n_cells_x": nx, "n_cells_y": ny, "joinup_residual": worst })))
        }
        Command::Bounds { base, perturbed, params, calibration } => {
            let b = load(base)?;
            let p = load(perturbed)?;
            let ifs = resolve_params(&b, params)?;
            let cfg = StabilityConfig::new(calibration.mbar, calibration.delta).map_err(core("calibration"))?;
            let t = BoundTerms::compute(&b.dataset, &p.dataset, &ifs, &cfg).map_err(core("bounds"))?;
            let pairs = [
                ("max_xy_manhattan", t.max_xy_manhattan),
                ("max_dz", t.max_dz),
                ("max_dt", t.max_dt),
                ("bound_xy", t.xy),
                ("bound_z", t.z),
                ("bound_t", t.t),
                ("bound_t_hidden_surface", t.t_hidden_surface),
                ("metric_d", t.metric()),
            ];
            print_pairs(out, &pairs)?;
            Ok(Outcome::ok(Value::Object(pairs.iter().map(|(k, v)| ((*k).into(), json!(v))).collect())))
        }
        Command::Verify { base, perturbed, params, calibration, depth } => {
            let b = load(base)?;
            let p = load(perturbed)?;
            let ifs = resolve_params(&b, params)?;
            let cfg = StabilityConfig::new(calibration.mbar, calibration.delta).map_err(core("calibration"))?;
            if *depth > depth_cap()? {
                return Err(CliError::Core {
                    context: "verify".into(),
                    source: chfis_core::Error::DepthTooLarge { depth: *depth, cap: depth_cap()? },
                });
            }
            let r = verify_stability(&b.dataset, &p.dataset, &ifs, &cfg, *depth).map_err(core("verify"))?;
            let pairs = report_pairs(&r);
            print_pairs(out, &pairs)?;
            let status = match (r.hard_violation, r.metric_violation) {
                (true, _) => "violation (constant-free bound)",
                (false, true) => "violation (metric d under the current calibration)",
                _ => "ok",
            };
            emit(out, &None, format!("status {status}\n").as_bytes())?;
            let mut record: serde_json::Map<String, Value> =
                pairs.iter().map(|(k, v)| ((*k).into(), json!(v))).collect();
            record.insert("depth".into(), json!(r.depth));
            record.insert("hard_violation".into(), json!(r.hard_violation));
            record.insert("metric_violation".into(), json!(r.metric_violation));
            Ok(Outcome { record: Value::Object(record), violated: r.violated() })
        }
        Command::Perturb { data, kind, magnitude, rng_seed, out: target } => {
            let file = load(data)?;
            let pert = generate_perturbation(&file.dataset, (*kind).into(), *magnitude, *rng_seed)
                .map_err(core("perturb"))?;
            emit(out, target, write_dataset(&pert, &file.params).as_bytes())?;
            Ok(Outcome::ok(json!({
                "kind": format!("{kind:?}").to_lowercase(),
                "magnitude": magnitude,
                "rng_seed": rng_seed,
                "out": target.as_ref().map(|p| p.display().to_string()),
            })))
        }
        Command::Export { grid, format, out: target } => {
            let text = fs::read_to_string(grid).map_err(|source| CliError::Read { path: grid.clone(), source })?;
            let table = read_grid_csv(&text).map_err(|source| CliError::Format { path: grid.clone(), source })?;
            emit(out, target, &render_grid(&table, *format))?;
            Ok(Outcome::ok(json!({
                "nx": table.xs.len(),
                "ny": table.ys.len(),
                "out": target.as_ref().map(|p| p.display().to_string()),
            })))
        }
    }
}

fn write_report(path: &Path, record: &Value) -> Result<(), CliError> {
    let mut line = record.to_string();
    line.push('\n');
    fs::write(path, line).map_err(|source| CliError::Write { path: path.into(), source })
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let name = cli.command.name();
    let (code, mut record) = match execute(&cli.command, out) {
        Ok(outcome) => {
            let code = if outcome.violated { EXIT_VIOLATION } else { EXIT_OK };
            (code, outcome.record)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            (e.exit_code(), json!({ "error": e.to_string() }))
        }
    };
    if let Some(path) = &cli.report {
        if let Value::Object(map) = &mut record {
            map.insert("command".into(), json!(name));
            map.insert("exit_code".into(), json!(code));
        }
        if let Err(e) = write_report(path, &record) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INTERNAL;
        }
    }
    code
}
