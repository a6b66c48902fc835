//! Command-line surface and the validated, serializable run configuration.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use hilbert_tensor::sequence::DEFAULT_OUTPUT_LEN;
use hilbert_tensor::spectral::{DEFAULT_MAX_ITER, DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TOL};
use hilbert_tensor::{validate_shift, OperatorKind};
use serde::{Deserialize, Serialize};

use crate::error::{shift_message, CliError, CliResult};
use crate::input::{parse_f64_set, parse_inline_vector, parse_usize_set, parse_vector_file};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ApplyChoice {
    Fast,
    Naive,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Bounds,
    Pdcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    F,
    T,
}

impl From<OperatorArg> for OperatorKind {
    fn from(o: OperatorArg) -> Self {
        match o {
            OperatorArg::F => OperatorKind::F,
            OperatorArg::T => OperatorKind::T,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ghtensor",
    version,
    about = "Entries, applies, eigenvalue bounds and operator norms of shifted Hilbert tensors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,

    /// Output format [default: csv for sweep, json otherwise]
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// RNG seed for restarts and sampling
    #[arg(long, global = true, env = "GHTENSOR_SEED")]
    pub seed: Option<u64>,

    /// key=value file of default flags; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Evaluate one tensor entry
    Entry(EntryArgs),
    /// Compute H x^{m-1} and H x^m
    Apply(ApplyArgs),
    /// Largest H-eigenvalue by the power method (a > 0)
    Hspec(HspecArgs),
    /// Largest-magnitude Z-eigenvalue by shifted power iteration
    Zspec(ZspecArgs),
    /// Compare eigenvalue estimates against the closed-form bounds
    Bounds(BoundsArgs),
    /// Sample the form H x^m for sign evidence
    Pdcheck(PdcheckArgs),
    /// Estimate the norm of the infinite operators F or T
    Opnorm(OpnormArgs),
    /// Run bounds or pdcheck over a parameter grid
    Sweep(SweepArgs),
}

impl CommandArgs {
    pub fn name(&self) -> &'static str {
        match self {
            CommandArgs::Entry(_) => "entry",
            CommandArgs::Apply(_) => "apply",
            CommandArgs::Hspec(_) => "hspec",
            CommandArgs::Zspec(_) => "zspec",
            CommandArgs::Bounds(_) => "bounds",
            CommandArgs::Pdcheck(_) => "pdcheck",
            CommandArgs::Opnorm(_) => "opnorm",
            CommandArgs::Sweep(_) => "sweep",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Tensor order
    #[arg(long)]
    pub m: usize,
    /// Dimension
    #[arg(long)]
    pub n: usize,
    /// Shift; any real except 0, -1, -2, ...
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct EntryArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// 1-based multi-index, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub idx: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct ApplyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Inline vector, comma separated
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "x_file",
        required_unless_present = "x_file"
    )]
    pub x: Option<String>,
    /// Vector file: one value per line or one comma-separated line
    #[arg(long)]
    pub x_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ApplyChoice::Fast)]
    pub method: ApplyChoice,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct HspecArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct ZspecArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    /// Rayleigh samples for the H check when a < 0 and m > 2
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct PdcheckArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct OpnormArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, value_enum)]
    pub operator: OperatorArg,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Output components computed before the analytic tail
    #[arg(long, default_value_t = DEFAULT_OUTPUT_LEN)]
    pub truncation: usize,
    /// l^p exponent [default: 2(m-1) for F, 2 for T]
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    /// Orders: `2,4` or `2..6`
    #[arg(long)]
    pub m: String,
    /// Dimensions: `2..8` or `2,4,8`
    #[arg(long)]
    pub n: String,
    /// Shifts: `0.5,1,2` or `0.5..3:0.5`
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, value_enum, default_value_t = SweepMode::Bounds)]
    pub mode: SweepMode,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

/// `(m, n, a)` of a finite tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecParams {
    pub m: usize,
    pub n: usize,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VectorSource {
    Inline,
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub a: Vec<f64>,
}

impl SweepGrid {
    /// Tuples in `m`-major, then `n`, then `a` order.
    pub fn tuples(&self) -> Vec<SpecParams> {
        let mut out = Vec::with_capacity(self.m.len() * self.n.len() * self.a.len());
        for &m in &self.m {
            for &n in &self.n {
                for &a in &self.a {
                    out.push(SpecParams { m, n, a });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    Entry {
        spec: SpecParams,
        idx: Vec<usize>,
    },
    Apply {
        spec: SpecParams,
        x: Vec<f64>,
        source: VectorSource,
        method: ApplyChoice,
    },
    Hspec {
        spec: SpecParams,
        solver: SolverParams,
    },
    Zspec {
        spec: SpecParams,
        solver: SolverParams,
    },
    Bounds {
        spec: SpecParams,
        solver: SolverParams,
        samples: usize,
    },
    Pdcheck {
        spec: SpecParams,
        trials: usize,
    },
    Opnorm {
        m: usize,
        a: f64,
        operator: OperatorKind,
        samples: usize,
        truncation: usize,
        p: Option<f64>,
    },
    Sweep {
        grid: SweepGrid,
        mode: SweepMode,
        solver: SolverParams,
        samples: usize,
        trials: usize,
    },
}

/// Fully resolved run: vectors loaded, ranges expanded, parameters checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    pub format: OutputFormat,
}

fn check_shift(a: f64) -> CliResult<()> {
    if !a.is_finite() {
        return Err(CliError::Validation(format!(
            "shift must be finite, got {a}"
        )));
    }
    match validate_shift(a) {
        Ok(true) => Ok(()),
        _ => Err(CliError::Validation(shift_message(a))),
    }
}

fn check_spec(spec: &SpecArgs) -> CliResult<SpecParams> {
    check_shift(spec.a)?;
    if spec.m < 2 {
        return Err(CliError::Validation(format!(
            "order m must be at least 2, got {}",
            spec.m
        )));
    }
    if spec.n < 1 {
        return Err(CliError::Validation(
            "dimension n must be at least 1".into(),
        ));
    }
    Ok(SpecParams {
        m: spec.m,
        n: spec.n,
        a: spec.a,
    })
}

fn check_solver(solver: &SolverArgs, restarts: usize) -> CliResult<SolverParams> {
    if !(solver.tol > 0.0 && solver.tol.is_finite()) {
        return Err(CliError::Validation(format!(
            "--tol must be positive, got {}",
            solver.tol
        )));
    }
    if solver.max_iter == 0 {
        return Err(CliError::Validation("--max-iter must be positive".into()));
    }
    Ok(SolverParams {
        tol: solver.tol,
        max_iter: solver.max_iter,
        restarts,
    })
}

fn positive(value: usize, flag: &str) -> CliResult<usize> {
    if value == 0 {
        Err(CliError::Validation(format!("--{flag} must be positive")))
    } else {
        Ok(value)
    }
}

impl Cli {
    /// Validates flags and loads any vector file.
    pub fn into_config(self) -> CliResult<RunConfig> {
        let default_format = match self.command {
            CommandArgs::Sweep(_) => OutputFormat::Csv,
            _ => OutputFormat::Json,
        };
        let command = match self.command {
            CommandArgs::Entry(args) => Command::Entry {
                spec: check_spec(&args.spec)?,
                idx: args.idx,
            },
            CommandArgs::Apply(args) => {
                let spec = check_spec(&args.spec)?;
                let (x, source) = match (args.x, args.x_file) {
                    (Some(text), None) => (parse_inline_vector(&text)?, VectorSource::Inline),
                    (None, Some(path)) => (parse_vector_file(&path)?, VectorSource::File { path }),
                    _ => {
                        return Err(CliError::Validation(
                            "give exactly one of --x or --x-file".into(),
                        ))
                    }
                };
                Command::Apply {
                    spec,
                    x: x.into_vec(),
                    source,
                    method: args.method,
                }
            }
            CommandArgs::Hspec(args) => Command::Hspec {
                spec: check_spec(&args.spec)?,
                solver: check_solver(&args.solver, 0)?,
            },
            CommandArgs::Zspec(args) => Command::Zspec {
                spec: check_spec(&args.spec)?,
                solver: check_solver(&args.solver, positive(args.restarts, "restarts")?)?,
            },
            CommandArgs::Bounds(args) => Command::Bounds {
                spec: check_spec(&args.spec)?,
                solver: check_solver(&args.solver, positive(args.restarts, "restarts")?)?,
                samples: positive(args.samples, "samples")?,
            },
            CommandArgs::Pdcheck(args) => Command::Pdcheck {
                spec: check_spec(&args.spec)?,
                trials: positive(args.trials, "trials")?,
            },
            CommandArgs::Opnorm(args) => {
                check_shift(args.a)?;
                Command::Opnorm {
                    m: args.m,
                    a: args.a,
                    operator: args.operator.into(),
                    samples: positive(args.samples, "samples")?,
                    truncation: positive(args.truncation, "truncation")?,
                    p: args.p,
                }
            }
            CommandArgs::Sweep(args) => {
                let grid = SweepGrid {
                    m: parse_usize_set(&args.m, "m")?,
                    n: parse_usize_set(&args.n, "n")?,
                    a: parse_f64_set(&args.a, "a")?,
                };
                for &a in &grid.a {
                    check_shift(a)?;
                }
                if let Some(&m) = grid.m.iter().find(|&&m| m < 2) {
                    return Err(CliError::Validation(format!(
                        "order m must be at least 2, got {m}"
                    )));
                }
                if grid.n.contains(&0) {
                    return Err(CliError::Validation(
                        "dimension n must be at least 1".into(),
                    ));
                }
                if args.mode == SweepMode::Pdcheck {
                    if let Some(&m) = grid.m.iter().find(|&&m| m % 2 == 1) {
                        return Err(CliError::Validation(format!(
                            "pdcheck sweeps need even orders, got m = {m}"
                        )));
                    }
                }
                Command::Sweep {
                    grid,
                    mode: args.mode,
                    solver: check_solver(&args.solver, positive(args.restarts, "restarts")?)?,
                    samples: positive(args.samples, "samples")?,
                    trials: positive(args.trials, "trials")?,
                }
            }
        };
        Ok(RunConfig {
            command,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            format: self.format.unwrap_or(default_format),
        })
    }
}

/// Finds the value of `--config` in raw arguments.
fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

/// Parses a `key = value` file; `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Input(format!(
                "config line {}: expected key=value, got {line:?}",
                lineno + 1
            ))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::Input(format!(
                "config line {}: invalid key {key:?}",
                lineno + 1
            )));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// Splices config-file entries in as flags right after the subcommand.
///
/// Explicit flags come later on the line and override them. Keys belonging
/// only to other subcommands are skipped so one file can serve several.
pub fn expand_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse_config_text(&text)?;

    let root = Cli::command();
    let longs = |cmd: &clap::Command| -> Vec<String> {
        cmd.get_arguments()
            .filter_map(|a| a.get_long().map(str::to_string))
            .collect()
    };
    let global = longs(&root);
    let known_anywhere: Vec<String> = root
        .get_subcommands()
        .flat_map(&longs)
        .chain(global.iter().cloned())
        .collect();

    let Some(pos) = args
        .iter()
        .skip(1)
        .position(|a| root.find_subcommand(a.to_string_lossy().as_ref()).is_some())
        .map(|p| p + 1)
    else {
        return Ok(args);
    };
    let sub = root
        .find_subcommand(args[pos].to_string_lossy().as_ref())
        .expect("found above");
    let accepted: Vec<String> = longs(sub).into_iter().chain(global).collect();

    let mut injected = Vec::new();
    for (key, value) in entries {
        if !known_anywhere.contains(&key) {
            return Err(CliError::Input(format!(
                "config {}: unknown key {key:?}",
                path.display()
            )));
        }
        if accepted.contains(&key) {
            injected.push(OsString::from(format!("--{key}={value}")));
        }
    }
    let mut out = args;
    out.splice(pos + 1..pos + 1, injected);
    Ok(out)
}
