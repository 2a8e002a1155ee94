//! Batch front-end: build, certify, report, volumes, cosets.

mod report;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{certify_all, ClaimKind, CodeSummary, Mode, RunOptions, DEFAULT_BUDGET, DEFAULT_CAP};
use crate::cyclic::CosetTable;
use crate::families::{build, Built, ClaimSet, ComponentInfo, Condition, FamilyError, FamilySpec};
use crate::matspace::{vol_hamming, vol_sr, VolumeQuery};

pub use report::{collect_rows, render_csv, render_text, ReportRow};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("unsupported schema_version {0}, expected {CONFIG_SCHEMA_VERSION}")]
    Schema(u32),
    #[error("config needs exactly one of [code] and descriptor")]
    CodeSource,
    #[error("descriptor fingerprint {recorded} does not match rebuilt code {rebuilt}")]
    StaleDescriptor { recorded: String, rebuilt: String },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Certify(#[from] crate::certify::CertifyError),
    #[error("{0}")]
    Usage(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub membership_tests: Option<u128>,
    pub radius_cap: Option<usize>,
    /// 0 or absent: available parallelism.
    pub workers: Option<usize>,
}

/// A run as written in a TOML config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub code: Option<FamilySpec>,
    /// Path to a descriptor written by `build`, relative to the config file.
    pub descriptor: Option<PathBuf>,
    pub claims: Option<Vec<ClaimKind>>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub budget: BudgetConfig,
    pub out: Option<PathBuf>,
}

fn default_mode() -> Mode {
    Mode::Exhaustive
}

impl RunConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })?;
        if cfg.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(CliError::Schema(cfg.schema_version));
        }
        if cfg.code.is_some() == cfg.descriptor.is_some() {
            return Err(CliError::CodeSource);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let mut cfg = Self::parse(&text, path)?;
        if let (Some(d), Some(dir)) = (&cfg.descriptor, path.parent()) {
            cfg.descriptor = Some(dir.join(d));
        }
        Ok(cfg)
    }
}

/// The serialized output of `build`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub schema_version: u32,
    pub code: CodeSummary,
    pub components: Vec<ComponentInfo>,
    pub check_matrix: Vec<Vec<u32>>,
    pub claims: ClaimSet,
    pub conditions: Vec<Condition>,
    pub warnings: Vec<String>,
}

impl Descriptor {
    pub fn of(built: &Built) -> Self {
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            code: CodeSummary::of(built),
            components: built.components.clone(),
            check_matrix: built.code.check_matrix().to_vec(),
            claims: built.claims.clone(),
            conditions: built.conditions.clone(),
            warnings: built.warnings.clone(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })
    }

    /// Rebuilds the code and checks it is the one described.
    pub fn rebuild(&self) -> Result<Built, CliError> {
        let built = build(&self.code.spec)?;
        let rebuilt = built.code.fingerprint();
        if rebuilt != self.code.fingerprint {
            return Err(CliError::StaleDescriptor { recorded: self.code.fingerprint.clone(), rebuilt });
        }
        Ok(built)
    }
}

#[derive(Debug, Parser)]
#[command(name = "sumrank", version, about = "Build and certify sum-rank metric codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family and write its descriptor.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the certifiers and write one certificate per claim.
    Certify(CertifyArgs),
    /// Tabulate a directory of certificates.
    Report {
        dir: PathBuf,
        /// Also write report.csv here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact ball volumes.
    Volumes(VolumeArgs),
    /// Cyclotomic coset table of q modulo n.
    Cosets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, conflicts_with = "descriptor")]
    pub config: Option<PathBuf>,
    /// Certify a descriptor written by `build` with every default claim.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Membership-test budget for the whole run.
    #[arg(long)]
    pub budget: Option<u128>,
    /// Use the single-threaded reference path.
    #[arg(long)]
    pub serial: bool,
    /// Covering-radius search stops above this weight.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, value_parser = ["exhaustive", "compositional"])]
    pub mode: Option<String>,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub radius: usize,
    /// Number of matrix blocks.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Block shape as `NxM`.
    #[arg(long, default_value = "1x1")]
    pub block: String,
    /// Hamming ball in a space of this length instead.
    #[arg(long, conflicts_with_all = ["t", "block"])]
    pub hamming: Option<usize>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<W: std::io::Write>(cli: Cli, stdout: &mut W) -> Result<i32, CliError> {
    match cli.command {
        Command::Build { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let built = resolve(&cfg)?;
            let desc = Descriptor::of(&built);
            print_summary(&built, stdout);
            if let Some(dir) = out.or(cfg.out) {
                write_json(&dir, "descriptor.json", &desc)?;
                writeln!(stdout, "wrote {}", dir.join("descriptor.json").display()).ok();
            }
            Ok(0)
        }
        Command::Certify(args) => certify(args, stdout),
        Command::Report { dir, csv } => {
            let rows = collect_rows(&dir).map_err(io_err(&dir))?;
            write!(stdout, "{}", render_text(&rows)).ok();
            if let Some(path) = csv {
                fs::write(&path, render_csv(&rows)).map_err(io_err(&path))?;
            }
            Ok(0)
        }
        Command::Volumes(v) => {
            let vol = match v.hamming {
                Some(len) => vol_hamming(v.q, len, v.radius),
                None => {
                    let (n, m) = v
                        .block
                        .split_once('x')
                        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                        .ok_or_else(|| CliError::Usage(format!("block must look like 2x3, got {}", v.block)))?;
                    vol_sr(&VolumeQuery::uniform(v.q, v.t, n, m, v.radius))
                }
            };
            writeln!(stdout, "{vol}").ok();
            Ok(0)
        }
        Command::Cosets { n, q } => {
            let table = CosetTable::new(n, q).map_err(|e| CliError::Usage(e.to_string()))?;
            for c in &table.cosets {
                let items: Vec<String> = c.iter().map(|i| i.to_string()).collect();
                writeln!(stdout, "C_{}: {{{}}}", c[0], items.join(", ")).ok();
            }
            Ok(0)
        }
    }
}

fn resolve(cfg: &RunConfig) -> Result<Built, CliError> {
    match (&cfg.code, &cfg.descriptor) {
        (Some(spec), None) => Ok(build(spec)?),
        (None, Some(path)) => Descriptor::load(path)?.rebuild(),
        _ => Err(CliError::CodeSource),
    }
}

fn print_summary<W: std::io::Write>(built: &Built, out: &mut W) {
    let g = built.code.geometry();
    let _ = writeln!(out, "{} {}", built.spec.tag(), built.spec.describe());
    let _ = writeln!(out, "geometry: {}x{} blocks over F_{}, t = {}", g.n(), g.m(), g.q(), g.t());
    for c in &built.components {
        let _ = writeln!(
            out,
            "  C_{}: {} [{}, {}] over F_{}{}",
            c.index,
            c.kind,
            c.length,
            c.dimension,
            c.field,
            c.analytic_distance.map_or(String::new(), |d| format!(", d ≥ {d}"))
        );
    }
    let _ = writeln!(out, "codimension over F_{}: {}", g.q(), built.code.codimension());
    match built.analytic_distance_bound() {
        Some(d) => {
            let _ = writeln!(out, "analytic distance bound: {d}");
        }
        None => {
            let _ = writeln!(out, "analytic distance bound: none");
        }
    }
    for c in &built.conditions {
        let _ = writeln!(out, "condition {}: {} [{}]", c.name, c.evaluation, if c.holds { "PASS" } else { "FAIL" });
    }
    for w in &built.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(&path, text).map_err(io_err(&path))
}

fn certify<W: std::io::Write>(args: CertifyArgs, stdout: &mut W) -> Result<i32, CliError> {
    let cfg = match (&args.config, &args.descriptor) {
        (Some(path), None) => RunConfig::load(path)?,
        (None, Some(path)) => RunConfig {
            schema_version: CONFIG_SCHEMA_VERSION,
            code: None,
            descriptor: Some(path.clone()),
            claims: None,
            mode: Mode::Exhaustive,
            budget: BudgetConfig::default(),
            out: None,
        },
        _ => return Err(CliError::Usage("certify needs --config or --descriptor".into())),
    };
    let built = resolve(&cfg)?;
    let mode = match args.mode.as_deref() {
        Some("compositional") => Mode::Compositional,
        Some(_) => Mode::Exhaustive,
        None => cfg.mode,
    };
    let opts = RunOptions {
        claims: cfg.claims.clone(),
        mode,
        budget: args.budget.or(cfg.budget.membership_tests).unwrap_or(DEFAULT_BUDGET),
        cap: args.cap.or(cfg.budget.radius_cap).unwrap_or(DEFAULT_CAP),
        parallel: !args.serial,
    };
    let workers = cfg.budget.workers.unwrap_or(0);
    let run = if opts.parallel && workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| certify_all(&built, &opts))?
    } else {
        certify_all(&built, &opts)?
    };
    for c in &run.certificates {
        let _ = writeln!(
            stdout,
            "{:<16} {:<22} {}",
            c.claim.name(),
            serde_json::to_string(&c.verdict).unwrap().trim_matches('"'),
            c.reason
        );
    }
    if let Some(dir) = args.out.or(cfg.out) {
        for c in &run.certificates {
            write_json(&dir, &format!("{}.json", c.claim.name()), c)?;
        }
        let timing: std::collections::BTreeMap<&str, f64> =
            run.timings.iter().map(|(k, s)| (k.name(), *s)).collect();
        write_json(&dir, "timing.json", &timing)?;
    }
    Ok(run.exit_code())
}
