//! Scenario files and the command-line verbs.
//!
//! A single TOML file describes the obstacle, target, controller parameters,
//! simulator settings and the list of start points. Every verb reads one.
//! Run status is reported only through the exit code; all data goes to files
//! under `--out`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{compare_baseline, verify, write_comparison_csv, AnalysisReport};
use crate::controller::{select_virtual_destinations, Mode, VirtualDestinations};
use crate::error::{Error, Result};
use crate::geometry::VectorN;
use crate::sim::{simulate_with, Integrator, RunStatus, SimConfig, StallConfig, Trajectory};
use crate::world::{Obstacle, Scenario, DEFAULT_CONE_FRACTION, DEFAULT_HAT_OFFSET};

/// Points per sampled circle in `plotdata` output.
pub const CIRCLE_POINTS: usize = 360;
/// Latitude and longitude rings used to draw a sphere.
const SPHERE_RINGS: usize = 12;

/// How the initial mode is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeInit {
    /// Shortest-path initialization from the start position.
    #[default]
    Auto,
    Fixed(Mode),
}

impl ModeInit {
    pub fn mode(self) -> Option<Mode> {
        match self {
            ModeInit::Auto => None,
            ModeInit::Fixed(m) => Some(m),
        }
    }
}

impl Serialize for ModeInit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ModeInit::Auto => s.serialize_str("auto"),
            ModeInit::Fixed(m) => m.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ModeInit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) if t == "auto" => Ok(ModeInit::Auto),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected \"auto\", -1, 0 or 1, got \"{t}\""))),
            Raw::Int(v) => Mode::from_value(v)
                .map(ModeInit::Fixed)
                .ok_or_else(|| serde::de::Error::custom(format!("expected \"auto\", -1, 0 or 1, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSection {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub h: f64,
    pub max_t: f64,
    pub max_jumps: usize,
    pub convergence_tol: f64,
    #[serde(deserialize_with = "integrator_from_str")]
    pub integrator: Integrator,
    pub safety_tol: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        let d = SimConfig::default();
        Self {
            h: d.h,
            max_t: d.max_t,
            max_jumps: d.max_jumps,
            convergence_tol: d.convergence_tol,
            integrator: d.integrator,
            safety_tol: d.safety_tol,
        }
    }
}

fn integrator_from_str<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Integrator, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(|_| serde::de::Error::custom(format!("unknown integrator `{s}`, expected rk4 or euler")))
}

fn default_gamma() -> f64 {
    1.0
}

fn default_e() -> f64 {
    DEFAULT_HAT_OFFSET
}

fn default_kappa() -> f64 {
    DEFAULT_CONE_FRACTION
}

fn default_tie_break() -> Mode {
    Mode::Positive
}

/// On-disk scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dimension: usize,
    pub target: Vec<f64>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_e")]
    pub e: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default)]
    pub mode_init: ModeInit,
    #[serde(default = "default_tie_break")]
    pub tie_break: Mode,
    #[serde(default)]
    pub starts: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_dir: Option<Vec<f64>>,
    pub obstacle: ObstacleSection,
    #[serde(default)]
    pub sim: SimSection,
}

/// A validated scenario file.
#[derive(Debug, Clone)]
pub struct Config {
    pub scenario: Scenario,
    pub sim: SimConfig,
    pub starts: Vec<VectorN>,
    pub mode_init: ModeInit,
    pub fallback_dir: Option<VectorN>,
}

impl Config {
    pub fn start(&self, i: usize) -> Result<&VectorN> {
        self.starts
            .get(i)
            .ok_or_else(|| Error::invalid("starts", format!("no start with index {i} ({} defined)", self.starts.len())))
    }

    pub fn destinations(&self, i: usize) -> Result<VirtualDestinations> {
        select_virtual_destinations(&self.scenario, self.start(i)?, self.fallback_dir.as_ref())
    }

    /// Simulates start `i`, returning the trajectory, its destinations and its report.
    pub fn run(&self, i: usize) -> Result<(Trajectory, VirtualDestinations, AnalysisReport)> {
        let vd = self.destinations(i)?;
        let traj = simulate_with(&self.scenario, &vd, self.start(i)?, self.mode_init.mode(), &self.sim)?;
        let report = verify(&traj, &self.scenario, &vd)?;
        Ok((traj, vd, report))
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(e.to_string()))
    }

    fn check_len(&self, key: &str, v: &[f64]) -> Result<()> {
        if v.len() != self.dimension {
            return Err(Error::invalid(key, format!("expected {} coordinates, got {}", self.dimension, v.len())));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<Config> {
        if self.dimension < 2 {
            return Err(Error::invalid("dimension", format!("must be at least 2, got {}", self.dimension)));
        }
        self.check_len("obstacle.center", &self.obstacle.center)?;
        self.check_len("target", &self.target)?;
        let obstacle = Obstacle::new(VectorN::from_column_slice(&self.obstacle.center), self.obstacle.radius)?;
        let scenario = Scenario::new(obstacle, VectorN::from_column_slice(&self.target), self.gamma, self.e, self.kappa)?;
        if self.tie_break == Mode::Straight {
            return Err(Error::invalid("tie_break", "must be -1 or 1"));
        }
        let sim = SimConfig {
            h: self.sim.h,
            max_t: self.sim.max_t,
            max_jumps: self.sim.max_jumps,
            convergence_tol: self.sim.convergence_tol,
            integrator: self.sim.integrator,
            safety_tol: self.sim.safety_tol,
            tie_break: self.tie_break,
            ..SimConfig::default()
        };
        sim.validate().map_err(|e| match e {
            Error::Invalid { key, reason } if key != "tie_break" && !key.starts_with("sim.") => {
                Error::invalid(format!("sim.{key}"), reason)
            }
            e => e,
        })?;
        let mut starts = Vec::with_capacity(self.starts.len());
        for s in &self.starts {
            self.check_len("starts", s)?;
            let x = VectorN::from_column_slice(s);
            scenario.check_start(&x)?;
            starts.push(x);
        }
        let fallback_dir = match &self.fallback_dir {
            Some(v) => {
                self.check_len("fallback_dir", v)?;
                Some(VectorN::from_column_slice(v))
            }
            None => None,
        };
        Ok(Config {
            scenario,
            sim,
            starts,
            mode_init: self.mode_init,
            fallback_dir,
        })
    }
}

/// 1-based line of `dotted` (e.g. `obstacle.radius`) in a TOML document.
pub fn locate_key(text: &str, dotted: &str) -> Option<usize> {
    let (table, key) = match dotted.rsplit_once('.') {
        Some((t, k)) => (t, k),
        None => ("", dotted),
    };
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(h) = t.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            current = h.trim().to_string();
            continue;
        }
        let Some((lhs, _)) = t.split_once('=') else { continue };
        let lhs = lhs.trim();
        if (current == table && lhs == key) || (current.is_empty() && !table.is_empty() && lhs == dotted) {
            return Some(i + 1);
        }
    }
    None
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates scenario text; `origin` names the source in diagnostics.
pub fn parse_config(text: &str, origin: &str) -> Result<Config> {
    let file = ScenarioFile::parse(text).map_err(|e| {
        let line = e.span().map(|s| format!("line {}: ", line_of_offset(text, s.start))).unwrap_or_default();
        Error::Config {
            path: origin.to_string(),
            message: format!("{line}{}", e.message()),
        }
    })?;
    file.validate().map_err(|e| match e {
        Error::Invalid { key, reason } => {
            let line = locate_key(text, &key).map(|l| format!("line {l}: ")).unwrap_or_default();
            Error::Config {
                path: origin.to_string(),
                message: format!("{line}invalid `{key}`: {reason}"),
            }
        }
        e => e,
    })
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config(&text, &path.display().to_string())
}

/// Exit code for a run status.
pub fn exit_code(status: RunStatus) -> i32 {
    match status {
        RunStatus::Converged => 0,
        RunStatus::Timeout => 2,
        RunStatus::SafetyViolation => 3,
        RunStatus::JumpBudget | RunStatus::NumericFailure | RunStatus::Stalled => 4,
    }
}

/// Exit code for failures before or outside a run.
pub const EXIT_CONFIG: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "hybrid-nav", version, about = "Hybrid feedback navigation around a spherical obstacle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Step size override.
    #[arg(long)]
    pub h: Option<f64>,
    /// Reserved; the pipeline is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one start and write its trajectory and report.
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Simulate every start and write a summary table.
    Grid {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the continuous law and the hybrid law from every start.
    Compare {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write gnuplot-ready path and obstacle columns for a trajectory.
    Plotdata {
        trajectory: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a stored trajectory against a scenario.
    Verify {
        scenario: PathBuf,
        trajectory: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn load_with_override(path: &Path, h: Option<f64>) -> Result<Config> {
    let mut cfg = load_config(path)?;
    if let Some(h) = h {
        cfg.sim.h = h;
        cfg.sim.validate()?;
    }
    Ok(cfg)
}

fn create_file(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_run(out: &Path, i: usize, traj: &Trajectory, report: &AnalysisReport) -> Result<()> {
    traj.write_csv(create_file(&out.join(format!("traj_{i}.csv")))?)?;
    let mut f = create_file(&out.join(format!("report_{i}.json")))?;
    writeln!(f, "{}", report.to_json()?)?;
    f.flush()?;
    Ok(())
}

/// Runs start `i` and writes `traj_<i>.csv` and `report_<i>.json`.
pub fn cmd_simulate(cfg: &Config, start: usize, out: &Path) -> Result<AnalysisReport> {
    fs::create_dir_all(out)?;
    let (traj, _, report) = cfg.run(start)?;
    write_run(out, start, &traj, &report)?;
    Ok(report)
}

/// Runs all starts in parallel and writes per-run artifacts plus `summary.csv`.
pub fn cmd_grid(cfg: &Config, out: &Path) -> Result<Vec<AnalysisReport>> {
    if cfg.starts.is_empty() {
        return Err(Error::invalid("starts", "grid needs at least one start"));
    }
    fs::create_dir_all(out)?;
    let runs: Vec<(VirtualDestinations, AnalysisReport)> = (0..cfg.starts.len())
        .into_par_iter()
        .map(|i| {
            let (traj, vd, report) = cfg.run(i)?;
            write_run(out, i, &traj, &report)?;
            Ok((vd, report))
        })
        .collect::<Result<_>>()?;
    write_summary(cfg, &runs, create_file(&out.join("summary.csv"))?)?;
    Ok(runs.into_iter().map(|(_, r)| r).collect())
}

fn write_summary<W: Write>(cfg: &Config, runs: &[(VirtualDestinations, AnalysisReport)], out: W) -> Result<()> {
    let n = cfg.scenario.dimension();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = vec!["start_id".into()];
    header.extend((0..n).map(|k| format!("x0_{k}")));
    header.extend(
        [
            "status",
            "min_clearance",
            "path_length",
            "oracle_length",
            "optimality_ratio",
            "lyapunov_violations",
            "lyapunov_worst",
            "max_control_gap_at_jumps",
            "max_plane_deviation",
            "jumps",
        ]
        .map(String::from),
    );
    header.extend((0..n).map(|k| format!("xd_plus_{k}")));
    header.extend((0..n).map(|k| format!("xd_minus_{k}")));
    w.write_record(&header)?;
    for (i, (vd, r)) in runs.iter().enumerate() {
        let mut row: Vec<String> = vec![i.to_string()];
        row.extend(cfg.starts[i].iter().map(f64::to_string));
        row.extend([
            r.status.to_string(),
            r.min_clearance.to_string(),
            r.path_length.to_string(),
            r.oracle_length.to_string(),
            r.optimality_ratio.to_string(),
            r.lyapunov_violations.count.to_string(),
            r.lyapunov_violations.worst.to_string(),
            r.max_control_gap_at_jumps.to_string(),
            r.max_plane_deviation.to_string(),
            r.jumps.to_string(),
        ]);
        row.extend(vd.xd_plus.iter().map(f64::to_string));
        row.extend(vd.xd_minus.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `compare.csv` with one baseline and one hybrid row per start.
pub fn cmd_compare(cfg: &Config, out: &Path) -> Result<Vec<crate::analysis::ComparisonRow>> {
    if cfg.starts.is_empty() {
        return Err(Error::invalid("starts", "compare needs at least one start"));
    }
    fs::create_dir_all(out)?;
    // each start is independent; rows are reassembled in start order
    let rows: Vec<_> = cfg
        .starts
        .par_iter()
        .map(|x0| compare_baseline(&cfg.scenario, std::slice::from_ref(x0), cfg.mode_init.mode(), &cfg.sim, StallConfig::default()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .enumerate()
        .flat_map(|(i, rows)| {
            rows.into_iter().map(move |mut r| {
                r.start_id = i;
                r
            })
        })
        .collect();
    write_comparison_csv(&rows, create_file(&out.join("compare.csv"))?)?;
    Ok(rows)
}

/// Dimension of the written plot data, with a warning when coordinates were dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotSummary {
    pub columns: usize,
    pub warning: Option<String>,
}

/// Writes `path.dat` (one row per sample) and `obstacle.dat` (sampled circle
/// or latitude/longitude rings, blank-line separated).
pub fn cmd_plotdata(traj: &Trajectory, scenario: &Scenario, out: &Path) -> Result<PlotSummary> {
    fs::create_dir_all(out)?;
    let n = traj.dimension().max(scenario.dimension());
    let cols = n.min(3);
    let warning = (n > 3).then(|| format!("dimension {n} > 3: writing the first three coordinates only"));
    let mut f = create_file(&out.join("path.dat"))?;
    for s in &traj.samples {
        let row: Vec<String> = s.x.iter().take(cols).map(f64::to_string).collect();
        writeln!(f, "{}", row.join(" "))?;
    }
    f.flush()?;
    let c = scenario.obstacle().center();
    let r = scenario.obstacle().radius();
    let mut f = create_file(&out.join("obstacle.dat"))?;
    let ring = |f: &mut BufWriter<File>, point: &dyn Fn(f64) -> [f64; 3]| -> Result<()> {
        for k in 0..CIRCLE_POINTS {
            let p = point(2.0 * std::f64::consts::PI * k as f64 / CIRCLE_POINTS as f64);
            let row: Vec<String> = p[..cols].iter().map(f64::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        writeln!(f)?;
        Ok(())
    };
    let cz = if cols == 3 { c[2] } else { 0.0 };
    if cols == 2 {
        ring(&mut f, &|a| [c[0] + r * a.cos(), c[1] + r * a.sin(), 0.0])?;
    } else {
        for i in 1..SPHERE_RINGS {
            let lat = std::f64::consts::PI * (i as f64 / SPHERE_RINGS as f64 - 0.5);
            ring(&mut f, &|a| [c[0] + r * lat.cos() * a.cos(), c[1] + r * lat.cos() * a.sin(), cz + r * lat.sin()])?;
        }
        for i in 0..SPHERE_RINGS {
            let lon = std::f64::consts::PI * i as f64 / SPHERE_RINGS as f64;
            ring(&mut f, &|a| [c[0] + r * a.cos() * lon.cos(), c[1] + r * a.cos() * lon.sin(), cz + r * a.sin()])?;
        }
    }
    f.flush()?;
    Ok(PlotSummary { columns: cols, warning })
}

/// Status of a stored trajectory, reconstructed from its samples.
pub fn infer_status(traj: &Trajectory, cfg: &Config) -> RunStatus {
    let obstacle = cfg.scenario.obstacle();
    if traj.samples.iter().any(|s| s.x.iter().any(|v| !v.is_finite())) {
        RunStatus::NumericFailure
    } else if traj.samples.iter().any(|s| obstacle.clearance(&s.x) < -cfg.sim.safety_tol) {
        RunStatus::SafetyViolation
    } else if traj.last().is_some_and(|s| (&s.x - cfg.scenario.target()).norm() <= cfg.sim.convergence_tol) {
        RunStatus::Converged
    } else if traj.jumps() >= cfg.sim.max_jumps {
        RunStatus::JumpBudget
    } else {
        RunStatus::Timeout
    }
}

/// Verifies a stored trajectory for start `i` and writes `verify_<i>.json`.
pub fn cmd_verify(cfg: &Config, traj_path: &Path, start: usize, out: &Path) -> Result<AnalysisReport> {
    let mut traj = Trajectory::read_csv(File::open(traj_path)?)?;
    traj.status = infer_status(&traj, cfg);
    let vd = cfg.destinations(start)?;
    let report = verify(&traj, &cfg.scenario, &vd)?;
    fs::create_dir_all(out)?;
    let mut f = create_file(&out.join(format!("verify_{start}.json")))?;
    writeln!(f, "{}", report.to_json()?)?;
    f.flush()?;
    Ok(report)
}

fn worst_code(statuses: impl IntoIterator<Item = RunStatus>) -> i32 {
    // safety violations dominate, then timeouts, then other failures
    let codes: Vec<i32> = statuses.into_iter().map(exit_code).collect();
    [3, 2, 4].into_iter().find(|c| codes.contains(c)).unwrap_or(0)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Simulate { scenario, start, common } => {
            let cfg = load_with_override(&scenario, common.h)?;
            let report = cmd_simulate(&cfg, start, &common.out)?;
            println!(
                "start {start}: {} after {} jump(s), path length {:.6}, ratio {:.6}",
                report.status, report.jumps, report.path_length, report.optimality_ratio
            );
            Ok(exit_code(report.status))
        }
        Command::Grid { scenario, common } => {
            let cfg = load_with_override(&scenario, common.h)?;
            let reports = cmd_grid(&cfg, &common.out)?;
            for (i, r) in reports.iter().enumerate() {
                println!("start {i}: {} ({} jump(s), ratio {:.6})", r.status, r.jumps, r.optimality_ratio);
            }
            Ok(worst_code(reports.iter().map(|r| r.status)))
        }
        Command::Compare { scenario, common } => {
            let cfg = load_with_override(&scenario, common.h)?;
            let rows = cmd_compare(&cfg, &common.out)?;
            for r in &rows {
                println!("start {} {:?}: {}", r.start_id, r.law, r.status);
            }
            Ok(0)
        }
        Command::Plotdata { trajectory, scenario, common } => {
            let cfg = load_config(&scenario)?;
            let traj = Trajectory::read_csv(File::open(&trajectory)?)?;
            let summary = cmd_plotdata(&traj, &cfg.scenario, &common.out)?;
            if let Some(w) = summary.warning {
                eprintln!("warning: {w}");
            }
            println!("wrote {}-column plot data to {}", summary.columns, common.out.display());
            Ok(0)
        }
        Command::Verify { scenario, trajectory, start, common } => {
            let cfg = load_with_override(&scenario, common.h)?;
            let report = cmd_verify(&cfg, &trajectory, start, &common.out)?;
            println!("start {start}: {} ({} jump(s))", report.status, report.jumps);
            Ok(exit_code(report.status))
        }
    }
}

/// Parses arguments, runs the verb and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config { .. } | Error::Invalid { .. } | Error::Io(_) | Error::Csv(_) => EXIT_CONFIG,
                _ => 4,
            };
            code
        }
    }
}
