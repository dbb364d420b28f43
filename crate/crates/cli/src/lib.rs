//! Command-line front end: `analyze`, `simulate`, `consensus` and `sweep`.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use tvm_core::criteria::{classify, parse_densities, CriteriaReport, Ratio, ThresholdModel};
use tvm_core::dynamics::{
    run_trajectory_with, write_collisions_csv, write_trajectory_csv, Collision, SeriesPoint, TrajectoryOptions,
    TrajectoryStats, DEFAULT_EVENT_CAP,
};
use tvm_core::graph::{load_graph, Family, OpinionGraph, SpatialGraph};
use tvm_core::stats::{estimate_consensus_probability_with_cap, par_replicas, ConsensusEstimate};
use tvm_core::sweep::{summary_preset, sweep, SummaryCheck, SweepPoint};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] tvm_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    /// Invalid configurations exit with 2; I/O failures with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "tvm",
    version,
    about = "Voter model with confidence threshold: exact criteria and simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact fluctuation/fixation report for one opinion graph and threshold
    Analyze(AnalyzeArgs),
    /// Simulate trajectories on a spatial graph and write CSV series
    Simulate(SimulateArgs),
    /// Estimate the probability of consensus on a finite spatial graph
    Consensus(ConsensusArgs),
    /// Verdicts over a parameter range, or a built-in preset
    Sweep(SweepArgs),
}

/// Opinion graph: a named family with its parameters, or an edge list.
#[derive(Debug, Clone, Default, Args)]
pub struct GraphArgs {
    /// path, star, cycle, hypercube, tetrahedron, cube, octahedron, dodecahedron, icosahedron
    #[arg(long)]
    pub graph: Option<String>,
    /// Number of opinions (path, cycle)
    #[arg(long = "F")]
    pub f: Option<usize>,
    /// Number of branches (star)
    #[arg(long)]
    pub b: Option<usize>,
    /// Branch length (star)
    #[arg(long)]
    pub r: Option<usize>,
    /// Dimension (hypercube)
    #[arg(long = "d-dim")]
    pub d_dim: Option<usize>,
    /// Edge list, one `u v` pair per line, `#` comments
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
}

impl GraphArgs {
    pub fn load(&self) -> Result<OpinionGraph, CliError> {
        match (&self.graph, &self.graph_file) {
            (Some(name), None) => Ok(Family::from_name(name, self.f, self.b, self.r, self.d_dim)?.build()?),
            (None, Some(path)) => Ok(load_graph(&read(path)?)?),
            _ => Err(invalid("give exactly one of --graph or --graph-file")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Confidence threshold
    #[arg(long)]
    pub tau: usize,
    /// Initial densities, e.g. "1/2,1/4,0.25"; uniform when omitted
    #[arg(long)]
    pub densities: Option<String>,
}

impl ModelArgs {
    pub fn model(&self) -> Result<ThresholdModel, CliError> {
        let g = self.graph.load()?;
        match &self.densities {
            None => Ok(ThresholdModel::uniform(g, self.tau)),
            Some(text) => Ok(ThresholdModel::new(g, self.tau, parse_densities(text)?)?),
        }
    }
}

/// Spatial graph: ring `Z_L` (default), an edge list or a complete graph.
#[derive(Debug, Clone, Args)]
pub struct SpatialArgs {
    /// Ring length
    #[arg(long = "ring-L")]
    pub ring_l: Option<usize>,
    /// Edge list of a finite connected spatial graph
    #[arg(long)]
    pub spatial_file: Option<PathBuf>,
    /// Complete spatial graph on this many sites
    #[arg(long)]
    pub complete: Option<usize>,
}

pub const DEFAULT_RING: usize = 1000;

impl SpatialArgs {
    pub fn load(&self) -> Result<SpatialGraph, CliError> {
        match (self.ring_l, &self.spatial_file, self.complete) {
            (None, None, None) => Ok(SpatialGraph::ring(DEFAULT_RING)?),
            (Some(l), None, None) => Ok(SpatialGraph::ring(l)?),
            (None, Some(path), None) => Ok(SpatialGraph::load(&read(path)?)?),
            (None, None, Some(n)) => Ok(SpatialGraph::complete(n)?),
            _ => Err(invalid("give at most one of --ring-L, --spatial-file, --complete")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also write the report here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub spatial: SpatialArgs,
    /// Time horizon T
    #[arg(long)]
    pub horizon: f64,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    #[arg(long)]
    pub seed: u64,
    /// Sampling intervals on [0, T]
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Trajectory CSV (replica-averaged series)
    #[arg(long)]
    pub out: PathBuf,
    /// Collision CSV (ring only)
    #[arg(long)]
    pub collisions_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConsensusArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub spatial: SpatialArgs,
    #[arg(long)]
    pub replicas: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_EVENT_CAP)]
    pub event_cap: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Published fluctuation and fixation regions for paths, stars, cycles, hypercubes and the solids
    Summary,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, conflicts_with_all = ["graph", "tau"])]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub graph: Option<String>,
    /// Values such as `3..20` (inclusive) or `4,6,9`
    #[arg(long = "F")]
    pub f: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long = "d-dim")]
    pub d_dim: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Output of `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepDocument {
    Preset {
        preset: String,
        checks: Vec<SummaryCheck>,
        disagreements: usize,
    },
    Grid {
        points: Vec<SweepPoint>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusDocument {
    #[serde(flatten)]
    pub result: ConsensusEstimate,
    pub rho_cent: Ratio,
    /// Consensus frequency at least `rho_cent - 3 SE`.
    pub bound_within_band: bool,
    /// Mean center share within `3 SE` of `rho_cent`.
    pub martingale_within_band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub replicas: usize,
    pub seed: u64,
    pub horizon: f64,
    pub events: u64,
    pub collisions: usize,
    pub final_point: SeriesPoint,
    pub quiet_fraction: f64,
    pub frozen_drift: f64,
}

/// Parses `a..b` (inclusive), `a..=b`, or a comma list.
pub fn parse_values(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || invalid(format!("cannot parse {text:?} as a list or range of integers"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(num).collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> io::Result<()>) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(fs::File::create(path).map_err(io_err)?);
    f(&mut w).and_then(|_| w.flush()).map_err(io_err)
}

fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<CriteriaReport, CliError> {
    Ok(classify(&args.model.model()?))
}

/// Runs the replicas and averages their series point by point.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<(TrajectoryStats, SimulationSummary), CliError> {
    if args.replicas == 0 {
        return Err(invalid("--replicas must be positive"));
    }
    let m = args.model.model()?;
    let spatial = args.spatial.load()?;
    let opts = TrajectoryOptions {
        horizon: args.horizon,
        samples: args.samples,
        record_collisions: args.collisions_out.is_some(),
    };
    let runs = par_replicas(args.replicas, args.seed, |rng| {
        run_trajectory_with(&m, &spatial, &opts, rng)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let merged = merge_runs(runs);
    let summary = SimulationSummary {
        replicas: args.replicas,
        seed: args.seed,
        horizon: args.horizon,
        events: merged.events,
        collisions: merged.collision_samples.len(),
        final_point: *merged.last(),
        quiet_fraction: merged.quiet_fraction,
        frozen_drift: merged.frozen_drift(),
    };
    Ok((merged, summary))
}

fn merge_runs(runs: Vec<TrajectoryStats>) -> TrajectoryStats {
    let n = runs.len() as f64;
    let mut series = runs[0].series.clone();
    for (k, point) in series.iter_mut().enumerate() {
        point.mean_xi = runs.iter().map(|r| r.series[k].mean_xi).sum::<f64>() / n;
        point.frozen_fraction = runs.iter().map(|r| r.series[k].frozen_fraction).sum::<f64>() / n;
        point.flips = runs.iter().map(|r| r.series[k].flips).sum::<u64>() / runs.len() as u64;
    }
    let sites = runs[0].flips_per_site.len();
    TrajectoryStats {
        flips_per_site: (0..sites)
            .map(|x| runs.iter().map(|r| r.flips_per_site[x]).sum())
            .collect(),
        series,
        collision_samples: runs
            .iter()
            .flat_map(|r| r.collision_samples.iter().copied())
            .collect::<Vec<Collision>>(),
        final_time: runs[0].final_time,
        events: runs.iter().map(|r| r.events).sum(),
        quiet_fraction: runs.iter().map(|r| r.quiet_fraction).sum::<f64>() / n,
    }
}

pub fn cmd_consensus(args: &ConsensusArgs) -> Result<ConsensusDocument, CliError> {
    let m = args.model.model()?;
    let spatial = args.spatial.load()?;
    let result = estimate_consensus_probability_with_cap(&m, &spatial, args.replicas, args.seed, args.event_cap)?;
    let rho = num_f64(&m.rho_cent());
    let (est, share) = (&result.estimate, &result.center_share);
    Ok(ConsensusDocument {
        bound_within_band: est.mean >= rho - 3.0 * est.standard_error,
        martingale_within_band: share.within(rho, 3.0),
        rho_cent: Ratio(m.rho_cent()),
        result,
    })
}

fn num_f64(r: &tvm_core::Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<SweepDocument, CliError> {
    if let Some(Preset::Summary) = args.preset {
        let checks = summary_preset()?;
        return Ok(SweepDocument::Preset {
            preset: "summary".into(),
            disagreements: checks.iter().filter(|c| !c.agrees).count(),
            checks,
        });
    }
    let name = args
        .graph
        .as_deref()
        .ok_or_else(|| invalid("sweep needs --graph or --preset"))?;
    let taus = parse_values(args.tau.as_deref().ok_or_else(|| invalid("sweep needs --tau"))?)?;
    let values = |v: &Option<String>, flag: &str| -> Result<Vec<usize>, CliError> {
        parse_values(
            v.as_deref()
                .ok_or_else(|| invalid(format!("{name} sweep needs {flag}")))?,
        )
    };
    let families: Vec<Family> = match name {
        "path" => values(&args.f, "--F")?
            .into_iter()
            .map(|f| Family::Path { vertices: f })
            .collect(),
        "cycle" => values(&args.f, "--F")?
            .into_iter()
            .map(|f| Family::Cycle { vertices: f })
            .collect(),
        "hypercube" => values(&args.d_dim, "--d-dim")?
            .into_iter()
            .map(|dim| Family::Hypercube { dim })
            .collect(),
        "star" => {
            let rs = values(&args.r, "--r")?;
            values(&args.b, "--b")?
                .into_iter()
                .flat_map(|b| rs.iter().map(move |&r| Family::Star { branches: b, length: r }))
                .collect()
        }
        other => vec![Family::from_name(other, None, None, None, None)?],
    };
    Ok(SweepDocument::Grid {
        points: sweep(&families, &taus)?,
    })
}

/// Runs one parsed command, writing documents to `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let out_err = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match &cli.command {
        Command::Analyze(args) => {
            let report = cmd_analyze(args)?;
            let json = report.to_json();
            if let Some(path) = &args.out {
                write_file(path, |w| writeln!(w, "{json}"))?;
            }
            writeln!(stdout, "{json}\nverdict: {}", report.verdict).map_err(out_err)
        }
        Command::Simulate(args) => {
            let (stats, summary) = cmd_simulate(args)?;
            write_file(&args.out, |w| write_trajectory_csv(&stats, w))?;
            if let Some(path) = &args.collisions_out {
                write_file(path, |w| write_collisions_csv(&stats.collision_samples, w))?;
            }
            writeln!(stdout, "{}", to_json(&summary)).map_err(out_err)
        }
        Command::Consensus(args) => {
            let doc = cmd_consensus(args)?;
            let json = to_json(&doc);
            if let Some(path) = &args.out {
                write_file(path, |w| writeln!(w, "{json}"))?;
            }
            writeln!(stdout, "{json}").map_err(out_err)
        }
        Command::Sweep(args) => {
            let doc = cmd_sweep(args)?;
            let json = to_json(&doc);
            match &args.out {
                Some(path) => write_file(path, |w| writeln!(w, "{json}"))?,
                None => writeln!(stdout, "{json}").map_err(out_err)?,
            }
            if let SweepDocument::Preset {
                checks, disagreements, ..
            } = &doc
            {
                writeln!(stdout, "{} checks, {disagreements} disagreements", checks.len()).map_err(out_err)?;
                for c in checks.iter().filter(|c| !c.agrees) {
                    writeln!(stdout, "{c}").map_err(out_err)?;
                }
            }
            Ok(())
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
