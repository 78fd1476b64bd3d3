//! The `cvhnn` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::emit::{emit_histogram_csv, emit_instances_csv, emit_json_summary, emit_svg_histogram, SvgOptions};
use super::grid::{figure, FIGURES};
use super::run::{histogram_of, run_instances};
use super::spec::{sample_network, ExperimentConfig, ExperimentSpec, StructureFamily};
use super::{verify, HarnessError};
use crate::cycle::{CycleReport, Engine};
use crate::dynamics::{run_serial_to_fixpoint, ScanOrder};
use crate::oracle::{functional_graph_cycles, CycleInventory, ORACLE_LIMIT};
use crate::rng::SeededRng;
use crate::structure::{classify, ThresholdMode};
use crate::types::{ComplexMatrix, Network, StructureTag};

pub const SEED_ENV: &str = "CVHNN_SEED";

#[derive(Parser, Debug)]
#[command(name = "cvhnn", version, about = "Structured complex-valued Hopfield network dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Probe one network from a matrix file or a generator.
    Run(RunArgs),
    /// Run a configured experiment and write its artifacts.
    Experiment(ExperimentArgs),
    /// Exact attractor inventory over every start state (small N only).
    Oracle(OracleArgs),
    /// Check the convergence theorems on random instances.
    Verify(VerifyArgs),
    /// Run every cell of a named figure.
    PaperGrid(GridArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    Brent,
    Hashed,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Brent => Engine::Brent,
            EngineArg::Hashed => Engine::Hashed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
    All,
}

impl Format {
    fn wants(self, f: Format) -> bool {
        self == Format::All || self == f
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Parallel,
    Serial,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON file with `re`, `im`, `t_re`, `t_im`.
    #[arg(long, conflicts_with_all = ["structure", "n"])]
    matrix: Option<PathBuf>,
    #[arg(long, required_unless_present = "matrix")]
    structure: Option<StructureFamily>,
    #[arg(long, required_unless_present = "matrix")]
    n: Option<usize>,
    #[arg(long, default_value = "zero")]
    threshold: ThresholdMode,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = super::spec::DEFAULT_CAP)]
    cap: u64,
    #[arg(long, value_enum, default_value = "brent")]
    engine: EngineArg,
    #[arg(long, value_enum, default_value = "parallel")]
    mode: Mode,
}

#[derive(Args, Debug)]
struct Overrides {
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    format: Format,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Periods above this share one bar in the SVG.
    #[arg(long, default_value_t = 64)]
    max_period: u64,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    o: Overrides,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    structure: StructureFamily,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "zero")]
    threshold: ThresholdMode,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the inventory here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Random instances per check.
    #[arg(long, default_value_t = 200)]
    instances: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// `fig1` … `fig10` (or `polar`).
    figure: String,
    #[command(flatten)]
    o: Overrides,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Runtime(String),
    Violation,
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config { .. } | HarnessError::InvalidSpec(_) | HarnessError::Model(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<crate::error::Error> for Failure {
    fn from(e: crate::error::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 runtime failure or theorem violation,
/// 2 usage or configuration error.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => cmd_verify(a),
        Command::PaperGrid(a) => cmd_grid(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Failure::Violation) => 1,
    }
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Failure::Usage(format!("{SEED_ENV}=`{v}` is not a u64"))),
        Err(_) => Ok(None),
    }
}

fn seed_or_env(flag: Option<u64>) -> Result<u64, Failure> {
    Ok(match flag {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    })
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Matrix file accepted by `run`.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub t_re: Option<Vec<f64>>,
    #[serde(default)]
    pub t_im: Option<Vec<f64>>,
}

impl MatrixFile {
    pub fn into_network(self) -> Result<Network, crate::error::Error> {
        let n = self.re.len();
        let im = self.im.unwrap_or_else(|| vec![vec![0.0; n]; n]);
        if im.len() != n {
            return Err(crate::error::Error::DimensionMismatch { expected: n, got: im.len() });
        }
        let rows = self
            .re
            .into_iter()
            .zip(im)
            .map(|(r, i)| {
                if r.len() != i.len() {
                    return Err(crate::error::Error::DimensionMismatch { expected: r.len(), got: i.len() });
                }
                Ok(r.into_iter().zip(i).map(|(a, b)| Complex64::new(a, b)).collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>, _>>()?;
        let weights = ComplexMatrix::from_rows(rows)?;
        let t_re = self.t_re.unwrap_or_else(|| vec![0.0; n]);
        let t_im = self.t_im.unwrap_or_else(|| vec![0.0; n]);
        if t_re.len() != t_im.len() {
            return Err(crate::error::Error::DimensionMismatch { expected: t_re.len(), got: t_im.len() });
        }
        let t = t_re.into_iter().zip(t_im).map(|(a, b)| Complex64::new(a, b)).collect();
        Network::new(weights, t)
    }
}

#[derive(Serialize)]
struct RunOutput {
    n: usize,
    tags: Vec<StructureTag>,
    initial_state: String,
    #[serde(flatten)]
    report: CycleReport,
}

#[derive(Serialize)]
struct SerialRunOutput {
    n: usize,
    tags: Vec<StructureTag>,
    initial_state: String,
    converged: bool,
    sweeps_used: usize,
    final_state: String,
}

fn cmd_run(a: RunArgs) -> Result<(), Failure> {
    let seed = seed_or_env(a.seed)?;
    let mut rng = SeededRng::new(seed, 0);
    let (net, s0) = match (&a.matrix, a.structure, a.n) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let file: MatrixFile =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let net = file.into_network()?;
            let s0 = super::spec::random_state(net.n(), &mut rng);
            (net, s0)
        }
        (None, Some(family), Some(n)) => {
            if n == 0 || n > super::spec::MAX_N {
                return Err(Failure::Usage(format!("--n must be in [1, {}]", super::spec::MAX_N)));
            }
            sample_network(family, a.threshold, n, &mut rng)?
        }
        _ => return Err(Failure::Usage("give --matrix or both --structure and --n".into())),
    };
    let tags: Vec<StructureTag> = classify(net.weights()).into_iter().collect();
    match a.mode {
        Mode::Parallel => {
            let report = Engine::from(a.engine).detect(&net, &s0, a.cap)?;
            print_json(&RunOutput { n: net.n(), tags, initial_state: s0.to_string(), report });
        }
        Mode::Serial => {
            let sweeps = usize::try_from(a.cap).unwrap_or(usize::MAX);
            let out = run_serial_to_fixpoint(&net, &s0, ScanOrder::Cyclic, sweeps)?;
            print_json(&SerialRunOutput {
                n: net.n(),
                tags,
                initial_state: s0.to_string(),
                converged: out.converged,
                sweeps_used: out.sweeps_used,
                final_state: out.state.to_string(),
            });
        }
    }
    Ok(())
}

fn apply_overrides(mut spec: ExperimentSpec, o: &Overrides) -> Result<ExperimentSpec, Failure> {
    if let Some(t) = o.trials {
        spec.trials = t;
    }
    if let Some(c) = o.cap {
        spec.cap = c;
    }
    spec.validate()?;
    Ok(spec)
}

fn write_artifacts(spec: &ExperimentSpec, o: &Overrides) -> Result<super::Histogram, Failure> {
    let outcomes = run_instances(spec, o.jobs)?;
    let h = histogram_of(&outcomes);
    let dir = &o.out;
    fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
    let path = |ext: &str| -> PathBuf { dir.join(format!("{}.{ext}", spec.name)) };
    if o.format.wants(Format::Csv) {
        emit_instances_csv(spec, &outcomes, &path("instances.csv"))?;
        emit_histogram_csv(&h, &path("histogram.csv"))?;
    }
    if o.format.wants(Format::Json) {
        emit_json_summary(spec, &h, &path("json"))?;
    }
    if o.format.wants(Format::Svg) {
        let opts = SvgOptions { max_period: o.max_period, ..SvgOptions::default() };
        emit_svg_histogram(&h, &format!("{} ({})", spec.name, spec.family), opts, &path("svg"))?;
    }
    Ok(h)
}

fn summary_line(spec: &ExperimentSpec, h: &super::Histogram) -> String {
    let mut s = format!("{}: {} trials", spec.name, h.trials());
    match h.mode_period() {
        Some(p) => write!(s, ", mode L={p} Pr={:.3}", h.mode_probability()).unwrap(),
        None => s.push_str(", no resolved runs"),
    }
    if let (Some(m), Some(sd)) = (h.mean_period(), h.stddev_period()) {
        write!(s, ", mean {m:.2} sd {sd:.2}").unwrap();
    }
    if h.unresolved > 0 {
        write!(s, ", {} unresolved", h.unresolved).unwrap();
    }
    s
}

fn cmd_experiment(a: ExperimentArgs) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(&a.config).map_err(|e| Failure::Usage(e.to_string()))?;
    let spec = cfg.resolve(a.o.seed, env_seed()?)?;
    let spec = apply_overrides(spec, &a.o)?;
    let h = write_artifacts(&spec, &a.o)?;
    println!("{}", summary_line(&spec, &h));
    Ok(())
}

#[derive(Serialize)]
struct OracleOutput {
    structure: String,
    threshold: ThresholdMode,
    seed: u64,
    #[serde(flatten)]
    inventory: CycleInventory,
}

fn cmd_oracle(a: OracleArgs) -> Result<(), Failure> {
    if a.n == 0 || a.n > ORACLE_LIMIT {
        return Err(Failure::Usage(format!("--n must be in [1, {ORACLE_LIMIT}]")));
    }
    let seed = seed_or_env(a.seed)?;
    let (net, _) = sample_network(a.structure, a.threshold, a.n, &mut SeededRng::new(seed, 0))?;
    let out = OracleOutput {
        structure: a.structure.to_string(),
        threshold: a.threshold,
        seed,
        inventory: functional_graph_cycles(&net)?,
    };
    let mut text = serde_json::to_string_pretty(&out).expect("serializable");
    text.push('\n');
    match a.out {
        Some(p) => write_file(&p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_file(p: &Path, text: &str) -> Result<(), Failure> {
    fs::write(p, text).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let seed = seed_or_env(a.seed)?;
    if a.instances == 0 {
        return Err(Failure::Usage("--instances must be at least 1".into()));
    }
    let checks = verify::run_suite(a.instances, seed)?;
    for c in &checks {
        println!("{c}");
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn cmd_grid(a: GridArgs) -> Result<(), Failure> {
    let fig = figure(&a.figure)
        .ok_or_else(|| Failure::Usage(format!("unknown figure `{}`; expected one of {FIGURES:?}", a.figure)))?;
    let seed = seed_or_env(a.o.seed)?;
    println!("{}: {}", fig.name, fig.title);
    for c in &fig.cells {
        let spec = apply_overrides(c.spec(super::spec::DEFAULT_TRIALS, seed, super::spec::DEFAULT_CAP), &a.o)?;
        let h = write_artifacts(&spec, &a.o)?;
        let mut line = summary_line(&spec, &h);
        if let Some(r) = c.reference {
            write!(
                line,
                " | published L={} Pr={:.2}, measured Pr[L={}]={:.3}",
                r.period,
                r.probability,
                r.period,
                h.probability(r.period)
            )
            .unwrap();
        }
        println!("{line}");
    }
    Ok(())
}
