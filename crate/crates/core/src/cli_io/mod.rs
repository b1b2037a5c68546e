//! Configuration parsing, CSV output and the command-line front end.

mod config;
mod csv;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{
    corollary_bounds, default_lambda, lemma2_bound, theorem1_bound, theorem2_bound,
};
use crate::harness::{
    bucket_size_sweep, impairment_sweep, mean_bin, switching_experiment, AggregateCurve,
    Experiment, ExperimentConfig, OutputKind,
};

pub use config::{config_hash, parse_config, ConfigError};
pub use csv::{
    write_curve_csv, write_histogram_csv, write_metadata, write_trace_csv, Metadata, OutputError,
    TRACE_HEADER, VERSION_PREFIX,
};

/// Bundled experiment configurations, by name.
pub const PRESETS: [(&str, &str); 4] = [
    (
        "switching",
        include_str!("../../presets/fig_switching.toml"),
    ),
    ("buckets", include_str!("../../presets/fig_buckets.toml")),
    (
        "impairment",
        include_str!("../../presets/fig_impairment.toml"),
    ),
    ("two-arm", include_str!("../../presets/two_arm.toml")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[derive(Debug, Parser)]
#[command(
    name = "impaired-bandits",
    version,
    about = "Bandit simulations under impairment feedback"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo runs of one policy on one instance.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `experiment.master_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `experiment.runs`.
        #[arg(long)]
        runs: Option<u32>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// One of the bundled experiment families.
    Experiment {
        #[arg(value_enum)]
        which: Family,
        /// Replaces the bundled configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Regret bounds evaluated on the configured instance.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to sqrt(K ln T / T).
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// The gap dissimilarity of the configured instance.
    Epsilon {
        #[arg(long)]
        config: PathBuf,
    },
    /// Prints a bundled configuration.
    Preset { name: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Switching,
    Buckets,
    Impairment,
}

impl Family {
    fn preset(self) -> &'static str {
        match self {
            Family::Switching => "switching",
            Family::Buckets => "buckets",
            Family::Impairment => "impairment",
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<OutputError> for Failure {
    fn from(e: OutputError) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<crate::harness::HarnessError> for Failure {
    fn from(e: crate::harness::HarnessError) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Entry point for the binary. Exit codes: 0 success, 2 usage or config
/// error, 1 runtime failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn read_config(path: &Path) -> Result<(String, ExperimentConfig<f64>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg =
        parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((text, cfg))
}

fn create(dir: &Path, name: &str, meta: &Metadata) -> Result<BufWriter<File>, Failure> {
    let mut out = BufWriter::new(File::create(dir.join(name))?);
    write_metadata(&mut out, meta)?;
    Ok(out)
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Simulate {
            config,
            seed,
            runs,
            out,
        } => {
            let (text, mut cfg) = read_config(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(runs) = runs {
                if runs == 0 {
                    return Err(Failure::Usage("--runs must be at least 1".into()));
                }
                cfg.runs = runs;
            }
            simulate(&text, cfg, &out, stdout)
        }
        Command::Experiment { which, config, out } => {
            let (text, cfg) = match config {
                Some(path) => read_config(&path)?,
                None => {
                    let text = preset(which.preset()).expect("bundled preset").to_string();
                    let cfg = parse_config(&text)?;
                    (text, cfg)
                }
            };
            experiment(which, &text, cfg, &out, stdout)
        }
        Command::Bounds { config, lambda } => {
            let (_, cfg) = read_config(&config)?;
            bounds(&cfg, lambda, stdout)
        }
        Command::Epsilon { config } => {
            let (_, cfg) = read_config(&config)?;
            let instance = cfg.instance.build()?;
            writeln!(stdout, "epsilon = {:.6}", instance.epsilon())?;
            Ok(())
        }
        Command::Preset { name } => match preset(&name) {
            Some(text) => Ok(write!(stdout, "{text}")?),
            None => {
                let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
                Err(Failure::Usage(format!(
                    "unknown preset `{name}` (available: {})",
                    names.join(", ")
                )))
            }
        },
    }
}

fn simulate(
    text: &str,
    cfg: ExperimentConfig<f64>,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let meta = Metadata::new(cfg.master_seed, config_hash(text));
    let label = cfg.policy.kind.as_str();
    let exp = Experiment::new(cfg)?;
    fs::create_dir_all(out)?;
    let results = exp.run_all()?;
    let regrets: Vec<Vec<f64>> = results.iter().map(|r| r.regret.clone()).collect();
    let curve = AggregateCurve::from_runs(&regrets);
    let outputs = &exp.config().outputs;
    if outputs.contains(&OutputKind::Traces) {
        let dir = out.join("traces");
        fs::create_dir_all(&dir)?;
        for r in &results {
            let mut f = create(&dir, &format!("run_{:03}.csv", r.trace.run), &meta)?;
            write_trace_csv(&mut f, &r.trace, &r.regret)?;
            f.flush()?;
        }
    }
    if outputs.contains(&OutputKind::Curve) {
        let mut f = create(out, "curve.csv", &meta)?;
        write_curve_csv(&mut f, &[(label, &curve)])?;
        f.flush()?;
    }
    let summary = format!(
        "policy,runs,horizon,final_mean,final_std,final_ci95\n{label},{},{},{:.6},{:.6},{:.6}\n",
        curve.runs,
        exp.instance().horizon(),
        curve.final_mean(),
        curve.final_std(),
        curve.final_ci95()
    );
    if outputs.contains(&OutputKind::Summary) {
        let mut f = create(out, "summary.csv", &meta)?;
        f.write_all(summary.as_bytes())?;
        f.flush()?;
    }
    write!(stdout, "{summary}")?;
    Ok(())
}

fn experiment(
    which: Family,
    text: &str,
    cfg: ExperimentConfig<f64>,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    cfg.validate()?;
    let meta = Metadata::new(cfg.master_seed, config_hash(text));
    fs::create_dir_all(out)?;
    match which {
        Family::Switching => {
            let results =
                switching_experiment(&cfg, &cfg.sweep.optimal_arms, cfg.sweep.switch_window)?;
            let hist: Vec<(String, Vec<u64>)> = results
                .iter()
                .map(|(n, bins)| (format!("optimal_{n}"), bins.clone()))
                .collect();
            let mut f = create(out, "switching.csv", &meta)?;
            write_histogram_csv(&mut f, &hist)?;
            f.flush()?;
            writeln!(stdout, "optimal_arms,mean_bin")?;
            for (n, bins) in &results {
                writeln!(stdout, "{n},{:.6}", mean_bin(bins))?;
            }
        }
        Family::Buckets => {
            let sweep = bucket_size_sweep(&cfg, &cfg.sweep.capacities)?;
            let labels: Vec<String> = sweep
                .by_capacity
                .iter()
                .map(|(c, _)| format!("phased-se-cap{c}"))
                .collect();
            let mut curves: Vec<(&str, &AggregateCurve<f64>)> = labels
                .iter()
                .zip(&sweep.by_capacity)
                .map(|(l, (_, c))| (l.as_str(), c))
                .collect();
            curves.push(("se", &sweep.se));
            curves.push(("ucb-revisited", &sweep.ucb_revisited));
            write_curves(out, "buckets.csv", &meta, &curves, stdout)?;
        }
        Family::Impairment => {
            if cfg.sweep.impairment_means.is_empty() {
                return Err(Failure::Usage(
                    "experiment.sweep_means is required for the impairment sweep".into(),
                ));
            }
            let sweep = impairment_sweep(&cfg, &cfg.sweep.impairment_means)?;
            let labels: Vec<String> = sweep.iter().map(|(m, _)| format!("mean{m}")).collect();
            let curves: Vec<(&str, &AggregateCurve<f64>)> = labels
                .iter()
                .zip(&sweep)
                .map(|(l, (_, c))| (l.as_str(), c))
                .collect();
            write_curves(out, "impairment.csv", &meta, &curves, stdout)?;
        }
    }
    Ok(())
}

fn write_curves(
    out: &Path,
    name: &str,
    meta: &Metadata,
    curves: &[(&str, &AggregateCurve<f64>)],
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let mut f = create(out, name, meta)?;
    write_curve_csv(&mut f, curves)?;
    f.flush()?;
    writeln!(stdout, "label,final_mean,final_std")?;
    for (label, c) in curves {
        writeln!(stdout, "{label},{:.6},{:.6}", c.final_mean(), c.final_std())?;
    }
    Ok(())
}

fn bounds(
    cfg: &ExperimentConfig<f64>,
    lambda: Option<f64>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let instance = cfg.instance.build()?;
    let k = instance.num_arms();
    let horizon = instance.horizon();
    let lambda = match lambda {
        Some(l) if l.is_finite() && l >= 0.0 => l,
        Some(l) => {
            return Err(Failure::Usage(format!(
                "--lambda must be a finite value >= 0, got {l}"
            )))
        }
        None => default_lambda(k, horizon),
    };
    let deltas = instance.gaps().deltas;
    let d_max = instance.d_max();
    let expected_d = instance.expected_d();
    writeln!(
        stdout,
        "theorem1 = {:.6}",
        theorem1_bound(&deltas, horizon, lambda, d_max)
    )?;
    writeln!(
        stdout,
        "theorem2 = {:.6}",
        theorem2_bound(&deltas, horizon, lambda, expected_d)
    )?;
    writeln!(
        stdout,
        "lemma2 = {:.6}",
        lemma2_bound(&deltas, horizon, lambda, d_max)
    )?;
    match corollary_bounds(k, horizon, d_max, expected_d) {
        Ok((a, b)) => writeln!(stdout, "corollary = {a:.6} {b:.6}")?,
        Err(e) => writeln!(stdout, "corollary = n/a ({e})")?,
    }
    Ok(())
}
