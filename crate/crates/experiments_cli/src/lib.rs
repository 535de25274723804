//! Experiment pipelines behind the `speclab` binary.
//!
//! Every run writes into `<out>/<experiment>/`: the pipeline's CSV and JSON
//! files, `config.json`, `summary.json`, and `timings.json`. Everything but
//! the timings is a pure function of the configuration and the seed.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod reference;
pub mod summary;

use std::path::{Path, PathBuf};

pub use cli::{Cli, Command};
pub use config::{ExperimentConfig, Resolver};
pub use error::CliError;
pub use summary::{Check, RunSummary, Timings};

use commands::{Env, Produced};
use output::Artifacts;

pub const DEFAULT_OUT: &str = "speclab-out";

#[derive(Debug)]
pub struct Outcome {
    pub dir: PathBuf,
    pub summary: RunSummary,
    pub timings: Timings,
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Bump(_) => "bump",
        Command::Bounds(b) => commands::bounds::command_name(&b.target),
        Command::Spectrum(_) => "spectrum",
        Command::Reconstruct(_) => "reconstruct",
        Command::Convergence(_) => "convergence",
        Command::ExpsumProbe(_) => "expsum-probe",
        Command::Signcount(_) => "signcount",
    }
}

/// Runs with `SPECLAB_OUT` taken from the process environment.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    run_with_out(cli, std::env::var_os("SPECLAB_OUT").map(PathBuf::from))
}

/// `env_out` plays the role of `SPECLAB_OUT`.
pub fn run_with_out(cli: &Cli, env_out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let res = Resolver::from_file(cli.common.config.as_deref())?;
    let seed: u64 = res.or("seed", cli.common.seed, 0)?;
    let out = match env_out.filter(|p| !p.as_os_str().is_empty()) {
        Some(p) => p,
        None => res.or("out", cli.common.out.clone(), PathBuf::from(DEFAULT_OUT))?,
    };
    let experiment: Option<String> = res.get("experiment", cli.common.experiment.clone())?;
    let threads: Option<usize> = res.get("threads", cli.common.threads)?;
    let mut cfg = ExperimentConfig::new(command_name(&cli.command), experiment, seed, out);
    cfg.validate()?;
    let mut timings = Timings::default();

    let produced = match threads {
        Some(0) => return Err(CliError::Usage("--threads must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(|| dispatch(&cli.command, &res, &mut cfg, &mut timings))?
        }
        None => dispatch(&cli.command, &res, &mut cfg, &mut timings)?,
    };
    let Produced { checks, mut artifacts } = produced;
    artifacts.json("config.json", &cfg)?;
    let mut files = artifacts.names();
    files.push("summary.json".into());
    let summary = RunSummary::new(&cfg.experiment, &cfg.command, cfg.seed, checks, files);
    artifacts.json("summary.json", &summary)?;
    let dir = cfg.dir();
    artifacts.write_all(&dir)?;
    write_timings(&dir, &timings)?;
    Ok(Outcome { dir, summary, timings })
}

fn write_timings(dir: &Path, timings: &Timings) -> Result<(), CliError> {
    let mut t = Artifacts::default();
    t.json("timings.json", timings)?;
    t.write_all(dir)
}

fn dispatch(cmd: &Command, res: &Resolver, cfg: &mut ExperimentConfig, timings: &mut Timings) -> Result<Produced, CliError> {
    let mut env = Env { res, cfg, timings };
    match cmd {
        Command::Bump(a) => commands::bump::run(a, &mut env),
        Command::Bounds(a) => commands::bounds::run(&a.target, &mut env),
        Command::Spectrum(a) => commands::spectrum::run(a, &mut env),
        Command::Reconstruct(a) => commands::reconstruct::run(a, &mut env),
        Command::Convergence(a) => commands::convergence::run(a, &mut env),
        Command::ExpsumProbe(a) => commands::expsum::run(a, &mut env),
        Command::Signcount(a) => commands::signcount::run(a, &mut env),
    }
}

/// Exit status of a finished run: 0 iff every check passed.
pub fn exit_code(summary: &RunSummary) -> i32 {
    if summary.all_pass {
        0
    } else {
        1
    }
}
