//! `qsl` — quantum-speed-limit bounds along single-qubit channel
//! trajectories, emitted as plot-ready CSV.
//!
//! Exit codes: 0 success, 2 usage/configuration error, 3 tau_cri not
//! reached within the time window.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Experiment, Settings};
use run::Outcome;

const EXIT_USAGE: u8 = 2;
const EXIT_NOT_REACHED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qsl",
    version,
    about = "Quantum-speed-limit bounds in amplitude- and phase-damping channels",
    after_help = "Times are dimensionless: lambda*t for the amplitude-damping channel, \
                  omega_c*t for the phase-damping channel."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the decoherence function and the trace distance to the
    /// stationary state along the trajectory
    Trajectory(RunArgs),
    /// Emit QSL bound series (and their tightness), optionally modified to
    /// freeze at tau_cri
    Bounds(RunArgs),
    /// Report the resolution time tau_cri for the configured witness
    TauCri(RunArgs),
    /// Run several config files concurrently, each writing its own output
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Channel: ad (amplitude damping) or pd (phase damping)
    #[arg(long)]
    channel: Option<String>,
    /// Coupling ratio gamma0/lambda (amplitude damping)
    #[arg(long = "gamma0-over-lambda")]
    gamma0_over_lambda: Option<f64>,
    /// Ohmicity exponent s (phase damping)
    #[arg(long)]
    s: Option<f64>,
    /// Initial state: plus | ground | excited | bloch:x,y,z
    #[arg(long)]
    initial: Option<String>,
    /// Resolution threshold for tau_cri detection [default: 1e-6]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Time horizon [default: 60 for ad, 1e6 for pd]
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Grid step [default: 0.01 for ad, 50 for pd]
    #[arg(long)]
    dt: Option<f64>,
    /// Comma-separated bound kinds from av,op,hs,tr,quant [default: av,op,quant]
    #[arg(long)]
    bounds: Option<String>,
    /// Freeze every bound at its tau_cri evaluation
    #[arg(long)]
    modified: bool,
    /// tau_cri witness: trace-distance | decoherence
    #[arg(long)]
    witness: Option<String>,
    /// Flat key = value config file (flags take precedence)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file [default: standard output]
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Config files; each needs `command = trajectory|bounds|tau-cri` and
    /// `output = <path>`
    #[arg(required = true)]
    configs: Vec<PathBuf>,
}

impl RunArgs {
    fn settings(&self) -> Settings {
        Settings {
            channel: self.channel.clone(),
            gamma0_over_lambda: self.gamma0_over_lambda,
            s: self.s,
            initial: self.initial.clone(),
            epsilon: self.epsilon,
            t_max: self.t_max,
            dt: self.dt,
            bounds: self.bounds.clone(),
            modified: if self.modified { Some(true) } else { None },
            witness: self.witness.clone(),
            output: self.output.clone(),
            command: None,
        }
    }

    fn resolve(&self) -> Result<Experiment, config::ConfigError> {
        let mut settings = self.settings();
        if let Some(path) = &self.config {
            settings = settings.or(Settings::from_file(path)?);
        }
        Experiment::resolve(settings)
    }
}

fn execute(kind: &str, exp: &Experiment) -> Outcome {
    let model = match exp.model() {
        Ok(m) => m,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    let rho0 = match exp.initial_state() {
        Ok(r) => r,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    match kind {
        "trajectory" => run::run_trajectory(exp, &model, &rho0),
        "bounds" => run::run_bounds(exp, &model, &rho0),
        "tau-cri" => run::run_tau_cri(exp, &model, &rho0),
        other => Outcome::Failed(format!("unknown command `{other}`")),
    }
}

fn deliver(exp: &Experiment, outcome: Outcome) -> ExitCode {
    match outcome {
        Outcome::Ok(text) => match &exp.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
                ExitCode::SUCCESS
            }
            None => {
                print!("{text}");
                ExitCode::SUCCESS
            }
        },
        Outcome::TauCriNotReached(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NOT_REACHED)
        }
        Outcome::Failed(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run_single(kind: &str, args: &RunArgs) -> ExitCode {
    match args.resolve() {
        Ok(exp) => deliver(&exp, execute(kind, &exp)),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run_sweep(args: &SweepArgs) -> ExitCode {
    enum SweepResult {
        Ok,
        Usage(String),
        NotReached(String),
        Failed(String),
    }

    let results: Vec<(String, SweepResult)> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .configs
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let name = path.display().to_string();
                    let settings = match Settings::from_file(path) {
                        Ok(s) => s,
                        Err(e) => return (name, SweepResult::Usage(e.to_string())),
                    };
                    let Some(command) = settings.command.clone() else {
                        return (
                            name,
                            SweepResult::Usage(
                                "invalid command: missing (required in sweep configs)".into(),
                            ),
                        );
                    };
                    if !matches!(command.as_str(), "trajectory" | "bounds" | "tau-cri") {
                        return (
                            name,
                            SweepResult::Usage(format!(
                                "invalid command: expected trajectory|bounds|tau-cri, got `{command}`"
                            )),
                        );
                    }
                    if settings.output.is_none() {
                        return (
                            name,
                            SweepResult::Usage(
                                "invalid output: missing (required in sweep configs)".into(),
                            ),
                        );
                    }
                    let exp = match Experiment::resolve(settings) {
                        Ok(e) => e,
                        Err(e) => return (name, SweepResult::Usage(e.to_string())),
                    };
                    match execute(&command, &exp) {
                        Outcome::Ok(text) => {
                            let path = exp.output.as_ref().expect("checked above");
                            match std::fs::write(path, text) {
                                Ok(()) => (name, SweepResult::Ok),
                                Err(e) => (
                                    name,
                                    SweepResult::Usage(format!(
                                        "cannot write {}: {e}",
                                        path.display()
                                    )),
                                ),
                            }
                        }
                        Outcome::TauCriNotReached(msg) => (name, SweepResult::NotReached(msg)),
                        Outcome::Failed(msg) => (name, SweepResult::Failed(msg)),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker"))
            .collect()
    });

    let mut saw_not_reached = false;
    let mut saw_usage = false;
    let mut saw_failure = false;
    for (name, result) in &results {
        match result {
            SweepResult::Ok => println!("{name}: ok"),
            SweepResult::Usage(msg) => {
                println!("{name}: error: {msg}");
                saw_usage = true;
            }
            SweepResult::NotReached(msg) => {
                println!("{name}: error: {msg}");
                saw_not_reached = true;
            }
            SweepResult::Failed(msg) => {
                println!("{name}: error: {msg}");
                saw_failure = true;
            }
        }
    }
    if saw_usage {
        ExitCode::from(EXIT_USAGE)
    } else if saw_not_reached {
        ExitCode::from(EXIT_NOT_REACHED)
    } else if saw_failure {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Trajectory(args) => run_single("trajectory", args),
        Command::Bounds(args) => run_single("bounds", args),
        Command::TauCri(args) => run_single("tau-cri", args),
        Command::Sweep(args) => run_sweep(args),
    }
}
