use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use srx::cli::commands::{cmd_compare, cmd_generate, cmd_run, cmd_simulate, RunConfig};
use srx::cli::grid::Family;
use srx::cli::CliError;
use srx::fairness::{Axiom, Cohesion, SearchLimits};
use srx::mechanisms::{Rule, UtilityMode};

#[derive(Parser)]
#[command(
    name = "srx",
    version,
    about = "Participatory budgeting with substitute projects"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mechanism {
    Rx,
    Srx,
}

#[derive(Clone, Copy, ValueEnum)]
enum RxUtilities {
    /// Utility 1 for every desired project.
    Approval,
    /// The partition intensity of every desired project.
    FirstMarginal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Ejr,
    Bpjr,
}

#[derive(Clone, Copy, ValueEnum)]
enum Definition {
    Original,
    Substitutes,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mechanism on an instance file.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "srx")]
        mechanism: Mechanism,
        #[arg(long, value_enum, default_value = "approval")]
        rx_utilities: RxUtilities,
        /// Proportionality check on the outcome; repeatable.
        #[arg(long, value_enum)]
        check: Vec<Check>,
        #[arg(long, value_enum, default_value = "substitutes")]
        definition: Definition,
        #[arg(long, default_value_t = 15)]
        max_projects: usize,
        #[arg(long, default_value_t = 12)]
        max_voters: usize,
        /// Also write the trace and reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate instances over a grid and score Rule X and SRX on each.
    Simulate {
        #[arg(long, value_enum)]
        family: Family,
        /// `full` or axes like `budget=20;categories=5,25`.
        #[arg(long, default_value = "full")]
        grid: String,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write 0 in the runtime column so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Summarise a results CSV per scenario.
    Compare {
        #[arg(long = "in")]
        input: PathBuf,
        /// Summary CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON; printed to stdout when omitted.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write one generated instance as an instance file.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// A single-cell grid, e.g. `budget=20;categories=25`.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(command: Command) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Run {
            instance,
            mechanism,
            rx_utilities,
            check,
            definition,
            max_projects,
            max_voters,
            json,
        } => {
            let rule = match (mechanism, rx_utilities) {
                (Mechanism::Srx, _) => Rule::SubstituteRuleX,
                (Mechanism::Rx, RxUtilities::Approval) => Rule::RuleX(UtilityMode::ApprovalOnes),
                (Mechanism::Rx, RxUtilities::FirstMarginal) => {
                    Rule::RuleX(UtilityMode::StaticFirstMarginal)
                }
            };
            let config = RunConfig {
                rule,
                checks: check
                    .into_iter()
                    .map(|c| match c {
                        Check::Ejr => Axiom::Ejr,
                        Check::Bpjr => Axiom::StrongBpjr,
                    })
                    .collect(),
                definition: match definition {
                    Definition::Original => Cohesion::Original,
                    Definition::Substitutes => Cohesion::WithSubstitutes,
                },
                limits: SearchLimits {
                    max_projects,
                    max_voters,
                },
            };
            cmd_run(&instance, &config, json.as_deref(), &mut out)?;
        }
        Command::Simulate {
            family,
            grid,
            instances,
            seed,
            out: path,
            no_timing,
        } => {
            let rows = cmd_simulate(family, &grid, instances, seed, &path, !no_timing)?;
            writeln!(out, "wrote {rows} rows to {}", path.display())?;
        }
        Command::Compare {
            input,
            out: csv,
            json,
        } => {
            cmd_compare(&input, csv.as_deref(), json.as_deref(), &mut out)?;
        }
        Command::Generate {
            family,
            grid,
            seed,
            out: path,
        } => cmd_generate(family, &grid, seed, &path)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
