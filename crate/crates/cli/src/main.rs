use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use gframe_cli::report::write_outputs;
use gframe_cli::scenario::{parse_scenario_file, task_names, Task};
use gframe_cli::{run_scenario, VERSION};

const EXIT_CONFIG: u8 = 2;
const EXIT_TASK: u8 = 3;

#[derive(Parser)]
#[command(name = "gframe", version, about = "Diagnostics for operator-valued frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a scenario file and write CSV/JSON reports.
    Run {
        config: PathBuf,
        /// Directory for the reports (default: `output_dir` of the scenario, else `output/<name>`).
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Replace the scenario seed (sampling and synthetic models).
        #[arg(long)]
        seed_override: Option<u64>,
        /// Comma-separated subset of the scenario's tasks.
        #[arg(long, value_delimiter = ',')]
        tasks: Option<Vec<String>>,
        #[arg(long)]
        quiet: bool,
    },
    /// Print the available task names.
    ListTasks,
    /// Print the tool version.
    Version,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::ListTasks => {
            for name in task_names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Version => {
            println!("{VERSION}");
            ExitCode::SUCCESS
        }
        Command::Run { config, output_dir, seed_override, tasks, quiet } => {
            run(config, output_dir, seed_override, tasks, quiet)
        }
    }
}

fn run(
    config: PathBuf,
    output_dir: Option<PathBuf>,
    seed_override: Option<u64>,
    tasks: Option<Vec<String>>,
    quiet: bool,
) -> ExitCode {
    let start = Instant::now();
    let mut scenario = match parse_scenario_file(&config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(seed) = seed_override {
        scenario.override_seed(seed);
    }
    if let Some(names) = tasks {
        let keep: Result<Vec<Task>, _> = names.iter().map(|n| n.parse()).collect();
        match keep {
            Ok(keep) => scenario.restrict_tasks(&keep),
            Err(e) => {
                eprintln!("error: --tasks: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        if scenario.tasks.is_empty() {
            eprintln!("error: --tasks selects none of the scenario's tasks");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let dir = output_dir
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("output").join(&scenario.name));
    let results = match run_scenario(&scenario, |task, table| {
        if !quiet {
            println!("{}: {} row(s)", task.name(), table.rows.len());
        }
    }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_TASK);
        }
    };
    if let Err(e) = write_outputs(&dir, &scenario, &results) {
        eprintln!("error: writing reports to {}: {e}", dir.display());
        return ExitCode::from(EXIT_TASK);
    }
    if !quiet {
        println!("reports written to {}", dir.display());
        eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    }
    ExitCode::SUCCESS
}
