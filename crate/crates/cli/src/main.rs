use std::path::PathBuf;
use std::process::ExitCode;

use artin_series::builtins;
use artin_series::scenario::{Scenario, TaskSpec};
use artin_series::{load, run, Overrides, Report, RunError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "artin-series",
    version,
    about = "Check properties of power series rings over zero-dimensional rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario.
    Run {
        scenario: String,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Default truncation degree for tasks that do not set one.
        #[arg(long)]
        trunc: Option<u32>,
    },
    /// Run one of the example-ring constructions.
    Example {
        #[command(subcommand)]
        which: Example,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// List built-in rings, streams and scenarios.
    List,
}

#[derive(Subcommand)]
enum Example {
    /// Non-SFT witnesses f_k with f_k^k outside J.
    Sft {
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        /// Comma-separated generators of J.
        #[arg(long, default_value = "z0")]
        ideal: String,
    },
    /// The annihilator of y against P[[X]].
    Wb {
        #[arg(long, default_value_t = 6)]
        trunc: u32,
        #[arg(long, default_value_t = 4)]
        window: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn finish(report: Result<Report, RunError>, out: Option<PathBuf>) -> ExitCode {
    match report {
        Ok(r) => {
            print!("{}", r.to_text());
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, r.to_json()) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(if r.all_pass() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn single(task: TaskSpec, seed: Option<u64>) -> Scenario {
    Scenario {
        name: Some(format!("example-{}", task.kind)),
        seed,
        task: vec![task],
        ..Default::default()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            out,
            seed,
            trunc,
        } => finish(load(&scenario).and_then(|s| run(&s, Overrides { seed, trunc })), out),
        Command::Example { which, out } => {
            let (task, seed) = match which {
                Example::Sft { k_max, ideal } => {
                    let gens = ideal
                        .split(',')
                        .map(|g| g.trim().to_string())
                        .filter(|g| !g.is_empty())
                        .collect();
                    let task = TaskSpec {
                        kind: "sft".into(),
                        k_max: Some(k_max),
                        ideals: Some(vec![gens]),
                        ..Default::default()
                    };
                    (task, None)
                }
                Example::Wb {
                    trunc,
                    window,
                    samples,
                    seed,
                } => {
                    let task = TaskSpec {
                        kind: "wb".into(),
                        trunc: Some(trunc),
                        window: Some(window),
                        samples: Some(samples),
                        ..Default::default()
                    };
                    (task, Some(seed))
                }
            };
            finish(run(&single(task, seed), Overrides::default()), out)
        }
        Command::List => {
            let mut last = "";
            for (section, name) in builtins::list_builtins() {
                if section != last {
                    println!("{section}s:");
                    last = section;
                }
                println!("  {name}");
            }
            ExitCode::SUCCESS
        }
    }
}
