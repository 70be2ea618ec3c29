use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use priority_cli::{cmd_demo, cmd_oracle, cmd_run, cmd_verify, RunOptions, Status};

/// Runs, audits and demonstrates finite-injury priority constructions.
#[derive(Parser)]
#[command(name = "priority-engine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        options: RunArgs,
    },
    /// Audit a run file against a universe file.
    Verify {
        run: PathBuf,
        #[arg(long)]
        universe: PathBuf,
    },
    /// Compare the domination formula with exhaustive search.
    Oracle {
        /// spm, spm-pair, spp, s01[...] or ssep[...;...]
        #[arg(long, default_value = "spm")]
        framework: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        /// Dominating candidate.
        u: String,
        /// Dominated candidate.
        v: String,
    },
    /// Run a bundled demo: simple, fm, split or insep.
    Demo {
        name: String,
        #[command(flatten)]
        options: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    universe: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    horizon_override: Option<usize>,
}

impl From<RunArgs> for RunOptions {
    fn from(a: RunArgs) -> Self {
        RunOptions { universe: a.universe, out: a.out, horizon_override: a.horizon_override }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::InputError.code() } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Run { config, options } => cmd_run(&config, &options.into()),
        Command::Verify { run, universe } => cmd_verify(&run, &universe),
        Command::Oracle { framework, bound, u, v } => cmd_oracle(&framework, bound, &u, &v),
        Command::Demo { name, options } => cmd_demo(&name, &options.into()),
    };
    if outcome.status == Status::InputError {
        eprintln!("error: {}", outcome.message);
    } else {
        println!("{}", outcome.message.trim_end());
    }
    ExitCode::from(outcome.status.code())
}
