use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use strata::{CliError, Command, RunConfig, SeedSource, VerifyTarget};
use strata_core::enumerate::budget_from_env;
use strata_core::Class;

/// Formal graphs and virtual components of real parabolic singularities.
#[derive(Parser)]
#[command(name = "strata", version)]
struct Cli {
    /// State cap for exploration [default: STRATA_BUDGET or 1000000].
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct SeedArgs {
    /// Class slug or name, e.g. p8_2 or P8^2.
    #[arg(long)]
    class: Option<Class>,
    /// `builtin:NAME` or a seed file (text format or its JSON twin).
    #[arg(long)]
    seed: Option<SeedSource>,
}

#[derive(Subcommand)]
enum Sub {
    /// Explore the formal graph and write one CSV row per virtual component.
    Enumerate {
        #[command(flatten)]
        seed: SeedArgs,
        /// CSV destination [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every node as JSON.
        #[arg(long)]
        nodes: Option<PathBuf>,
        /// Compare with the published counts; exit 1 with a report on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Run oracle fixtures and family scans.
    Verify {
        #[arg(long, conflicts_with_all = ["family", "all"])]
        fixture: Option<String>,
        #[arg(long, conflicts_with = "all")]
        family: Option<String>,
        #[arg(long)]
        all: bool,
        /// Parameter samples per family scan.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// List the states of the formal graph matching a predicate file.
    Filter {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        predicate: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write DOT graphs or the JSON form of a seed.
    Export {
        #[command(flatten)]
        seed: SeedArgs,
        /// Coxeter–Dynkin graph of the seed state.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Component graph of the explored formal graph.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Seed in the JSON twin of the seed format.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Builtin seeds and seed files.
    Seeds {
        #[command(subcommand)]
        action: SeedsAction,
    },
}

#[derive(Subcommand)]
enum SeedsAction {
    List,
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

fn command(sub: Sub) -> Result<Command, CliError> {
    Ok(match sub {
        Sub::Enumerate { seed, out, nodes, check } => {
            Command::Enumerate { class: seed.class, seed: seed.seed, out, nodes, check }
        }
        Sub::Verify { fixture, family, all, samples } => {
            let target = match (fixture, family, all) {
                (Some(f), None, false) => VerifyTarget::Fixture(f),
                (None, Some(f), false) => VerifyTarget::Family(f),
                (None, None, true) => VerifyTarget::All,
                _ => return Err(CliError::Usage("give exactly one of --fixture, --family, --all".into())),
            };
            Command::Verify { target, samples }
        }
        Sub::Filter { seed, predicate, out } => Command::Filter { class: seed.class, seed: seed.seed, predicate, out },
        Sub::Export { seed, dot, graph, json } => {
            Command::Export { class: seed.class, seed: seed.seed, dot, graph, json }
        }
        Sub::Seeds { action: SeedsAction::List } => Command::SeedsList,
        Sub::Seeds { action: SeedsAction::Validate { paths } } => Command::SeedsValidate { paths },
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let budget = cli.budget.unwrap_or_else(budget_from_env);
    let result = command(cli.command)
        .and_then(|c| RunConfig::new(c, budget, cli.threads))
        .and_then(|cfg| strata::run(&cfg, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
