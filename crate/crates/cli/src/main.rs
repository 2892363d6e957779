use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paperlab::{checks, run, suite_pass, CheckConfig, CheckReport, CliError, Status, SuiteReport, CHECK_IDS, EXTENDED_ONLY};
use paperlab_core::rootsys::CartanType;
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "paperlab", version, about = "Run verification checks and emit JSON reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check.
    Verify {
        id: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run every check in order.
    Suite {
        /// Count extended-only checks towards the verdict.
        #[arg(long)]
        extended: bool,
        #[command(flatten)]
        opts: Opts,
    },
    /// List check ids.
    List,
    #[command(external_subcommand)]
    Named(Vec<String>),
}

#[derive(Args, Clone, Default)]
struct Opts {
    /// Cartan type, e.g. D4 or E8.
    #[arg(long = "type")]
    cartan_type: Option<CartanType>,
    /// Field order (prime or prime power).
    #[arg(long)]
    q: Option<u64>,
    /// Field descriptor, e.g. Q, GF(5) or GF(4).
    #[arg(long)]
    field: Option<String>,
    /// Element as a product of letters, e.g. "x[phi](1) x[-phi](1)".
    #[arg(long)]
    element: Option<String>,
    /// A single field value for checks that sweep a parameter.
    #[arg(long)]
    a: Option<String>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Chamber budget for buildings, letter budget for group words.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the displacement spectrum as TSV.
    #[arg(long)]
    tsv: Option<PathBuf>,
}

impl Opts {
    fn config(&self) -> CheckConfig {
        CheckConfig {
            cartan_type: self.cartan_type,
            q: self.q,
            field: self.field.clone(),
            element: self.element.clone(),
            a: self.a.clone(),
            seed: self.seed,
            budget: self.budget,
            samples: self.samples,
            pairs: self.pairs,
            tsv: self.tsv.clone(),
        }
    }
}

/// `paperlab <id> [flags]` is shorthand for `paperlab verify <id> [flags]`.
#[derive(Parser)]
#[command(name = "paperlab")]
struct Shorthand {
    id: String,
    #[command(flatten)]
    opts: Opts,
}

fn exit_for(status: Status) -> ExitCode {
    match status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Budget => ExitCode::from(3),
    }
}

fn emit(json: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, format!("{json}\n"))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn one(id: &str, opts: &Opts) -> Result<ExitCode, CliError> {
    let report = run(id, &opts.config())?;
    emit(&serde_json::to_string_pretty(&report)?, &opts.out)?;
    Ok(exit_for(report.status))
}

fn suite(extended: bool, opts: &Opts) -> Result<ExitCode, CliError> {
    let cfg = opts.config();
    let reports: Vec<CheckReport> = if opts.jobs.unwrap_or(1) > 1 {
        CHECK_IDS.par_iter().map(|id| run(id, &cfg)).collect::<Result<_, _>>()?
    } else {
        CHECK_IDS.iter().map(|id| run(id, &cfg)).collect::<Result<_, _>>()?
    };
    for r in &reports {
        eprintln!("{:<22} {:?}", r.check, r.status);
    }
    let pass = suite_pass(&reports, extended);
    let excluded = if extended { Vec::new() } else { EXTENDED_ONLY.iter().map(|s| s.to_string()).collect() };
    let s = SuiteReport { schema: paperlab::report::SCHEMA, extended, pass, excluded, reports };
    emit(&serde_json::to_string_pretty(&s)?, &opts.out)?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    let jobs = match &cli.command {
        Command::Verify { opts, .. } | Command::Suite { opts, .. } => opts.jobs,
        _ => None,
    };
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::BadArgument(e.to_string()))?;
    }
    match cli.command {
        Command::Verify { id, opts } => one(&id, &opts),
        Command::Suite { extended, opts } => suite(extended, &opts),
        Command::List => {
            let mut out = std::io::stdout().lock();
            for id in CHECK_IDS {
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                if writeln!(out, "{id:<22} {}", checks::anchor(id).unwrap_or_default()).is_err() {
                    break;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Named(args) => {
            let sh = Shorthand::try_parse_from(std::iter::once("paperlab".to_string()).chain(args))
                .unwrap_or_else(|e| e.exit());
            dispatch(Cli { command: Command::Verify { id: sh.id, opts: sh.opts } })
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
