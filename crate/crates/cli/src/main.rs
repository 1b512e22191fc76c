use bfunc_cli::fixtures::{self, CATALOG};
use bfunc_cli::job::TaskName;
use bfunc_cli::report;
use bfunc_cli::tasks::Overrides;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "bfunc", version, about = "Bernstein-Sato functional equations, test ideals and multiplier ideals")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Job file to run.
    #[arg(long, global = true)]
    job: Option<PathBuf>,
    /// Name of a shipped fixture to run instead of a job file.
    #[arg(long, global = true, conflicts_with = "job")]
    fixture: Option<String>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads for parallel loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on the number of unknowns in functional-equation searches.
    #[arg(long, global = true)]
    max_unknowns: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a job of any task.
    Run,
    /// List the shipped fixtures.
    ListFixtures,
    /// Verify a functional equation formally and on the specialization grid.
    VerifyFeq,
    /// Search for a functional equation and its minimal b within ansatz bounds.
    BsSearch,
    /// Check whether an operator preserves a semigroup ring.
    RestrictOp,
    /// Report differential extensibility of a diagonal group quotient.
    CheckExtensible,
    /// Compute a test ideal by Frobenius levels.
    TestIdeal,
    /// Compute a monomial multiplier ideal.
    Multiplier,
    /// Compute the log canonical threshold of a monomial ideal.
    Lct,
    /// List jumping numbers up to a bound.
    JumpingNumbers,
    /// Compute a V-filtration step.
    Vfil,
    /// Compute the zeroth Hodge ideal of a monomial.
    Hodge0,
    /// Compare the intrinsic summand multiplier ideal with the restriction of the ambient one.
    CompareSummand,
    /// Compare b of a tuple with b of its lifted hypersurface.
    MustataCheck,
}

impl Command {
    fn task(&self) -> Option<TaskName> {
        Some(match self {
            Command::Run | Command::ListFixtures => return None,
            Command::VerifyFeq => TaskName::VerifyFeq,
            Command::BsSearch => TaskName::BsSearch,
            Command::RestrictOp => TaskName::RestrictOp,
            Command::CheckExtensible => TaskName::CheckExtensible,
            Command::TestIdeal => TaskName::TestIdeal,
            Command::Multiplier => TaskName::Multiplier,
            Command::Lct => TaskName::Lct,
            Command::JumpingNumbers => TaskName::JumpingNumbers,
            Command::Vfil => TaskName::Vfil,
            Command::Hodge0 => TaskName::Hodge0,
            Command::CompareSummand => TaskName::CompareSummand,
            Command::MustataCheck => TaskName::MustataCheck,
        })
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn list_fixtures(format: Format) {
    match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = CATALOG
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "name": f.name,
                        "file": f.file,
                        "expected_exit": f.expected_exit,
                        "description": f.description,
                    })
                })
                .collect();
            emit(&format!("{}\n", serde_json::to_string_pretty(&items).expect("JSON values serialize")));
        }
        Format::Table => {
            let width = CATALOG.iter().map(|f| f.name.len()).max().unwrap_or(0);
            let rows: String = CATALOG
                .iter()
                .map(|f| format!("{:<width$}  exit {}  {}\n", f.name, f.expected_exit, f.description))
                .collect();
            emit(&rows);
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return input_error(e);
        }
    }
    let command = cli.command.unwrap_or(Command::Run);
    if matches!(command, Command::ListFixtures) {
        list_fixtures(cli.format);
        return ExitCode::SUCCESS;
    }
    let src = match (&cli.job, &cli.fixture) {
        (Some(path), _) => match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => return input_error(format!("{}: {e}", path.display())),
        },
        (None, Some(name)) => match fixtures::find(name) {
            Some(f) => f.source.to_string(),
            None => return input_error(format!("unknown fixture {name}; see list-fixtures")),
        },
        (None, None) => return input_error("no job given; pass --job <path> or --fixture <name>"),
    };
    let overrides = Overrides {
        max_unknowns: cli.max_unknowns,
    };
    let (task, outcome, report) = match bfunc_cli::run_source(&src, overrides) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    if let Some(expected) = command.task() {
        if expected != task {
            return input_error(format!(
                "subcommand {} does not match the job's task {}",
                expected.as_str(),
                task.as_str()
            ));
        }
    }
    match cli.format {
        Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("JSON values serialize"))),
        Format::Table => emit(&report::table(&report)),
    }
    ExitCode::from(outcome.status.exit_code() as u8)
}
