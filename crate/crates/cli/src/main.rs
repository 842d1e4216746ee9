use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multipole::commands::{self, Method, Output, RANK_CAP_VAR};
use multipole::{CliError, Status};

/// Symmetric tensors, multipole vectors and geometric spin operators.
#[derive(Parser)]
#[command(name = "multipole", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a symmetric tensor into its harmonic components.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract the multipole vectors of a harmonic tensor.
    Sylvester {
        input: PathBuf,
        /// Also write N samples per nodal circle to OUT.circles.csv.
        #[arg(long, value_name = "N", requires = "out")]
        circles: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expectation value of an observable in a spin state.
    Expect {
        state: PathBuf,
        observable: PathBuf,
        /// Route(s) to evaluate; all three when omitted.
        #[arg(long, value_enum)]
        method: Vec<MethodArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Husimi function on an N x 2N grid (CSV) and Majorana stars (OUT.stars.json).
    Husimi {
        state: PathBuf,
        #[arg(long, value_name = "N", default_value_t = 32)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the self-check suite.
    Check {
        #[arg(long, default_value_t = multipole::checks::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Tensor,
    Skeleton,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Tensor => Method::Tensor,
            MethodArg::Skeleton => Method::Skeleton,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

fn run(command: Command) -> Result<Output, CliError> {
    let env = std::env::var(RANK_CAP_VAR).ok();
    let cap = commands::rank_cap(env.as_deref())?;
    let (output, out) = match command {
        Command::Decompose { input, out } => (commands::decompose(&commands::read_input(&input)?, cap)?, out),
        Command::Sylvester { input, circles, out } => {
            (commands::sylvester(&commands::read_input(&input)?, cap, circles)?, out)
        }
        Command::Expect { state, observable, method, out } => {
            let methods: Vec<Method> = method.into_iter().map(Method::from).collect();
            let state = commands::read_input(&state)?;
            let observable = commands::read_input(&observable)?;
            (commands::expect(&state, &observable, cap, &methods)?, out)
        }
        Command::Husimi { state, grid, out } => {
            (commands::husimi_grid(&commands::read_input(&state)?, cap, grid)?, Some(out))
        }
        Command::Check { seed, out } => (commands::check(seed), out),
    };
    emit(&output, out.as_deref())?;
    Ok(output)
}

fn emit(output: &Output, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            for p in commands::write_files(path, output)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => print!("{}", output.payload),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(Status::Parse.code() as u8) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(output) => {
            eprintln!("{}", output.summary);
            ExitCode::from(output.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status.code() as u8)
        }
    }
}
