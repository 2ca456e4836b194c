use std::path::PathBuf;

use clap::{Parser, Subcommand};
use troprank::{DEFAULT_RETRIES, DEFAULT_SEED};
use troprank_cli::commands::{self, CliError};

#[derive(Parser)]
#[command(
    name = "troprank",
    version,
    about = "Exact tropical ranks of min-plus matrices and Puiseux lift certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tropical determinant with optimal assignment witnesses
    Det {
        file: PathBuf,
        /// Accept decimal literals, converted exactly
        #[arg(long)]
        allow_decimal: bool,
    },
    /// Tropical rank with a maximal nonsingular minor witness
    Rank {
        file: PathBuf,
        #[arg(long)]
        allow_decimal: bool,
    },
    /// Barvinok rank by exact search over outer-sum decompositions
    Barvinok {
        file: PathBuf,
        #[arg(long)]
        allow_decimal: bool,
        /// Stop once no decomposition with this many terms exists
        #[arg(long)]
        max_r: Option<usize>,
    },
    /// Kapranov bounds; emits a verified lift certificate when one is constructed
    Certify {
        file: PathBuf,
        #[arg(long)]
        allow_decimal: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Generic-redraw budget for the certificate search
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a serialized certificate without re-running the search
    Verify { file: PathBuf },
    /// Sample matrices of prescribed shape and exact tropical rank
    Gen {
        /// Shape as <rows>x<cols>, for example 7x5
        #[arg(long)]
        shape: String,
        #[arg(long = "tropical-rank")]
        tropical_rank: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Deterministic sweeps: oracle (determinant vs. enumeration), dis (rank
    /// chain), mio (five-column rank-3 certificates); any violation aborts
    /// with the counterexample
    Corpus {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Det { file, allow_decimal } => commands::cmd_det(&file, allow_decimal),
        Command::Rank { file, allow_decimal } => commands::cmd_rank(&file, allow_decimal),
        Command::Barvinok {
            file,
            allow_decimal,
            max_r,
        } => commands::cmd_barvinok(&file, allow_decimal, max_r),
        Command::Certify {
            file,
            allow_decimal,
            seed,
            retries,
            out,
        } => commands::cmd_certify(&file, allow_decimal, seed, retries, out.as_deref()),
        Command::Verify { file } => commands::cmd_verify(&file),
        Command::Gen {
            shape,
            tropical_rank,
            count,
            seed,
            out_dir,
        } => commands::cmd_gen(&shape, tropical_rank, count, seed, &out_dir),
        Command::Corpus { suite, seed } => {
            commands::cmd_corpus(&suite, seed).map(|r| r.to_string())
        }
    }
}

fn main() {
    // clap exits 2 on usage errors by default; 2 is reserved for verification
    // failures here, so usage problems are mapped onto the parse/guard code.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(out) => print!("{}", out),
        Err(e) => {
            eprintln!("{}", e);
            std::process::exit(e.exit_code());
        }
    }
}
