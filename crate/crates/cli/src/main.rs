//! `qratio`: command-line access to q-factorial ratios, Landau's criterion,
//! the positivity experiment and the identity checks.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a negative coefficient
//! was found, 3 an identity check failed.

mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{EnumerateArgs, Settings, UsageError, DEFAULT_MAX_SUM_BOUND};
use output::{write_output, Exit, Format};
use qratio_core::TupleSpec;

#[derive(Parser, Debug)]
#[command(name = "qratio", version, about = "Exact q-factorial ratios and their positivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "jsonl")]
    format: Format,

    /// Include all coefficients in sweep and borwein records.
    #[arg(long, global = true)]
    full: bool,

    /// Persist each result under DIR, named by a hash of its inputs.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Use the tuple as given instead of cancelling common entries.
    #[arg(long, global = true)]
    raw: bool,

    /// Omit elapsed_ms so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide Landau's criterion for (a, b).
    Landau {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Compute D_n(a, b; q).
    Dpoly {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Compute D_n(a, b; q) for n = 1..=n-max and report positivity.
    Sweep {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        n_max: u32,
    },
    /// List canonical tuples satisfying Landau's criterion, optionally sweeping each.
    Enumerate {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        sum_bound: u32,
        /// Require sum(a) = sum(b).
        #[arg(long)]
        balanced: bool,
        #[arg(long)]
        sweep_n: Option<u32>,
        /// Keep tuples whose entries share a common factor.
        #[arg(long)]
        imprimitive: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_SUM_BOUND)]
        max_sum_bound: u32,
    },
    /// Run every identity and recurrence check up to max-n.
    Identities {
        #[arg(long)]
        max_n: u32,
    },
    /// Borwein-type alternating sums for n = 0..=n-max.
    Borwein {
        #[arg(long)]
        n_max: u32,
    },
    /// The quotient R_{n,m;r,s}(q).
    Rpoly {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
    },
}

fn tuple(a: &str, b: &str) -> Result<TupleSpec, UsageError> {
    Ok(TupleSpec::parse(a, b)?)
}

fn run(cli: &Cli, settings: &Settings) -> Result<output::Output, UsageError> {
    match &cli.command {
        Command::Landau { a, b } => commands::cmd_landau(&tuple(a, b)?, settings),
        Command::Dpoly { a, b, n } => commands::cmd_dpoly(&tuple(a, b)?, *n, settings),
        Command::Sweep { a, b, n_max } => commands::cmd_sweep(&tuple(a, b)?, *n_max, settings),
        Command::Enumerate {
            r,
            s,
            sum_bound,
            balanced,
            sweep_n,
            imprimitive,
            max_sum_bound,
        } => commands::cmd_enumerate(
            &EnumerateArgs {
                r: *r,
                s: *s,
                sum_bound: *sum_bound,
                balanced: *balanced,
                imprimitive: *imprimitive,
                sweep_n: *sweep_n,
                max_sum_bound: *max_sum_bound,
            },
            settings,
        ),
        Command::Identities { max_n } => commands::cmd_identities(*max_n, settings),
        Command::Borwein { n_max } => commands::cmd_borwein(*n_max, settings),
        Command::Rpoly { n, m, r, s } => commands::cmd_rpoly(*n, *m, *r, *s, settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Exit::Usage as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let settings = Settings {
        full: cli.full,
        raw: cli.raw,
        timing: !cli.no_timing,
        out: cli.out.clone(),
    };
    let result = qratio_core::par::with_jobs(cli.jobs, || run(&cli, &settings));
    match result {
        Ok(out) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = write_output(&out, cli.format, &mut lock).and_then(|_| lock.flush()) {
                eprintln!("qratio: {e}");
                return ExitCode::from(Exit::Usage as u8);
            }
            if out.exit == Exit::Negative {
                eprintln!("qratio: NEGATIVE COEFFICIENT FOUND (see records with status negative-found)");
            }
            ExitCode::from(out.exit as u8)
        }
        Err(UsageError(msg)) => {
            eprintln!("qratio: {msg}");
            ExitCode::from(Exit::Usage as u8)
        }
    }
}
