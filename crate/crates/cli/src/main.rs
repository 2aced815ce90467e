use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liepi::report::{
    error_json, run, ArithMode, Command, OutputFormat, ResultStore, RunConfig, DEFAULT_CACHE_PATH,
};

#[derive(Parser, Debug)]
#[command(name = "liepi", version, about = "Codimensions, cocharacters and PI-exponents of finite-dimensional Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Arithmetic for ranks: exact rationals or random primes.
    #[arg(long, global = true, value_enum, default_value = "exact")]
    mode: Mode,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bit size of random primes in modular mode.
    #[arg(long, global = true, default_value_t = 61)]
    prime_bits: u32,
    /// Largest degree for range commands.
    #[arg(long, global = true, default_value_t = 5)]
    max_n: usize,
    /// Maximum number of tuple evaluations per operation.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget: u128,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Result cache file.
    #[arg(long, global = true, default_value = DEFAULT_CACHE_PATH)]
    cache: PathBuf,
    /// Skip reading and writing the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Exact,
    Modular,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the built-in algebras.
    Catalog,
    /// Check a structure-constant table.
    Validate { algebra: String },
    /// Radical, nilradical and simple components.
    Analyze { algebra: String },
    /// Codimensions c_n.
    Codim {
        algebra: String,
        /// Single degree (default: 1..=max-n).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Cocharacter multiplicities and colengths.
    Cocharacter {
        algebra: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Capelli identity of a given rank.
    Capelli {
        algebra: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        n: usize,
        /// Check this many random evaluation points instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// The exponent candidate d(L).
    Exponent {
        algebra: String,
        /// Also run the upper vanishing check and the lower witness search.
        #[arg(long)]
        checks: bool,
        /// Sampled (monomial, placement) pairs for the upper check.
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Alternations over k disjoint r-sets vanish.
    VerifyUpper {
        algebra: String,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Check every monomial and placement instead of a sample.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Search for a non-identity with alternating sets.
    FindWitness {
        algebra: String,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Codimension growth table up to max-n.
    Growth { algebra: String },
}

fn split(cmd: Cmd) -> (Command, Option<String>) {
    match cmd {
        Cmd::Catalog => (Command::Catalog, None),
        Cmd::Validate { algebra } => (Command::Validate, Some(algebra)),
        Cmd::Analyze { algebra } => (Command::Analyze, Some(algebra)),
        Cmd::Codim { algebra, n } => (Command::Codim { n }, Some(algebra)),
        Cmd::Cocharacter { algebra, n } => (Command::Cocharacter { n }, Some(algebra)),
        Cmd::Capelli {
            algebra,
            rank,
            n,
            samples,
        } => (Command::Capelli { rank, n, samples }, Some(algebra)),
        Cmd::Exponent {
            algebra,
            checks,
            samples,
        } => (Command::Exponent { checks, samples }, Some(algebra)),
        Cmd::VerifyUpper {
            algebra,
            r,
            k,
            n,
            full,
            samples,
        } => (
            Command::VerifyUpper {
                r,
                k,
                n,
                full,
                samples,
            },
            Some(algebra),
        ),
        Cmd::FindWitness { algebra, r, k } => (Command::FindWitness { r, k }, Some(algebra)),
        Cmd::Growth { algebra } => (Command::Growth, Some(algebra)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = cli.global;
    let config = RunConfig {
        mode: match g.mode {
            Mode::Exact => ArithMode::Exact,
            Mode::Modular => ArithMode::Modular,
        },
        prime_bits: g.prime_bits,
        seed: g.seed,
        max_n: g.max_n,
        tuple_budget: g.budget,
        jobs: g.jobs,
        format: match g.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        },
    };
    let mut store = if g.no_cache {
        ResultStore::in_memory()
    } else {
        match ResultStore::open(&g.cache) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("warning: cache {} unreadable ({e}); continuing without it", g.cache.display());
                ResultStore::in_memory()
            }
        }
    };
    let (command, algebra) = split(cli.command);
    let outcome = run(&command, algebra.as_deref(), &config, &mut store);
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if store.hits > 0 {
        eprintln!("cache: {} hit(s), {} miss(es)", store.hits, store.misses);
    }
    let written = match &g.out {
        Some(path) if outcome.exit_code == 0 => std::fs::write(path, &outcome.output),
        _ => std::io::stdout().write_all(outcome.output.as_bytes()),
    };
    if let Err(e) = written {
        let err = liepi::Error::MalformedInput(format!("cannot write report: {e}"));
        eprintln!("{:#}", error_json(&err));
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code as u8)
}
