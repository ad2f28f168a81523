mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use cache::Cache;
use commands::{ConstructArgs, Context, Fail, Format};

#[derive(Parser)]
#[command(name = "propchoose", version, about = "Proportional choosability of complete multipartite graphs")]
struct Cli {
    /// Worker threads for exhaustive decisions.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Result log; records are appended.
    #[arg(long, global = true, env = "PROPCHOOSE_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Override the vertex guard on exhaustive enumeration.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Stop a decision after this many seconds and report a checkpoint.
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Proportional choice number, or an interval.
    ChiPc {
        /// `K<n1>,<n2>,...` or an edge-list file.
        graph: String,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Decide proportional k-choosability.
    Decide {
        graph: String,
        k: usize,
        /// Continue from the latest checkpoint in the cache.
        #[arg(long)]
        resume: bool,
        /// Write the refuting assignment here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Bounds and known values for K_{n,m}.
    Table {
        #[arg(long, default_value = "1..3", value_parser = commands::parse_range)]
        n: (usize, usize),
        #[arg(long, default_value = "2..5", value_parser = commands::parse_range)]
        m: (usize, usize),
    },
    /// Compare the equitable-colorability formula with brute force.
    CrossCheck {
        #[arg(long, default_value_t = 8)]
        max_p: usize,
    },
    /// Run the constructive colorer on sampled (n+m-d-1)-assignments of K_{n,m}.
    Construct {
        n: usize,
        m: usize,
        d: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the first failing assignment.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Write every coloring produced to this file.
        #[arg(long)]
        colorings: Option<PathBuf>,
    },
    /// Build and check the lower-bound witness for a part list.
    Witness {
        /// Part sizes, e.g. `2,2,2`.
        parts: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    VerifyBounds {
        /// Only these criteria, e.g. `3,4,8`.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

fn run(cli: Cli) -> Result<u8, Fail> {
    if cli.jobs == 0 {
        return Err(Fail::usage("--jobs must be at least 1"));
    }
    let time_limit = match cli.time_limit {
        Some(t) if !(t >= 0.0 && t.is_finite()) => return Err(Fail::usage("--time-limit must be a nonnegative number")),
        t => t.map(Duration::from_secs_f64),
    };
    let cache = cli.cache.as_deref().map(Cache::open).transpose().map_err(Fail::failure)?;
    let mut ctx = Context {
        jobs: cli.jobs,
        max_vertices: cli.max_vertices,
        time_limit,
        format: match cli.format {
            FormatArg::Text => Format::Text,
            FormatArg::Tsv => Format::Tsv,
        },
        cache,
    };
    match cli.command {
        Command::ChiPc { graph, kmax } => commands::chi_pc_cmd(&mut ctx, &graph, kmax),
        Command::Decide { graph, k, resume, witness_out } => {
            commands::decide_cmd(&mut ctx, &graph, k, resume, witness_out.as_deref())
        }
        Command::Table { n, m } => commands::table_cmd(&ctx, n, m),
        Command::CrossCheck { max_p } => commands::cross_check_cmd(max_p),
        Command::Construct { n, m, d, samples, seed, dump, colorings } => commands::construct_cmd(&ConstructArgs {
            n,
            m,
            d,
            samples,
            seed,
            dump: dump.as_deref(),
            colorings: colorings.as_deref(),
        }),
        Command::Witness { parts, out } => commands::witness_cmd(&ctx, &parts, out.as_deref()),
        Command::VerifyBounds { criteria } => commands::verify_bounds_cmd(&ctx, &criteria),
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(fail) => {
            eprintln!("error: {fail}");
            fail.code
        }
    };
    ExitCode::from(code)
}
