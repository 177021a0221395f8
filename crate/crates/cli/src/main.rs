use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use kgk::{render, run, Command, Format, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Paths,
    Cycline,
    Per,
    Regular,
    Model,
    States,
    Uniqueness,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Paths => Command::Paths,
            Cmd::Cycline => Command::Cycline,
            Cmd::Per => Command::Per,
            Cmd::Regular => Command::Regular,
            Cmd::Model => Command::Model,
            Cmd::States => Command::States,
            Cmd::Uniqueness => Command::Uniqueness,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

/// Finite higher-rank graph toolkit.
///
/// Exit status: 0 on success, 2 when a check finds a violation, 1 on I/O or
/// parse errors. KGK_THREADS caps the worker pool.
#[derive(Debug, Parser)]
#[command(name = "kgk", version)]
struct Cli {
    command: Cmd,
    /// Graph file, or a corpus name (G1, G1e, G2, T2, C2, TW, P1-G1-11, ...)
    graph: String,
    /// Uniform degree bound
    #[arg(long, default_value_t = 2)]
    bound: u32,
    /// Uniform brute-force depth
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Uniform prepend bound for bases
    #[arg(long, default_value_t = 2)]
    prepend: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,
    /// Pull the graph back along a homomorphism, e.g. 1,2
    #[arg(long, value_delimiter = ',')]
    pullback: Option<Vec<u32>>,
    /// Eventually periodic path, e.g. '{head:[],cycle:[e]}'
    #[arg(long)]
    path: Option<String>,
    /// Point of the torus, e.g. "1,-1", "i", "root:1/8"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// JSON file with a list of {alpha, beta, coeff} terms
    #[arg(long)]
    combo: Option<String>,
    /// Directory for coordinate-format matrices (model)
    #[arg(long)]
    export: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, short)]
    output: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("KGK_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        // Only fails if a pool exists already.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cfg = RunConfig {
        command: cli.command.into(),
        graph: cli.graph,
        pullback: cli.pullback,
        bound: cli.bound,
        depth: cli.depth,
        prepend: cli.prepend,
        tol: cli.tol,
        seed: cli.seed,
        format: match cli.format {
            Fmt::Json => Format::Json,
            Fmt::Text => Format::Text,
        },
        path: cli.path,
        z: cli.z,
        combo: cli.combo,
        export: cli.export,
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("kgk: {e:#}");
            return ExitCode::from(1);
        }
    };
    let text = render(&outcome, cfg.format);
    let written = match &cli.output {
        Some(file) => std::fs::write(file, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("kgk: {e}");
        return ExitCode::from(1);
    }
    if outcome.violation {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
