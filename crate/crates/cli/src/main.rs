use clap::{Args, Parser, Subcommand};
use sgcm::priors::CountSupport;
use sgcm::ModelVariant;
use sgcm_cli::error::{CliError, EXIT_OK};
use sgcm_cli::{generate_to, run, FileConfig, RunConfig, RunOverrides};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sgcm", version, about = "Infer atomic subgraphs of networks by description-length minimisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discover candidate atoms, run the greedy inference and write reports.
    Run(RunArgs),
    /// Sample a graph from a generator spec (the `[generate]` table of a config file).
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    max_size: Option<usize>,
    /// Connected vertex sets to enumerate before switching to sampling.
    #[arg(long)]
    budget: Option<usize>,
    /// Comma-separated variants, e.g. `dc_total,homogeneous`.
    #[arg(long, value_delimiter = ',')]
    variants: Option<Vec<ModelVariant>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// File with one motif per line (`0-1 1-2` edge pairs or a hex code).
    #[arg(long)]
    motifs: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Whether atom counts range over n >= 1 (`positive`) or n >= 0 (`non_negative`).
    #[arg(long, value_parser = parse_support)]
    count_support: Option<CountSupport>,
    /// Re-test every atom against plain edges after the greedy pass.
    #[arg(long)]
    prune: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_support(s: &str) -> Result<CountSupport, String> {
    match s {
        "positive" => Ok(CountSupport::Positive),
        "non_negative" => Ok(CountSupport::NonNegative),
        _ => Err(format!("unknown count support '{s}'")),
    }
}

fn main_run(a: RunArgs) -> Result<(), CliError> {
    let file = match &a.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let flags = RunOverrides {
        input: a.input,
        directed: a.directed.then_some(true),
        max_size: a.max_size,
        budget: a.budget,
        variants: a.variants,
        seed: a.seed,
        out: a.out,
        motifs: a.motifs,
        threads: a.threads,
        count_support: a.count_support,
        prune: a.prune.then_some(true),
    };
    let config = RunConfig::resolve(flags, file)?;
    let out = run(&config)?;
    if out.input.duplicate_edges > 0 || out.input.self_loops > 0 {
        eprintln!(
            "warning: dropped {} duplicate edges and {} self-loops",
            out.input.duplicate_edges, out.input.self_loops
        );
    }
    print!("{}", out.summary);
    Ok(())
}

fn main_generate(a: GenerateArgs) -> Result<(), CliError> {
    let spec = FileConfig::load(&a.config)?
        .generate
        .ok_or_else(|| CliError::input("config", "config file has no [generate] table"))?;
    let g = generate_to(&spec, a.seed, &a.out)?;
    println!("{} vertices, {} edges, {} placements", g.graph.n_vertices(), g.graph.n_edges(), g.configuration.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => main_run(a),
        Command::Generate(a) => main_generate(a),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
