//! Command-line driver: decompose, merge, compare and export pipelines over
//! MATPOWER cases or plain edge lists.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use opf_cliques::report::{
    compare, export_blocks, run_pipeline, to_canonical_json, InputFormat, PipelineConfig,
    PipelineError, Side,
};
use opf_cliques::OrderingStrategy;

#[derive(Parser)]
#[command(
    name = "opf-cliques",
    version,
    about = "Clique decompositions of power-network sparsity patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an instance (no merging) and print the JSON report
    Decompose(CommonArgs),
    /// Decompose and then merge cliques for a number of rounds (default 4)
    Merge(CommonArgs),
    /// Run two pipelines on the same instance and report percentage ratios
    Compare(CompareArgs),
    /// Write the block structure (blocks and separators, real variables)
    Export(CommonArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Auto,
    Matpower,
    EdgeList,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Complex,
    Real,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    MinDegree,
    Amd,
    Random,
    MaxDegree,
}

#[derive(Args)]
struct CommonArgs {
    /// Input file (MATPOWER .m or edge list)
    input: PathBuf,

    /// Input format; `auto` picks MATPOWER for .m files
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,

    /// Compute the decomposition on the complex or the real pattern
    #[arg(long, value_enum, default_value = "complex")]
    side: SideArg,

    /// Elimination ordering heuristic
    #[arg(long, value_enum, default_value = "amd")]
    order: OrderArg,

    /// Seed for the random ordering (required with --order random)
    #[arg(long)]
    seed: Option<u64>,

    /// Cap on merged block size, in real variables
    #[arg(long, default_value_t = 50)]
    smax: usize,

    /// Merge rounds; defaults to 4 for `merge`, 0 elsewhere
    #[arg(long)]
    rounds: Option<usize>,

    /// Write the output here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Side for pipeline B (defaults to pipeline A's side)
    #[arg(long, value_enum)]
    side_b: Option<SideArg>,

    /// Ordering for pipeline B (defaults to pipeline A's ordering)
    #[arg(long, value_enum)]
    order_b: Option<OrderArg>,

    /// Seed for pipeline B's random ordering
    #[arg(long)]
    seed_b: Option<u64>,

    /// Merge rounds for pipeline B (defaults to pipeline A's rounds)
    #[arg(long)]
    rounds_b: Option<usize>,
}

fn strategy_from(
    order: OrderArg,
    seed: Option<u64>,
) -> Result<OrderingStrategy, PipelineError> {
    match (order, seed) {
        (OrderArg::Random, Some(seed)) => Ok(OrderingStrategy::Random { seed }),
        (OrderArg::Random, None) => Err(PipelineError::Config(
            "--order random requires --seed".into(),
        )),
        (_, Some(_)) => Err(PipelineError::Config(
            "--seed is only meaningful with --order random".into(),
        )),
        (OrderArg::MinDegree, None) => Ok(OrderingStrategy::MinDegree),
        (OrderArg::Amd, None) => Ok(OrderingStrategy::Amd),
        (OrderArg::MaxDegree, None) => Ok(OrderingStrategy::MaxDegree),
    }
}

fn config_from(args: &CommonArgs, default_rounds: usize) -> Result<PipelineConfig, PipelineError> {
    Ok(PipelineConfig {
        input: args.input.clone(),
        format: match args.format {
            FormatArg::Auto => InputFormat::Auto,
            FormatArg::Matpower => InputFormat::Matpower,
            FormatArg::EdgeList => InputFormat::EdgeList,
        },
        side: match args.side {
            SideArg::Complex => Side::Complex,
            SideArg::Real => Side::Real,
        },
        strategy: strategy_from(args.order, args.seed)?,
        s_max: args.smax,
        rounds: args.rounds.unwrap_or(default_rounds),
    })
}

fn emit(text: String, output: &Option<PathBuf>) -> Result<(), PipelineError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| PipelineError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Decompose(args) => {
            let cfg = config_from(&args, 0)?;
            let report = run_pipeline(&cfg)?;
            emit(to_canonical_json(&report), &args.output)
        }
        Command::Merge(args) => {
            let cfg = config_from(&args, 4)?;
            let report = run_pipeline(&cfg)?;
            emit(to_canonical_json(&report), &args.output)
        }
        Command::Compare(args) => {
            let cfg_a = config_from(&args.common, 0)?;
            let mut cfg_b = cfg_a.clone();
            if let Some(side) = args.side_b {
                cfg_b.side = match side {
                    SideArg::Complex => Side::Complex,
                    SideArg::Real => Side::Real,
                };
            }
            if args.order_b.is_some() || args.seed_b.is_some() {
                let order = args.order_b.unwrap_or(args.common.order);
                cfg_b.strategy = strategy_from(order, args.seed_b)?;
            }
            if let Some(rounds) = args.rounds_b {
                cfg_b.rounds = rounds;
            }
            let comparison = compare(&cfg_a, &cfg_b)?;
            emit(to_canonical_json(&comparison), &args.common.output)
        }
        Command::Export(args) => {
            let cfg = config_from(&args, 0)?;
            let report = run_pipeline(&cfg)?;
            match &args.output {
                Some(path) => export_blocks(&report, path).map_err(|e| {
                    PipelineError::Input(format!("cannot write {}: {e}", path.display()))
                }),
                None => {
                    print!("{}", opf_cliques::render_block_export(&report));
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
