//! Command-line front end binding the pseudo-label pipeline together:
//! synthetic scenes, BEV rendering, vectorization, mask-aware assignment,
//! losses, and evaluation.

mod commands;
mod config;
mod debug_render;
mod error;
mod formats;
mod io_util;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Ctx;
use config::PipelineConfig;
use error::CliResult;

#[derive(Parser)]
#[command(
    name = "pseudomap",
    version,
    about = "Vector map pseudo-labels: generation, assignment, losses, evaluation"
)]
struct Cli {
    /// Pipeline config JSON; defaults to $PSEUDOMAP_CONFIG or built-ins.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for frame-parallel commands.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print per-stage timings to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic scene: ground truth, raster, masks.
    Synth(commands::synth::SynthArgs),
    /// Render a surfel grid into a semantic BEV raster.
    Render(commands::render::RenderArgs),
    /// Turn a semantic raster into vectorized map pseudo-labels.
    Vectorize(commands::vectorize::VectorizeArgs),
    /// Solve the mask-aware assignment between predictions and labels.
    Assign(commands::assign::AssignArgs),
    /// Evaluate the mask-aware losses for a solved assignment.
    Loss(commands::loss::LossArgs),
    /// Chamfer-AP evaluation over directories of map pairs.
    Eval(commands::eval::EvalArgs),
    /// Coverage ratios, filtering, and coverage curves over masks.
    Coverage(commands::coverage::CoverageArgs),
    /// Inspect or dump the effective configuration.
    Config(commands::config_cmd::ConfigArgs),
}

fn dispatch(command: &Command, ctx: &Ctx) -> CliResult<()> {
    match command {
        Command::Synth(args) => commands::synth::run(args, ctx),
        Command::Render(args) => commands::render::run(args, ctx),
        Command::Vectorize(args) => commands::vectorize::run(args, ctx),
        Command::Assign(args) => commands::assign::run(args, ctx),
        Command::Loss(args) => commands::loss::run(args, ctx),
        Command::Eval(args) => commands::eval::run(args, ctx),
        Command::Coverage(args) => commands::coverage::run(args, ctx),
        Command::Config(args) => commands::config_cmd::run(args, ctx),
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let config = PipelineConfig::load(cli.config.as_deref())?;
    let ctx = Ctx {
        config,
        verbose: cli.verbose,
    };
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| error::CliError::validation(format!("thread pool: {e}")))?
            .install(|| dispatch(&cli.command, &ctx)),
        None => dispatch(&cli.command, &ctx),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
