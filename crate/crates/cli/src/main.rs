//! `mabsim` — run, plot, and compare collaborative bandit experiments.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mabsim_core::experiment::{
    compare_algorithms, paper_grid, read_aggregate_csv, read_meta, run_experiment, write_outputs,
    Algorithm, ConfigOverlay, ExperimentConfig, TopologySpec,
};
use mabsim_core::svg::{emit_svg_plot, LabeledStats, PlotOptions};
use mabsim_core::NoiseModel;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "mabsim",
    version,
    about = "Collaborative multi-armed bandit simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and write aggregate.csv, runs.csv, and meta.json.
    Run(RunArgs),
    /// Combine aggregate.csv files from experiment directories into one SVG.
    Plot(PlotArgs),
    /// Run several algorithms under matched seeds and report the regret
    /// ordering.
    Compare(CompareArgs),
    /// Execute the standard evaluation grid (three complete-graph sizes and
    /// three sparse Erdős–Rényi sizes).
    PaperGrid(PaperGridArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Number of agents (N).
    #[arg(long, default_value_t = 10)]
    agents: u32,
    /// Number of arms (K).
    #[arg(long, default_value_t = 100)]
    arms: u32,
    /// Steps per agent (T).
    #[arg(long, default_value_t = 100_000)]
    horizon: u64,
    /// Independent replications.
    #[arg(long, default_value_t = 30)]
    runs: u32,
    /// Master seed; every stream in the experiment derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reward noise: bernoulli or gaussian.
    #[arg(long, default_value = "bernoulli", value_parser = parse_noise)]
    noise: NoiseModel,
    /// Topology: complete, path, erdos-renyi:<p>, or file:<path>.
    /// Defaults to complete where the algorithm allows it.
    #[arg(long)]
    topology: Option<String>,
    /// Regret sampling stride in steps (the final step is always sampled).
    #[arg(long, default_value_t = 100)]
    stride: u64,
    /// Hold arm means constant across replications.
    #[arg(long)]
    fixed_means: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm: lcc-ucb, lcc-ucb-graph, lcc-ucb-neighbor, full-comm, or
    /// no-comm.
    #[arg(long, value_parser = parse_algorithm)]
    algo: Option<Algorithm>,
    #[command(flatten)]
    common: CommonArgs,
    /// JSON config file; its fields override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Experiment directories (each holding aggregate.csv and meta.json).
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// Log-scale the time axis.
    #[arg(long)]
    log_x: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Algorithms to compare (comma-separated). Defaults to the broadcast
    /// protocol and both baselines on complete topologies, and to both graph
    /// protocols plus both baselines otherwise.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algos: Vec<Algorithm>,
    #[command(flatten)]
    common: CommonArgs,
    /// Output directory.
    #[arg(long, default_value = "compare-out")]
    out: PathBuf,
}

#[derive(Args)]
struct PaperGridArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Replications per experiment.
    #[arg(long, default_value_t = 30)]
    runs: u32,
    /// Steps per agent.
    #[arg(long, default_value_t = 100_000)]
    horizon: u64,
    /// Master seed.
    #[arg(long, default_value_t = 1729)]
    seed: u64,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: mabsim_core::Error| e.to_string())
}

fn parse_noise(s: &str) -> Result<NoiseModel, String> {
    match s {
        "bernoulli" => Ok(NoiseModel::Bernoulli),
        "gaussian" | "gaussian-unit-variance" => Ok(NoiseModel::GaussianUnitVariance),
        other => Err(format!(
            "unknown noise model '{other}' (expected bernoulli or gaussian)"
        )),
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Compare(args) => cmd_compare(args),
        Command::PaperGrid(args) => cmd_paper_grid(args),
    }
}

/// Assembles the experiment config from flags, the optional JSON overlay,
/// and the algorithm's topology default.
fn build_config(
    algo: Option<Algorithm>,
    common: &CommonArgs,
    config_file: Option<&PathBuf>,
) -> Result<ExperimentConfig> {
    let flag_topology: Option<TopologySpec> =
        common.topology.as_deref().map(|s| s.parse()).transpose()?;

    let overlay = match config_file {
        Some(path) => ConfigOverlay::from_file(path)
            .with_context(|| format!("loading config {}", path.display()))?,
        None => ConfigOverlay::default(),
    };

    let algo = overlay
        .algo
        .or(algo)
        .context("no algorithm selected; pass --algo or set it in the config file")?;
    let topology = overlay.topology.clone().or(flag_topology);
    let topology = match topology {
        Some(t) => t,
        None => match algo {
            Algorithm::LccUcbGraph | Algorithm::LccUcbNeighbor => bail!(
                "--algo {} needs an explicit --topology (complete, path, erdos-renyi:<p>, or file:<path>)",
                algo.name()
            ),
            _ => TopologySpec::Complete,
        },
    };

    let base = ExperimentConfig {
        algo,
        agents: common.agents,
        arms: common.arms,
        horizon: common.horizon,
        runs: common.runs,
        seed: common.seed,
        noise: common.noise,
        topology,
        stride: common.stride,
        fixed_means: common.fixed_means,
    };
    let config = overlay.apply(base);
    config.validate()?;
    if config.agents > config.arms {
        eprintln!(
            "warning: more agents than arms (N={} > K={}); agents will share arms heavily",
            config.agents, config.arms
        );
    }
    Ok(config)
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let config = build_config(args.algo, &args.common, args.config.as_ref())?;
    let result = run_experiment(&config)?;
    write_outputs(&result, &args.out)?;
    println!(
        "{}: {} runs of N={} K={} T={} -> median final regret {:.2}",
        config.algo.name(),
        config.runs,
        config.agents,
        config.arms,
        config.horizon,
        result.aggregate.final_median()
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let mut series = Vec::new();
    for dir in &args.inputs {
        let meta = read_meta(dir)?;
        let stats = read_aggregate_csv(&dir.join("aggregate.csv"))?;
        series.push(LabeledStats {
            label: format!(
                "{} (N={}, K={})",
                meta.config.algo.name(),
                meta.config.agents,
                meta.config.arms
            ),
            stats,
        });
    }
    emit_svg_plot(&series, &PlotOptions { log_x: args.log_x }, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    // the algorithm field is overwritten per compared algorithm
    let config = build_config(Some(Algorithm::NoComm), &args.common, None)?;
    let algos: Vec<Algorithm> = if args.algos.is_empty() {
        match config.topology {
            TopologySpec::Complete => {
                vec![Algorithm::FullComm, Algorithm::LccUcb, Algorithm::NoComm]
            }
            _ => vec![
                Algorithm::LccUcbGraph,
                Algorithm::LccUcbNeighbor,
                Algorithm::FullComm,
                Algorithm::NoComm,
            ],
        }
    } else {
        args.algos
    };
    let ordering = compare_algorithms(&config, &algos, &args.out)?;
    println!("algorithms by median final regret (ascending):");
    for (rank, (algo, value)) in ordering.iter().enumerate() {
        println!("{}. {} {:.2}", rank + 1, algo.name(), value);
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_paper_grid(args: PaperGridArgs) -> Result<()> {
    paper_grid(&args.out, args.runs, args.horizon, args.seed)?;
    println!("wrote {}", args.out.display());
    Ok(())
}
