//! Experiment orchestration: replication fan-out, aggregation, and on-disk
//! artifacts.
//!
//! One experiment runs `R` replications of a single algorithm. Each
//! replication draws fresh arm means (and a fresh topology, when random)
//! from its own streams, so the whole experiment is a pure function of the
//! config — replications may run on any number of threads and the output
//! directory is byte-identical across repeats.
//!
//! Artifacts per experiment directory:
//! - `aggregate.csv` — `t,median,lo95,hi95` across replications (agent 1's
//!   trace represents each replication, matching the single-agent regret
//!   curves this reproduces);
//! - `runs.csv` — `run_id,agent_id,t,cum_regret` for every agent;
//! - `meta.json` — config echo plus per-run schedule, ledger, and topology
//!   records.

use crate::agents::{
    run_full_comm, run_lcc_ucb, run_lcc_ucb_graph, run_lcc_ucb_neighbor, run_no_comm, EpochMeta,
    RegretTrace, RunOptions, RunOutput,
};
use crate::aggregate::{aggregate, AggregateStats};
use crate::bandit::{sample_means, BanditInstance, NoiseModel};
use crate::error::{Error, Result};
use crate::ids::AgentId;
use crate::protocol::{CommLedger, GraphBitBound, LedgerReport};
use crate::rng::StreamKey;
use crate::svg::{emit_svg_plot, LabeledStats, PlotOptions};
use crate::topology::{
    complete_graph, gen_erdos_renyi_connected, load_topology, path_graph, Topology,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

/// Which runner an experiment drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    LccUcb,
    LccUcbGraph,
    LccUcbNeighbor,
    FullComm,
    NoComm,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::LccUcb => "lcc-ucb",
            Algorithm::LccUcbGraph => "lcc-ucb-graph",
            Algorithm::LccUcbNeighbor => "lcc-ucb-neighbor",
            Algorithm::FullComm => "full-comm",
            Algorithm::NoComm => "no-comm",
        }
    }

    pub fn all() -> [Algorithm; 5] {
        [
            Algorithm::LccUcb,
            Algorithm::LccUcbGraph,
            Algorithm::LccUcbNeighbor,
            Algorithm::FullComm,
            Algorithm::NoComm,
        ]
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::all()
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Topology selection, written as a single string in configs:
/// `complete`, `path`, `erdos-renyi:<p>`, or `file:<path>`.
#[derive(Clone, Debug, PartialEq)]
pub enum TopologySpec {
    Complete,
    Path,
    ErdosRenyi { p: f64 },
    File { path: String },
}

impl FromStr for TopologySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(TopologySpec::Complete),
            "path" => Ok(TopologySpec::Path),
            _ => {
                if let Some(p) = s.strip_prefix("erdos-renyi:") {
                    let p: f64 = p
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid edge probability in '{s}'")))?;
                    Ok(TopologySpec::ErdosRenyi { p })
                } else if let Some(path) = s.strip_prefix("file:") {
                    Ok(TopologySpec::File { path: path.into() })
                } else {
                    Err(Error::Config(format!(
                        "unknown topology '{s}' (expected complete, path, erdos-renyi:<p>, or file:<path>)"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologySpec::Complete => f.write_str("complete"),
            TopologySpec::Path => f.write_str("path"),
            TopologySpec::ErdosRenyi { p } => write!(f, "erdos-renyi:{p}"),
            TopologySpec::File { path } => write!(f, "file:{path}"),
        }
    }
}

impl Serialize for TopologySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TopologySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Full description of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algo: Algorithm,
    pub agents: u32,
    pub arms: u32,
    pub horizon: u64,
    pub runs: u32,
    pub seed: u64,
    pub noise: NoiseModel,
    pub topology: TopologySpec,
    pub stride: u64,
    /// Hold arm means constant across replications (variance studies).
    pub fixed_means: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.agents == 0 || self.arms == 0 || self.horizon == 0 {
            return Err(Error::Config(
                "agents, arms, and horizon must all be at least 1".into(),
            ));
        }
        if self.runs == 0 {
            return Err(Error::Config("need at least one replication".into()));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.algo == Algorithm::LccUcb && self.topology != TopologySpec::Complete {
            return Err(Error::Config(
                "lcc-ucb broadcasts to all agents and requires topology=complete; \
                 use lcc-ucb-neighbor or lcc-ucb-graph on general graphs"
                    .into(),
            ));
        }
        if let TopologySpec::ErdosRenyi { p } = self.topology {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Config(format!(
                    "edge probability {p} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Partial config parsed from a JSON file; present fields override flag
/// values. Unknown keys are rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverlay {
    pub algo: Option<Algorithm>,
    pub agents: Option<u32>,
    pub arms: Option<u32>,
    pub horizon: Option<u64>,
    pub runs: Option<u32>,
    pub seed: Option<u64>,
    pub noise: Option<NoiseModel>,
    pub topology: Option<TopologySpec>,
    pub stride: Option<u64>,
    pub fixed_means: Option<bool>,
}

impl ConfigOverlay {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn apply(self, mut base: ExperimentConfig) -> ExperimentConfig {
        if let Some(v) = self.algo {
            base.algo = v;
        }
        if let Some(v) = self.agents {
            base.agents = v;
        }
        if let Some(v) = self.arms {
            base.arms = v;
        }
        if let Some(v) = self.horizon {
            base.horizon = v;
        }
        if let Some(v) = self.runs {
            base.runs = v;
        }
        if let Some(v) = self.seed {
            base.seed = v;
        }
        if let Some(v) = self.noise {
            base.noise = v;
        }
        if let Some(v) = self.topology {
            base.topology = v;
        }
        if let Some(v) = self.stride {
            base.stride = v;
        }
        if let Some(v) = self.fixed_means {
            base.fixed_means = v;
        }
        base
    }
}

/// Topology facts recorded per replication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyInfo {
    pub nodes: u32,
    pub edges: u64,
    pub diameter: u32,
    pub max_degree: u32,
    /// Samples the connected-graph generator needed (random topologies).
    pub attempts: Option<u32>,
}

impl TopologyInfo {
    fn of(topology: &Topology, attempts: Option<u32>) -> Self {
        TopologyInfo {
            nodes: topology.node_count(),
            edges: topology.edge_count(),
            diameter: topology.diameter(),
            max_degree: topology.max_degree(),
            attempts,
        }
    }
}

/// Everything one replication produced.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub run_id: u32,
    pub topology: Option<TopologyInfo>,
    pub epochs: Option<EpochMeta>,
    pub ledger: LedgerReport,
    pub traces: Vec<RegretTrace>,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub runs: Vec<RunRecord>,
    /// Aggregated over agent 1's trace per replication.
    pub aggregate: AggregateStats,
}

/// Runs all replications (in parallel, capped by `MABSIM_THREADS`; 0 or
/// unset means automatic) and aggregates agent 1's traces.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let file_topology = match &config.topology {
        TopologySpec::File { path } => {
            let topo = load_topology(Path::new(path))?;
            if topo.node_count() != config.agents {
                return Err(Error::Config(format!(
                    "topology file has {} nodes but the config asks for {} agents",
                    topo.node_count(),
                    config.agents
                )));
            }
            Some(topo)
        }
        _ => None,
    };

    let run_ids: Vec<u32> = (0..config.runs).collect();
    let body = || -> Result<Vec<RunRecord>> {
        run_ids
            .par_iter()
            .map(|&run_id| run_one(config, run_id, file_topology.as_ref()))
            .collect()
    };
    let runs = match thread_pool()? {
        Some(pool) => pool.install(body)?,
        None => body()?,
    };

    let rep_traces: Vec<&RegretTrace> = runs.iter().map(|r| &r.traces[0]).collect();
    let aggregate = aggregate(&rep_traces)?;
    Ok(ExperimentResult {
        config: config.clone(),
        runs,
        aggregate,
    })
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    match std::env::var("MABSIM_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| Error::Config(format!("MABSIM_THREADS='{v}' is not a number")))?;
            if n == 0 {
                return Ok(None);
            }
            Ok(Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
            ))
        }
    }
}

fn run_one(
    config: &ExperimentConfig,
    run_id: u32,
    file_topology: Option<&Topology>,
) -> Result<RunRecord> {
    let key = StreamKey::new(config.seed, run_id as u64);
    let means_key = if config.fixed_means {
        StreamKey::new(config.seed, 0)
    } else {
        key
    };
    let means = sample_means(config.arms, &mut means_key.means())?;
    let instance = BanditInstance::new(means, config.noise)?;
    let opts = RunOptions {
        stride: config.stride,
        record_pulls: false,
    };

    // no-comm never touches the topology; the others build or generate it
    let needs_topology = config.algo != Algorithm::NoComm;
    let mut attempts = None;
    let topology: Option<Topology> = if needs_topology {
        Some(match &config.topology {
            TopologySpec::Complete => complete_graph(config.agents)?,
            TopologySpec::Path => path_graph(config.agents)?,
            TopologySpec::ErdosRenyi { p } => {
                let generated = gen_erdos_renyi_connected(config.agents, *p, &mut key.topology())?;
                attempts = Some(generated.attempts);
                generated.topology
            }
            TopologySpec::File { .. } => file_topology.expect("loaded above").clone(),
        })
    } else {
        None
    };

    let mut ledger = match config.algo {
        Algorithm::FullComm => CommLedger::for_sample_reports(config.agents, config.arms),
        _ => CommLedger::for_arm_exchange(config.agents, config.arms),
    };

    let output: RunOutput = match config.algo {
        Algorithm::LccUcb => run_lcc_ucb(
            &instance,
            config.agents,
            config.horizon,
            key,
            &mut ledger,
            &opts,
        )?,
        Algorithm::LccUcbNeighbor => run_lcc_ucb_neighbor(
            &instance,
            topology.as_ref().unwrap(),
            config.horizon,
            key,
            &mut ledger,
            &opts,
        )?,
        Algorithm::LccUcbGraph => run_lcc_ucb_graph(
            &instance,
            topology.as_ref().unwrap(),
            config.horizon,
            key,
            &mut ledger,
            &opts,
        )?,
        Algorithm::FullComm => run_full_comm(
            &instance,
            topology.as_ref().unwrap(),
            config.horizon,
            key,
            &mut ledger,
            &opts,
        )?,
        Algorithm::NoComm => run_no_comm(&instance, config.agents, config.horizon, key, &opts)?,
    };

    let graph_bound = match (config.algo, &output.epochs, &topology) {
        (Algorithm::LccUcbGraph, Some(meta), Some(topo)) => Some(GraphBitBound {
            diameter: topo.diameter() as u64,
            full_epochs: meta.full_epochs as u64,
            max_degree: topo.max_degree() as u64,
        }),
        _ => None,
    };
    Ok(RunRecord {
        run_id,
        topology: topology.as_ref().map(|t| TopologyInfo::of(t, attempts)),
        epochs: output.epochs,
        ledger: LedgerReport::new(&ledger, graph_bound),
        traces: output.agents.into_iter().map(|a| a.trace).collect(),
    })
}

/// `meta.json` document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetaDoc {
    pub version: String,
    pub config: ExperimentConfig,
    /// How the 95% band is constructed.
    pub band_method: String,
    pub runs: Vec<RunMetaDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunMetaDoc {
    pub run_id: u32,
    pub topology: Option<TopologyInfo>,
    pub epochs: Option<EpochMeta>,
    pub ledger: LedgerReport,
}

pub const BAND_METHOD: &str = "empirical percentiles 2.5/97.5, linear interpolation";

/// Writes `aggregate.csv`, `runs.csv`, and `meta.json` into `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;

    let agg_path = dir.join("aggregate.csv");
    write_aggregate_csv(&result.aggregate, &agg_path)?;

    let runs_path = dir.join("runs.csv");
    let file = std::fs::File::create(&runs_path)
        .map_err(|e| Error::io(format!("creating {}", runs_path.display()), e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(format!("writing {}", runs_path.display()), e);
    writeln!(w, "run_id,agent_id,t,cum_regret").map_err(io)?;
    for run in &result.runs {
        for trace in &run.traces {
            for &(t, regret) in &trace.samples {
                writeln!(w, "{},{},{},{}", run.run_id, trace.agent, t, Sig17(regret))
                    .map_err(io)?;
            }
        }
    }
    w.flush().map_err(io)?;

    let meta = MetaDoc {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: result.config.clone(),
        band_method: BAND_METHOD.to_string(),
        runs: result
            .runs
            .iter()
            .map(|r| RunMetaDoc {
                run_id: r.run_id,
                topology: r.topology.clone(),
                epochs: r.epochs.clone(),
                ledger: r.ledger.clone(),
            })
            .collect(),
    };
    let meta_path = dir.join("meta.json");
    let file = std::fs::File::create(&meta_path)
        .map_err(|e| Error::io(format!("creating {}", meta_path.display()), e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &meta)?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(format!("writing {}", meta_path.display()), e))?;
    Ok(())
}

fn write_aggregate_csv(stats: &AggregateStats, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(format!("writing {}", path.display()), e);
    writeln!(w, "t,median,lo95,hi95").map_err(io)?;
    for i in 0..stats.len() {
        writeln!(
            w,
            "{},{},{},{}",
            stats.t[i],
            Sig17(stats.median[i]),
            Sig17(stats.lo95[i]),
            Sig17(stats.hi95[i])
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Floats serialize with 17 significant digits, enough for exact f64
/// round-trips.
struct Sig17(f64);

impl fmt::Display for Sig17 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

pub fn read_meta(dir: &Path) -> Result<MetaDoc> {
    let path = dir.join("meta.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_aggregate_csv(path: &Path) -> Result<AggregateStats> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut stats = AggregateStats {
        t: Vec::new(),
        median: Vec::new(),
        lo95: Vec::new(),
        hi95: Vec::new(),
    };
    for (idx, line) in text.lines().enumerate().skip(1) {
        let mut fields = line.split(',');
        let mut next = || -> Result<&str> {
            fields.next().ok_or_else(|| {
                Error::Config(format!(
                    "{}: line {}: missing field",
                    path.display(),
                    idx + 1
                ))
            })
        };
        let parse_err = |what: &str| {
            Error::Config(format!(
                "{}: line {}: invalid {what}",
                path.display(),
                idx + 1
            ))
        };
        stats.t.push(next()?.parse().map_err(|_| parse_err("t"))?);
        stats
            .median
            .push(next()?.parse().map_err(|_| parse_err("median"))?);
        stats
            .lo95
            .push(next()?.parse().map_err(|_| parse_err("lo95"))?);
        stats
            .hi95
            .push(next()?.parse().map_err(|_| parse_err("hi95"))?);
    }
    Ok(stats)
}

/// Rebuilds the aggregate from `runs.csv` (agent 1's rows), independently of
/// the in-memory path.
pub fn aggregate_from_runs_csv(path: &Path) -> Result<AggregateStats> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut per_run: Vec<RegretTrace> = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Config(format!(
                "{}: line {}: expected 4 fields",
                path.display(),
                idx + 1
            )));
        }
        let run_id: usize = fields[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad run_id on line {}", idx + 1)))?;
        let agent_id: u32 = fields[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad agent_id on line {}", idx + 1)))?;
        if agent_id != 1 {
            continue;
        }
        let t: u64 = fields[2]
            .parse()
            .map_err(|_| Error::Config(format!("bad t on line {}", idx + 1)))?;
        let regret: f64 = fields[3]
            .parse()
            .map_err(|_| Error::Config(format!("bad cum_regret on line {}", idx + 1)))?;
        while per_run.len() <= run_id {
            per_run.push(RegretTrace {
                agent: AgentId(1),
                samples: Vec::new(),
            });
        }
        per_run[run_id].samples.push((t, regret));
    }
    let refs: Vec<&RegretTrace> = per_run.iter().collect();
    aggregate(&refs)
}

/// Runs several algorithms under matched seeds, writes each under
/// `out/<algo>/`, emits a combined `compare.svg`, and writes an
/// `ordering.txt` report of algorithms sorted by median final regret.
/// Returns the sorted `(algorithm, median final regret)` list.
pub fn compare_algorithms(
    base: &ExperimentConfig,
    algos: &[Algorithm],
    out: &Path,
) -> Result<Vec<(Algorithm, f64)>> {
    if algos.is_empty() {
        return Err(Error::Config("no algorithms to compare".into()));
    }
    let mut series = Vec::new();
    let mut finals = Vec::new();
    for &algo in algos {
        let config = ExperimentConfig {
            algo,
            ..base.clone()
        };
        let result = run_experiment(&config)?;
        write_outputs(&result, &out.join(algo.name()))?;
        finals.push((algo, result.aggregate.final_median()));
        series.push(LabeledStats {
            label: algo.name().to_string(),
            stats: result.aggregate,
        });
    }
    emit_svg_plot(&series, &PlotOptions::default(), &out.join("compare.svg"))?;

    finals.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite medians"));
    let report_path = out.join("ordering.txt");
    let mut report = String::from("algorithms by median final regret (ascending)\n");
    for (rank, (algo, value)) in finals.iter().enumerate() {
        report.push_str(&format!(
            "{}. {} {}\n",
            rank + 1,
            algo.name(),
            Sig17(*value)
        ));
    }
    std::fs::write(&report_path, report)
        .map_err(|e| Error::io(format!("writing {}", report_path.display()), e))?;
    Ok(finals)
}

/// One cell of the evaluation grid.
#[derive(Clone, Debug)]
pub struct GridEntry {
    pub label: String,
    pub agents: u32,
    pub arms: u32,
    pub topology: TopologySpec,
    pub algos: Vec<Algorithm>,
}

/// The evaluation grid: three complete-graph sizes with broadcast
/// collaboration against both baselines, and three sparse Erdős–Rényi sizes
/// (`p = 10/N`) with the graph protocol against both baselines.
pub fn standard_grid() -> Vec<GridEntry> {
    let complete = [(10u32, 100u32), (20, 100), (10, 200)];
    let sparse = [(100u32, 250u32), (150, 250), (100, 500)];
    let mut entries = Vec::new();
    for (n, k) in complete {
        entries.push(GridEntry {
            label: format!("complete_n{n}_k{k}"),
            agents: n,
            arms: k,
            topology: TopologySpec::Complete,
            algos: vec![Algorithm::LccUcb, Algorithm::FullComm, Algorithm::NoComm],
        });
    }
    for (n, k) in sparse {
        entries.push(GridEntry {
            label: format!("sparse_n{n}_k{k}"),
            agents: n,
            arms: k,
            topology: TopologySpec::ErdosRenyi { p: 10.0 / n as f64 },
            algos: vec![
                Algorithm::LccUcbGraph,
                Algorithm::FullComm,
                Algorithm::NoComm,
            ],
        });
    }
    entries
}

/// Executes the full grid under one master seed, writing
/// `<out>/<entry>/<algo>/` artifacts plus a combined `plot.svg` per entry.
pub fn paper_grid(out: &Path, runs: u32, horizon: u64, seed: u64) -> Result<()> {
    for entry in standard_grid() {
        let dir = out.join(&entry.label);
        let mut series = Vec::new();
        for &algo in &entry.algos {
            let config = ExperimentConfig {
                algo,
                agents: entry.agents,
                arms: entry.arms,
                horizon,
                runs,
                seed,
                noise: NoiseModel::Bernoulli,
                topology: entry.topology.clone(),
                stride: 100,
                fixed_means: false,
            };
            let result = run_experiment(&config)?;
            write_outputs(&result, &dir.join(algo.name()))?;
            series.push(LabeledStats {
                label: algo.name().to_string(),
                stats: result.aggregate,
            });
        }
        emit_svg_plot(&series, &PlotOptions::default(), &dir.join("plot.svg"))?;
    }
    Ok(())
}
