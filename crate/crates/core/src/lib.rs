//! Deterministic simulation engine for collaborative multi-armed bandits
//! with exact communication accounting.
//!
//! `N` agents share one hidden `K`-armed bandit. The collaboration
//! protocols split the arms across agents, run UCB in doubling epochs, and
//! exchange only most-played arm indices at epoch boundaries; the ledger
//! counts every round, message, and bit. Baselines that communicate every
//! step or never at all bracket the trade-off, and the experiment harness
//! reproduces the regret/communication comparisons at desk scale.
//!
//! Entry points:
//! - [`agents`] — protocol runners (`run_lcc_ucb`, `run_lcc_ucb_graph`, …);
//! - [`experiment`] — replicated experiments, CSV/JSON/SVG artifacts;
//! - [`bandit`], [`schedule`], [`topology`], [`protocol`] — the pieces they
//!   are built from.

pub mod agents;
pub mod aggregate;
pub mod bandit;
pub mod error;
pub mod experiment;
pub mod ids;
pub mod protocol;
pub mod rng;
pub mod schedule;
pub mod svg;
pub mod topology;

pub use agents::{
    run_full_comm, run_lcc_ucb, run_lcc_ucb_graph, run_lcc_ucb_neighbor, run_no_comm, EpochMeta,
    RegretTrace, RunOptions, RunOutput,
};
pub use aggregate::{aggregate, AggregateStats};
pub use bandit::{
    sample_means, ucb_index, ucb_run, ArmStats, BanditInstance, NoiseModel, UcbState,
};
pub use error::{Error, Result};
pub use experiment::{
    compare_algorithms, paper_grid, run_experiment, write_outputs, Algorithm, ConfigOverlay,
    ExperimentConfig, ExperimentResult, TopologySpec,
};
pub use ids::{AgentId, ArmId};
pub use protocol::{exchange, CommLedger, LedgerReport, Recommendation};
pub use rng::{Purpose, RngStream, StreamKey};
pub use schedule::{
    delta_tilde, initial_arm_set, k_prime, num_epochs, CommRegime, EpochSchedule, PartitionSpec,
};
pub use svg::{emit_svg_plot, LabeledStats, PlotOptions};
pub use topology::{
    complete_graph, gen_erdos_renyi_connected, load_topology, path_graph, Topology,
};
