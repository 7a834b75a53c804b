//! Protocol runners: the epoch-doubling collaboration protocols and the two
//! every-step baselines.
//!
//! All runners simulate every agent over the full horizon against one hidden
//! `BanditInstance`, recording realized pseudo-regret (gap sums). One run is
//! a deterministic function of `(instance, topology, horizon, StreamKey)`;
//! agents draw rewards from per-agent streams, so replications and agents
//! can be evaluated in any order without changing results.
//!
//! Epoch structure: agent `n` starts from its slice `S_n` of the arm
//! partition and runs UCB over `S_n` plus the recommendations last received,
//! restarting each (sub-)epoch. A (sub-)epoch that runs its full nominal
//! duration ends with a synchronous exchange of most-played arms; the
//! truncated tail that pads the horizon does not trigger one, which keeps
//! the ledger at exactly one round per full (sub-)epoch. Received
//! recommendations replace the previous inbox wholesale, so nothing survives
//! past the (sub-)epoch after its receipt.

use crate::bandit::{ucb_run, BanditInstance};
use crate::error::{Error, Result};
use crate::ids::{AgentId, ArmId};
use crate::protocol::{exchange, CommLedger};
use crate::rng::{RngStream, StreamKey};
use crate::schedule::{
    initial_arm_set, k_prime, num_epochs, CommRegime, EpochSchedule, PartitionSpec,
};
use crate::topology::{complete_graph, Topology};
use serde::{Deserialize, Serialize};

/// Knobs shared by every runner.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Sample the cumulative regret every `stride` steps (the final step is
    /// always sampled).
    pub stride: u64,
    /// Keep the full per-agent pulled-arm logs (memory-heavy; used by
    /// equivalence and determinism checks).
    pub record_pulls: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            stride: 100,
            record_pulls: false,
        }
    }
}

/// Realized pseudo-regret `mu_max - mu_pulled` for one pull.
pub fn step_regret(instance: &BanditInstance, pulled: ArmId) -> Result<f64> {
    instance.gap(pulled)
}

/// Cumulative pseudo-regret of one agent, sampled on the stride grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretTrace {
    pub agent: AgentId,
    /// `(t, sum of gaps of the first t pulls)`, strictly increasing in `t`.
    pub samples: Vec<(u64, f64)>,
}

impl RegretTrace {
    pub fn final_regret(&self) -> f64 {
        self.samples.last().map(|&(_, r)| r).unwrap_or(0.0)
    }

    /// Cumulative regret at sampled time `t`, if `t` is on the grid.
    pub fn at(&self, t: u64) -> Option<f64> {
        self.samples
            .binary_search_by_key(&t, |&(s, _)| s)
            .ok()
            .map(|i| self.samples[i].1)
    }
}

struct TraceBuilder {
    stride: u64,
    horizon: u64,
    step: u64,
    cum: f64,
    samples: Vec<(u64, f64)>,
}

impl TraceBuilder {
    fn new(stride: u64, horizon: u64) -> Self {
        let capacity = (horizon / stride.max(1) + 2) as usize;
        TraceBuilder {
            stride: stride.max(1),
            horizon,
            step: 0,
            cum: 0.0,
            samples: Vec::with_capacity(capacity),
        }
    }

    #[inline]
    fn record(&mut self, gap: f64) {
        self.step += 1;
        self.cum += gap;
        if self.step.is_multiple_of(self.stride) || self.step == self.horizon {
            self.samples.push((self.step, self.cum));
        }
    }

    fn finish(self, agent: AgentId) -> RegretTrace {
        debug_assert_eq!(self.step, self.horizon);
        RegretTrace {
            agent,
            samples: self.samples,
        }
    }
}

/// Everything one agent produced over a run.
#[derive(Clone, Debug)]
pub struct AgentOutput {
    pub agent: AgentId,
    pub trace: RegretTrace,
    /// Most-played arm of each executed (sub-)epoch, in order (protocol
    /// runners only).
    pub recommendations: Vec<ArmId>,
    /// Arm set the agent played in each executed (sub-)epoch.
    pub augmented_sets: Vec<Vec<ArmId>>,
    /// Full pulled-arm log when `RunOptions::record_pulls` is set.
    pub pulls: Option<Vec<ArmId>>,
}

/// One executed (sub-)epoch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentMeta {
    pub epoch: u32,
    /// 1-based sub-epoch index within the epoch (always 1 when the epoch is
    /// not subdivided).
    pub sub_epoch: u32,
    pub planned: u64,
    pub actual: u64,
    /// Whether the segment ended with an exchange round.
    pub exchanged: bool,
}

/// Schedule bookkeeping for one protocol run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpochMeta {
    pub k_prime: u32,
    /// T0 = K'(K'+1).
    pub base_duration: u64,
    pub horizon: u64,
    /// Closed-form epoch count `floor(log2(horizon / T0 + 1))`.
    pub j_formula: u32,
    /// Epochs that ran every sub-epoch at full duration.
    pub full_epochs: u32,
    /// Epochs that ran at all, including a truncated tail.
    pub executed_epochs: u32,
    /// Sub-epochs per epoch (the graph diameter; 1 otherwise).
    pub sub_epochs_per_epoch: u32,
    /// Synchronous exchange rounds performed.
    pub exchange_rounds: u32,
    pub segments: Vec<SegmentMeta>,
    /// Diagnostic `sqrt(16 K' ln T / T_j)` per executed epoch.
    pub delta_tilde: Vec<f64>,
}

/// Output of one runner invocation.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub agents: Vec<AgentOutput>,
    /// `None` for the baselines, which have no epoch structure.
    pub epochs: Option<EpochMeta>,
}

/// Epoch-doubling protocol with all-to-all broadcast (the complete-graph
/// setting); `K' = ceil(K/N) + N - 1`.
pub fn run_lcc_ucb(
    instance: &BanditInstance,
    agent_count: u32,
    horizon: u64,
    key: StreamKey,
    ledger: &mut CommLedger,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let topology = complete_graph(agent_count)?;
    let spec = PartitionSpec::new(agent_count, instance.arm_count())?;
    let kp = k_prime(&spec, CommRegime::Complete);
    run_epoch_protocol(instance, &topology, kp, 1, horizon, key, ledger, opts)
}

/// Plain epoch-doubling protocol restricted to neighbor exchange on an
/// arbitrary connected topology; `K' = ceil(K/N) + K_G`. One exchange per
/// epoch, so a recommendation needs one epoch per hop to propagate.
pub fn run_lcc_ucb_neighbor(
    instance: &BanditInstance,
    topology: &Topology,
    horizon: u64,
    key: StreamKey,
    ledger: &mut CommLedger,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let spec = PartitionSpec::new(topology.node_count(), instance.arm_count())?;
    let kp = k_prime(
        &spec,
        CommRegime::Graph {
            max_degree: topology.max_degree(),
        },
    );
    run_epoch_protocol(instance, topology, kp, 1, horizon, key, ledger, opts)
}

/// Graph protocol: every epoch is split into `D = diameter` equal sub-epochs
/// with a neighbor exchange after each, so recommendations cross the whole
/// graph within one epoch; `K' = ceil(K/N) + K_G`.
pub fn run_lcc_ucb_graph(
    instance: &BanditInstance,
    topology: &Topology,
    horizon: u64,
    key: StreamKey,
    ledger: &mut CommLedger,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let spec = PartitionSpec::new(topology.node_count(), instance.arm_count())?;
    let kp = k_prime(
        &spec,
        CommRegime::Graph {
            max_degree: topology.max_degree(),
        },
    );
    let sub_epochs = topology.diameter().max(1);
    run_epoch_protocol(
        instance, topology, kp, sub_epochs, horizon, key, ledger, opts,
    )
}

#[allow(clippy::too_many_arguments)]
fn run_epoch_protocol(
    instance: &BanditInstance,
    topology: &Topology,
    k_prime: u32,
    sub_epochs_per_epoch: u32,
    horizon: u64,
    key: StreamKey,
    ledger: &mut CommLedger,
    opts: &RunOptions,
) -> Result<RunOutput> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let n = topology.node_count();
    let arm_count = instance.arm_count();
    let spec = PartitionSpec::new(n, arm_count)?;
    let initial_sets: Vec<Vec<ArmId>> = (1..=n)
        .map(|a| initial_arm_set(a, &spec))
        .collect::<Result<_>>()?;
    let gaps = gap_table(instance);
    let schedule = EpochSchedule::new(k_prime, horizon);

    let mut streams: Vec<RngStream> = (1..=n).map(|a| key.rewards(AgentId(a))).collect();
    let mut traces: Vec<TraceBuilder> = (0..n)
        .map(|_| TraceBuilder::new(opts.stride, horizon))
        .collect();
    let mut recommendations: Vec<Vec<ArmId>> = vec![Vec::new(); n as usize];
    let mut augmented_sets: Vec<Vec<Vec<ArmId>>> = vec![Vec::new(); n as usize];
    let mut pull_logs: Vec<Vec<ArmId>> = if opts.record_pulls {
        vec![Vec::with_capacity(horizon as usize); n as usize]
    } else {
        Vec::new()
    };

    let mut inboxes: Vec<Vec<ArmId>> = vec![Vec::new(); n as usize];
    let mut segments = Vec::new();
    let mut exchange_rounds = 0u32;
    let mut elapsed = 0u64;
    let mut epoch = 0u32;

    while elapsed < horizon {
        let nominal = schedule.nominal_duration(epoch);
        let mut sub = 1u32;
        while sub <= sub_epochs_per_epoch && elapsed < horizon {
            let duration = nominal.min(horizon - elapsed);
            let truncated = duration < nominal;

            let mut outgoing = Vec::with_capacity(n as usize);
            for i in 0..n as usize {
                let augmented = union_sorted(&initial_sets[i], &inboxes[i]);
                debug_assert!(augmented.len() as u32 <= k_prime);
                let run = ucb_run(&augmented, duration, instance, &mut streams[i])?;
                let trace = &mut traces[i];
                for arm in &run.pulls {
                    trace.record(gaps[arm.index()]);
                }
                if opts.record_pulls {
                    pull_logs[i].extend_from_slice(&run.pulls);
                }
                recommendations[i].push(run.recommended);
                augmented_sets[i].push(augmented);
                outgoing.push(run.recommended);
            }
            elapsed += duration;

            // Only a full (sub-)epoch ends with a round; the truncated tail
            // is the end of the run and its recommendation goes nowhere.
            let exchanged = !truncated;
            if exchanged {
                inboxes = exchange(topology, &outgoing, arm_count, ledger)?;
                exchange_rounds += 1;
            }
            segments.push(SegmentMeta {
                epoch,
                sub_epoch: sub,
                planned: nominal,
                actual: duration,
                exchanged,
            });
            sub += 1;
        }
        epoch += 1;
    }

    let executed_epochs = epoch;
    let full_epochs = (0..executed_epochs)
        .filter(|&j| {
            let subs: Vec<&SegmentMeta> = segments.iter().filter(|s| s.epoch == j).collect();
            subs.len() as u32 == sub_epochs_per_epoch && subs.iter().all(|s| !s.truncated())
        })
        .count() as u32;
    let meta = EpochMeta {
        k_prime,
        base_duration: schedule.base_duration,
        horizon,
        j_formula: num_epochs(horizon, k_prime),
        full_epochs,
        executed_epochs,
        sub_epochs_per_epoch,
        exchange_rounds,
        delta_tilde: (0..executed_epochs)
            .map(|j| schedule.delta_tilde(j))
            .collect(),
        segments,
    };

    let mut pull_iter = pull_logs.into_iter();
    let agents = traces
        .into_iter()
        .zip(recommendations)
        .zip(augmented_sets)
        .enumerate()
        .map(|(i, ((trace, recs), augs))| AgentOutput {
            agent: AgentId::from_index(i),
            trace: trace.finish(AgentId::from_index(i)),
            recommendations: recs,
            augmented_sets: augs,
            pulls: pull_iter.next(),
        })
        .collect();

    Ok(RunOutput {
        agents,
        epochs: Some(meta),
    })
}

impl SegmentMeta {
    fn truncated(&self) -> bool {
        self.actual < self.planned
    }
}

/// No-communication baseline: every agent independently runs one UCB over
/// all `K` arms for the whole horizon.
pub fn run_no_comm(
    instance: &BanditInstance,
    agent_count: u32,
    horizon: u64,
    key: StreamKey,
    opts: &RunOptions,
) -> Result<RunOutput> {
    if agent_count == 0 {
        return Err(Error::invalid("need at least one agent"));
    }
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let all_arms: Vec<ArmId> = (1..=instance.arm_count()).map(ArmId).collect();
    let gaps = gap_table(instance);
    let mut agents = Vec::with_capacity(agent_count as usize);
    for a in 1..=agent_count {
        let agent = AgentId(a);
        let mut stream = key.rewards(agent);
        let run = ucb_run(&all_arms, horizon, instance, &mut stream)?;
        let mut trace = TraceBuilder::new(opts.stride, horizon);
        for arm in &run.pulls {
            trace.record(gaps[arm.index()]);
        }
        agents.push(AgentOutput {
            agent,
            trace: trace.finish(agent),
            recommendations: Vec::new(),
            augmented_sets: Vec::new(),
            pulls: opts.record_pulls.then_some(run.pulls),
        });
    }
    Ok(RunOutput {
        agents,
        epochs: None,
    })
}

/// Full-communication baseline: each step every agent plays UCB on pooled
/// statistics (its own pulls plus everything its neighbors have reported)
/// and then reports its `(arm, reward)` to its neighbors. The ledger charges
/// one round per step at the sample-report payload size.
pub fn run_full_comm(
    instance: &BanditInstance,
    topology: &Topology,
    horizon: u64,
    key: StreamKey,
    ledger: &mut CommLedger,
    opts: &RunOptions,
) -> Result<RunOutput> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let n = topology.node_count() as usize;
    let k = instance.arm_count() as usize;
    let gaps = gap_table(instance);

    #[derive(Clone, Copy, Default)]
    struct Pooled {
        count: u64,
        sum: f64,
        mean: f64,
    }
    impl Pooled {
        #[inline]
        fn add(&mut self, reward: f64) {
            self.count += 1;
            self.sum += reward;
            self.mean = self.sum / self.count as f64;
        }
    }

    let mut pooled = vec![vec![Pooled::default(); k]; n];
    let mut totals = vec![0u64; n];
    let mut unpulled = vec![k as u32; n];
    let mut streams: Vec<RngStream> = (1..=n as u32).map(|a| key.rewards(AgentId(a))).collect();
    let mut traces: Vec<TraceBuilder> = (0..n)
        .map(|_| TraceBuilder::new(opts.stride, horizon))
        .collect();
    let mut pull_logs: Vec<Vec<ArmId>> = if opts.record_pulls {
        vec![Vec::with_capacity(horizon as usize); n]
    } else {
        Vec::new()
    };
    let mut choices: Vec<usize> = vec![0; n];
    let mut rewards: Vec<f64> = vec![0.0; n];

    for _t in 1..=horizon {
        // barrier 1: everyone decides on yesterday's knowledge
        for i in 0..n {
            let stats = &pooled[i];
            let choice = if unpulled[i] > 0 {
                stats.iter().position(|s| s.count == 0).expect("counted")
            } else {
                let two_ln_t = 2.0 * ((totals[i] + 1) as f64).ln();
                let mut best = 0usize;
                let mut best_index = f64::NEG_INFINITY;
                for (pos, s) in stats.iter().enumerate() {
                    let index = s.mean + (two_ln_t / s.count as f64).sqrt();
                    if index > best_index {
                        best_index = index;
                        best = pos;
                    }
                }
                best
            };
            choices[i] = choice;
        }
        // barrier 2: pulls from per-agent streams
        for i in 0..n {
            let arm = ArmId::from_index(choices[i]);
            rewards[i] = instance.pull(arm, &mut streams[i])?;
            traces[i].record(gaps[choices[i]]);
            if opts.record_pulls {
                pull_logs[i].push(arm);
            }
        }
        // barrier 3: apply observations in ascending sender order
        for sender in 0..n {
            let (arm, reward) = (choices[sender], rewards[sender]);
            if pooled[sender][arm].count == 0 {
                unpulled[sender] -= 1;
            }
            pooled[sender][arm].add(reward);
            totals[sender] += 1;
            for &nbr in topology.neighbors(AgentId::from_index(sender)) {
                let r = nbr.index();
                if pooled[r][arm].count == 0 {
                    unpulled[r] -= 1;
                }
                pooled[r][arm].add(reward);
                totals[r] += 1;
            }
        }
        ledger.record_round(topology);
    }

    let mut pull_iter = pull_logs.into_iter();
    let agents = traces
        .into_iter()
        .enumerate()
        .map(|(i, trace)| AgentOutput {
            agent: AgentId::from_index(i),
            trace: trace.finish(AgentId::from_index(i)),
            recommendations: Vec::new(),
            augmented_sets: Vec::new(),
            pulls: pull_iter.next(),
        })
        .collect();
    Ok(RunOutput {
        agents,
        epochs: None,
    })
}

fn gap_table(instance: &BanditInstance) -> Vec<f64> {
    (1..=instance.arm_count())
        .map(|a| instance.gap(ArmId(a)).expect("arm in range"))
        .collect()
}

/// Sorted, duplicate-free union of an initial set and an inbox.
fn union_sorted(initial: &[ArmId], inbox: &[ArmId]) -> Vec<ArmId> {
    let mut set: Vec<ArmId> = Vec::with_capacity(initial.len() + inbox.len());
    set.extend_from_slice(initial);
    set.extend_from_slice(inbox);
    set.sort_unstable();
    set.dedup();
    set
}
