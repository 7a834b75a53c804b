//! Closed-form protocol arithmetic: arm partitions, per-agent arm budget K',
//! doubling epoch durations, and epoch counts.
//!
//! Eight epochs of base duration `T0 = K'(K'+1)` doubled each time cover a
//! horizon; the last scheduled epoch is truncated so durations sum to the
//! horizon exactly. The closed-form epoch count `num_epochs` equals the
//! number of *full* (untruncated) epochs; `SegmentIter` additionally yields
//! the truncated tail when the horizon is not an exact epoch boundary.

use crate::error::{Error, Result};
use crate::ids::ArmId;

/// Problem size: `N` agents sharing `K` arms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    pub agents: u32,
    pub arms: u32,
}

impl PartitionSpec {
    pub fn new(agents: u32, arms: u32) -> Result<Self> {
        if agents == 0 || arms == 0 {
            return Err(Error::invalid("need at least one agent and one arm"));
        }
        Ok(PartitionSpec { agents, arms })
    }

    /// `ceil(K / N)` arms per agent before augmentation.
    pub fn arms_per_agent(&self) -> u32 {
        self.arms.div_ceil(self.agents)
    }
}

/// Communication regime determining the per-agent arm budget K'.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommRegime {
    /// Everyone hears everyone: K' = ceil(K/N) + N - 1.
    Complete,
    /// Neighbor-only exchange: K' = ceil(K/N) + K_G.
    Graph { max_degree: u32 },
}

/// Per-agent arm budget for the given regime.
pub fn k_prime(spec: &PartitionSpec, regime: CommRegime) -> u32 {
    let base = spec.arms_per_agent();
    match regime {
        CommRegime::Complete => base + spec.agents - 1,
        CommRegime::Graph { max_degree } => base + max_degree,
    }
}

/// Agent `n`'s initial arm set: `ceil(K/N)` consecutive (mod K) indices
/// starting at `((n-1) ceil(K/N) mod K) + 1`, in generation order with
/// wraparound duplicates collapsed.
pub fn initial_arm_set(agent: u32, spec: &PartitionSpec) -> Result<Vec<ArmId>> {
    if agent == 0 || agent > spec.agents {
        return Err(Error::invalid(format!(
            "agent {agent} out of range 1..={}",
            spec.agents
        )));
    }
    let per_agent = spec.arms_per_agent() as u64;
    let k = spec.arms as u64;
    let start = (agent as u64 - 1) * per_agent;
    let mut set = Vec::with_capacity(per_agent as usize);
    for i in 0..per_agent {
        let arm = ArmId((((start + i) % k) + 1) as u32);
        if !set.contains(&arm) {
            set.push(arm);
        }
    }
    Ok(set)
}

/// Doubling epoch schedule for one horizon.
#[derive(Clone, Copy, Debug)]
pub struct EpochSchedule {
    pub k_prime: u32,
    pub horizon: u64,
    /// T0 = K'(K'+1), the duration of epoch 0.
    pub base_duration: u64,
}

impl EpochSchedule {
    pub fn new(k_prime: u32, horizon: u64) -> Self {
        let kp = k_prime as u64;
        EpochSchedule {
            k_prime,
            horizon,
            base_duration: kp * (kp + 1),
        }
    }

    /// Nominal (untruncated) duration of epoch `j`: `T0 * 2^j`, saturating.
    pub fn nominal_duration(&self, epoch: u32) -> u64 {
        match 1u64.checked_shl(epoch) {
            Some(mult) => self.base_duration.saturating_mul(mult),
            None => u64::MAX,
        }
    }

    /// Actual duration of epoch `j` under the schedule: the nominal duration
    /// clamped by the horizon remaining after epochs `0..j`.
    pub fn epoch_duration(&self, epoch: u32) -> u64 {
        let consumed_before = self.consumed_through(epoch);
        let remaining = self.horizon.saturating_sub(consumed_before);
        remaining.min(self.nominal_duration(epoch))
    }

    /// Steps consumed by untruncated epochs `0..j`: `T0 * (2^j - 1)`,
    /// saturating.
    fn consumed_through(&self, epoch: u32) -> u64 {
        match 1u64.checked_shl(epoch) {
            Some(mult) => self.base_duration.saturating_mul(mult - 1),
            None => u64::MAX,
        }
    }

    /// Epochs actually run, in order; the final one may be truncated.
    pub fn epochs(&self) -> SegmentIter {
        SegmentIter {
            schedule: *self,
            next_epoch: 0,
            consumed: 0,
        }
    }

    /// Count of epochs the iterator yields (full epochs plus a truncated
    /// tail when the horizon is not an exact boundary).
    pub fn executed_epochs(&self) -> u32 {
        self.epochs().count() as u32
    }

    /// Closed-form count of full epochs; see [`num_epochs`].
    pub fn full_epochs(&self) -> u32 {
        num_epochs(self.horizon, self.k_prime)
    }

    /// Diagnostic recommendation-quality scale for epoch `j`, using the
    /// epoch's nominal duration.
    pub fn delta_tilde(&self, epoch: u32) -> f64 {
        delta_tilde(
            self.k_prime,
            self.nominal_duration(epoch) as f64,
            self.horizon as f64,
        )
    }
}

/// One scheduled epoch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Epoch {
    pub index: u32,
    pub duration: u64,
    /// True when the duration was clamped below `T0 * 2^index`.
    pub truncated: bool,
}

pub struct SegmentIter {
    schedule: EpochSchedule,
    next_epoch: u32,
    consumed: u64,
}

impl Iterator for SegmentIter {
    type Item = Epoch;

    fn next(&mut self) -> Option<Epoch> {
        if self.consumed >= self.schedule.horizon {
            return None;
        }
        let nominal = self.schedule.nominal_duration(self.next_epoch);
        let remaining = self.schedule.horizon - self.consumed;
        let duration = remaining.min(nominal);
        let epoch = Epoch {
            index: self.next_epoch,
            duration,
            truncated: duration < nominal,
        };
        self.consumed += duration;
        self.next_epoch += 1;
        Some(epoch)
    }
}

/// Closed-form epoch count `J = floor(log2(T / (K'(K'+1)) + 1))`, evaluated
/// in integer arithmetic as the largest `j` with `T0 (2^j - 1) <= T`.
///
/// `J` counts the epochs that run their full nominal duration; when the
/// horizon is not an exact epoch boundary one extra truncated epoch runs
/// (in particular, `T < T0` gives `J = 0` with a single truncated epoch).
pub fn num_epochs(horizon: u64, k_prime: u32) -> u32 {
    let kp = k_prime as u64;
    let t0 = kp * (kp + 1);
    let mut j = 0u32;
    loop {
        let consumed = match 1u64.checked_shl(j + 1) {
            Some(mult) => t0.saturating_mul(mult - 1),
            None => u64::MAX,
        };
        if consumed <= horizon {
            j += 1;
        } else {
            return j;
        }
    }
}

/// `sqrt(16 K' ln(T) / T_j)`: how far the most-played arm of an epoch of
/// duration `T_j` can lag the best arm, with high probability. Reported per
/// epoch in run metadata; not used by agents.
pub fn delta_tilde(k_prime: u32, epoch_duration: f64, horizon: f64) -> f64 {
    (16.0 * k_prime as f64 * horizon.ln() / epoch_duration).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn arm(i: u32) -> ArmId {
        ArmId(i)
    }

    #[test]
    fn initial_arm_set_examples() {
        let spec = PartitionSpec::new(10, 100).unwrap();
        let s1 = initial_arm_set(1, &spec).unwrap();
        assert_eq!(s1, (1..=10).map(arm).collect::<Vec<_>>());

        let spec = PartitionSpec::new(3, 7).unwrap();
        assert_eq!(
            initial_arm_set(3, &spec).unwrap(),
            vec![arm(7), arm(1), arm(2)]
        );

        let spec = PartitionSpec::new(4, 4).unwrap();
        assert_eq!(initial_arm_set(4, &spec).unwrap(), vec![arm(4)]);

        assert!(initial_arm_set(0, &spec).is_err());
        assert!(initial_arm_set(5, &spec).is_err());
    }

    #[test]
    fn k_prime_examples() {
        let spec = PartitionSpec::new(10, 100).unwrap();
        assert_eq!(k_prime(&spec, CommRegime::Complete), 19);

        let spec = PartitionSpec::new(100, 250).unwrap();
        assert_eq!(k_prime(&spec, CommRegime::Graph { max_degree: 14 }), 17);

        let spec = PartitionSpec::new(1, 42).unwrap();
        assert_eq!(k_prime(&spec, CommRegime::Complete), 42);
    }

    #[test]
    fn epoch_duration_examples() {
        let ample = EpochSchedule::new(19, u64::MAX);
        assert_eq!(ample.epoch_duration(0), 380);
        assert_eq!(ample.epoch_duration(3), 3040);

        let tight = EpochSchedule::new(19, 100);
        assert_eq!(tight.epoch_duration(0), 100);
    }

    #[test]
    fn num_epochs_examples() {
        assert_eq!(num_epochs(100_000, 19), 8);
        assert_eq!(num_epochs(380, 19), 1);
        // Below the base duration the formula says zero, yet one truncated
        // epoch runs.
        assert_eq!(num_epochs(379, 19), 0);
        let sched = EpochSchedule::new(19, 379);
        let eps: Vec<Epoch> = sched.epochs().collect();
        assert_eq!(eps.len(), 1);
        assert!(eps[0].truncated);
        assert_eq!(eps[0].duration, 379);
    }

    #[test]
    fn delta_tilde_examples() {
        assert_relative_eq!(
            delta_tilde(19, 380.0, 1e5),
            3.034854258770293,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            delta_tilde(1, 16.0, std::f64::consts::E),
            1.0,
            max_relative = 1e-15
        );
        // quadrupling the duration halves the value
        let d1 = delta_tilde(7, 100.0, 5e4);
        let d2 = delta_tilde(7, 400.0, 5e4);
        assert_relative_eq!(d1 / d2, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn schedule_delta_tilde_uses_nominal_durations() {
        let sched = EpochSchedule::new(19, 100_000);
        assert_relative_eq!(
            sched.delta_tilde(0),
            3.034854258770293,
            max_relative = 1e-15
        );
    }

    proptest! {
        #[test]
        fn partition_covers_all_arms(agents in 1u32..=64, extra in 0u32..=400) {
            let arms = agents + extra;
            let spec = PartitionSpec::new(agents, arms).unwrap();
            let mut seen = vec![false; arms as usize];
            for n in 1..=agents {
                let set = initial_arm_set(n, &spec).unwrap();
                prop_assert!(set.len() as u32 <= spec.arms_per_agent());
                for a in set {
                    seen[a.index()] = true;
                }
            }
            prop_assert!(seen.iter().all(|&s| s));
        }

        #[test]
        fn schedule_conserves_horizon(k_prime in 1u32..=64, horizon in 1u64..=10_000_000) {
            let sched = EpochSchedule::new(k_prime, horizon);
            let mut total = 0u64;
            let mut last_full: Option<u64> = None;
            for ep in sched.epochs() {
                total += ep.duration;
                if !ep.truncated {
                    if let Some(prev) = last_full {
                        prop_assert_eq!(ep.duration, prev * 2);
                    }
                    last_full = Some(ep.duration);
                }
            }
            prop_assert_eq!(total, horizon);
        }

        #[test]
        fn full_epoch_count_matches_formula(k_prime in 1u32..=64, horizon in 1u64..=10_000_000) {
            let sched = EpochSchedule::new(k_prime, horizon);
            let full = sched.epochs().filter(|e| !e.truncated).count() as u32;
            if horizon >= sched.base_duration {
                prop_assert_eq!(full, num_epochs(horizon, k_prime));
            }
            // the tail adds at most one epoch
            let executed = sched.executed_epochs();
            prop_assert!(executed == full || executed == full + 1);
        }

        #[test]
        fn num_epochs_matches_float_formula(k_prime in 1u32..=64, horizon in 1u64..=1_000_000_000) {
            let t0 = (k_prime as f64) * (k_prime as f64 + 1.0);
            let float_j = ((horizon as f64) / t0 + 1.0).log2().floor() as u32;
            let int_j = num_epochs(horizon, k_prime);
            // float log2 can be off by one ulp right at a boundary
            prop_assert!(int_j == float_j || int_j == float_j + 1 || float_j == int_j + 1);
        }
    }
}
