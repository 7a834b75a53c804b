//! Pointwise aggregation of regret traces across replications.

use crate::agents::RegretTrace;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Per-sample median and empirical 95% band (2.5th/97.5th percentiles with
/// linear interpolation between order statistics) across replications.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub t: Vec<u64>,
    pub median: Vec<f64>,
    pub lo95: Vec<f64>,
    pub hi95: Vec<f64>,
}

impl AggregateStats {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn final_median(&self) -> f64 {
        *self.median.last().unwrap_or(&0.0)
    }

    /// Median at sampled time `t`, if on the grid.
    pub fn median_at(&self, t: u64) -> Option<f64> {
        self.t.binary_search(&t).ok().map(|i| self.median[i])
    }
}

/// Aggregates one trace per replication; all traces must share the sampling
/// grid.
pub fn aggregate(traces: &[&RegretTrace]) -> Result<AggregateStats> {
    let first = traces.first().ok_or(Error::MismatchedGrids)?;
    let grid: Vec<u64> = first.samples.iter().map(|&(t, _)| t).collect();
    for trace in traces {
        if trace.samples.len() != grid.len()
            || trace.samples.iter().zip(&grid).any(|(&(t, _), &g)| t != g)
        {
            return Err(Error::MismatchedGrids);
        }
    }

    let mut median = Vec::with_capacity(grid.len());
    let mut lo95 = Vec::with_capacity(grid.len());
    let mut hi95 = Vec::with_capacity(grid.len());
    let mut column = vec![0.0f64; traces.len()];
    for point in 0..grid.len() {
        for (row, trace) in traces.iter().enumerate() {
            column[row] = trace.samples[point].1;
        }
        column.sort_by(|a, b| a.partial_cmp(b).expect("regret values are finite"));
        median.push(percentile_sorted(&column, 50.0));
        lo95.push(percentile_sorted(&column, 2.5));
        hi95.push(percentile_sorted(&column, 97.5));
    }
    Ok(AggregateStats {
        t: grid,
        median,
        lo95,
        hi95,
    })
}

/// Percentile of an ascending slice by linear interpolation between order
/// statistics (rank `p/100 * (n-1)`).
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=100.0).contains(&p));
    if sorted.len() == 1 {
        return sorted[0];
    }
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        return sorted[lo];
    }
    let frac = rank - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Median of an unsorted slice.
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    percentile_sorted(&sorted, 50.0)
}
