//! Monte Carlo experiments on seeded colorings.
//!
//! Every trial draws its coloring from `derive_seed(seed, tag, trial)`, so a
//! run is a pure function of its parameters. Trials run on the current rayon
//! pool and are aggregated in trial order with integer counts, which keeps
//! results identical for any number of threads.

mod annulus;
mod faces;
mod loops;
mod pc;
mod prism;
mod scaling;
mod scan;

pub use annulus::{annulus_crossing, annulus_trial, AnnulusMode};
pub use faces::{face_cluster_histogram, face_cluster_size, FaceKind};
pub use loops::{exponential_tail_fit, loop_length_histogram, TailFit};
pub use pc::{
    crossing_fraction, crossing_threshold, estimate_pc, percolation_seed, PcResult, BISECTION_STEPS,
};
pub use prism::{prism_run, ChainSummary, PrismReport};
pub use scaling::{fit_loglog, scaling_exponent, squared_displacements, ScalingFit, ScalingPoint};
pub use scan::{phase_scan, scan_point_seed, PhaseMap, PhasePoint};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Monte Carlo estimate with its parameters.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: f64,
    pub trials: u64,
    pub seed: u64,
    pub params: serde_json::Value,
}

impl Estimate {
    /// Success frequency with its binomial standard error.
    pub fn binomial(successes: u64, trials: u64, seed: u64, params: serde_json::Value) -> Estimate {
        let f = successes as f64 / trials as f64;
        Estimate {
            value: f,
            standard_error: (f * (1.0 - f) / trials as f64).sqrt(),
            trials,
            seed,
            params,
        }
    }
}

/// Counts of integer observations, with samples that reached the cap
/// counted separately.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: BTreeMap<u64, u64>,
    pub cap: u64,
    pub truncated_mass: u64,
}

impl Histogram {
    pub fn new(cap: u64) -> Histogram {
        Histogram {
            bins: BTreeMap::new(),
            cap,
            truncated_mass: 0,
        }
    }

    pub fn record(&mut self, value: u64) {
        *self.bins.entry(value).or_insert(0) += 1;
    }

    pub fn record_truncated(&mut self) {
        self.truncated_mass += 1;
    }

    /// Number of samples, truncated ones included.
    pub fn total(&self) -> u64 {
        self.truncated_mass + self.bins.values().sum::<u64>()
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&k, &v) in &other.bins {
            *self.bins.entry(k).or_insert(0) += v;
        }
        self.truncated_mass += other.truncated_mass;
    }

    pub fn mean_untruncated(&self) -> Option<f64> {
        let n: u64 = self.bins.values().sum();
        (n > 0).then(|| {
            self.bins
                .iter()
                .map(|(&k, &v)| k as f64 * v as f64)
                .sum::<f64>()
                / n as f64
        })
    }

    /// `bucket,count` lines with a header. Truncated samples are not listed.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bucket,count\n");
        for (k, v) in &self.bins {
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

pub(crate) fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(())
}

/// Runs `f` for every trial index on the rayon pool, results in trial order.
pub(crate) fn run_trials<T, F>(trials: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

/// Histogram of per-trial observations (`None` = truncated), merged with
/// integer counts so the result does not depend on scheduling.
pub(crate) fn histogram_trials<F>(trials: u64, cap: u64, f: F) -> Result<Histogram>
where
    F: Fn(u64) -> Result<Option<u64>> + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .try_fold(
            || Histogram::new(cap),
            |mut h, t| {
                match f(t)? {
                    Some(v) => h.record(v),
                    None => h.record_truncated(),
                }
                Ok(h)
            },
        )
        .try_reduce(
            || Histogram::new(cap),
            |mut a, b| {
                a.merge(&b);
                Ok(a)
            },
        )
}
