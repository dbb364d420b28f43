//! Monte Carlo estimators and the tests that compare them with exact values.
//!
//! Replicas run in parallel, each on its own stream
//! [`replica_rng`](crate::dynamics::replica_rng)`(seed, index)`, and are
//! reduced in index order, so results do not depend on thread scheduling.

mod chi_square;

pub use chi_square::{collision_chi_square, outcomes_for, ChiSquareResult};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{BirthDeathSpec, ThresholdModel};
use crate::dynamics::{
    replica_rng, run_to_absorption_with, run_trajectory_with, sample_initial_with, TrajectoryOptions, DEFAULT_EVENT_CAP,
};
use crate::error::{Error, Result};
use crate::graph::SpatialGraph;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replica_count)`.
    pub standard_error: f64,
    pub replica_count: usize,
    pub seed: u64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InsufficientSamples(format!(
                "{n} replicas; at least 2 are needed"
            )));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Ok(Estimate {
            mean,
            standard_error: (var / n as f64).sqrt(),
            replica_count: n,
            seed,
        })
    }

    /// `|mean - target| <= k * standard_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.standard_error
    }
}

/// Runs `f` once per replica on its own stream; output in replica order.
pub fn par_replicas<T, F>(replicas: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(ChaCha8Rng) -> T + Sync,
{
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| f(replica_rng(seed, r)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsensusEstimate {
    /// Consensus frequency over the replicas that absorbed.
    pub estimate: Estimate,
    /// Replicas that hit the event cap first.
    pub censored: usize,
    /// Share of sites holding a `tau`-center opinion at absorption.
    pub center_share: Estimate,
}

pub fn estimate_consensus_probability(
    m: &ThresholdModel,
    spatial: &SpatialGraph,
    replicas: usize,
    seed: u64,
) -> Result<ConsensusEstimate> {
    estimate_consensus_probability_with_cap(m, spatial, replicas, seed, DEFAULT_EVENT_CAP)
}

pub fn estimate_consensus_probability_with_cap(
    m: &ThresholdModel,
    spatial: &SpatialGraph,
    replicas: usize,
    seed: u64,
    event_cap: u64,
) -> Result<ConsensusEstimate> {
    if replicas < 2 {
        return Err(Error::InsufficientSamples(format!(
            "{replicas} replicas; at least 2 are needed"
        )));
    }
    let mut in_center = vec![false; m.graph().vertex_count()];
    for j in m.graph().tau_center(m.tau()) {
        in_center[j] = true;
    }
    let sites = spatial.vertex_count() as f64;
    let outcomes = par_replicas(replicas, seed, |rng| run_to_absorption_with(m, spatial, event_cap, rng));
    let absorbed: Vec<_> = outcomes.iter().filter(|o| o.absorbed).collect();
    let hits: Vec<f64> = absorbed.iter().map(|o| o.consensus as u8 as f64).collect();
    let shares: Vec<f64> = absorbed
        .iter()
        .map(|o| o.final_opinions.iter().filter(|&&j| in_center[j]).count() as f64 / sites)
        .collect();
    Ok(ConsensusEstimate {
        estimate: Estimate::from_samples(&hits, seed)?,
        censored: replicas - absorbed.len(),
        center_share: Estimate::from_samples(&shares, seed)?,
    })
}

/// Monte Carlo of the hitting time of state 1 from `k`.
pub fn bd_simulate(bd: &BirthDeathSpec, k: usize, replicas: usize, seed: u64) -> Result<Estimate> {
    let m = bd.states();
    if k == 0 || k > m {
        return Err(Error::StateOutOfRange { state: k, states: m });
    }
    if let Some(n) = (2..=m).find(|&n| bd.p(n).is_zero()) {
        return Err(Error::CriterionUnavailable(n));
    }
    let to_f64 = |r: &crate::criteria::Rational| r.to_f64().expect("probabilities are finite");
    let p: Vec<f64> = (0..=m).map(|n| if n < 2 { 0.0 } else { to_f64(bd.p(n)) }).collect();
    let q: Vec<f64> = (0..=m).map(|n| if n < 2 { 0.0 } else { to_f64(bd.q(n)) }).collect();
    let times = par_replicas(replicas, seed, |mut rng| {
        let (mut n, mut steps) = (k, 0u64);
        while n > 1 {
            let u: f64 = rng.random();
            if u < p[n] {
                n -= 1;
            } else if u < p[n] + q[n] {
                n += 1;
            }
            steps += 1;
        }
        steps as f64
    });
    Estimate::from_samples(&times, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeTypeCount {
    pub i: usize,
    pub j: usize,
    pub count: u64,
    pub expected: f64,
    pub z: f64,
}

/// Counts of `i -> j` edges (`i != j`) on a segment of `n` edges drawn from
/// the product measure, with z-scores.
///
/// Neighbouring indicators of the same ordered type `i != j` cannot both
/// fire, so the variance is `n p (1 - p) - 2 (n - 1) p^2` with
/// `p = rho_i rho_j`.
pub fn edge_type_frequencies(m: &ThresholdModel, n: usize, seed: u64) -> Result<Vec<EdgeTypeCount>> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!("segment length {n} is below 100")));
    }
    let f = m.graph().vertex_count();
    let segment = SpatialGraph::from_edges(n + 1, &(0..n).map(|x| (x, x + 1)).collect::<Vec<_>>())?;
    let c = sample_initial_with(m, &segment, &mut replica_rng(seed, 0));
    let mut counts = vec![0u64; f * f];
    for w in c.opinions().windows(2) {
        counts[w[0] * f + w[1]] += 1;
    }
    let rho = m.densities_f64();
    let nf = n as f64;
    let mut out = Vec::with_capacity(f * (f - 1));
    for i in 0..f {
        for j in (0..f).filter(|&j| j != i) {
            let p = rho[i] * rho[j];
            let expected = nf * p;
            let var = nf * p * (1.0 - p) - 2.0 * (nf - 1.0) * p * p;
            let count = counts[i * f + j];
            out.push(EdgeTypeCount {
                i,
                j,
                count,
                expected,
                z: (count as f64 - expected) / var.sqrt(),
            });
        }
    }
    Ok(out)
}

/// Replica-averaged end-of-run diagnostics on a ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeSummary {
    pub replicas: usize,
    pub horizon: f64,
    pub mean_xi_end: f64,
    pub quiet_fraction: f64,
    pub frozen_mid: f64,
    pub frozen_end: f64,
    /// `|frozen_end - frozen_mid| / frozen_mid`.
    pub frozen_drift: f64,
}

pub fn regime_diagnostics(
    m: &ThresholdModel,
    spatial: &SpatialGraph,
    horizon: f64,
    replicas: usize,
    seed: u64,
) -> Result<RegimeSummary> {
    if replicas == 0 {
        return Err(Error::InsufficientSamples("no replicas".into()));
    }
    let opts = TrajectoryOptions {
        record_collisions: false,
        ..TrajectoryOptions::new(horizon)
    };
    let runs = par_replicas(replicas, seed, |rng| run_trajectory_with(m, spatial, &opts, rng))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let avg = |f: &dyn Fn(&crate::dynamics::TrajectoryStats) -> f64| runs.iter().map(f).sum::<f64>() / replicas as f64;
    let frozen_mid = avg(&|s| s.midpoint().frozen_fraction);
    let frozen_end = avg(&|s| s.last().frozen_fraction);
    Ok(RegimeSummary {
        replicas,
        horizon,
        mean_xi_end: avg(&|s| s.last().mean_xi),
        quiet_fraction: avg(&|s| s.quiet_fraction),
        frozen_mid,
        frozen_end,
        frozen_drift: if frozen_mid > 0.0 {
            (frozen_end - frozen_mid).abs() / frozen_mid
        } else {
            f64::INFINITY
        },
    })
}
