use std::io::{self, Write};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::simulation::{Collision, Simulation};
use super::{replica_rng, sample_initial_with};
use crate::criteria::ThresholdModel;
use crate::error::{Error, Result};
use crate::graph::SpatialGraph;

pub const DEFAULT_EVENT_CAP: u64 = 100_000_000;
pub const TRAJECTORY_CSV_HEADER: &str = "time,mean_xi,frozen_fraction,flips";
pub const COLLISIONS_CSV_HEADER: &str = "s_minus,s_plus,s";

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryOptions {
    pub horizon: f64,
    /// Number of equal sampling intervals on `[0, horizon]`.
    pub samples: usize,
    pub record_collisions: bool,
}

impl TrajectoryOptions {
    pub fn new(horizon: f64) -> Self {
        TrajectoryOptions {
            horizon,
            samples: 100,
            record_collisions: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("at least one sampling interval is needed".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub time: f64,
    /// Mean pile size over spatial edges.
    pub mean_xi: f64,
    pub frozen_fraction: f64,
    /// Cumulative flips over all sites.
    pub flips: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryStats {
    pub flips_per_site: Vec<u64>,
    pub series: Vec<SeriesPoint>,
    pub collision_samples: Vec<Collision>,
    pub final_time: f64,
    pub events: u64,
    /// Sites that never flipped during the second half of the run.
    pub quiet_fraction: f64,
}

impl TrajectoryStats {
    pub fn last(&self) -> &SeriesPoint {
        self.series.last().expect("series has at least the two end points")
    }

    /// The sample closest to half the horizon.
    pub fn midpoint(&self) -> &SeriesPoint {
        &self.series[(self.series.len() - 1) / 2]
    }

    /// Relative change of the frozen fraction over the second half.
    pub fn frozen_drift(&self) -> f64 {
        let (mid, end) = (self.midpoint().frozen_fraction, self.last().frozen_fraction);
        if mid == 0.0 {
            if end == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (end - mid).abs() / mid
        }
    }
}

pub fn run_trajectory(m: &ThresholdModel, spatial: &SpatialGraph, horizon: f64, seed: u64) -> Result<TrajectoryStats> {
    run_trajectory_with(m, spatial, &TrajectoryOptions::new(horizon), replica_rng(seed, 0))
}

pub fn run_trajectory_with(
    m: &ThresholdModel,
    spatial: &SpatialGraph,
    opts: &TrajectoryOptions,
    mut rng: ChaCha8Rng,
) -> Result<TrajectoryStats> {
    opts.validate()?;
    let start = sample_initial_with(m, spatial, &mut rng);
    let mut sim = Simulation::new(m, spatial, &start, rng);
    let edges = spatial.edge_count() as f64;
    let sample_time = |k: usize| opts.horizon * k as f64 / opts.samples as f64;
    let half = opts.horizon / 2.0;

    let mut series = Vec::with_capacity(opts.samples + 1);
    let mut collisions = Vec::new();
    let mut half_flips: Option<Vec<u64>> = None;
    let mut next = 0;
    loop {
        let t = if sim.is_absorbed() {
            f64::INFINITY
        } else {
            sim.peek_next_time()
        };
        if half_flips.is_none() && half < t {
            half_flips = Some(sim.flips().to_vec());
        }
        while next <= opts.samples && sample_time(next) < t {
            series.push(SeriesPoint {
                time: sample_time(next),
                mean_xi: sim.pile_sum() as f64 / edges,
                frozen_fraction: sim.frozen_count() as f64 / edges,
                flips: sim.total_flips(),
            });
            next += 1;
        }
        if t > opts.horizon {
            break;
        }
        let ev = sim.fire_at(t);
        if opts.record_collisions {
            collisions.extend(ev.collision);
        }
    }

    let half_flips = half_flips.expect("half horizon passed");
    let quiet = sim
        .flips()
        .iter()
        .zip(&half_flips)
        .filter(|(end, mid)| end == mid)
        .count();
    Ok(TrajectoryStats {
        flips_per_site: sim.flips().to_vec(),
        series,
        collision_samples: collisions,
        final_time: opts.horizon,
        events: sim.events(),
        quiet_fraction: quiet as f64 / spatial.vertex_count() as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsorptionOutcome {
    pub absorbed: bool,
    pub consensus: bool,
    pub events_used: u64,
    pub final_opinions: Vec<usize>,
}

pub fn run_to_absorption(m: &ThresholdModel, spatial: &SpatialGraph, seed: u64, event_cap: u64) -> AbsorptionOutcome {
    run_to_absorption_with(m, spatial, event_cap, replica_rng(seed, 0))
}

pub fn run_to_absorption_with(
    m: &ThresholdModel,
    spatial: &SpatialGraph,
    event_cap: u64,
    mut rng: ChaCha8Rng,
) -> AbsorptionOutcome {
    let start = sample_initial_with(m, spatial, &mut rng);
    absorb_from(m, spatial, &start, event_cap, rng)
}

pub(crate) fn absorb_from(
    m: &ThresholdModel,
    spatial: &SpatialGraph,
    start: &super::Configuration,
    event_cap: u64,
    rng: ChaCha8Rng,
) -> AbsorptionOutcome {
    let mut sim = Simulation::new(m, spatial, start, rng);
    while !sim.is_absorbed() && sim.events() < event_cap {
        sim.step();
    }
    AbsorptionOutcome {
        absorbed: sim.is_absorbed(),
        consensus: sim.is_consensus(),
        events_used: sim.events(),
        final_opinions: sim.opinions().to_vec(),
    }
}

pub fn write_trajectory_csv<W: Write>(stats: &TrajectoryStats, mut out: W) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for p in &stats.series {
        writeln!(out, "{},{},{},{}", p.time, p.mean_xi, p.frozen_fraction, p.flips)?;
    }
    out.flush()
}

pub fn write_collisions_csv<W: Write>(samples: &[Collision], mut out: W) -> io::Result<()> {
    writeln!(out, "{COLLISIONS_CSV_HEADER}")?;
    for c in samples {
        writeln!(out, "{},{},{}", c.s_minus, c.s_plus, c.s)?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Configuration;
    use crate::graph::Family;

    fn model(f: Family, tau: usize) -> ThresholdModel {
        ThresholdModel::uniform(f.build().unwrap(), tau)
    }

    #[test]
    fn constant_start_is_absorbed_immediately() {
        let m = model(Family::Cube, 1);
        let ring = SpatialGraph::ring(10).unwrap();
        let start = Configuration::new(ring.clone(), vec![3; 10], m.graph()).unwrap();
        let out = absorb_from(&m, &ring, &start, 10, replica_rng(0, 0));
        assert!(out.absorbed && out.consensus);
        assert_eq!(out.events_used, 0);
    }

    #[test]
    fn far_pair_is_absorbed_without_consensus() {
        let m = model(Family::Cube, 1);
        let k2 = SpatialGraph::complete(2).unwrap();
        let start = Configuration::new(k2.clone(), vec![0, 7], m.graph()).unwrap();
        let out = absorb_from(&m, &k2, &start, 10, replica_rng(0, 0));
        assert!(out.absorbed && !out.consensus);
    }

    #[test]
    fn event_cap_reports_non_absorption() {
        let m = model(Family::Tetrahedron, 1);
        let ring = SpatialGraph::ring(200).unwrap();
        let out = run_to_absorption(&m, &ring, 1, 50);
        assert!(!out.absorbed);
        assert_eq!(out.events_used, 50);
    }

    #[test]
    fn trajectory_shape_and_csv() {
        let m = model(Family::Cycle { vertices: 8 }, 1);
        let ring = SpatialGraph::ring(100).unwrap();
        let stats = run_trajectory(&m, &ring, 20.0, 3).unwrap();
        assert_eq!(stats.series.len(), 101);
        assert_eq!(stats.series[0].time, 0.0);
        assert_eq!(stats.last().time, 20.0);
        assert_eq!(stats.flips_per_site.iter().sum::<u64>(), stats.last().flips);
        assert!(stats.collision_samples.iter().all(|c| c.s_minus == 1));
        let mut buf = Vec::new();
        write_trajectory_csv(&stats, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("time,mean_xi,frozen_fraction,flips\n0,"));
        assert_eq!(text.lines().count(), 102);
        let again = run_trajectory(&m, &ring, 20.0, 3).unwrap();
        assert_eq!(again, stats);
    }

    #[test]
    fn rejects_bad_horizon() {
        let m = model(Family::Cube, 1);
        let ring = SpatialGraph::ring(10).unwrap();
        assert!(run_trajectory(&m, &ring, 0.0, 1).is_err());
        assert!(run_trajectory(&m, &ring, f64::NAN, 1).is_err());
    }
}
