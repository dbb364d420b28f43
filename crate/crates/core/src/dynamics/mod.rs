//! Event-driven simulation of the threshold voter model.
//!
//! Every ordered pair of spatial neighbours `y -> x` fires at rate one; on
//! firing, `x` adopts the opinion of `y` when the two opinions are at
//! distance at most `tau`. Rather than keeping `2|E|` clocks we draw the
//! next global event from `Exp(2|E|)` and pick the arrow uniformly.
//!
//! On a ring `Z_L` the ring stands in for the integers, so the statistics
//! collected there are diagnostics only.

mod simulation;
mod trajectory;

pub use simulation::{Collision, Event, Simulation};
pub use trajectory::{
    run_to_absorption, run_to_absorption_with, run_trajectory, run_trajectory_with, write_collisions_csv,
    write_trajectory_csv, AbsorptionOutcome, SeriesPoint, TrajectoryOptions, TrajectoryStats, COLLISIONS_CSV_HEADER,
    DEFAULT_EVENT_CAP, TRAJECTORY_CSV_HEADER,
};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::ThresholdModel;
use crate::error::{Error, Result};
use crate::graph::{OpinionGraph, SpatialGraph};

/// The random stream for replica `replica` of a run seeded with `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// Opinions indexed by spatial vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    spatial: SpatialGraph,
    opinions: Vec<usize>,
}

impl Configuration {
    pub fn new(spatial: SpatialGraph, opinions: Vec<usize>, graph: &OpinionGraph) -> Result<Self> {
        if opinions.len() != spatial.vertex_count() {
            return Err(Error::InvalidConfig(format!(
                "{} opinions for {} sites",
                opinions.len(),
                spatial.vertex_count()
            )));
        }
        if let Some(&bad) = opinions.iter().find(|&&o| o >= graph.vertex_count()) {
            return Err(Error::InvalidConfig(format!(
                "opinion {bad} is not a vertex of the opinion graph"
            )));
        }
        Ok(Configuration { spatial, opinions })
    }

    pub fn spatial(&self) -> &SpatialGraph {
        &self.spatial
    }

    pub fn opinions(&self) -> &[usize] {
        &self.opinions
    }

    pub fn is_constant(&self) -> bool {
        self.opinions.windows(2).all(|w| w[0] == w[1])
    }
}

/// Pile sizes `xi(e)` over the ring edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PileState {
    pub sizes: Vec<u32>,
}

impl PileState {
    pub fn total(&self) -> u64 {
        self.sizes.iter().map(|&s| s as u64).sum()
    }

    pub fn active_count(&self, tau: usize) -> usize {
        self.sizes.iter().filter(|&&s| s > 0 && s as usize <= tau).count()
    }

    pub fn frozen_count(&self, tau: usize) -> usize {
        self.sizes.iter().filter(|&&s| s as usize > tau).count()
    }
}

pub fn pile_profile(c: &Configuration, graph: &OpinionGraph) -> Result<PileState> {
    if !c.spatial.is_ring() {
        return Err(Error::NotARing);
    }
    Ok(PileState {
        sizes: edge_distances(&c.spatial, &c.opinions, graph),
    })
}

pub(crate) fn edge_distances(spatial: &SpatialGraph, opinions: &[usize], graph: &OpinionGraph) -> Vec<u32> {
    spatial
        .edges()
        .iter()
        .map(|&(u, v)| graph.dist(opinions[u], opinions[v]) as u32)
        .collect()
}

/// Independent opinions per site with law `rho`.
pub fn sample_initial(m: &ThresholdModel, spatial: &SpatialGraph, seed: u64) -> Configuration {
    sample_initial_with(m, spatial, &mut replica_rng(seed, 0))
}

pub fn sample_initial_with<R: Rng + ?Sized>(m: &ThresholdModel, spatial: &SpatialGraph, rng: &mut R) -> Configuration {
    let law = WeightedIndex::new(m.densities_f64()).expect("model densities are a probability vector");
    let opinions = (0..spatial.vertex_count()).map(|_| law.sample(rng)).collect();
    Configuration {
        spatial: spatial.clone(),
        opinions,
    }
}
