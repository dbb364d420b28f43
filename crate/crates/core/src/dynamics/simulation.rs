use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use super::{edge_distances, Configuration, PileState};
use crate::criteria::ThresholdModel;
use crate::graph::SpatialGraph;

/// Sizes around a jump on the ring: an active pile of size `s_minus` moved
/// onto a pile of size `s_plus`, leaving one of size `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Collision {
    pub s_minus: u32,
    pub s_plus: u32,
    pub s: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub source: usize,
    pub target: usize,
    pub flipped: bool,
    /// Ring only, and only when the target pile was nonempty.
    pub collision: Option<Collision>,
}

/// One trajectory. Piles are kept for every spatial edge and updated only
/// around the flipped site.
pub struct Simulation<'a> {
    spatial: &'a SpatialGraph,
    dist: &'a [u32],
    f: usize,
    tau: u32,
    opinions: Vec<usize>,
    piles: Vec<u32>,
    pile_sum: u64,
    active: usize,
    frozen: usize,
    flips: Vec<u64>,
    time: f64,
    events: u64,
    clock: Exp<f64>,
    rng: ChaCha8Rng,
}

impl<'a> Simulation<'a> {
    pub fn new(m: &'a ThresholdModel, spatial: &'a SpatialGraph, start: &Configuration, rng: ChaCha8Rng) -> Self {
        let g = m.graph();
        let tau = m.tau().min(u32::MAX as usize) as u32;
        let piles = edge_distances(spatial, start.opinions(), g);
        let active = piles.iter().filter(|&&s| s > 0 && s <= tau).count();
        let frozen = piles.iter().filter(|&&s| s > tau).count();
        let rate = spatial.arrow_count() as f64;
        Simulation {
            spatial,
            dist: g.dist_matrix(),
            f: g.vertex_count(),
            tau,
            opinions: start.opinions().to_vec(),
            pile_sum: piles.iter().map(|&s| s as u64).sum(),
            piles,
            active,
            frozen,
            flips: vec![0; spatial.vertex_count()],
            time: 0.0,
            events: 0,
            clock: Exp::new(rate).expect("spatial graphs have at least one edge"),
            rng,
        }
    }

    #[inline]
    fn d(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.f + j]
    }

    #[inline]
    fn classify(&self, s: u32) -> (bool, bool) {
        (s > 0 && s <= self.tau, s > self.tau)
    }

    /// Time of the next event, without applying it.
    pub fn peek_next_time(&mut self) -> f64 {
        self.time + self.clock.sample(&mut self.rng)
    }

    /// Draws the waiting time and fires one arrow.
    pub fn step(&mut self) -> Event {
        let t = self.peek_next_time();
        self.fire_at(t)
    }

    /// Fires a uniformly chosen arrow at time `t`.
    pub fn fire_at(&mut self, t: f64) -> Event {
        self.time = t;
        self.events += 1;
        let k = self.rng.random_range(0..self.spatial.arrow_count());
        let (source, target) = self.spatial.arrow(k);
        let edge = k / 2;
        let s_minus = self.piles[edge];
        let mut event = Event {
            time: t,
            source,
            target,
            flipped: false,
            collision: None,
        };
        if s_minus == 0 || s_minus > self.tau {
            return event;
        }
        let new_opinion = self.opinions[source];
        self.opinions[target] = new_opinion;
        self.flips[target] += 1;
        event.flipped = true;
        for &e in self.spatial.incident_edges(target) {
            let other = self.spatial.other_end(e, target);
            let before = self.piles[e];
            let after = self.d(new_opinion, self.opinions[other]);
            if self.spatial.is_ring() && e != edge && before > 0 {
                event.collision = Some(Collision {
                    s_minus,
                    s_plus: before,
                    s: after,
                });
            }
            if before == after {
                continue;
            }
            let (a0, f0) = self.classify(before);
            let (a1, f1) = self.classify(after);
            self.active = self.active + a1 as usize - a0 as usize;
            self.frozen = self.frozen + f1 as usize - f0 as usize;
            self.pile_sum = self.pile_sum + after as u64 - before as u64;
            self.piles[e] = after;
        }
        event
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn opinions(&self) -> &[usize] {
        &self.opinions
    }

    pub fn piles(&self) -> PileState {
        PileState {
            sizes: self.piles.clone(),
        }
    }

    pub fn pile(&self, e: usize) -> u32 {
        self.piles[e]
    }

    pub fn pile_sum(&self) -> u64 {
        self.pile_sum
    }

    pub fn active_count(&self) -> usize {
        self.active
    }

    pub fn frozen_count(&self) -> usize {
        self.frozen
    }

    pub fn flips(&self) -> &[u64] {
        &self.flips
    }

    pub fn total_flips(&self) -> u64 {
        self.flips.iter().sum()
    }

    /// No arrow can change anything.
    pub fn is_absorbed(&self) -> bool {
        self.active == 0
    }

    pub fn is_consensus(&self) -> bool {
        self.pile_sum == 0
    }
}
