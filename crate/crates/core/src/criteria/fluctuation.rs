//! Evidence for fluctuation on the integers.
//!
//! The process fluctuates whenever the opinions split into two nonempty
//! blocks with every cross pair within the threshold. When the radius is at
//! most `tau` the `tau`-center and its complement do the job. Otherwise we
//! look at the conflict graph, which joins opinions further apart than
//! `tau`: each conflict edge has to stay inside one block, so a valid split
//! exists exactly when the conflict graph has at least two connected
//! components (isolated opinions included).

use serde::{Deserialize, Serialize};

use crate::graph::OpinionGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FluctuationEvidence {
    None,
    /// `radius <= tau`; `boundary` is empty when `tau >= diameter`.
    RadiusTest {
        center: Vec<usize>,
        boundary: Vec<usize>,
    },
    Partition {
        v1: Vec<usize>,
        v2: Vec<usize>,
    },
}

impl FluctuationEvidence {
    pub fn is_some(&self) -> bool {
        !matches!(self, FluctuationEvidence::None)
    }
}

pub fn fluctuation_report(g: &OpinionGraph, tau: usize) -> FluctuationEvidence {
    if g.radius() <= tau {
        return FluctuationEvidence::RadiusTest {
            center: g.tau_center(tau),
            boundary: g.tau_boundary(tau),
        };
    }
    match conflict_partition(g, tau) {
        Some((v1, v2)) => FluctuationEvidence::Partition { v1, v2 },
        None => FluctuationEvidence::None,
    }
}

/// Splits off the conflict component of opinion 0, if the conflict graph
/// is disconnected.
pub fn conflict_partition(g: &OpinionGraph, tau: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.vertex_count();
    let mut in_first = vec![false; n];
    in_first[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for (v, &d) in g.dist_row(u).iter().enumerate() {
            if d as usize > tau && !in_first[v] {
                in_first[v] = true;
                stack.push(v);
            }
        }
    }
    let (v1, v2): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| in_first[i]);
    if v2.is_empty() {
        None
    } else {
        Some((v1, v2))
    }
}

/// Both blocks nonempty, disjoint, covering, with all cross distances at
/// most `tau`.
pub fn is_valid_partition(g: &OpinionGraph, tau: usize, v1: &[usize], v2: &[usize]) -> bool {
    let n = g.vertex_count();
    if v1.is_empty() || v2.is_empty() || v1.len() + v2.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in v1.iter().chain(v2) {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    v1.iter().all(|&i| v2.iter().all(|&j| g.dist(i, j) <= tau))
}
