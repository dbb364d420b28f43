use serde::{Deserialize, Serialize};

use super::{component_count, parse_edge_list, simple_adjacency};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialKind {
    /// Cycle `Z_L`; edge `x` joins sites `x` and `x + 1 mod L`.
    Ring,
    Finite,
}

/// The graph the individuals live on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpatialGraph {
    kind: SpatialKind,
    edges: Vec<(usize, usize)>,
    /// Edge indices incident to each site.
    incident: Vec<Vec<usize>>,
}

impl SpatialGraph {
    pub fn ring(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(Error::InvalidParameter(format!(
                "ring needs at least 3 sites, got {len}"
            )));
        }
        let edges: Vec<_> = (0..len).map(|x| (x, (x + 1) % len)).collect();
        let incident = (0..len).map(|x| vec![(x + len - 1) % len, x]).collect();
        Ok(SpatialGraph {
            kind: SpatialKind::Ring,
            edges,
            incident,
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "complete spatial graph needs at least 2 sites, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        Self::from_edges(n, &edges)
    }

    /// A finite connected simple graph.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let adjacency = simple_adjacency(n, edges)?;
        let components = component_count(&adjacency);
        if components > 1 {
            return Err(Error::Disconnected { components });
        }
        let mut incident = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(e);
            incident[v].push(e);
        }
        Ok(SpatialGraph {
            kind: SpatialKind::Finite,
            edges: edges.to_vec(),
            incident,
        })
    }

    pub fn load(text: &str) -> Result<Self> {
        let (n, edges) = parse_edge_list(text)?;
        Self::from_edges(n, &edges)
    }

    pub fn kind(&self) -> SpatialKind {
        self.kind
    }

    pub fn is_ring(&self) -> bool {
        self.kind == SpatialKind::Ring
    }

    pub fn vertex_count(&self) -> usize {
        self.incident.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn incident_edges(&self, x: usize) -> &[usize] {
        &self.incident[x]
    }

    /// Number of ordered neighbour pairs; each fires at rate one.
    pub fn arrow_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// Arrow `k` as `(source, target)`: the target may copy the source.
    #[inline]
    pub fn arrow(&self, k: usize) -> (usize, usize) {
        let (u, v) = self.edges[k / 2];
        if k.is_multiple_of(2) {
            (u, v)
        } else {
            (v, u)
        }
    }

    #[inline]
    pub fn other_end(&self, edge: usize, x: usize) -> usize {
        let (u, v) = self.edges[edge];
        if u == x {
            v
        } else {
            u
        }
    }
}
