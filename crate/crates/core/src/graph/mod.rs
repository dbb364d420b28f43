//! Opinion graphs, spatial graphs and their distance structure.
//!
//! An [`OpinionGraph`] is a finite, connected, simple graph whose vertices are
//! the opinions. All-pairs distances are computed once at construction by a
//! breadth-first search from every vertex and kept as a dense `F x F` matrix.

mod families;
mod regular;
mod spatial;

pub use families::Family;
pub use regular::{check_distance_regular, HypercubeIntersections, IntersectionNumbers, IntersectionTable};
pub use spatial::{SpatialGraph, SpatialKind};

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpinionGraph {
    adjacency: Vec<Vec<usize>>,
    dist: Vec<u32>,
    edge_count: usize,
}

impl OpinionGraph {
    /// Builds a graph on `vertex_count` vertices from an undirected edge list.
    ///
    /// Rejects self-loops, repeated edges (in either orientation), ids out of
    /// range and disconnected graphs.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let adjacency = simple_adjacency(vertex_count, edges)?;
        let dist = all_pairs_bfs(&adjacency)?;
        Ok(OpinionGraph {
            adjacency,
            dist,
            edge_count: edges.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Undirected edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> usize {
        self.dist[i * self.vertex_count() + j] as usize
    }

    /// Row `i` of the distance matrix.
    pub fn dist_row(&self, i: usize) -> &[u32] {
        let f = self.vertex_count();
        &self.dist[i * f..(i + 1) * f]
    }

    /// The full row-major distance matrix.
    pub fn dist_matrix(&self) -> &[u32] {
        &self.dist
    }

    pub fn eccentricity(&self, i: usize) -> usize {
        self.dist_row(i).iter().copied().max().unwrap_or(0) as usize
    }

    pub fn eccentricities(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|i| self.eccentricity(i)).collect()
    }

    /// `(radius, diameter)`: minimum and maximum eccentricity.
    pub fn eccentricity_profile(&self) -> (usize, usize) {
        let ecc = self.eccentricities();
        let radius = ecc.iter().copied().min().unwrap_or(0);
        let diameter = ecc.iter().copied().max().unwrap_or(0);
        (radius, diameter)
    }

    pub fn radius(&self) -> usize {
        self.eccentricity_profile().0
    }

    pub fn diameter(&self) -> usize {
        self.eccentricity_profile().1
    }

    /// Opinions within distance `tau` of every opinion. Nonempty iff the
    /// radius is at most `tau`.
    pub fn tau_center(&self, tau: usize) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&i| self.eccentricity(i) <= tau)
            .collect()
    }

    /// Complement of the `tau`-center.
    pub fn tau_boundary(&self, tau: usize) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&i| self.eccentricity(i) > tau)
            .collect()
    }

    /// Ordered-pair counts indexed by distance: entry `s` is `N(s)`.
    /// Entry 0 is the vertex count.
    pub fn distance_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.diameter() + 1];
        for &d in &self.dist {
            hist[d as usize] += 1;
        }
        hist
    }

    /// Number of ordered pairs `(i, j)` with `dist(i, j) = s`.
    pub fn pair_distance_count(&self, s: usize) -> u64 {
        self.distance_histogram().get(s).copied().unwrap_or(0)
    }
}

/// Parses the edge-list text format: one `u v` pair per line, whitespace
/// separated, 0-based ids, `#` starts a comment. The vertex count is one
/// more than the largest id seen.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let parse = |field: Option<&str>| -> Result<usize> {
            let field = field.ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected two vertex ids".into(),
            })?;
            field.parse::<usize>().map_err(|e| Error::Parse {
                line: idx + 1,
                message: format!("bad vertex id {field:?}: {e}"),
            })
        };
        let u = parse(fields.next())?;
        let v = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "trailing fields".into(),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = max_id.map(|m| m + 1).ok_or(Error::Empty)?;
    Ok((n, edges))
}

/// Loads an opinion graph from edge-list text.
pub fn load_graph(text: &str) -> Result<OpinionGraph> {
    let (n, edges) = parse_edge_list(text)?;
    OpinionGraph::from_edges(n, &edges)
}

pub(crate) fn simple_adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut seen = HashSet::with_capacity(edges.len());
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::InvalidParameter(format!(
                "edge {{{u}, {v}}} references a vertex outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge(u, v));
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for ns in &mut adjacency {
        ns.sort_unstable();
    }
    Ok(adjacency)
}

pub(crate) fn component_count(adjacency: &[Vec<usize>]) -> usize {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

fn all_pairs_bfs(adjacency: &[Vec<usize>]) -> Result<Vec<u32>> {
    let n = adjacency.len();
    let components = component_count(adjacency);
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for src in 0..n {
        let row = &mut dist[src * n..(src + 1) * n];
        row[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in &adjacency[u] {
                if row[v] == u32::MAX {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(dist)
}
