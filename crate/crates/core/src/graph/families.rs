use std::fmt;

use serde::{Deserialize, Serialize};

use super::OpinionGraph;
use crate::error::{Error, Result};

/// The built-in opinion graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Path {
        vertices: usize,
    },
    /// `branches` paths of `length` edges glued at a common center.
    Star {
        branches: usize,
        length: usize,
    },
    Cycle {
        vertices: usize,
    },
    /// Binary words of length `dim` under Hamming adjacency.
    Hypercube {
        dim: usize,
    },
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Family {
    pub fn build(&self) -> Result<OpinionGraph> {
        match *self {
            Family::Path { vertices } => {
                if vertices < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "path needs at least 2 vertices, got {vertices}"
                    )));
                }
                let edges: Vec<_> = (1..vertices).map(|i| (i - 1, i)).collect();
                OpinionGraph::from_edges(vertices, &edges)
            }
            Family::Star { branches, length } => {
                if branches < 2 || length < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "star needs b >= 2 and r >= 1, got b = {branches}, r = {length}"
                    )));
                }
                // center 0; depth t on branch k is 1 + k * length + (t - 1)
                let mut edges = Vec::with_capacity(branches * length);
                for k in 0..branches {
                    let base = 1 + k * length;
                    edges.push((0, base));
                    for t in 1..length {
                        edges.push((base + t - 1, base + t));
                    }
                }
                OpinionGraph::from_edges(branches * length + 1, &edges)
            }
            Family::Cycle { vertices } => {
                if vertices < 3 {
                    return Err(Error::InvalidParameter(format!(
                        "cycle needs at least 3 vertices, got {vertices}"
                    )));
                }
                let edges: Vec<_> = (0..vertices).map(|i| (i, (i + 1) % vertices)).collect();
                OpinionGraph::from_edges(vertices, &edges)
            }
            Family::Hypercube { dim } => {
                if !(1..=20).contains(&dim) {
                    return Err(Error::InvalidParameter(format!(
                        "hypercube dimension must lie in 1..=20, got {dim}"
                    )));
                }
                let n = 1usize << dim;
                let edges: Vec<_> = (0..n)
                    .flat_map(|w| (0..dim).map(move |k| (w, w ^ (1 << k))))
                    .filter(|&(u, v)| u < v)
                    .collect();
                OpinionGraph::from_edges(n, &edges)
            }
            Family::Tetrahedron => OpinionGraph::from_edges(4, &TETRAHEDRON_EDGES),
            Family::Cube => OpinionGraph::from_edges(8, &CUBE_EDGES),
            Family::Octahedron => OpinionGraph::from_edges(6, &OCTAHEDRON_EDGES),
            Family::Dodecahedron => OpinionGraph::from_edges(20, &DODECAHEDRON_EDGES),
            Family::Icosahedron => OpinionGraph::from_edges(12, &ICOSAHEDRON_EDGES),
        }
    }

    /// Parses a family name with its integer parameters, as used on the
    /// command line. Missing parameters are an error.
    pub fn from_name(
        name: &str,
        vertices: Option<usize>,
        branches: Option<usize>,
        length: Option<usize>,
        dim: Option<usize>,
    ) -> Result<Family> {
        let need =
            |v: Option<usize>, flag: &str| v.ok_or_else(|| Error::InvalidParameter(format!("{name} requires {flag}")));
        Ok(match name {
            "path" => Family::Path {
                vertices: need(vertices, "--F")?,
            },
            "star" => Family::Star {
                branches: need(branches, "--b")?,
                length: need(length, "--r")?,
            },
            "cycle" => Family::Cycle {
                vertices: need(vertices, "--F")?,
            },
            "hypercube" => Family::Hypercube {
                dim: need(dim, "--d-dim")?,
            },
            "tetrahedron" => Family::Tetrahedron,
            "cube" => Family::Cube,
            "octahedron" => Family::Octahedron,
            "dodecahedron" => Family::Dodecahedron,
            "icosahedron" => Family::Icosahedron,
            other => return Err(Error::InvalidParameter(format!("unknown graph family {other:?}"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Star { .. } => "star",
            Family::Cycle { .. } => "cycle",
            Family::Hypercube { .. } => "hypercube",
            Family::Tetrahedron => "tetrahedron",
            Family::Cube => "cube",
            Family::Octahedron => "octahedron",
            Family::Dodecahedron => "dodecahedron",
            Family::Icosahedron => "icosahedron",
        }
    }

    pub fn platonic() -> [Family; 5] {
        [
            Family::Tetrahedron,
            Family::Cube,
            Family::Octahedron,
            Family::Dodecahedron,
            Family::Icosahedron,
        ]
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path { vertices } => write!(f, "path(F={vertices})"),
            Family::Star { branches, length } => write!(f, "star(b={branches}, r={length})"),
            Family::Cycle { vertices } => write!(f, "cycle(F={vertices})"),
            Family::Hypercube { dim } => write!(f, "hypercube(d={dim})"),
            Family::Tetrahedron => f.write_str("tetrahedron"),
            Family::Cube => f.write_str("cube"),
            Family::Octahedron => f.write_str("octahedron"),
            Family::Dodecahedron => f.write_str("dodecahedron"),
            Family::Icosahedron => f.write_str("icosahedron"),
        }
    }
}

const TETRAHEDRON_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const CUBE_EDGES: [(usize, usize); 12] = [
    (0, 1),
    (0, 2),
    (0, 4),
    (1, 3),
    (1, 5),
    (2, 3),
    (2, 6),
    (3, 7),
    (4, 5),
    (4, 6),
    (5, 7),
    (6, 7),
];

// K_{2,2,2}: antipodal pairs {0,3}, {1,4}, {2,5} are the non-edges.
const OCTAHEDRON_EDGES: [(usize, usize); 12] = [
    (0, 1),
    (0, 2),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 5),
    (2, 3),
    (2, 4),
    (3, 4),
    (3, 5),
    (4, 5),
];

// Generalized Petersen graph GP(10, 2): outer 10-cycle, spokes, inner star.
const DODECAHEDRON_EDGES: [(usize, usize); 30] = [
    (0, 1),
    (0, 9),
    (0, 10),
    (1, 2),
    (1, 11),
    (2, 3),
    (2, 12),
    (3, 4),
    (3, 13),
    (4, 5),
    (4, 14),
    (5, 6),
    (5, 15),
    (6, 7),
    (6, 16),
    (7, 8),
    (7, 17),
    (8, 9),
    (8, 18),
    (9, 19),
    (10, 12),
    (10, 18),
    (11, 13),
    (11, 19),
    (12, 14),
    (13, 15),
    (14, 16),
    (15, 17),
    (16, 18),
    (17, 19),
];

// Apex 0, upper pentagon 1..=5, lower pentagon 6..=10, apex 11.
const ICOSAHEDRON_EDGES: [(usize, usize); 30] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 5),
    (1, 6),
    (1, 7),
    (2, 3),
    (2, 7),
    (2, 8),
    (3, 4),
    (3, 8),
    (3, 9),
    (4, 5),
    (4, 9),
    (4, 10),
    (5, 6),
    (5, 10),
    (6, 7),
    (6, 10),
    (6, 11),
    (7, 8),
    (7, 11),
    (8, 9),
    (8, 11),
    (9, 10),
    (9, 11),
    (10, 11),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn platonic_sizes_and_profiles() {
        // (vertices, edges, radius, diameter)
        let expected = [
            (Family::Tetrahedron, 4, 6, 1, 1),
            (Family::Cube, 8, 12, 3, 3),
            (Family::Octahedron, 6, 12, 2, 2),
            (Family::Dodecahedron, 20, 30, 5, 5),
            (Family::Icosahedron, 12, 30, 3, 3),
        ];
        for (family, v, e, r, d) in expected {
            let g = family.build().unwrap();
            assert_eq!(g.vertex_count(), v, "{family}");
            assert_eq!(g.edge_count(), e, "{family}");
            assert_eq!(g.edges().count(), e, "{family}");
            assert_eq!(g.eccentricity_profile(), (r, d), "{family}");
        }
    }

    #[test]
    fn small_families() {
        let p2 = Family::Path { vertices: 2 }.build().unwrap();
        assert_eq!((p2.edge_count(), p2.diameter()), (1, 1));

        let star = Family::Star { branches: 3, length: 2 }.build().unwrap();
        assert_eq!((star.vertex_count(), star.edge_count()), (7, 6));

        let q3 = Family::Hypercube { dim: 3 }.build().unwrap();
        assert_eq!(q3, Family::Cube.build().unwrap());
        for (u, v) in q3.edges() {
            assert_eq!((u ^ v).count_ones(), 1);
        }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(Family::Path { vertices: 1 }.build().is_err());
        assert!(Family::Star { branches: 1, length: 3 }.build().is_err());
        assert!(Family::Star { branches: 3, length: 0 }.build().is_err());
        assert!(Family::Cycle { vertices: 2 }.build().is_err());
        assert!(Family::Hypercube { dim: 0 }.build().is_err());
    }

    #[test]
    fn names_round_trip() {
        assert_eq!(
            Family::from_name("star", None, Some(3), Some(2), None).unwrap(),
            Family::Star { branches: 3, length: 2 }
        );
        assert!(Family::from_name("path", None, None, None, None).is_err());
        assert!(Family::from_name("torus", Some(3), None, None, None).is_err());
    }
}
