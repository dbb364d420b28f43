//! Parameter sweeps and the built-in `summary` preset.
//!
//! The preset checks the published per-family regions:
//! where fluctuation holds, where fixation holds at `tau = 1`, and where it
//! holds for large `tau` (evaluated at `tau = 100`). Large-`tau` regions are
//! sampled from their first twenty members upward plus a few points further
//! out, so boundary effects show up as disagreements rather than hiding.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{classify, decide, regular_functionals, s_from_intersections, Ratio, ThresholdModel, Verdict};
use crate::error::Result;
use crate::graph::{Family, HypercubeIntersections};

/// Hypercubes above this dimension are evaluated from closed forms.
pub const HYPERCUBE_GRAPH_LIMIT: usize = 10;

pub const LARGE_TAU: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub fluctuates: bool,
    pub verdict: Verdict,
    #[serde(rename = "S")]
    pub s: Option<Ratio>,
    #[serde(rename = "S_reg")]
    pub s_reg: Option<Ratio>,
}

/// Uniform-density verdict for `family` at threshold `tau`.
pub fn evaluate(family: &Family, tau: usize) -> Result<Evaluation> {
    if let Family::Hypercube { dim } = *family {
        if dim > HYPERCUBE_GRAPH_LIMIT {
            return Ok(evaluate_hypercube(dim, tau));
        }
    }
    let r = classify(&ThresholdModel::uniform(family.build()?, tau));
    Ok(Evaluation {
        fluctuates: r.fluctuation_evidence.is_some(),
        verdict: r.verdict,
        s: r.s,
        s_reg: r.s_reg,
    })
}

/// Hypercube of any dimension without building it.
///
/// The radius is `dim`. Beyond that, opinions more than `tau` apart are
/// always joined in the conflict graph once `tau <= dim - 2`: flipping all
/// coordinates and then all but one moves a single coordinate, so conflict
/// steps reach every vertex. At `tau = dim - 1` only antipodes conflict,
/// and at `tau = 0` every pair does.
pub fn evaluate_hypercube(dim: usize, tau: usize) -> Evaluation {
    let fluctuates = tau > 0 && dim <= tau + 1;
    let closed = HypercubeIntersections::new(dim);
    let (s, s_reg) = if tau == 0 {
        (None, None)
    } else {
        (
            Some(Ratio(s_from_intersections(&closed, tau))),
            regular_functionals(&closed, tau).s_reg,
        )
    };
    Evaluation {
        fluctuates,
        verdict: decide(fluctuates, tau, true, s.as_ref(), s_reg.as_ref(), None),
        s,
        s_reg,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub graph: String,
    pub tau: usize,
    #[serde(flatten)]
    pub evaluation: Evaluation,
}

/// Every family at every threshold, in input order.
pub fn sweep(families: &[Family], taus: &[usize]) -> Result<Vec<SweepPoint>> {
    let grid: Vec<(Family, usize)> = families
        .iter()
        .flat_map(|f| taus.iter().map(move |&t| (*f, t)))
        .collect();
    grid.into_par_iter()
        .map(|(f, tau)| {
            Ok(SweepPoint {
                graph: f.to_string(),
                tau,
                evaluation: evaluate(&f, tau)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Fluctuation,
    FixationTauOne,
    FixationLargeTau,
    /// Complete description over all thresholds.
    Threshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Fluctuates,
    DoesNotFluctuate,
    Fixates,
    Unknown,
}

impl Expectation {
    pub fn agrees(self, e: &Evaluation) -> bool {
        match self {
            Expectation::Fluctuates => e.fluctuates,
            Expectation::DoesNotFluctuate => !e.fluctuates,
            Expectation::Fixates => e.verdict == Verdict::Fixates,
            Expectation::Unknown => e.verdict == Verdict::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryCheck {
    pub row: String,
    pub column: Column,
    pub graph: String,
    pub tau: usize,
    pub expected: Expectation,
    #[serde(flatten)]
    pub evaluation: Evaluation,
    pub agrees: bool,
}

impl fmt::Display for SummaryCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<13} {:<20} {:<22} tau={:<3} expected {:?}, got {}{}",
            if self.agrees { "ok" } else { "FAIL" },
            self.row,
            format!("{:?}", self.column),
            self.graph,
            self.tau,
            self.expected,
            self.evaluation.verdict,
            if self.evaluation.fluctuates {
                " (fluctuation evidence)"
            } else {
                ""
            }
        )
    }
}

struct Case {
    row: &'static str,
    column: Column,
    family: Family,
    tau: usize,
    expected: Expectation,
}

/// First twenty members of `{n >= start : region(n)}`, then 1.25, 1.5 and 2
/// times the first.
fn region_samples(start: usize, region: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut out: Vec<usize> = (start..).filter(|&n| region(n)).take(20).collect();
    let first = out[0];
    out.extend(
        [first * 5 / 4, first * 3 / 2, first * 2]
            .into_iter()
            .filter(|&n| region(n)),
    );
    out
}

/// `a > sqrt(c) * b` for `a` possibly negative, `b, c >= 0`.
fn exceeds_surd(a: i64, c: i64, b: i64) -> bool {
    a > 0 && a * a > c * b * b
}

fn fluctuation_cases(
    row: &'static str,
    family: impl Fn(usize) -> Family,
    min: usize,
    boundary: impl Fn(usize) -> usize,
    out: &mut Vec<Case>,
) {
    for tau in (1..=5).chain([LARGE_TAU]) {
        let edge = boundary(tau);
        let range = if tau <= 5 { min..=edge + 5 } else { edge - 3..=edge + 4 };
        for n in range {
            out.push(Case {
                row,
                column: Column::Fluctuation,
                family: family(n),
                tau,
                expected: if n <= edge {
                    Expectation::Fluctuates
                } else {
                    Expectation::DoesNotFluctuate
                },
            });
        }
    }
}

fn fixation_cases(
    row: &'static str,
    column: Column,
    family: impl Fn(usize) -> Family,
    tau: usize,
    ns: Vec<usize>,
    out: &mut Vec<Case>,
) {
    out.extend(ns.into_iter().map(|n| Case {
        row,
        column,
        family: family(n),
        tau,
        expected: Expectation::Fixates,
    }));
}

fn summary_cases() -> Vec<Case> {
    let mut cases = Vec::new();
    let t = LARGE_TAU as i64;
    let path = |n| Family::Path { vertices: n };
    let star3 = |r| Family::Star { branches: 3, length: r };
    let star5 = |r| Family::Star { branches: 5, length: r };
    let cycle = |n| Family::Cycle { vertices: n };
    let cube = |d| Family::Hypercube { dim: d };

    // path: F <= 2 tau + 1, F >= 6, F / tau > (10 + sqrt 10) / 3
    fluctuation_cases("path", path, 2, |tau| 2 * tau + 1, &mut cases);
    fixation_cases("path", Column::FixationTauOne, path, 1, (6..=40).collect(), &mut cases);
    let large = region_samples(2, |f| exceeds_surd(3 * f as i64 - 10 * t, 10, t));
    fixation_cases("path", Column::FixationLargeTau, path, LARGE_TAU, large, &mut cases);

    // stars: r <= tau, r >= 2, r / tau > (11 + sqrt 17) / 8 and (21 + sqrt 41) / 16
    for (row, star, (k, m, c)) in [
        ("star(b=3)", star3 as fn(usize) -> Family, (8, 11, 17)),
        ("star(b=5)", star5, (16, 21, 41)),
    ] {
        fluctuation_cases(row, star, 1, |tau| tau, &mut cases);
        fixation_cases(row, Column::FixationTauOne, star, 1, (2..=12).collect(), &mut cases);
        let large = region_samples(1, |r| exceeds_surd(k * r as i64 - m * t, c, t));
        fixation_cases(row, Column::FixationLargeTau, star, LARGE_TAU, large, &mut cases);
    }

    // cycle: F <= 2 tau + 2, F >= 6, F / tau > 4
    fluctuation_cases("cycle", cycle, 3, |tau| 2 * tau + 2, &mut cases);
    fixation_cases(
        "cycle",
        Column::FixationTauOne,
        cycle,
        1,
        (6..=40).collect(),
        &mut cases,
    );
    let large = region_samples(3, |f| f > 4 * LARGE_TAU);
    fixation_cases("cycle", Column::FixationLargeTau, cycle, LARGE_TAU, large, &mut cases);

    // hypercube: d <= tau + 1, d >= 3, d / tau > 2
    for tau in 1..=5 {
        for d in 1..=tau + 4 {
            cases.push(Case {
                row: "hypercube",
                column: Column::Fluctuation,
                family: cube(d),
                tau,
                expected: if d <= tau + 1 {
                    Expectation::Fluctuates
                } else {
                    Expectation::DoesNotFluctuate
                },
            });
        }
    }
    fixation_cases(
        "hypercube",
        Column::FixationTauOne,
        cube,
        1,
        (3..=16).collect(),
        &mut cases,
    );
    let large = region_samples(1, |d| d > 2 * LARGE_TAU);
    fixation_cases(
        "hypercube",
        Column::FixationLargeTau,
        cube,
        LARGE_TAU,
        large,
        &mut cases,
    );

    // solids: fluctuation from the first threshold on, fixation up to the last
    for (family, fluctuates_from, fixates_to) in [
        (Family::Tetrahedron, 1, 0),
        (Family::Cube, 2, 1),
        (Family::Octahedron, 1, 0),
        (Family::Dodecahedron, 4, 2),
        (Family::Icosahedron, 2, 1),
    ] {
        let diameter = match family {
            Family::Tetrahedron => 1,
            Family::Octahedron => 2,
            Family::Cube | Family::Icosahedron => 3,
            _ => 5,
        };
        for tau in 0..=diameter + 1 {
            let expected = if tau >= fluctuates_from {
                Expectation::Fluctuates
            } else if tau <= fixates_to {
                Expectation::Fixates
            } else {
                Expectation::Unknown
            };
            cases.push(Case {
                row: family.name(),
                column: Column::Threshold,
                family,
                tau,
                expected,
            });
        }
    }
    cases
}

/// Evaluates every check of the `summary` preset.
pub fn summary_preset() -> Result<Vec<SummaryCheck>> {
    summary_cases()
        .into_par_iter()
        .map(|c| {
            let evaluation = evaluate(&c.family, c.tau)?;
            Ok(SummaryCheck {
                row: c.row.to_string(),
                column: c.column,
                graph: c.family.to_string(),
                tau: c.tau,
                agrees: c.expected.agrees(&evaluation),
                expected: c.expected,
                evaluation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_hypercube_matches_graph() {
        for dim in 1..=8 {
            let g = Family::Hypercube { dim }.build().unwrap();
            for tau in 0..=dim + 1 {
                let r = classify(&ThresholdModel::uniform(g.clone(), tau));
                let e = evaluate_hypercube(dim, tau);
                assert_eq!(e.fluctuates, r.fluctuation_evidence.is_some(), "d={dim} tau={tau}");
                assert_eq!(
                    (e.verdict, &e.s, &e.s_reg),
                    (r.verdict, &r.s, &r.s_reg),
                    "d={dim} tau={tau}"
                );
            }
        }
    }

    #[test]
    fn surd_regions() {
        // (10 + sqrt 10) / 3 = 4.3874...
        assert!(exceeds_surd(3 * 439 - 1000, 10, 100));
        assert!(!exceeds_surd(3 * 438 - 1000, 10, 100));
        assert!(!exceeds_surd(-5, 10, 1));
        let s = region_samples(3, |f| f > 400);
        assert_eq!(s[0], 401);
        assert_eq!(s.len(), 23);
        assert_eq!(s[22], 802);
    }

    #[test]
    fn cycle_sweep_regions() {
        let families: Vec<Family> = (3..=20).map(|n| Family::Cycle { vertices: n }).collect();
        for p in sweep(&families, &[1, 2, 3, 4]).unwrap() {
            let f: usize = p
                .graph
                .trim_start_matches("cycle(F=")
                .trim_end_matches(')')
                .parse()
                .unwrap();
            let e = &p.evaluation;
            assert_eq!(e.fluctuates, f <= 2 * p.tau + 2, "{p:?}");
            let expected = if f <= 2 * p.tau + 2 {
                Verdict::FluctuatesClusters
            } else if f >= 4 * p.tau + 2 {
                Verdict::Fixates
            } else {
                Verdict::Unknown
            };
            assert_eq!(e.verdict, expected, "{p:?}");
        }
    }
}
