use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::birth_death::{pq_coefficients, s_reg_with, w_weights};
use super::fluctuation::{fluctuation_report, FluctuationEvidence};
use super::functionals::{expected_weight, order, s_general};
use super::model::{Rational, ThresholdModel};
use crate::error::Error;
use crate::graph::{check_distance_regular, IntersectionNumbers};

/// A rational that serializes as `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(pub Rational);

impl Ratio {
    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
}

impl From<Rational> for Ratio {
    fn from(r: Rational) -> Self {
        Ratio(r)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        super::model::parse_rational(s).map(Ratio)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "Fluctuates&Clusters")]
    FluctuatesClusters,
    Fixates,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FluctuatesClusters => "Fluctuates&Clusters",
            Verdict::Fixates => "Fixates",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub radius: usize,
    pub diameter: usize,
    pub tau: usize,
    pub center: Vec<usize>,
    pub rho_cent: Ratio,
    pub fluctuation_evidence: FluctuationEvidence,
    /// Absent when `tau = 0`.
    #[serde(rename = "S")]
    pub s: Option<Ratio>,
    pub distance_regular: bool,
    pub p_n: BTreeMap<usize, Ratio>,
    pub q_n: BTreeMap<usize, Ratio>,
    #[serde(rename = "W")]
    pub w: BTreeMap<usize, Ratio>,
    #[serde(rename = "S_reg")]
    pub s_reg: Option<Ratio>,
    pub fixates_for_some_densities: bool,
    pub verdict: Verdict,
    pub expected_weight: Option<Ratio>,
    pub uniform: bool,
    pub notes: Vec<String>,
}

impl CriteriaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Birth-death part of a report on a distance-regular graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegularFunctionals {
    pub p_n: BTreeMap<usize, Ratio>,
    pub q_n: BTreeMap<usize, Ratio>,
    pub w: BTreeMap<usize, Ratio>,
    pub s_reg: Option<Ratio>,
    pub note: Option<String>,
}

/// `S`, the chain coefficients and `S_reg` from intersection numbers alone.
pub fn regular_functionals<T: IntersectionNumbers + ?Sized>(t: &T, tau: usize) -> RegularFunctionals {
    let mut out = RegularFunctionals::default();
    let spec = match pq_coefficients(t, tau) {
        Ok(spec) => spec,
        Err(e) => {
            out.note = Some(e.to_string());
            return out;
        }
    };
    for n in 2..=spec.states() {
        out.p_n.insert(n, spec.p(n).clone().into());
        if n < spec.states() {
            out.q_n.insert(n, spec.q(n).clone().into());
        }
    }
    match w_weights(&spec) {
        Ok(w) => {
            out.s_reg = Some(s_reg_with(t, tau, &w).into());
            out.w = w.into_iter().enumerate().map(|(i, x)| (i + 1, x.into())).collect();
        }
        Err(e) => out.note = Some(e.to_string()),
    }
    out
}

/// `S` on a distance-regular graph: every vertex sees `h(s)` others at
/// distance `s`, so `N(s) = F h(s)`.
pub fn s_from_intersections<T: IntersectionNumbers + ?Sized>(t: &T, tau: usize) -> Rational {
    let per_vertex: num_bigint::BigInt = (1..=t.diameter())
        .map(|s| t.sphere_size(s) * (order(s, tau) as i64 - 2))
        .sum();
    Rational::from_integer(per_vertex * t.vertex_count())
}

/// Verdict precedence: fluctuation evidence, then `tau = 0`, then the
/// fixation functionals.
pub fn decide(
    fluctuates: bool,
    tau: usize,
    uniform: bool,
    s: Option<&Ratio>,
    s_reg: Option<&Ratio>,
    expected_weight: Option<&Ratio>,
) -> Verdict {
    let positive = |x: Option<&Ratio>| x.is_some_and(Ratio::is_positive);
    let fixates = if uniform {
        positive(s) || positive(s_reg)
    } else {
        positive(expected_weight)
    };
    if fluctuates {
        Verdict::FluctuatesClusters
    } else if tau == 0 || fixates {
        Verdict::Fixates
    } else {
        Verdict::Unknown
    }
}

pub fn classify(m: &ThresholdModel) -> CriteriaReport {
    let g = m.graph();
    let tau = m.tau();
    let (radius, diameter) = g.eccentricity_profile();
    let evidence = fluctuation_report(g, tau);
    let uniform = m.is_uniform();
    let mut notes = Vec::new();

    let s = s_general(g, tau).ok().map(Ratio);
    let ew = expected_weight(m).ok().map(Ratio);
    let table = check_distance_regular(g);
    let mut reg = RegularFunctionals::default();
    if tau == 0 {
        notes.push("tau = 0: no interaction is ever active".to_string());
    } else if let Some(t) = &table {
        reg = regular_functionals(t, tau);
        notes.extend(reg.note.take());
    }
    if !uniform {
        notes.push("non-uniform densities: S and S_reg do not decide the verdict".to_string());
    }

    let verdict = decide(
        evidence.is_some(),
        tau,
        uniform,
        s.as_ref(),
        reg.s_reg.as_ref(),
        ew.as_ref(),
    );
    if verdict == Verdict::FluctuatesClusters && !matches!(evidence, FluctuationEvidence::RadiusTest { .. }) {
        notes.push("radius exceeds tau: fluctuation shown, clustering not".to_string());
    }

    CriteriaReport {
        radius,
        diameter,
        tau,
        center: g.tau_center(tau),
        rho_cent: Ratio(m.rho_cent()),
        fluctuation_evidence: evidence,
        s,
        distance_regular: table.is_some(),
        p_n: reg.p_n,
        q_n: reg.q_n,
        w: reg.w,
        s_reg: reg.s_reg,
        fixates_for_some_densities: diameter > 2 * tau,
        verdict,
        expected_weight: ew,
        uniform,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Family, HypercubeIntersections};

    fn uniform(f: Family, tau: usize) -> CriteriaReport {
        classify(&ThresholdModel::uniform(f.build().unwrap(), tau))
    }

    fn int(n: i64) -> Ratio {
        Ratio(Rational::from_integer(n.into()))
    }

    #[test]
    fn examples() {
        assert_eq!(uniform(Family::Dodecahedron, 3).verdict, Verdict::Unknown);
        assert_eq!(uniform(Family::Cube, 2).verdict, Verdict::FluctuatesClusters);
        let q4 = uniform(Family::Hypercube { dim: 4 }, 1);
        assert_eq!((q4.verdict, q4.s.clone()), (Verdict::Fixates, Some(int(32))));
        let cube = uniform(Family::Cube, 1);
        assert_eq!((cube.verdict, cube.s_reg.clone()), (Verdict::Fixates, Some(int(2))));
        assert_eq!(cube.w[&3], int(2));
    }

    #[test]
    fn s_reg_beats_negative_s() {
        let c6 = uniform(Family::Cycle { vertices: 6 }, 1);
        assert_eq!(c6.s, Some(int(-6)));
        assert_eq!(c6.s_reg, Some(int(5)));
        assert_eq!(c6.verdict, Verdict::Fixates);
    }

    #[test]
    fn zero_threshold_fixates() {
        let r = uniform(Family::Tetrahedron, 0);
        assert_eq!(r.verdict, Verdict::Fixates);
        assert_eq!(r.s, None);
        assert!(r.fixates_for_some_densities);
    }

    #[test]
    fn consensus_bound_examples() {
        assert_eq!(uniform(Family::Path { vertices: 3 }, 1).rho_cent.to_string(), "1/3");
        assert_eq!(
            uniform(Family::Star { branches: 3, length: 1 }, 1).rho_cent.to_string(),
            "1/4"
        );
        assert_eq!(uniform(Family::Dodecahedron, 5).rho_cent.to_string(), "1/1");
    }

    #[test]
    fn closed_form_matches_graph_report() {
        for dim in 2..=7 {
            let closed = HypercubeIntersections::new(dim);
            for tau in 1..dim {
                let r = uniform(Family::Hypercube { dim }, tau);
                assert_eq!(
                    r.s.as_ref().map(|x| x.0.clone()),
                    Some(s_from_intersections(&closed, tau))
                );
                assert_eq!(r.s_reg, regular_functionals(&closed, tau).s_reg);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let r = uniform(Family::Icosahedron, 1);
        let text = r.to_json();
        assert!(text.contains("\"S_reg\": \"8/1\""));
        let back: CriteriaReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }
}
