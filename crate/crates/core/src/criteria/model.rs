use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::OpinionGraph;

pub type Rational = BigRational;

/// Opinion graph, confidence threshold and initial product-measure densities.
#[derive(Clone, Debug)]
pub struct ThresholdModel {
    graph: OpinionGraph,
    tau: usize,
    densities: Vec<Rational>,
}

impl ThresholdModel {
    /// Every opinion equally likely at time zero.
    pub fn uniform(graph: OpinionGraph, tau: usize) -> Self {
        let f = graph.vertex_count();
        let rho = Rational::new(BigInt::one(), BigInt::from(f));
        ThresholdModel {
            graph,
            tau,
            densities: vec![rho; f],
        }
    }

    /// Densities must be strictly positive and sum to one.
    pub fn new(graph: OpinionGraph, tau: usize, densities: Vec<Rational>) -> Result<Self> {
        validate_densities(&densities, graph.vertex_count(), true)?;
        Ok(ThresholdModel { graph, tau, densities })
    }

    pub fn graph(&self) -> &OpinionGraph {
        &self.graph
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn densities(&self) -> &[Rational] {
        &self.densities
    }

    pub fn densities_f64(&self) -> Vec<f64> {
        self.densities.iter().map(|r| r.to_f64().unwrap_or(0.0)).collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.densities.windows(2).all(|w| w[0] == w[1])
    }

    /// Initial density mass on the `tau`-center.
    pub fn rho_cent(&self) -> Rational {
        self.graph
            .tau_center(self.tau)
            .into_iter()
            .map(|j| self.densities[j].clone())
            .sum()
    }
}

/// Checks that `densities` is a probability vector of length `f`; with
/// `strict`, every entry must also be positive.
pub fn validate_densities(densities: &[Rational], f: usize, strict: bool) -> Result<()> {
    if densities.len() != f {
        return Err(Error::InvalidDensities(format!(
            "expected {f} densities, got {}",
            densities.len()
        )));
    }
    if let Some((j, r)) = densities
        .iter()
        .enumerate()
        .find(|(_, r)| r.is_negative() || (strict && r.is_zero()))
    {
        let rule = if strict { "positive" } else { "nonnegative" };
        return Err(Error::InvalidDensities(format!(
            "density of opinion {j} is {r}; densities must be {rule}"
        )));
    }
    let total: Rational = densities.iter().cloned().sum();
    if !total.is_one() {
        return Err(Error::InvalidDensities(format!("densities sum to {total}, not 1")));
    }
    Ok(())
}

/// Parses a comma-separated list of densities. Entries may be integers,
/// fractions `a/b` or finite decimals `0.25`; all are kept exact.
pub fn parse_densities(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidDensities(format!("cannot parse {s:?} as a rational"));
    if let Some((int, frac)) = s.split_once('.') {
        if s.contains('/') {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let numer: BigInt = digits.parse().map_err(|_| bad())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    let r: Rational = s.parse().map_err(|_| bad())?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn uniform_model() {
        let m = ThresholdModel::uniform(Family::Path { vertices: 3 }.build().unwrap(), 1);
        assert!(m.is_uniform());
        assert_eq!(m.rho_cent(), q(1, 3));
    }

    #[test]
    fn rejects_degenerate_densities() {
        let g = Family::Path { vertices: 3 }.build().unwrap();
        assert!(ThresholdModel::new(g.clone(), 1, vec![q(1, 1), q(0, 1), q(0, 1)]).is_err());
        assert!(ThresholdModel::new(g.clone(), 1, vec![q(1, 2), q(1, 2)]).is_err());
        assert!(ThresholdModel::new(g.clone(), 1, vec![q(1, 2), q(1, 4), q(1, 8)]).is_err());
        let m = ThresholdModel::new(g, 1, vec![q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        assert!(!m.is_uniform());
        assert_eq!(m.rho_cent(), q(1, 4));
    }

    #[test]
    fn parses_mixed_notation() {
        assert_eq!(
            parse_densities("1/4, 0.25,1/2").unwrap(),
            vec![q(1, 4), q(1, 4), q(1, 2)]
        );
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("0.5/2").is_err());
    }
}
