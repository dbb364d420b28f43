use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::model::{validate_densities, Rational, ThresholdModel};
use crate::error::{Error, Result};
use crate::graph::OpinionGraph;

/// Order of a pile of size `s`: `ceil(s / tau)`.
#[inline]
pub fn order(s: usize, tau: usize) -> usize {
    s.div_ceil(tau)
}

/// `S(G, tau) = sum over k > 0 of (k - 2) * (number of ordered pairs whose
/// distance has order k)`.
pub fn s_general(g: &OpinionGraph, tau: usize) -> Result<Rational> {
    if tau == 0 {
        return Err(Error::ZeroThreshold);
    }
    let hist = g.distance_histogram();
    let total: BigInt = hist
        .iter()
        .enumerate()
        .skip(1)
        .map(|(s, &count)| BigInt::from(order(s, tau) as i64 - 2) * count)
        .sum();
    Ok(Rational::from_integer(total))
}

/// Expected initial weight of an edge under the model's product measure.
pub fn expected_weight(m: &ThresholdModel) -> Result<Rational> {
    expected_weight_for(m.graph(), m.tau(), m.densities())
}

/// Expected weight for any probability vector, zeros allowed. Used for the
/// diametral witness, which sits on the boundary of admissible densities.
pub fn expected_weight_for(g: &OpinionGraph, tau: usize, densities: &[Rational]) -> Result<Rational> {
    if tau == 0 {
        return Err(Error::ZeroThreshold);
    }
    validate_densities(densities, g.vertex_count(), false)?;
    // integer numerators over a common denominator keep the F^2 loop cheap
    let denom = densities.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let numer: Vec<BigInt> = densities.iter().map(|r| r.numer() * (&denom / r.denom())).collect();
    let mut total = BigInt::zero();
    let mut by_order: Vec<BigInt> = Vec::new();
    for (i, ni) in numer.iter().enumerate() {
        if ni.is_zero() {
            continue;
        }
        by_order.iter_mut().for_each(BigInt::set_zero);
        for (j, &d) in g.dist_row(i).iter().enumerate() {
            if d == 0 || numer[j].is_zero() {
                continue;
            }
            let k = order(d as usize, tau);
            if by_order.len() <= k {
                by_order.resize(k + 1, BigInt::zero());
            }
            by_order[k] += &numer[j];
        }
        let row: BigInt = by_order.iter().enumerate().map(|(k, mass)| mass * (k as i64 - 2)).sum();
        total += ni * row;
    }
    Ok(Rational::new(total, &denom * &denom))
}

/// Half the mass on each end of a diametral pair; its expected weight is at
/// least 1/2 whenever `diameter > 2 tau`.
pub fn diametral_witness(g: &OpinionGraph) -> Vec<Rational> {
    let n = g.vertex_count();
    let diameter = g.diameter();
    let (a, b) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| g.dist(i, j) == diameter)
        .unwrap_or((0, 0));
    let half = Rational::new(1.into(), 2.into());
    let mut rho = vec![Rational::zero(); n];
    rho[a] += &half;
    rho[b] += &half;
    rho
}
