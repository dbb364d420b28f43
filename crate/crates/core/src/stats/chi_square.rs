use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dynamics::Collision;
use crate::error::{Error, Result};

const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub samples: usize,
    /// Cells after pooling, as lists of outcome values.
    pub cells: Vec<Vec<usize>>,
}

/// Resulting sizes `s` of the logged collisions with the given `(s_minus, s_plus)`.
pub fn outcomes_for(samples: &[Collision], s_minus: u32, s_plus: u32) -> Vec<usize> {
    samples
        .iter()
        .filter(|c| c.s_minus == s_minus && c.s_plus == s_plus)
        .map(|c| c.s as usize)
        .collect()
}

/// Pearson goodness of fit of `outcomes` against `predicted[s]`.
///
/// Cells expected to hold fewer than five counts are pooled; an observation
/// in a cell of probability zero gives `p = 0` outright.
pub fn collision_chi_square(outcomes: &[usize], predicted: &[f64]) -> Result<ChiSquareResult> {
    let n = outcomes.len();
    let mut observed = vec![0u64; predicted.len()];
    for &s in outcomes {
        match observed.get_mut(s) {
            Some(o) if predicted[s] > 0.0 => *o += 1,
            _ => {
                return Ok(ChiSquareResult {
                    statistic: f64::INFINITY,
                    degrees_of_freedom: 0,
                    p_value: 0.0,
                    samples: n,
                    cells: vec![vec![s]],
                })
            }
        }
    }

    let nf = n as f64;
    let mut kept: Vec<(Vec<usize>, f64, u64)> = Vec::new();
    let mut pooled: (Vec<usize>, f64, u64) = (Vec::new(), 0.0, 0);
    for (s, &p) in predicted.iter().enumerate().filter(|(_, &p)| p > 0.0) {
        let cell = (vec![s], nf * p, observed[s]);
        if cell.1 >= MIN_EXPECTED {
            kept.push(cell);
        } else {
            pooled.0.extend(cell.0);
            pooled.1 += cell.1;
            pooled.2 += cell.2;
        }
    }
    if !pooled.0.is_empty() {
        if pooled.1 >= MIN_EXPECTED || kept.is_empty() {
            kept.push(pooled);
        } else {
            let smallest = kept
                .iter_mut()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("kept is nonempty");
            smallest.0.extend(pooled.0);
            smallest.0.sort_unstable();
            smallest.1 += pooled.1;
            smallest.2 += pooled.2;
        }
    }
    if kept.len() < 2 || kept.iter().any(|c| c.1 < MIN_EXPECTED) {
        return Err(Error::InsufficientSamples(format!(
            "{n} samples leave fewer than two cells with expected count {MIN_EXPECTED}"
        )));
    }

    let statistic: f64 = kept.iter().map(|(_, e, o)| (*o as f64 - e).powi(2) / e).sum();
    let dof = kept.len() - 1;
    let p_value = ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .sf(statistic);
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: dof,
        p_value,
        samples: n,
        cells: kept.into_iter().map(|c| c.0).collect(),
    })
}
