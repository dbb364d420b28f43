//! The birth-death chain that bounds how many active piles a frozen pile
//! absorbs before it becomes active, and the functionals built on it.
//!
//! On a distance-regular opinion graph, a pile of size `s_minus` jumping
//! onto a pile of size `s_plus` leaves a pile of size `s` with probability
//! `p[s_minus][s][s_plus] / h(s_plus)`. Maximizing the chance of losing an
//! order (and minimizing the chance of gaining one) over all active
//! `s_minus` and all `s_plus` of order `n` gives the down/up probabilities
//! `p_n`, `q_n` of a chain on `1..=M`, `M = ceil(diameter / tau)`, with
//! state 1 absorbing and `q_M = 0`.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::functionals::order;
use super::model::Rational;
use crate::error::{Error, Result};
use crate::graph::{check_distance_regular, IntersectionNumbers, OpinionGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirthDeathSpec {
    states: usize,
    /// Index `n`; entries 0 and 1 unused.
    down: Vec<Rational>,
    up: Vec<Rational>,
}

impl BirthDeathSpec {
    /// `down` lists `p_2..=p_M`, `up` lists `q_2..=q_{M-1}`.
    pub fn new(states: usize, down: Vec<Rational>, up: Vec<Rational>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if states == 0 {
            return bad("a birth-death chain needs at least one state".into());
        }
        if down.len() != states - 1 || up.len() != states.saturating_sub(2) {
            return bad(format!(
                "{states} states need {} down and {} up probabilities",
                states - 1,
                states.saturating_sub(2)
            ));
        }
        let mut p = vec![Rational::zero(); 2];
        p.extend(down);
        let mut q = vec![Rational::zero(); 2];
        q.extend(up);
        q.push(Rational::zero());
        q.truncate(states + 1);
        let spec = BirthDeathSpec { states, down: p, up: q };
        for n in 2..=states {
            let (pn, qn) = (spec.p(n), spec.q(n));
            if pn.is_negative() || qn.is_negative() || pn + qn > Rational::one() {
                return bad(format!("state {n}: p = {pn}, q = {qn} is not a distribution"));
            }
        }
        Ok(spec)
    }

    /// Number of states `M`.
    pub fn states(&self) -> usize {
        self.states
    }

    /// Down-step probability `p_n`, `2 <= n <= M`.
    pub fn p(&self, n: usize) -> &Rational {
        &self.down[n]
    }

    /// Up-step probability `q_n`; `q_M = 0`.
    pub fn q(&self, n: usize) -> &Rational {
        &self.up[n]
    }
}

/// The collision law: entry `s` is the probability that a pile of size
/// `s_minus` jumping onto a pile of size `s_plus` leaves size `s`.
pub fn collision_distribution<T: IntersectionNumbers + ?Sized>(
    t: &T,
    s_minus: usize,
    s_plus: usize,
) -> Result<Vec<Rational>> {
    let d = t.diameter();
    if s_plus == 0 || s_plus > d || s_minus > d {
        return Err(Error::InvalidParameter(format!(
            "pile sizes ({s_minus}, {s_plus}) outside the diameter {d}"
        )));
    }
    let h = t.sphere_size(s_plus);
    Ok((0..=d)
        .map(|s| Rational::new(t.count(s_minus, s, s_plus), h.clone()))
        .collect())
}

/// Sizes in `1..=diameter` of order `n`.
fn order_block(n: usize, tau: usize, diameter: usize) -> Option<RangeInclusive<usize>> {
    if n == 0 {
        return None;
    }
    let lo = (n - 1) * tau + 1;
    let hi = (n * tau).min(diameter);
    (lo <= hi).then_some(lo..=hi)
}

/// Down/up probabilities of the birth-death chain.
pub fn pq_coefficients<T: IntersectionNumbers + ?Sized>(t: &T, tau: usize) -> Result<BirthDeathSpec> {
    if tau == 0 {
        return Err(Error::ZeroThreshold);
    }
    let d = t.diameter();
    let states = order(d, tau).max(1);
    let Some(active) = order_block(1, tau, d) else {
        return BirthDeathSpec::new(1, Vec::new(), Vec::new());
    };
    let mut down = Vec::with_capacity(states.saturating_sub(1));
    let mut up = Vec::with_capacity(states.saturating_sub(2));
    for n in 2..=states {
        let frozen = order_block(n, tau, d).expect("every order up to M is populated");
        let below = order_block(n - 1, tau, d);
        let above = order_block(n + 1, tau, d);
        let mut best: Option<Rational> = None;
        let mut worst: Option<Rational> = None;
        for s_plus in frozen.clone() {
            // same denominator h(s_plus) for every s_minus
            let mass = |block: &Option<RangeInclusive<usize>>, s_minus: usize| match block {
                Some(r) => t.count_sum(s_minus, r.clone(), s_plus),
                None => BigInt::zero(),
            };
            let fall = active
                .clone()
                .map(|s_minus| mass(&below, s_minus))
                .max()
                .unwrap_or_default();
            let rise = active
                .clone()
                .map(|s_minus| mass(&above, s_minus))
                .min()
                .unwrap_or_default();
            let h = t.sphere_size(s_plus);
            let fall = Rational::new(fall, h.clone());
            let rise = Rational::new(rise, h);
            if best.as_ref().is_none_or(|b| fall > *b) {
                best = Some(fall);
            }
            if worst.as_ref().is_none_or(|w| rise < *w) {
                worst = Some(rise);
            }
        }
        down.push(best.unwrap_or_else(Rational::zero));
        if n < states {
            up.push(worst.unwrap_or_else(Rational::zero));
        }
    }
    BirthDeathSpec::new(states, down, up)
}

/// `W(1..=M)`; element `k - 1` holds `W(k)`.
///
/// `W(k) = -1 + sum over 1 < n <= k, n <= m <= M of
/// (q_n ... q_{m-1}) / (p_n ... p_m)`.
pub fn w_weights(bd: &BirthDeathSpec) -> Result<Vec<Rational>> {
    let m_states = bd.states();
    if let Some(n) = (2..=m_states).find(|&n| bd.p(n).is_zero()) {
        return Err(Error::CriterionUnavailable(n));
    }
    let mut weights = Vec::with_capacity(m_states);
    let mut acc = -Rational::one();
    weights.push(acc.clone());
    for n in 2..=m_states {
        let mut sigma = Rational::zero();
        let mut ups = Rational::one();
        let mut downs = Rational::one();
        for m in n..=m_states {
            if m > n {
                ups *= bd.q(m - 1);
            }
            downs *= bd.p(m);
            sigma += &ups / &downs;
        }
        acc += sigma;
        weights.push(acc.clone());
    }
    Ok(weights)
}

/// Expected number of steps for the chain to reach state 1 from `k`,
/// `1 + W(k)`.
pub fn bd_hitting_expectation(bd: &BirthDeathSpec, k: usize) -> Result<Rational> {
    if k == 0 || k > bd.states() {
        return Err(Error::StateOutOfRange {
            state: k,
            states: bd.states(),
        });
    }
    let w = w_weights(bd)?;
    Ok(Rational::one() + &w[k - 1])
}

/// `S_reg = sum over k of W(k) * (sum of h(s) over s of order k)`.
pub fn s_reg_from<T: IntersectionNumbers + ?Sized>(t: &T, tau: usize) -> Result<Rational> {
    let spec = pq_coefficients(t, tau)?;
    let weights = w_weights(&spec)?;
    Ok(s_reg_with(t, tau, &weights))
}

pub(crate) fn s_reg_with<T: IntersectionNumbers + ?Sized>(t: &T, tau: usize, weights: &[Rational]) -> Rational {
    (1..=t.diameter())
        .map(|s| &weights[order(s, tau) - 1] * Rational::from_integer(t.sphere_size(s)))
        .sum()
}

pub fn s_reg(g: &OpinionGraph, tau: usize) -> Result<Rational> {
    let table = check_distance_regular(g).ok_or(Error::NotDistanceRegular)?;
    s_reg_from(&table, tau)
}
