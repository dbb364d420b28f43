//! Exact fluctuation and fixation criteria.
//!
//! Everything here works in exact rationals so that the sign of `S` and
//! `S_reg` never depends on rounding.

mod birth_death;
mod fluctuation;
mod functionals;
mod model;
mod report;

pub use birth_death::{
    bd_hitting_expectation, collision_distribution, pq_coefficients, s_reg, s_reg_from, w_weights, BirthDeathSpec,
};
pub use fluctuation::{conflict_partition, fluctuation_report, is_valid_partition, FluctuationEvidence};
pub use functionals::{diametral_witness, expected_weight, expected_weight_for, order, s_general};
pub use model::{parse_densities, parse_rational, validate_densities, Rational, ThresholdModel};
pub use report::{
    classify, decide, regular_functionals, s_from_intersections, CriteriaReport, Ratio, RegularFunctionals, Verdict,
};
