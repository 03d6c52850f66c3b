use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify_points, random_config, FlowOutcome, PointsProblem};
use crate::flow::{flow_to_zero, FlowConfig, FlowError};
use crate::polytope::StabilityClass;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub index: usize,
    pub multiplicities: Vec<u32>,
    pub points: Vec<[f64; 3]>,
    pub class: StabilityClass,
    pub outcome: FlowOutcome,
    pub iterations: usize,
    pub final_moment_norm: f64,
    pub agrees: bool,
}

/// The outcome a flow should have on a configuration of the given class.
pub fn expected_outcome(class: StabilityClass) -> FlowOutcome {
    match class {
        StabilityClass::Stable | StabilityClass::Polystable => FlowOutcome::BalancedInOrbit,
        StabilityClass::StrictlySemistable => FlowOutcome::LimitOutsideOrbit,
        StabilityClass::Unstable => FlowOutcome::Escaped,
    }
}

/// Runs the flow on one configuration and compares with the combinatorial verdict.
pub fn check_config(index: usize, points: Vec<[f64; 3]>, mult: Vec<u32>, cfg: &FlowConfig) -> Result<SuiteRow, FlowError> {
    let class = classify_points(&mult).class;
    let p = PointsProblem::new(&points, &mult)
        .map_err(|e| FlowError::InvalidConfig(e.to_string()))?
        .with_collision_threshold(PointsProblem::collision_threshold_for(cfg.tol));
    let r = flow_to_zero(&p, cfg)?;
    let outcome = FlowOutcome::of(&r);
    Ok(SuiteRow {
        index,
        class,
        outcome,
        iterations: r.iterations,
        final_moment_norm: r.final_norm(),
        agrees: outcome == expected_outcome(class),
        multiplicities: mult,
        points,
    })
}

/// `count` seeded random configurations with total multiplicity at most
/// `max_total`, checked in parallel and reported in generation order.
pub fn points_suite(seed: u64, count: usize, max_total: u32, cfg: &FlowConfig) -> Result<Vec<SuiteRow>, FlowError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: Vec<_> = (0..count).map(|_| random_config(&mut rng, max_total, 0.05)).collect();
    configs.into_par_iter().enumerate().map(|(i, (pts, mult))| check_config(i, pts, mult, cfg)).collect()
}
