//! Concrete moment problems: a `C*` toy, points on the sphere, framed
//! homomorphisms and the adjoint action.

mod hyperbola;
mod matrix;
mod points;
mod suite;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{FlowResult, FlowStatus};

pub use hyperbola::Hyperbola;
pub use matrix::{hermitian_basis, AdjointProblem, HomProblem};
pub use points::{classify_points, random_config, PointsProblem, PointsVerdict};
pub use suite::{check_config, expected_outcome, points_suite, SuiteRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error("configuration has no points")]
    NoPoints,
    #[error("point {index} is not a unit vector")]
    NotUnit { index: usize },
    #[error("points {0} and {1} coincide; merge them and add their multiplicities")]
    Coincident(usize, usize),
    #[error("multiplicity of point {index} is zero")]
    ZeroMultiplicity { index: usize },
    #[error("{points} points but {mults} multiplicities")]
    LengthMismatch { points: usize, mults: usize },
    #[error("matrix must be {rows}x{cols}, got {got} entries")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("need at least as many rows as columns, got {rows}x{cols}")]
    NotTall { rows: usize, cols: usize },
    #[error("non-finite entry in input")]
    NonFinite,
}

/// How a flow run relates to the orbit it started in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlowOutcome {
    BalancedInOrbit,
    LimitOutsideOrbit,
    Escaped,
    Inconclusive,
}

impl FlowOutcome {
    pub fn of<P>(r: &FlowResult<P>) -> Self {
        match (r.status, r.orbit_escape) {
            (FlowStatus::Escaped, _) => Self::Escaped,
            (FlowStatus::Balanced, false) => Self::BalancedInOrbit,
            (_, true) => Self::LimitOutsideOrbit,
            (FlowStatus::Stalled, false) => Self::Inconclusive,
        }
    }
}
