//! Balanced metrics on `(P¹, O(r))`: Gram matrices, Bergman kernels, the
//! T-operator, the Bergman expansion and the K-energy.
//!
//! Normalisations, fixed once here:
//! - `ω_FS` has total area 1, so `ω_FS = dw∧dθ/4π` in height/angle coordinates;
//! - a potential `φ` changes the metric on `O(1)` to `e^{−φ}h_FS` and the area
//!   form to `(1 + Δφ)·ω_FS`, with `Δ` the round Laplacian on the unit sphere;
//! - scalar curvature is scaled so that `∫ s ω = 2π`, giving `s ≡ 2π` for the
//!   round metric and `B_r ≈ r + s/2π` for the Bergman density.

mod balance;
mod energy;
mod kernel;
mod potential;
mod quadrature;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use balance::{balance_from, balance_iterate, distance_mod_aut, AutDistance, BalanceResult};
pub use energy::{futaki_derivative, k_energy, k_energy_closed_form, linear_path};
pub use kernel::{
    balance_residual, bergman, bergman_at, gram, gram_on, grid_for, t_operator, BergmanProfile, FsMetric, GramMatrix,
};
pub use potential::{Harmonic, MetricPotential, PotentialSpec};
pub use quadrature::{default_angles, default_order, Grid, Node};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("area form is not positive at w={w}, theta={theta} (density {density})")]
    NonPositiveDensity { w: f64, theta: f64, density: f64 },
    #[error("non-finite value in potential or matrix")]
    NonFinite,
    #[error("line bundle degree r must be at least 1")]
    DegreeTooSmall,
    #[error("Gram matrix must be square of size at least 2, got {0}x{1}")]
    Shape(usize, usize),
    #[error("Gram matrix is not Hermitian")]
    NotHermitian,
    #[error("Gram matrix is not positive definite")]
    NotPositive,
    #[error("Gram matrix condition number {condition:e} exceeds 1e12")]
    IllConditioned { condition: f64 },
    #[error("no balanced metric after {iterations} iterations; last residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid potential: {0}")]
    BadPotential(String),
    #[error("expansion fit needs at least 3 distinct degrees")]
    TooFewDegrees,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub w: Vec<f64>,
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
    /// `∫ s ω_φ / ∫ ω_φ`.
    pub mean: f64,
    pub total: f64,
}

pub fn curvature(phi: &MetricPotential, grid: &Grid) -> Result<CurvatureProfile, MetricError> {
    phi.validate(grid)?;
    let nodes: Vec<Node> = grid.nodes().collect();
    let values: Vec<f64> = nodes.iter().map(|n| phi.curvature(n.w, n.theta)).collect();
    let dens: Vec<f64> = nodes.iter().map(|n| phi.density(n.w, n.theta)).collect();
    let area: f64 = nodes.iter().zip(&dens).map(|(n, d)| n.weight * d).sum();
    let total: f64 = nodes.iter().zip(&dens).zip(&values).map(|((n, d), s)| n.weight * d * s).sum();
    Ok(CurvatureProfile {
        w: nodes.iter().map(|n| n.w).collect(),
        theta: nodes.iter().map(|n| n.theta).collect(),
        values,
        mean: total / area,
        total,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFit {
    pub degrees: Vec<usize>,
    pub w: Vec<f64>,
    pub theta: Vec<f64>,
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
    /// `s/2π` at the same nodes.
    pub predicted_c1: Vec<f64>,
    pub c0_min: f64,
    pub c0_max: f64,
    /// `max |c₁ − s/2π| / max |s/2π|`.
    pub c1_rel_error: f64,
}

/// Least-squares fit `B_r(x) ≈ c₀(x)·r + c₁(x)` over the given degrees, at the
/// nodes of `grid`.
pub fn expansion_check(phi: &MetricPotential, degrees: &[usize], grid: &Grid) -> Result<ExpansionFit, MetricError> {
    let mut ds = degrees.to_vec();
    ds.sort_unstable();
    ds.dedup();
    if ds.len() < 3 {
        return Err(MetricError::TooFewDegrees);
    }
    let profiles: Vec<BergmanProfile> =
        ds.iter().map(|&r| bergman(phi, &gram(phi, r)?, grid)).collect::<Result<_, _>>()?;
    let design = DMatrix::from_fn(ds.len(), 2, |i, j| if j == 0 { ds[i] as f64 } else { 1.0 });
    let pinv = design.pseudo_inverse(1e-14).expect("design matrix has full rank");
    let npts = profiles[0].values.len();
    let mut c0 = Vec::with_capacity(npts);
    let mut c1 = Vec::with_capacity(npts);
    for k in 0..npts {
        let b = DVector::from_iterator(ds.len(), profiles.iter().map(|p| p.values[k]));
        let c = &pinv * b;
        c0.push(c[0]);
        c1.push(c[1]);
    }
    let w = profiles[0].w.clone();
    let theta = profiles[0].theta.clone();
    let predicted_c1: Vec<f64> = w.iter().zip(&theta).map(|(&w, &t)| phi.curvature(w, t) / (2.0 * PI)).collect();
    let scale = predicted_c1.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let err = c1.iter().zip(&predicted_c1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(ExpansionFit {
        degrees: ds,
        c0_min: c0.iter().copied().fold(f64::INFINITY, f64::min),
        c0_max: c0.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        c1_rel_error: err / scale,
        w,
        theta,
        c0,
        c1,
        predicted_c1,
    })
}
