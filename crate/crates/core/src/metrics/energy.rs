use std::f64::consts::PI;

use super::potential::MetricPotential;
use super::quadrature::Grid;
use super::MetricError;

struct Sample {
    phi: Vec<f64>,
    density: Vec<f64>,
    curvature: Vec<f64>,
}

fn sample(p: &MetricPotential, grid: &Grid) -> Result<Sample, MetricError> {
    p.validate(grid)?;
    let mut s = Sample { phi: Vec::new(), density: Vec::new(), curvature: Vec::new() };
    for n in grid.nodes() {
        s.phi.push(p.value(n.w, n.theta));
        s.density.push(p.density(n.w, n.theta));
        s.curvature.push(p.curvature(n.w, n.theta));
    }
    Ok(s)
}

/// `−∫ (s − s₀)·φ̇ ω` with `φ̇` given at the grid nodes.
fn rate(grid: &Grid, at: &Sample, dphi: &[f64]) -> f64 {
    let s0 = 2.0 * PI;
    grid.nodes()
        .enumerate()
        .map(|(k, n)| -n.weight * (at.curvature[k] - s0) * dphi[k] * at.density[k])
        .sum()
}

/// Mabuchi K-energy of the last potential relative to the first, integrating
/// `dM/dt = −∫ (s_t − s₀) φ̇_t ω_t` along the path with the trapezoid rule.
pub fn k_energy(path: &[MetricPotential], grid: &Grid) -> Result<f64, MetricError> {
    let samples: Vec<Sample> = path.iter().map(|p| sample(p, grid)).collect::<Result<_, _>>()?;
    Ok(samples
        .windows(2)
        .map(|w| {
            let d: Vec<f64> = w[1].phi.iter().zip(&w[0].phi).map(|(a, b)| a - b).collect();
            0.5 * (rate(grid, &w[0], &d) + rate(grid, &w[1], &d))
        })
        .sum())
}

/// `π·(∫ D log D ω_FS + ∫ φ Δφ ω_FS)` with `D = 1 + Δφ`, the K-energy relative
/// to the round metric in closed form.
pub fn k_energy_closed_form(phi: &MetricPotential, grid: &Grid) -> Result<f64, MetricError> {
    phi.validate(grid)?;
    Ok(PI
        * grid
            .nodes()
            .map(|n| {
                let d = phi.density(n.w, n.theta);
                n.weight * (d * d.ln() + phi.value(n.w, n.theta) * (d - 1.0))
            })
            .sum::<f64>())
}

/// Derivative of the K-energy at `φ` in the direction `φ̇`.
pub fn futaki_derivative(phi: &MetricPotential, direction: &MetricPotential, grid: &Grid) -> Result<f64, MetricError> {
    let at = sample(phi, grid)?;
    let d: Vec<f64> = grid.nodes().map(|n| direction.value(n.w, n.theta)).collect();
    Ok(rate(grid, &at, &d))
}

/// `t·φ` for `t = 0, 1/steps, …, 1`, for potentials that scale linearly.
pub fn linear_path(phi: &MetricPotential, steps: usize) -> Result<Vec<MetricPotential>, MetricError> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            match phi {
                MetricPotential::Legendre(c) => Ok(MetricPotential::Legendre(c.iter().map(|a| a * t).collect())),
                MetricPotential::Bump { amp, center, width } => Ok(MetricPotential::Bump { amp: amp * t, center: *center, width: *width }),
                MetricPotential::Harmonics(h) => Ok(MetricPotential::Harmonics(
                    h.iter().map(|x| super::Harmonic { amp: x.amp * t, ..*x }).collect(),
                )),
                MetricPotential::Fs(_) => Err(MetricError::BadPotential("induced potentials do not scale linearly".into())),
            }
        })
        .collect()
}
