use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::{balance_residual, gram, t_operator, FsMetric, GramMatrix};
use super::potential::MetricPotential;
use super::quadrature::Grid;
use super::MetricError;
use crate::gallery::hermitian_basis;

const ANDERSON_DEPTH: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceResult {
    pub gram: GramMatrix,
    /// Potential of the balanced metric relative to the round one.
    pub potential: MetricPotential,
    pub iterations: usize,
    pub residual: f64,
    pub history: Vec<f64>,
}

/// Coordinates for Gram matrices: `log G` as a Hermitian matrix, or just the
/// log-diagonal when `G` is diagonal.
enum Chart {
    Diagonal,
    Full(Vec<DMatrix<Complex64>>),
}

impl Chart {
    fn encode(&self, g: &GramMatrix) -> Vec<f64> {
        match self {
            Chart::Diagonal => g.diagonal().iter().map(|h| h.ln()).collect(),
            Chart::Full(basis) => {
                let e = g.matrix().clone().symmetric_eigen();
                let logs = e.eigenvalues.map(|l| Complex64::new(l.ln(), 0.0));
                let x = &e.eigenvectors * DMatrix::from_diagonal(&logs) * e.eigenvectors.adjoint();
                basis.iter().map(|b| (&x * b).trace().re).collect()
            }
        }
    }

    fn decode(&self, x: &[f64]) -> Result<GramMatrix, MetricError> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(MetricError::NonFinite);
        }
        match self {
            Chart::Diagonal => GramMatrix::diagonal_from(&x.iter().map(|v| v.exp()).collect::<Vec<_>>()),
            Chart::Full(basis) => {
                let n = basis[0].nrows();
                let h = basis.iter().zip(x).fold(DMatrix::zeros(n, n), |acc, (b, &c)| acc + b * Complex64::new(c, 0.0));
                let e = h.symmetric_eigen();
                let exps = e.eigenvalues.map(|l| Complex64::new(l.exp(), 0.0));
                GramMatrix::new(&e.eigenvectors * DMatrix::from_diagonal(&exps) * e.eigenvectors.adjoint())
            }
        }
    }
}

/// Iterates the T-operator from the Gram matrix of `φ₀` until the balance
/// residual drops below `tol`, accelerated by Anderson mixing on the
/// logarithm of the Gram matrix. The determinant is held at that of the start.
pub fn balance_iterate(phi0: &MetricPotential, r: usize, tol: f64, max_iter: usize) -> Result<BalanceResult, MetricError> {
    let g0 = gram(phi0, r)?;
    balance_from(&g0, tol, max_iter)
}

pub fn balance_from(g0: &GramMatrix, tol: f64, max_iter: usize) -> Result<BalanceResult, MetricError> {
    let chart = if g0.is_diagonal() { Chart::Diagonal } else { Chart::Full(hermitian_basis(g0.r() + 1)) };
    let log_det = g0.log_det();
    let mut x = chart.encode(g0);
    let mut g = g0.clone();
    let mut xs: Vec<Vec<f64>> = Vec::new();
    let mut fs: Vec<Vec<f64>> = Vec::new();
    let mut history = Vec::new();
    // Last iterate reached by a plain step, to return to if mixing misbehaves.
    let mut anchor: Option<(Vec<f64>, Vec<f64>, f64)> = None;

    for iter in 0..=max_iter {
        let t = t_operator(&g, log_det)?;
        let res = balance_residual(&g, &t);
        history.push(res);
        if res <= tol {
            let potential = FsMetric::from_gram(&g)?.into_potential();
            return Ok(BalanceResult { gram: g, potential, iterations: iter, residual: res, history });
        }
        if iter == max_iter {
            return Err(MetricError::NotConverged { iterations: max_iter, residual: res });
        }
        let f: Vec<f64> = chart.encode(&t).iter().zip(&x).map(|(a, b)| a - b).collect();

        if let Some((ax, af, ares)) = &anchor {
            if res > 2.0 * ares {
                // Mixing overshot: restart from the anchor with a plain step.
                xs.clear();
                fs.clear();
                x = ax.iter().zip(af).map(|(a, b)| a + b).collect();
                anchor = None;
                g = chart.decode(&x)?;
                continue;
            }
        }
        if anchor.as_ref().is_none_or(|a| res < a.2) {
            anchor = Some((x.clone(), f.clone(), res));
        }

        xs.push(x.clone());
        fs.push(f.clone());
        if xs.len() > ANDERSON_DEPTH + 1 {
            xs.remove(0);
            fs.remove(0);
        }
        let next = anderson(&xs, &fs);
        g = match chart.decode(&next) {
            Ok(g) => {
                x = next;
                g
            }
            Err(_) => {
                xs.clear();
                fs.clear();
                x = x.iter().zip(&f).map(|(a, b)| a + b).collect();
                chart.decode(&x)?
            }
        };
    }
    unreachable!("loop returns by the last iteration")
}

/// Type-II Anderson step from the stored iterates and residuals.
fn anderson(xs: &[Vec<f64>], fs: &[Vec<f64>]) -> Vec<f64> {
    let k = xs.len() - 1;
    let x = &xs[k];
    let f = &fs[k];
    let plain: Vec<f64> = x.iter().zip(f).map(|(a, b)| a + b).collect();
    if k == 0 {
        return plain;
    }
    let n = x.len();
    let df = DMatrix::from_fn(n, k, |i, j| fs[j + 1][i] - fs[j][i]);
    let dx = DMatrix::from_fn(n, k, |i, j| xs[j + 1][i] - xs[j][i]);
    let Ok(gamma) = df.clone().svd(true, true).solve(&DVector::from_column_slice(f), 1e-12) else {
        return plain;
    };
    let corr = (dx + df) * gamma;
    plain.iter().zip(corr.iter()).map(|(p, c)| p - c).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutDistance {
    /// Oscillation of the potential itself.
    pub raw: f64,
    /// Oscillation after the best rescaling `z ↦ λz`.
    pub reduced: f64,
    pub lambda: f64,
}

/// Sup-distance of `ψ` from the round metric, up to the dilations `z ↦ λz`
/// that fix the poles, measured by oscillation on the grid heights. The
/// round metric pulled back by a dilation has potential
/// `log((1 + λ²t)/(1 + t))` with `t = |z|² = (1 + w)/(1 − w)`.
pub fn distance_mod_aut(psi: &MetricPotential, grid: &Grid) -> AutDistance {
    let nodes: Vec<(f64, f64, f64)> = grid
        .nodes()
        .map(|n| (n.w, psi.value(n.w, n.theta), (1.0 + n.w) / (1.0 - n.w)))
        .collect();
    let osc = |s: f64| {
        let l2 = (2.0 * s).exp();
        let (lo, hi) = nodes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v, t)| {
            let d = v - ((1.0 + l2 * t) / (1.0 + t)).ln();
            (lo.min(d), hi.max(d))
        });
        hi - lo
    };
    let raw = osc(0.0);
    // Coarse scan, then golden-section refinement around the best sample.
    let (mut best, mut best_v) = (0.0, raw);
    for k in -80..=80 {
        let s = k as f64 * 0.05;
        let v = osc(s);
        if v < best_v {
            best = s;
            best_v = v;
        }
    }
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best - 0.05, best + 0.05);
    for _ in 0..80 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if osc(c) < osc(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let s = (a + b) / 2.0;
    let v = osc(s);
    let (s, v) = if v < best_v { (s, v) } else { (best, best_v) };
    AutDistance { raw, reduced: v, lambda: s.exp() }
}
