//! Kempf–Ness descent: drive a moment problem toward a zero of its moment map
//! by moving inside the complexified orbit.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("moment map produced a non-finite value at iteration {iter}")]
    NonFinite { iter: usize },
    #[error("invalid flow configuration: {0}")]
    InvalidConfig(String),
    #[error("instance does not expose a norm functional")]
    Unsupported,
    #[error("direction has {got} coordinates, expected {expected}")]
    WrongDirection { got: usize, expected: usize },
}

/// A point of a space with a Hamiltonian action of a compact group `K`, together
/// with the action of the complexification.
///
/// Lie algebra elements are given in an orthonormal basis of `k`. An element of
/// `k ⊕ ik` is passed to [`act`](MomentProblem::act) as `2·lie_dim` reals: the
/// `k` part first, then the coefficients of `i·k`.
pub trait MomentProblem {
    fn lie_dim(&self) -> usize;

    fn moment(&self) -> Vec<f64>;

    fn act(&mut self, xi: &[f64]);

    /// Size of the accumulated group element; grows without bound when the
    /// orbit runs off to infinity.
    fn magnitude(&self) -> f64;

    /// Kempf–Ness functional, whose derivative along `exp(t·iv)` is `⟨m, v⟩`.
    fn log_norm(&self) -> Option<f64> {
        None
    }

    /// Instance certificate that the limit of the flow lies outside the orbit.
    fn orbit_escape(&self) -> bool {
        false
    }

    /// Quantities the complexified action preserves.
    fn conserved(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    /// `None` starts at `1/(1 + ‖m‖)`.
    pub initial_step: Option<f64>,
    pub backtrack: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub divergence: f64,
    pub window: usize,
    /// Also try a Newton step on `m` each iteration, kept only if it beats
    /// the gradient step. Degenerate (semistable) wells otherwise converge
    /// sublinearly.
    pub newton: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { initial_step: None, backtrack: 0.5, tol: 1e-8, max_iters: 20_000, divergence: 8.0, window: 200, newton: true }
    }
}

impl FlowConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    fn validate(&self) -> Result<(), FlowError> {
        let bad = |m: &str| Err(FlowError::InvalidConfig(m.to_string()));
        if let Some(s) = self.initial_step {
            if !(s > 0.0 && s.is_finite()) {
                return bad("initial step must be positive");
            }
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtracking factor must lie in (0, 1)");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tolerance must be positive");
        }
        if self.max_iters == 0 || self.window == 0 {
            return bad("iteration limits must be positive");
        }
        if !(self.divergence > 0.0 && self.divergence.is_finite()) {
            return bad("divergence threshold must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlowStatus {
    Balanced,
    Escaped,
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub moment_norm: f64,
    /// Length of the imaginary move taken.
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct FlowResult<P> {
    pub status: FlowStatus,
    pub state: P,
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub orbit_escape: bool,
}

impl<P> FlowResult<P> {
    pub fn final_norm(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.moment_norm)
    }
}

const MAX_BACKTRACKS: usize = 80;
const NEWTON_MAX_STEP: f64 = 1.0;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn descent(m: &[f64], eta: f64) -> Vec<f64> {
    let mut xi = vec![0.0; 2 * m.len()];
    for (x, mi) in xi[m.len()..].iter_mut().zip(m) {
        *x = -eta * mi;
    }
    xi
}

fn checked_moment<P: MomentProblem>(p: &P, iter: usize) -> Result<Vec<f64>, FlowError> {
    let m = p.moment();
    if m.iter().all(|x| x.is_finite()) {
        Ok(m)
    } else {
        Err(FlowError::NonFinite { iter })
    }
}

/// Steepest descent of `‖m‖²` along `exp(−η·i·m)`, accepting a step only when
/// `‖m‖²` strictly decreases.
pub fn flow_to_zero<P: MomentProblem + Clone>(p: &P, cfg: &FlowConfig) -> Result<FlowResult<P>, FlowError> {
    cfg.validate()?;
    let mut state = p.clone();
    let mut m = checked_moment(&state, 0)?;
    let mut nm = norm(&m);
    let mut eta = cfg.initial_step.unwrap_or(1.0 / (1.0 + nm));
    let mut trace = vec![TraceRow { iter: 0, moment_norm: nm, step: 0.0 }];
    let mut window: VecDeque<(f64, f64)> = VecDeque::with_capacity(cfg.window + 1);
    window.push_back((state.magnitude(), nm));

    let finish = |status, state: P, trace: Vec<TraceRow>, iterations| {
        let orbit_escape = state.orbit_escape();
        Ok(FlowResult { status, state, trace, iterations, orbit_escape })
    };

    for iter in 1..=cfg.max_iters {
        if nm <= cfg.tol {
            return finish(FlowStatus::Balanced, state, trace, iter - 1);
        }
        if escaped(&window, cfg) {
            return finish(FlowStatus::Escaped, state, trace, iter - 1);
        }

        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let mut cand = state.clone();
            cand.act(&descent(&m, eta));
            let cm = checked_moment(&cand, iter)?;
            let cn = norm(&cm);
            if cn * cn < nm * nm {
                accepted = Some((cand, cm, cn, eta * nm));
                break;
            }
            eta *= cfg.backtrack;
        }
        let grad_eta = eta;
        if cfg.newton {
            if let Some(n) = newton_step(&state, &m, iter)? {
                if n.2 < accepted.as_ref().map_or(nm, |a| a.2) {
                    accepted = Some(n);
                }
            }
        }

        let Some((cand, cm, cn, used)) = accepted else {
            if let Some(probe) = ray_probe(&state, &m, nm, cfg) {
                trace.push(TraceRow { iter, moment_norm: norm(&probe.moment()), step: cfg.divergence / nm });
                return finish(FlowStatus::Escaped, probe, trace, iter);
            }
            return finish(FlowStatus::Stalled, state, trace, iter - 1);
        };
        state = cand;
        m = cm;
        nm = cn;
        eta = grad_eta * 2.0;
        trace.push(TraceRow { iter, moment_norm: nm, step: used });
        window.push_back((state.magnitude(), nm));
        if window.len() > cfg.window {
            window.pop_front();
        }
    }
    let status = if nm <= cfg.tol { FlowStatus::Balanced } else { FlowStatus::Stalled };
    finish(status, state, trace, cfg.max_iters)
}

/// Accepted move: new state, its moment, `‖m‖` and step length.
type Candidate<P> = (P, Vec<f64>, f64, f64);

/// Solves `J·ξ = −m` by pseudo-inverse, where `J` is the forward-difference
/// derivative of `m` along the imaginary directions. Returns the moved state
/// when it strictly lowers `‖m‖`.
fn newton_step<P: MomentProblem + Clone>(state: &P, m: &[f64], iter: usize) -> Result<Option<Candidate<P>>, FlowError> {
    let d = m.len();
    let nm = norm(m);
    let h = 1e-6;
    let mut jac = DMatrix::<f64>::zeros(d, d);
    for b in 0..d {
        let mut q = state.clone();
        let mut xi = vec![0.0; 2 * d];
        xi[d + b] = h;
        q.act(&xi);
        let mb = checked_moment(&q, iter)?;
        for a in 0..d {
            jac[(a, b)] = (mb[a] - m[a]) / h;
        }
    }
    let sym = (&jac + jac.transpose()) * 0.5;
    let svd = sym.svd(true, true);
    let cutoff = 1e-10 * svd.singular_values.max();
    let Ok(sol) = svd.solve(&DVector::from_column_slice(m), cutoff) else {
        return Ok(None);
    };
    let raw = sol.norm();
    if !raw.is_finite() || raw == 0.0 {
        return Ok(None);
    }
    // Near-singular directions would otherwise throw the state out of range.
    let scale = (NEWTON_MAX_STEP / raw).min(1.0);
    let mut xi = vec![0.0; d];
    xi.extend(sol.iter().map(|x| -x * scale));
    let mut cand = state.clone();
    cand.act(&xi);
    let cm = cand.moment();
    if cm.iter().any(|x| !x.is_finite()) {
        return Ok(None);
    }
    let cn = norm(&cm);
    Ok((cn < nm).then_some((cand, cm, cn, raw * scale)))
}

fn escaped(window: &VecDeque<(f64, f64)>, cfg: &FlowConfig) -> bool {
    let Some(&(now, _)) = window.back() else {
        return false;
    };
    let low = window.iter().map(|w| w.0).fold(f64::INFINITY, f64::min);
    let min_m = window.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
    now - low >= cfg.divergence && min_m > 10.0 * cfg.tol
}

/// At a stall with `‖m‖` bounded away from zero, a long step along `−m` that
/// lowers the norm functional by a large amount without reducing `‖m‖` shows
/// the orbit is unbounded in that direction.
fn ray_probe<P: MomentProblem + Clone>(state: &P, m: &[f64], nm: f64, cfg: &FlowConfig) -> Option<P> {
    if nm <= 10.0 * cfg.tol {
        return None;
    }
    let f0 = state.log_norm()?;
    let mut probe = state.clone();
    probe.act(&descent(m, cfg.divergence / (nm * nm)));
    let f1 = probe.log_norm()?;
    let n1 = norm(&probe.moment());
    (f0 - f1 >= 0.5 * cfg.divergence && n1 >= nm * (1.0 - 1e-9)).then_some(probe)
}

/// `|(F(exp(h·iv)x) − F(exp(−h·iv)x))/2h − ⟨m(x), v⟩|`.
pub fn log_norm_check<P: MomentProblem + Clone>(p: &P, v: &[f64], h: f64) -> Result<f64, FlowError> {
    if v.len() != p.lie_dim() {
        return Err(FlowError::WrongDirection { got: v.len(), expected: p.lie_dim() });
    }
    p.log_norm().ok_or(FlowError::Unsupported)?;
    let shifted = |t: f64| {
        let mut q = p.clone();
        let mut xi = vec![0.0; v.len()];
        xi.extend(v.iter().map(|x| t * x));
        q.act(&xi);
        q.log_norm().ok_or(FlowError::Unsupported)
    };
    let deriv = (shifted(h)? - shifted(-h)?) / (2.0 * h);
    let mv: f64 = p.moment().iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((deriv - mv).abs())
}

/// Largest relative change of the conserved quantities between two states.
pub fn conserved_drift<P: MomentProblem>(before: &P, after: &P) -> f64 {
    let a = before.conserved();
    let b = after.conserved();
    let scale = a.iter().map(|x| x.abs()).fold(1.0, f64::max);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs() / scale).fold(0.0, f64::max)
}
