use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::GalleryError;
use crate::flow::MomentProblem;
use crate::polytope::StabilityClass;

type Lift = [Complex64; 2];

/// Weighted points on `S² = P¹` under `SL(2, C)`, with moment `Σ mᵢ pᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointsProblem {
    lifts: Vec<Lift>,
    mult: Vec<u32>,
    collision: f64,
}

fn lift(p: [f64; 3]) -> Lift {
    let [x, y, z] = p;
    if z >= 0.0 {
        let a = ((1.0 + z) / 2.0).sqrt();
        [Complex64::new(a, 0.0), Complex64::new(x, y) / (2.0 * a)]
    } else {
        let b = ((1.0 - z) / 2.0).sqrt();
        [Complex64::new(x, -y) / (2.0 * b), Complex64::new(b, 0.0)]
    }
}

fn project(l: &Lift) -> [f64; 3] {
    let ab = l[0].conj() * l[1];
    let n = l[0].norm_sqr() + l[1].norm_sqr();
    [2.0 * ab.re / n, 2.0 * ab.im / n, (l[0].norm_sqr() - l[1].norm_sqr()) / n]
}

fn chordal(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn bracket(u: &Lift, v: &Lift) -> Complex64 {
    u[0] * v[1] - u[1] * v[0]
}

impl PointsProblem {
    pub fn new(points: &[[f64; 3]], mult: &[u32]) -> Result<Self, GalleryError> {
        if points.is_empty() {
            return Err(GalleryError::NoPoints);
        }
        if points.len() != mult.len() {
            return Err(GalleryError::LengthMismatch { points: points.len(), mults: mult.len() });
        }
        let mut unit = Vec::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            if p.iter().any(|x| !x.is_finite()) {
                return Err(GalleryError::NonFinite);
            }
            let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (n - 1.0).abs() > 1e-6 {
                return Err(GalleryError::NotUnit { index });
            }
            if mult[index] == 0 {
                return Err(GalleryError::ZeroMultiplicity { index });
            }
            unit.push([p[0] / n, p[1] / n, p[2] / n]);
        }
        for i in 0..unit.len() {
            for j in i + 1..unit.len() {
                if chordal(&unit[i], &unit[j]) < 1e-12 {
                    return Err(GalleryError::Coincident(i, j));
                }
            }
        }
        Ok(Self { lifts: unit.into_iter().map(lift).collect(), mult: mult.to_vec(), collision: 1e-6 })
    }

    /// Distance below which two points count as collided. Semistable flows
    /// approach the collision like `√‖m‖`, so callers tie this to the tolerance.
    pub fn with_collision_threshold(mut self, t: f64) -> Self {
        self.collision = t;
        self
    }

    pub fn collision_threshold_for(tol: f64) -> f64 {
        f64::max(1e-6, 10.0 * tol.sqrt())
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        self.lifts.iter().map(project).collect()
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn min_separation(&self) -> f64 {
        let pts = self.points();
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                best = best.min(chordal(&pts[i], &pts[j]));
            }
        }
        best
    }
}

impl MomentProblem for PointsProblem {
    fn lie_dim(&self) -> usize {
        3
    }

    fn moment(&self) -> Vec<f64> {
        let mut m = vec![0.0; 3];
        for (l, &k) in self.lifts.iter().zip(&self.mult) {
            let p = project(l);
            for c in 0..3 {
                m[c] += k as f64 * p[c];
            }
        }
        m
    }

    /// `exp(½(b + i·a)·σ)`; since the generator `M` squares to `μ²·I`,
    /// the exponential is `cosh μ·I + (sinh μ/μ)·M`.
    fn act(&mut self, xi: &[f64]) {
        let w: Vec<Complex64> = (0..3).map(|c| Complex64::new(xi[3 + c], xi[c]) / 2.0).collect();
        let i = Complex64::i();
        let m = [[w[2], w[0] - i * w[1]], [w[0] + i * w[1], -w[2]]];
        let mu = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        let (ch, shc) = if mu.norm() < 1e-4 {
            let s = mu * mu;
            (1.0 + s / 2.0 + s * s / 24.0, 1.0 + s / 6.0 + s * s / 120.0)
        } else {
            (mu.cosh(), mu.sinh() / mu)
        };
        let g = [[ch + shc * m[0][0], shc * m[0][1]], [shc * m[1][0], ch + shc * m[1][1]]];
        for l in &mut self.lifts {
            *l = [g[0][0] * l[0] + g[0][1] * l[1], g[1][0] * l[0] + g[1][1] * l[1]];
        }
    }

    fn magnitude(&self) -> f64 {
        self.lifts.iter().map(|l| (l[0].norm_sqr() + l[1].norm_sqr()).ln().abs() / 2.0).fold(0.0, f64::max)
    }

    fn log_norm(&self) -> Option<f64> {
        Some(self.lifts.iter().zip(&self.mult).map(|(l, &k)| k as f64 * (l[0].norm_sqr() + l[1].norm_sqr()).ln()).sum())
    }

    fn orbit_escape(&self) -> bool {
        self.min_separation() < self.collision
    }

    /// Cross-ratio of the first four points.
    fn conserved(&self) -> Vec<f64> {
        if self.lifts.len() < 4 {
            return Vec::new();
        }
        let x = &self.lifts;
        let cr = bracket(&x[0], &x[2]) * bracket(&x[1], &x[3]) / (bracket(&x[0], &x[3]) * bracket(&x[1], &x[2]));
        vec![cr.re, cr.im]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsVerdict {
    pub class: StabilityClass,
    /// Index of the point carrying more than half the weight.
    pub witness: Option<usize>,
}

/// Stability of distinct points with the given multiplicities, decided by
/// comparing each multiplicity with half the total.
pub fn classify_points(mult: &[u32]) -> PointsVerdict {
    let n: u32 = mult.iter().sum();
    if let Some(i) = mult.iter().position(|&k| 2 * k > n) {
        return PointsVerdict { class: StabilityClass::Unstable, witness: Some(i) };
    }
    let class = if mult.iter().any(|&k| 2 * k == n) {
        if mult.len() == 2 {
            StabilityClass::Polystable
        } else {
            StabilityClass::StrictlySemistable
        }
    } else {
        StabilityClass::Stable
    };
    PointsVerdict { class, witness: None }
}

/// Distinct uniformly random points with multiplicities at most 4 and total at
/// most `max_total`, no two closer than `min_sep`.
pub fn random_config<R: Rng + ?Sized>(rng: &mut R, max_total: u32, min_sep: f64) -> (Vec<[f64; 3]>, Vec<u32>) {
    let max_total = max_total.max(1);
    loop {
        let k = rng.random_range(1..=max_total.min(6)) as usize;
        let mult: Vec<u32> = (0..k).map(|_| rng.random_range(1..=4)).collect();
        if mult.iter().sum::<u32>() > max_total {
            continue;
        }
        let mut pts: Vec<[f64; 3]> = Vec::with_capacity(k);
        while pts.len() < k {
            let z: f64 = rng.random_range(-1.0..=1.0);
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let r = (1.0 - z * z).max(0.0).sqrt();
            let p = [r * t.cos(), r * t.sin(), z];
            if pts.iter().all(|q| chordal(q, &p) >= min_sep) {
                pts.push(p);
            }
        }
        return (pts, mult);
    }
}
