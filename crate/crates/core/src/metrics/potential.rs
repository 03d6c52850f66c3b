use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::kernel::FsMetric;
use super::quadrature::Grid;
use super::MetricError;

/// A Kähler potential `φ` on `P¹`: the metric on `O(1)` is `e^{−φ}·h_FS` and the
/// area form is `ω_φ = D·ω_FS` with `D = 1 + Δφ`. Points are given by the height
/// `w ∈ [−1, 1]` and angle `θ`.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricPotential {
    /// `Σ aₗ Pₗ(w)`.
    Legendre(Vec<f64>),
    /// `amp·exp(−((w − center)/width)²)`.
    Bump { amp: f64, center: f64, width: f64 },
    /// Real spherical harmonics, orthonormal for the area-one measure.
    Harmonics(Vec<Harmonic>),
    /// Potential of the Fubini–Study metric induced by a Gram matrix.
    Fs(FsMetric),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub l: usize,
    /// Negative orders use `sin(|m|θ)`.
    pub m: i64,
    pub amp: f64,
}

/// JSON form of a potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Mode { l: usize, amp: f64 },
    Legendre { coeffs: Vec<f64> },
    Bump { amp: f64, center: f64, #[serde(default = "unit_width")] width: f64 },
    Harmonics { terms: Vec<Harmonic> },
    /// Values at heights, fitted by a Legendre series.
    Nodes { w: Vec<f64>, values: Vec<f64>, #[serde(default)] degree: Option<usize> },
}

fn unit_width() -> f64 {
    1.0
}

impl TryFrom<PotentialSpec> for MetricPotential {
    type Error = MetricError;

    fn try_from(s: PotentialSpec) -> Result<Self, MetricError> {
        let p = match s {
            PotentialSpec::Zero => Self::zero(),
            PotentialSpec::Mode { l, amp } => Self::mode(l, amp),
            PotentialSpec::Legendre { coeffs } => Self::Legendre(coeffs),
            PotentialSpec::Bump { amp, center, width } => Self::bump(amp, center, width)?,
            PotentialSpec::Harmonics { terms } => Self::harmonics(terms)?,
            PotentialSpec::Nodes { w, values, degree } => Self::fit_nodes(&w, &values, degree)?,
        };
        p.check_finite()?;
        Ok(p)
    }
}

const FD_STEP: f64 = 2e-4;

impl MetricPotential {
    pub fn zero() -> Self {
        Self::Legendre(Vec::new())
    }

    pub fn mode(l: usize, amp: f64) -> Self {
        let mut c = vec![0.0; l + 1];
        c[l] = amp;
        Self::Legendre(c)
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn bump(amp: f64, center: f64, width: f64) -> Result<Self, MetricError> {
        if !(width > 0.0) {
            return Err(MetricError::BadPotential("bump width must be positive".into()));
        }
        Ok(Self::Bump { amp, center, width })
    }

    pub fn harmonics(terms: Vec<Harmonic>) -> Result<Self, MetricError> {
        if let Some(t) = terms.iter().find(|t| t.m.unsigned_abs() as usize > t.l) {
            return Err(MetricError::BadPotential(format!("harmonic order {} exceeds degree {}", t.m, t.l)));
        }
        Ok(Self::Harmonics(terms))
    }

    /// Least-squares Legendre fit of degree `min(n − 1, 12)` unless given.
    pub fn fit_nodes(w: &[f64], values: &[f64], degree: Option<usize>) -> Result<Self, MetricError> {
        if w.len() != values.len() || w.is_empty() {
            return Err(MetricError::BadPotential("node list needs matching, nonempty heights and values".into()));
        }
        if w.iter().any(|x| !(-1.0..=1.0).contains(x)) {
            return Err(MetricError::BadPotential("node heights must lie in [-1, 1]".into()));
        }
        let deg = degree.unwrap_or((w.len() - 1).min(12));
        if deg >= w.len() {
            return Err(MetricError::BadPotential(format!("degree {deg} needs more than {} nodes", w.len())));
        }
        let a = DMatrix::from_fn(w.len(), deg + 1, |i, l| legendre_all(w[i], deg)[l]);
        let b = DVector::from_column_slice(values);
        let sol = a.svd(true, true).solve(&b, 1e-12).map_err(|e| MetricError::BadPotential(e.to_string()))?;
        Ok(Self::Legendre(sol.iter().copied().collect()))
    }

    pub fn is_zonal(&self) -> bool {
        match self {
            Self::Legendre(_) | Self::Bump { .. } => true,
            Self::Harmonics(t) => t.iter().all(|h| h.m == 0),
            Self::Fs(f) => f.is_diagonal(),
        }
    }

    pub fn value(&self, w: f64, theta: f64) -> f64 {
        match self {
            Self::Legendre(c) => legendre_series(c, w),
            Self::Bump { amp, center, width } => amp * (-((w - center) / width).powi(2)).exp(),
            Self::Harmonics(t) => t.iter().map(|h| h.amp * real_harmonic(h.l, h.m, w, theta)).sum(),
            Self::Fs(f) => f.potential((1.0 + w) / 2.0, theta),
        }
    }

    /// `φ, φ', φ'', φ''', φ''''` in `w`, for zonal potentials with closed forms.
    fn jet(&self, w: f64) -> Option<[f64; 5]> {
        match self {
            Self::Legendre(c) => {
                let mut out = [0.0; 5];
                let mut d = c.clone();
                for slot in &mut out {
                    *slot = legendre_series(&d, w);
                    d = legder(&d);
                }
                Some(out)
            }
            Self::Bump { amp, center, width } => {
                let u = (w - center) / width;
                let g = amp * (-u * u).exp();
                let h = [1.0, 2.0 * u, 4.0 * u * u - 2.0, 8.0 * u.powi(3) - 12.0 * u, 16.0 * u.powi(4) - 48.0 * u * u + 12.0];
                let mut out = [0.0; 5];
                for (n, slot) in out.iter_mut().enumerate() {
                    *slot = if n % 2 == 0 { 1.0 } else { -1.0 } * h[n] * g / width.powi(n as i32);
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Density of `ω_φ` against the round form.
    pub fn density(&self, w: f64, theta: f64) -> f64 {
        if let Some(j) = self.jet(w) {
            return 1.0 + (1.0 - w * w) * j[2] - 2.0 * w * j[1];
        }
        match self {
            Self::Harmonics(t) => {
                1.0 - t.iter().map(|h| (h.l * (h.l + 1)) as f64 * h.amp * real_harmonic(h.l, h.m, w, theta)).sum::<f64>()
            }
            Self::Fs(f) => f.density((1.0 + w) / 2.0, theta),
            _ => unreachable!("zonal closed forms handled above"),
        }
    }

    /// Scalar curvature of `ω_φ`, normalised so that `∫ s ω_φ = 2π`; the round
    /// metric has `s ≡ 2π`.
    pub fn curvature(&self, w: f64, theta: f64) -> f64 {
        let d = self.density(w, theta);
        let lap_log = match self.jet(w) {
            Some(j) => {
                let q = 1.0 - w * w;
                let d1 = q * j[3] - 4.0 * w * j[2] - 2.0 * j[1];
                let d2 = q * j[4] - 6.0 * w * j[3] - 6.0 * j[2];
                let l1 = d1 / d;
                -2.0 * w * l1 + q * (d2 / d - l1 * l1)
            }
            None => sphere_laplacian(|w, t| self.density(w, t).ln(), w, theta, FD_STEP),
        };
        (2.0 * PI - PI * lap_log) / d
    }

    /// Rejects potentials whose area form is not positive on the grid.
    pub fn validate(&self, grid: &Grid) -> Result<(), MetricError> {
        for n in grid.nodes() {
            let d = self.density(n.w, n.theta);
            let v = self.value(n.w, n.theta);
            if !d.is_finite() || !v.is_finite() {
                return Err(MetricError::NonFinite);
            }
            if d <= 0.0 {
                return Err(MetricError::NonPositiveDensity { w: n.w, theta: n.theta, density: d });
            }
        }
        Ok(())
    }

    fn check_finite(&self) -> Result<(), MetricError> {
        let ok = match self {
            Self::Legendre(c) => c.iter().all(|x| x.is_finite()),
            Self::Bump { amp, center, width } => amp.is_finite() && center.is_finite() && width.is_finite(),
            Self::Harmonics(t) => t.iter().all(|h| h.amp.is_finite()),
            Self::Fs(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(MetricError::NonFinite)
        }
    }
}

/// Laplacian on the unit sphere by the seven-point stencil applied to the
/// degree-zero extension `f(x/|x|)`, which has no trouble at the poles.
pub(crate) fn sphere_laplacian(f: impl Fn(f64, f64) -> f64, w: f64, theta: f64, h: f64) -> f64 {
    let s = (1.0 - w * w).max(0.0).sqrt();
    let p = [s * theta.cos(), s * theta.sin(), w];
    let at = |q: [f64; 3]| {
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        f(q[2] / n, q[1].atan2(q[0]))
    };
    let c = at(p);
    let mut sum = 0.0;
    for axis in 0..3 {
        let mut a = p;
        let mut b = p;
        a[axis] += h;
        b[axis] -= h;
        sum += at(a) + at(b) - 2.0 * c;
    }
    sum / (h * h)
}

/// `P₀(w), …, P_deg(w)`.
pub(crate) fn legendre_all(w: f64, deg: usize) -> Vec<f64> {
    let mut p = vec![1.0; deg + 1];
    if deg >= 1 {
        p[1] = w;
    }
    for l in 2..=deg {
        p[l] = ((2 * l - 1) as f64 * w * p[l - 1] - (l - 1) as f64 * p[l - 2]) / l as f64;
    }
    p
}

pub(crate) fn legendre_series(c: &[f64], w: f64) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    legendre_all(w, c.len() - 1).iter().zip(c).map(|(p, a)| p * a).sum()
}

/// Coefficients of the derivative of a Legendre series, from
/// `P'ₗ₊₁ − P'ₗ₋₁ = (2l + 1)Pₗ`.
pub(crate) fn legder(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut c = c.to_vec();
    let mut der = vec![0.0; n - 1];
    for j in (2..n).rev() {
        der[j - 1] = (2 * j - 1) as f64 * c[j];
        c[j - 2] += c[j];
    }
    der[0] = c[1];
    der
}

/// Associated Legendre function without the Condon–Shortley phase.
fn assoc_legendre(l: usize, m: usize, w: f64) -> f64 {
    let s = (1.0 - w * w).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= (2 * k + 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = w * (2 * m + 1) as f64 * pmm;
    for ll in m + 2..=l {
        let next = ((2 * ll - 1) as f64 * w * cur - (ll + m - 1) as f64 * prev) / (ll - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

pub(crate) fn real_harmonic(l: usize, m: i64, w: f64, theta: f64) -> f64 {
    let am = m.unsigned_abs() as usize;
    let ratio: f64 = (l - am + 1..=l + am).map(|k| 1.0 / k as f64).product();
    let mut norm = ((2 * l + 1) as f64 * ratio).sqrt();
    if am != 0 {
        norm *= 2f64.sqrt();
    }
    let ang = match m {
        0 => 1.0,
        m if m > 0 => (am as f64 * theta).cos(),
        _ => (am as f64 * theta).sin(),
    };
    norm * assoc_legendre(l, am, w) * ang
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legder_matches_finite_differences() {
        let c = [0.3, -0.2, 0.5, 0.1, -0.4];
        let d = legder(&c);
        for w in [-0.7, 0.0, 0.4] {
            let fd = (legendre_series(&c, w + 1e-6) - legendre_series(&c, w - 1e-6)) / 2e-6;
            assert!((legendre_series(&d, w) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn harmonics_are_orthonormal() {
        let g = Grid::new(24, 25);
        let list = [(0, 0), (1, 0), (1, 1), (2, -1), (2, 2), (3, -3)];
        for (i, a) in list.iter().enumerate() {
            for b in &list[i..] {
                let v: Vec<f64> = g.nodes().map(|n| real_harmonic(a.0, a.1, n.w, n.theta) * real_harmonic(b.0, b.1, n.w, n.theta)).collect();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g.integrate(&v) - want).abs() < 1e-12, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn harmonics_are_laplace_eigenfunctions() {
        for (l, m) in [(1usize, 1i64), (2, -2), (3, 1)] {
            let f = |w: f64, t: f64| real_harmonic(l, m, w, t);
            for (w, t) in [(0.3, 1.0), (-0.95, 2.0), (0.999, 0.5)] {
                let lap = sphere_laplacian(f, w, t, FD_STEP);
                assert!((lap + (l * (l + 1)) as f64 * f(w, t)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn round_curvature_is_two_pi() {
        for p in [MetricPotential::zero(), MetricPotential::Harmonics(vec![])] {
            assert!((p.curvature(0.3, 1.0) - 2.0 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn analytic_curvature_matches_stencil() {
        for p in [MetricPotential::mode(3, 0.02), MetricPotential::bump(0.3, 0.25, 1.0).unwrap()] {
            for w in [-0.9, -0.2, 0.5, 0.97] {
                let fd = (2.0 * PI - PI * sphere_laplacian(|w, t| p.density(w, t).ln(), w, 0.4, FD_STEP)) / p.density(w, 0.4);
                assert!((p.curvature(w, 0.4) - fd).abs() < 1e-5, "{p:?} {w}");
            }
        }
    }

    #[test]
    fn total_curvature_is_two_pi() {
        let g = Grid::new(64, 48);
        let p = MetricPotential::Harmonics(vec![Harmonic { l: 2, m: 1, amp: 0.01 }, Harmonic { l: 1, m: -1, amp: 0.05 }]);
        let v: Vec<f64> = g.nodes().map(|n| p.curvature(n.w, n.theta) * p.density(n.w, n.theta)).collect();
        assert!((g.integrate(&v) - 2.0 * PI).abs() < 1e-5);
    }

    #[test]
    fn node_fit_recovers_a_series() {
        let c = [0.1, 0.0, -0.3, 0.05];
        let w: Vec<f64> = (0..9).map(|k| -1.0 + k as f64 / 4.0).collect();
        let v: Vec<f64> = w.iter().map(|&x| legendre_series(&c, x)).collect();
        let MetricPotential::Legendre(got) = MetricPotential::fit_nodes(&w, &v, Some(3)).unwrap() else { panic!() };
        for (a, b) in got.iter().zip(c) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let s: PotentialSpec = serde_json::from_str(r#"{"family":"bump","amp":0.3,"center":0.25}"#).unwrap();
        assert_eq!(s, PotentialSpec::Bump { amp: 0.3, center: 0.25, width: 1.0 });
        assert!(serde_json::from_str::<PotentialSpec>(r#"{"family":"bump","amp":0.3}"#).is_err());
    }

    #[test]
    fn negative_density_is_rejected() {
        let p = MetricPotential::mode(2, 1.0);
        assert!(matches!(p.validate(&Grid::zonal(16)), Err(MetricError::NonPositiveDensity { .. })));
    }
}
