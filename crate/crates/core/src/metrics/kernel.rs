use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::potential::MetricPotential;
use super::quadrature::{default_angles, default_order, Grid, Node};
use super::MetricError;

type CMat = DMatrix<Complex64>;

const MAX_CONDITION: f64 = 1e12;

/// Hermitian positive-definite inner product on `H⁰(O(r))` in the monomial
/// basis `1, z, …, z^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    r: usize,
    m: CMat,
}

/// `y^{i/2}(1 − y)^{(r−i)/2}·e^{iθ·i}`: the monomials `zⁱ` measured in the
/// round metric on `O(r)`.
pub(crate) fn sections(r: usize, y: f64, theta: f64) -> Vec<Complex64> {
    (0..=r)
        .map(|i| {
            let mag = y.powf(i as f64 / 2.0) * (1.0 - y).powf((r - i) as f64 / 2.0);
            Complex64::from_polar(mag, i as f64 * theta)
        })
        .collect()
}

/// `yⁱ(1 − y)^{r−i}` for `i = 0..=r`.
pub(crate) fn monomial_weights(r: usize, y: f64) -> Vec<f64> {
    (0..=r).map(|i| y.powi(i as i32) * (1.0 - y).powi((r - i) as i32)).collect()
}

impl GramMatrix {
    pub fn new(m: CMat) -> Result<Self, MetricError> {
        let n = m.nrows();
        if n < 2 || m.ncols() != n {
            return Err(MetricError::Shape(n, m.ncols()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MetricError::NonFinite);
        }
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if (&m - m.adjoint()).iter().any(|z| z.norm() > 1e-12 * scale.max(1.0)) {
            return Err(MetricError::NotHermitian);
        }
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        if m.clone().cholesky().is_none() {
            return Err(MetricError::NotPositive);
        }
        Ok(Self { r: n - 1, m })
    }

    pub fn diagonal_from(h: &[f64]) -> Result<Self, MetricError> {
        let d = DVector::from_iterator(h.len(), h.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(CMat::from_diagonal(&d))
    }

    /// Exact Gram matrix of the round metric: `i!(r−i)!/(r+1)!` on the diagonal.
    pub fn round(r: usize) -> Self {
        let h: Vec<f64> = (0..=r).map(|i| 1.0 / ((r + 1) as f64 * binomial(r, i))).collect();
        Self::diagonal_from(&h).expect("round Gram is positive")
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.m.nrows();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..=self.r).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn condition(&self) -> f64 {
        let e = self.m.clone().symmetric_eigen().eigenvalues;
        let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
        hi / lo
    }

    pub fn log_det(&self) -> f64 {
        let l = self.m.clone().cholesky().expect("Gram is positive").l();
        2.0 * (0..=self.r).map(|i| l[(i, i)].re.ln()).sum::<f64>()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { r: self.r, m: &self.m * Complex64::new(s, 0.0) }
    }

    /// `U·G·U*`, the Gram matrix in the basis changed by `U`.
    pub fn conjugated(&self, u: &CMat) -> Self {
        let m = u * &self.m * u.adjoint();
        Self { r: self.r, m: (&m + m.adjoint()) * Complex64::new(0.5, 0.0) }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    fn checked(&self) -> Result<(), MetricError> {
        let c = self.condition();
        if !(c <= MAX_CONDITION) {
            return Err(MetricError::IllConditioned { condition: c });
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Grid fine enough for `gram(φ, r)`.
pub fn grid_for(phi: &MetricPotential, r: usize) -> Grid {
    if phi.is_zonal() {
        Grid::zonal(default_order(r))
    } else {
        Grid::new(default_order(r), default_angles(r))
    }
}

pub fn gram(phi: &MetricPotential, r: usize) -> Result<GramMatrix, MetricError> {
    gram_on(phi, r, &grid_for(phi, r))
}

/// `G_ij = ∫ sᵢ s̄ⱼ e^{−rφ} ω_φ` with `sᵢ` the round-normalised monomials.
pub fn gram_on(phi: &MetricPotential, r: usize, grid: &Grid) -> Result<GramMatrix, MetricError> {
    if r == 0 {
        return Err(MetricError::DegreeTooSmall);
    }
    phi.validate(grid)?;
    let weight = |n: &Node| n.weight * (-(r as f64) * phi.value(n.w, n.theta)).exp() * phi.density(n.w, n.theta);
    let m = if grid.is_zonal() {
        let mut h = vec![0.0; r + 1];
        for n in grid.nodes() {
            let wt = weight(&n);
            for (hi, mi) in h.iter_mut().zip(monomial_weights(r, n.y())) {
                *hi += wt * mi;
            }
        }
        CMat::from_diagonal(&DVector::from_iterator(r + 1, h.into_iter().map(|x| Complex64::new(x, 0.0))))
    } else {
        let mut m = CMat::zeros(r + 1, r + 1);
        for n in grid.nodes() {
            let wt = weight(&n);
            let v = sections(r, n.y(), n.theta);
            for i in 0..=r {
                for j in i..=r {
                    m[(i, j)] += v[i] * v[j].conj() * wt;
                }
            }
        }
        for i in 0..=r {
            for j in 0..i {
                m[(i, j)] = m[(j, i)].conj();
            }
        }
        m
    };
    GramMatrix::new(m)
}

/// The Fubini–Study metric pulled back by the embedding given by an
/// orthonormal basis of a Gram matrix, normalised to lie in `c₁(O(1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FsMetric {
    r: usize,
    kind: FsKind,
}

#[derive(Debug, Clone, PartialEq)]
enum FsKind {
    /// Entries of `G⁻¹`.
    Diagonal(Vec<f64>),
    /// Cholesky factor of `G`.
    Full(CMat),
}

impl FsMetric {
    pub fn from_gram(g: &GramMatrix) -> Result<Self, MetricError> {
        g.checked()?;
        let kind = if g.is_diagonal() {
            FsKind::Diagonal(g.diagonal().iter().map(|h| 1.0 / h).collect())
        } else {
            FsKind::Full(g.m.clone().cholesky().ok_or(MetricError::NotPositive)?.l())
        };
        Ok(Self { r: g.r, kind })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.kind, FsKind::Diagonal(_))
    }

    fn solve(l: &CMat, v: Vec<Complex64>) -> DVector<Complex64> {
        let mut x = DVector::from_vec(v);
        l.solve_lower_triangular_mut(&mut x);
        x
    }

    /// `Σ |uₐ|²` for an orthonormal basis `uₐ`, measured in the round metric.
    pub fn kernel(&self, y: f64, theta: f64) -> f64 {
        match &self.kind {
            FsKind::Diagonal(k) => k.iter().zip(monomial_weights(self.r, y)).map(|(a, b)| a * b).sum(),
            FsKind::Full(l) => Self::solve(l, sections(self.r, y, theta)).norm_squared(),
        }
    }

    /// Potential of the induced metric relative to the round one.
    pub fn potential(&self, y: f64, theta: f64) -> f64 {
        self.kernel(y, theta).ln() / self.r as f64
    }

    /// Density of the induced area form against the round one,
    /// `(1 + |z|²)²·(|f|²|f'|² − |⟨f', f⟩|²)/(r·|f|⁴)` for the embedding `f`.
    pub fn density(&self, y: f64, theta: f64) -> f64 {
        let r = self.r;
        match &self.kind {
            FsKind::Diagonal(k) => {
                // Expanded as a sum of nonnegative terms to avoid cancellation.
                let mut num = 0.0;
                for i in 0..=r {
                    for j in i + 1..=r {
                        let e = (i + j) as i32;
                        num += ((j - i) * (j - i)) as f64 * k[i] * k[j] * y.powi(e - 1) * (1.0 - y).powi(2 * r as i32 - 1 - e);
                    }
                }
                let b = self.kernel(y, theta);
                num / (r as f64 * b * b)
            }
            FsKind::Full(l) => {
                let f = Self::solve(l, sections(r, y, theta));
                // Derivative of the sections in whichever chart keeps them bounded.
                let d: Vec<Complex64> = (0..=r)
                    .map(|i| {
                        let (c, p) = if y <= 0.5 { (i, i as f64 - 1.0) } else { (r - i, i as f64 + 1.0) };
                        if c == 0 {
                            return Complex64::new(0.0, 0.0);
                        }
                        let mag = c as f64 * y.powf((i as f64 - 1.0) / 2.0) * (1.0 - y).powf((r as f64 - i as f64 - 1.0) / 2.0);
                        Complex64::from_polar(mag, p * theta)
                    })
                    .collect();
                let fd = Self::solve(l, d);
                let s0 = f.norm_squared();
                let c = f.dotc(&fd) / s0;
                let proj = fd - f * c;
                proj.norm_squared() / (r as f64 * s0)
            }
        }
    }

    pub fn into_potential(self) -> MetricPotential {
        MetricPotential::Fs(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BergmanProfile {
    pub r: usize,
    pub w: Vec<f64>,
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
    /// `∫ B ω_φ`, which equals `r + 1`.
    pub integral: f64,
}

/// `B(x) = e^{−rφ} Σ |sᵢ(x)|²` for a `G`-orthonormal basis, at arbitrary points
/// `(w, θ)`.
pub fn bergman_at(phi: &MetricPotential, g: &GramMatrix, points: &[(f64, f64)]) -> Result<Vec<f64>, MetricError> {
    let fs = FsMetric::from_gram(g)?;
    let r = g.r as f64;
    Ok(points.iter().map(|&(w, t)| (-r * phi.value(w, t)).exp() * fs.kernel((1.0 + w) / 2.0, t)).collect())
}

pub fn bergman(phi: &MetricPotential, g: &GramMatrix, grid: &Grid) -> Result<BergmanProfile, MetricError> {
    let nodes: Vec<Node> = grid.nodes().collect();
    let pts: Vec<(f64, f64)> = nodes.iter().map(|n| (n.w, n.theta)).collect();
    let values = bergman_at(phi, g, &pts)?;
    let integral = nodes.iter().zip(&values).map(|(n, b)| n.weight * b * phi.density(n.w, n.theta)).sum();
    Ok(BergmanProfile { r: g.r, w: pts.iter().map(|p| p.0).collect(), theta: pts.iter().map(|p| p.1).collect(), values, integral })
}

/// Gram matrix of the Fubini–Study metric induced by `G`, taken against its own
/// area form and rescaled to `exp(log_det)`. Fixed points are balanced.
pub fn t_operator(g: &GramMatrix, log_det: f64) -> Result<GramMatrix, MetricError> {
    let fs = FsMetric::from_gram(g)?;
    let r = g.r;
    let grid = if fs.is_diagonal() { Grid::zonal(default_order(r)) } else { Grid::new(default_order(r), default_angles(r)) };
    let n1 = (r + 1) as f64;
    let m = if fs.is_diagonal() {
        let mut t = vec![0.0; r + 1];
        for n in grid.nodes() {
            let y = n.y();
            let wt = n1 * n.weight * fs.density(y, 0.0) / fs.kernel(y, 0.0);
            for (ti, mi) in t.iter_mut().zip(monomial_weights(r, y)) {
                *ti += wt * mi;
            }
        }
        CMat::from_diagonal(&DVector::from_iterator(r + 1, t.into_iter().map(|x| Complex64::new(x, 0.0))))
    } else {
        let mut m = CMat::zeros(r + 1, r + 1);
        for n in grid.nodes() {
            let y = n.y();
            let wt = n1 * n.weight * fs.density(y, n.theta) / fs.kernel(y, n.theta);
            let v = sections(r, y, n.theta);
            for i in 0..=r {
                for j in i..=r {
                    m[(i, j)] += v[i] * v[j].conj() * wt;
                }
            }
        }
        for i in 0..=r {
            for j in 0..i {
                m[(i, j)] = m[(j, i)].conj();
            }
        }
        m
    };
    let t = GramMatrix::new(m)?;
    let s = ((log_det - t.log_det()) / n1).exp();
    Ok(t.scaled(s))
}

/// Largest entry of `∫ sᵢ s̄ⱼ/|s|² dμ_FS − δᵢⱼ/(r+1)` for the `G`-orthonormal
/// basis, computed as `(L⁻¹·T·L⁻* − I)/(r+1)` with `G = LL*`.
pub fn balance_residual(g: &GramMatrix, t: &GramMatrix) -> f64 {
    let n1 = (g.r + 1) as f64;
    // Compare at matching determinant so the residual is scale free.
    let t = t.scaled(((g.log_det() - t.log_det()) / n1).exp());
    let l = g.m.clone().cholesky().expect("Gram is positive").l();
    let mut x = t.m.clone();
    l.solve_lower_triangular_mut(&mut x);
    let mut y = x.adjoint();
    l.solve_lower_triangular_mut(&mut y);
    let id = CMat::identity(g.r + 1, g.r + 1);
    (y - id).iter().map(|z| z.norm()).fold(0.0, f64::max) / n1
}
