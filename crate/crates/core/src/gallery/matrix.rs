use nalgebra::DMatrix;
use num_complex::Complex64;

use super::GalleryError;
use crate::flow::MomentProblem;

type CMat = DMatrix<Complex64>;

/// Orthonormal basis of `n×n` Hermitian matrices under `⟨X, Y⟩ = Re Tr(XY)`:
/// diagonal units first, then the symmetric and antisymmetric off-diagonal pairs.
pub fn hermitian_basis(n: usize) -> Vec<CMat> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut e = CMat::zeros(n, n);
        e[(j, j)] = Complex64::new(1.0, 0.0);
        out.push(e);
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut e = CMat::zeros(n, n);
            e[(j, k)] = Complex64::new(s, 0.0);
            e[(k, j)] = Complex64::new(s, 0.0);
            out.push(e);
            let mut f = CMat::zeros(n, n);
            f[(j, k)] = Complex64::new(0.0, -s);
            f[(k, j)] = Complex64::new(0.0, s);
            out.push(f);
        }
    }
    out
}

fn coords(x: &CMat, basis: &[CMat]) -> Vec<f64> {
    basis.iter().map(|e| (x * e).trace().re).collect()
}

fn combine(c: &[f64], basis: &[CMat]) -> CMat {
    let n = basis[0].nrows();
    basis.iter().zip(c).fold(CMat::zeros(n, n), |acc, (e, &t)| acc + e * Complex64::new(t, 0.0))
}

/// `exp(iK + H)` from coordinates `(K, H)`.
fn group_element(xi: &[f64], basis: &[CMat]) -> CMat {
    let d = basis.len();
    let k = combine(&xi[..d], basis);
    let h = combine(&xi[d..], basis);
    (k * Complex64::i() + h).exp()
}

fn log_singular_spread(g: &CMat) -> f64 {
    g.singular_values().iter().map(|s| s.ln().abs()).fold(0.0, f64::max)
}

fn frobenius_sq(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Result<CMat, GalleryError> {
    if entries.len() != rows * cols {
        return Err(GalleryError::Shape { rows, cols, got: entries.len() });
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(GalleryError::NonFinite);
    }
    Ok(CMat::from_row_slice(rows, cols, entries))
}

/// `U(r)` acting on `n×r` matrices by `A ↦ A·g⁻¹`-type right multiplication,
/// with moment `A*A − I`. Zeros are the isometric embeddings `C^r → C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomProblem {
    a: CMat,
    basis: Vec<CMat>,
    g: CMat,
    trace_acc: f64,
}

impl HomProblem {
    pub fn new(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self, GalleryError> {
        if rows < cols || cols == 0 {
            return Err(GalleryError::NotTall { rows, cols });
        }
        let a = from_rows(rows, cols, entries)?;
        Ok(Self { a, basis: hermitian_basis(cols), g: CMat::identity(cols, cols), trace_acc: 0.0 })
    }

    pub fn matrix(&self) -> &CMat {
        &self.a
    }
}

impl MomentProblem for HomProblem {
    fn lie_dim(&self) -> usize {
        self.basis.len()
    }

    fn moment(&self) -> Vec<f64> {
        let r = self.a.ncols();
        coords(&(self.a.adjoint() * &self.a - CMat::identity(r, r)), &self.basis)
    }

    fn act(&mut self, xi: &[f64]) {
        let g = group_element(xi, &self.basis);
        self.a = &self.a * &g;
        self.g = &self.g * g;
        // Only the diagonal basis elements have trace.
        self.trace_acc += xi[self.basis.len()..][..self.a.ncols()].iter().sum::<f64>();
    }

    fn magnitude(&self) -> f64 {
        log_singular_spread(&self.g)
    }

    fn log_norm(&self) -> Option<f64> {
        Some(frobenius_sq(&self.a) / 2.0 - self.trace_acc)
    }
}

/// `U(n)` acting on `n×n` matrices by conjugation, with moment `½[A, A*]`.
/// Zeros are the normal matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointProblem {
    a: CMat,
    basis: Vec<CMat>,
    g: CMat,
    defective: bool,
}

impl AdjointProblem {
    pub fn new(n: usize, entries: &[Complex64]) -> Result<Self, GalleryError> {
        if n == 0 {
            return Err(GalleryError::Shape { rows: 0, cols: 0, got: entries.len() });
        }
        let a = from_rows(n, n, entries)?;
        let defective = !diagonalizable(&a);
        Ok(Self { a, basis: hermitian_basis(n), g: CMat::identity(n, n), defective })
    }

    pub fn matrix(&self) -> &CMat {
        &self.a
    }

    /// Whether the starting matrix had a nontrivial Jordan block. Such an
    /// orbit contains no normal matrix, so a flow with `m → 0` has left it.
    pub fn defective(&self) -> bool {
        self.defective
    }
}

/// Clusters eigenvalues and compares algebraic with geometric multiplicity.
fn diagonalizable(a: &CMat) -> bool {
    let n = a.nrows();
    let scale = frobenius_sq(a).sqrt().max(1.0);
    let Some(eig) = a.clone().schur().eigenvalues() else {
        return true;
    };
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let cluster: Vec<usize> = (i..n).filter(|&j| !used[j] && (eig[j] - eig[i]).norm() < 1e-6 * scale).collect();
        for &j in &cluster {
            used[j] = true;
        }
        if cluster.len() < 2 {
            continue;
        }
        let lambda = cluster.iter().map(|&j| eig[j]).sum::<Complex64>() / cluster.len() as f64;
        let shifted = a - CMat::identity(n, n) * lambda;
        let kernel = shifted.singular_values().iter().filter(|s| **s < 1e-7 * scale).count();
        if kernel < cluster.len() {
            return false;
        }
    }
    true
}

/// Characteristic polynomial coefficients `c₀, …, c_{n−1}` of the monic
/// polynomial, by Faddeev–LeVerrier.
pub(crate) fn char_poly(a: &CMat) -> Vec<Complex64> {
    let n = a.nrows();
    let id = CMat::identity(n, n);
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = CMat::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &id * c[n - k + 1];
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c.truncate(n);
    c
}

impl MomentProblem for AdjointProblem {
    fn lie_dim(&self) -> usize {
        self.basis.len()
    }

    fn moment(&self) -> Vec<f64> {
        let ad = self.a.adjoint();
        let comm = (&self.a * &ad - &ad * &self.a) * Complex64::new(0.5, 0.0);
        coords(&comm, &self.basis)
    }

    fn act(&mut self, xi: &[f64]) {
        let g = group_element(xi, &self.basis);
        let inv = g.clone().try_inverse().expect("exponential is invertible");
        self.a = &g * &self.a * inv;
        self.g = g * &self.g;
    }

    fn magnitude(&self) -> f64 {
        log_singular_spread(&self.g)
    }

    fn log_norm(&self) -> Option<f64> {
        Some(frobenius_sq(&self.a) / 4.0)
    }

    fn orbit_escape(&self) -> bool {
        self.defective
    }

    fn conserved(&self) -> Vec<f64> {
        char_poly(&self.a).iter().flat_map(|z| [z.re, z.im]).collect()
    }
}
