use num_complex::Complex64;

use crate::flow::MomentProblem;

/// `C*` acting on `C²` with weights `(1, −1)` and moment `(|x|² − |y|² + a)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperbola {
    pub x: Complex64,
    pub y: Complex64,
    pub a: f64,
    tau: f64,
    start_norm: f64,
}

impl Hyperbola {
    pub fn new(x: Complex64, y: Complex64, a: f64) -> Self {
        let start_norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
        Self { x, y, a, tau: 0.0, start_norm }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl MomentProblem for Hyperbola {
    fn lie_dim(&self) -> usize {
        1
    }

    fn moment(&self) -> Vec<f64> {
        vec![(self.x.norm_sqr() - self.y.norm_sqr() + self.a) / 2.0]
    }

    fn act(&mut self, xi: &[f64]) {
        let g = Complex64::new(xi[1], xi[0]).exp();
        self.x *= g;
        self.y /= g;
        self.tau += xi[1];
    }

    fn magnitude(&self) -> f64 {
        self.tau.abs()
    }

    fn log_norm(&self) -> Option<f64> {
        Some((self.x.norm_sqr() + self.y.norm_sqr()) / 4.0 + self.a * self.tau / 2.0)
    }

    /// On the axes the orbit is a punctured line; a flow heading into the
    /// origin has left it.
    fn orbit_escape(&self) -> bool {
        let on_axis = self.x == Complex64::new(0.0, 0.0) || self.y == Complex64::new(0.0, 0.0);
        let now = (self.x.norm_sqr() + self.y.norm_sqr()).sqrt();
        on_axis && self.start_norm > 0.0 && now < 1e-3 * self.start_norm
    }

    fn conserved(&self) -> Vec<f64> {
        let p = self.x * self.y;
        vec![p.re, p.im]
    }
}
