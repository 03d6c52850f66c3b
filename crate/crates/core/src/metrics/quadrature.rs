use gauss_quad::GaussLegendre;

/// Product rule on the sphere in coordinates `w = 2y − 1 ∈ [−1, 1]` (the height
/// `(|z|² − 1)/(|z|² + 1)`) and angle `θ`: Gauss–Legendre in `w`, trapezoid in
/// `θ`. Weights are for the area-one measure `dw·dθ/4π`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    w: Vec<f64>,
    w_weight: Vec<f64>,
    theta: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub w: f64,
    pub theta: f64,
    pub weight: f64,
}

impl Node {
    /// `|z|²/(1 + |z|²)`.
    pub fn y(&self) -> f64 {
        (1.0 + self.w) / 2.0
    }
}

pub fn default_order(r: usize) -> usize {
    usize::max(64, 2 * r + 32)
}

pub fn default_angles(r: usize) -> usize {
    4 * r + 36
}

impl Grid {
    /// `angles = 1` gives the rule for functions independent of `θ`.
    pub fn new(order: usize, angles: usize) -> Self {
        let rule = GaussLegendre::new(order.max(2)).expect("order is at least 2");
        let mut pairs = rule.into_node_weight_pairs();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let angles = angles.max(1);
        let theta = (0..angles).map(|k| std::f64::consts::TAU * k as f64 / angles as f64).collect();
        Self { w: pairs.iter().map(|p| p.0).collect(), w_weight: pairs.iter().map(|p| p.1 / 2.0).collect(), theta }
    }

    pub fn zonal(order: usize) -> Self {
        Self::new(order, 1)
    }

    pub fn is_zonal(&self) -> bool {
        self.theta.len() == 1
    }

    pub fn heights(&self) -> &[f64] {
        &self.w
    }

    pub fn angles(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.w.len() * self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes ordered height-major.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        let na = self.theta.len() as f64;
        self.w.iter().zip(&self.w_weight).flat_map(move |(&w, &ww)| {
            self.theta.iter().map(move |&theta| Node { w, theta, weight: ww / na })
        })
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.nodes().zip(values).map(|(n, v)| n.weight * v).sum()
    }
}
