//! Random geometric graphs in a square, their Voronoi inner product, and synthetic
//! signals measured at the vertices.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, InnerProduct, InnerProductKind};
use crate::voronoi::{self, Point};

/// Vertex positions in `[0, side]^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub side: f64,
    pub points: Vec<Point>,
}

impl PointCloud {
    pub fn new(side: f64, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("point cloud needs at least one point".into()));
        }
        if !(side > 0.0) {
            return Err(Error::InvalidParameter(format!("side {side} must be positive")));
        }
        if let Some(p) = points.iter().find(|p| p.iter().any(|c| !(0.0..=side).contains(c))) {
            return Err(Error::InvalidParameter(format!("point {p:?} outside the square")));
        }
        Ok(Self { side, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `n` i.i.d. uniform points in `[0, side]^2`; exact duplicates are redrawn.
pub fn sample_points(n: usize, side: f64, rng: &mut impl Rng) -> Result<PointCloud> {
    let mut points: Vec<Point> = Vec::with_capacity(n);
    while points.len() < n {
        let p = [rng.gen::<f64>() * side, rng.gen::<f64>() * side];
        if !points.contains(&p) {
            points.push(p);
        }
    }
    PointCloud::new(side, points)
}

/// Complete graph with `w_ij = exp(-d_ij^2 / (2 sigma^2))`.
pub fn gaussian_kernel_graph(pc: &PointCloud, sigma: f64) -> Result<Graph> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel sigma {sigma} must be positive")));
    }
    let n = pc.len();
    let denom = 2.0 * sigma * sigma;
    let w = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            return 0.0;
        }
        // same operand order for (i, j) and (j, i) keeps W exactly symmetric
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let (p, q) = (pc.points[a], pc.points[b]);
        let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
        (-d2 / denom).exp()
    });
    Graph::new(w)
}

/// Diagonal inner product of Voronoi cell areas clipped to the square.
pub fn voronoi_areas(pc: &PointCloud) -> Result<InnerProduct> {
    let areas = voronoi::cell_areas(&pc.points, pc.side)?;
    InnerProduct::from_diagonal(InnerProductKind::VoronoiArea, DVector::from_vec(areas))
}

/// Horizontal sinewave with `cycles` periods across the square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub cycles: u32,
}

impl SignalSpec {
    pub fn new(cycles: u32) -> Result<Self> {
        if cycles == 0 {
            return Err(Error::InvalidParameter("signal needs at least one cycle".into()));
        }
        Ok(Self { cycles })
    }

    /// Spatial frequency in cycles per length unit.
    pub fn frequency(&self, side: f64) -> f64 {
        f64::from(self.cycles) / side
    }
}

/// `x_i = sin(2π ω p_i.x)`
pub fn sinewave_signal(pc: &PointCloud, spec: SignalSpec) -> DVector<f64> {
    let omega = spec.frequency(pc.side);
    DVector::from_iterator(
        pc.len(),
        pc.points.iter().map(|p| (2.0 * std::f64::consts::PI * omega * p[0]).sin()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
}

impl NoiseSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise sigma {sigma} must be >= 0")));
        }
        Ok(Self { sigma })
    }
}

/// Standard normal draws by the Box–Muller transform, using both outputs of each pair.
#[derive(Debug, Default)]
pub struct BoxMuller {
    spare: Option<f64>,
}

impl BoxMuller {
    pub fn sample(&mut self, rng: &mut impl Rng) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = 1.0 - rng.gen::<f64>();
        let u2 = rng.gen::<f64>();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// `x + n` with i.i.d. `n_i ~ N(0, sigma^2)`; returns `x` unchanged when `sigma = 0`.
pub fn add_noise(x: &DVector<f64>, spec: NoiseSpec, rng: &mut impl Rng) -> DVector<f64> {
    if spec.sigma == 0.0 {
        return x.clone();
    }
    let mut normal = BoxMuller::default();
    x.map(|v| v + spec.sigma * normal.sample(rng))
}
