//! Quadrature rules: equispaced nodes on circles and Gauss-Legendre on
//! segments.
//!
//! The circle rule integrates against the normalized measure dz/(2*pi*i*z),
//! under which it is exact on Laurent monomials z^k for |k| < m regardless
//! of the radius. Gauss-Legendre rules integrate against dx on [a, b] and
//! are exact through polynomial degree 2n - 1.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Nodes and weights of a fixed quadrature rule.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    /// Largest (Laurent or polynomial) degree integrated exactly.
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(*z);
        }
        acc
    }
}

/// The m-point rule for contour averages over a circle of the given radius,
/// i.e. for integrals against dz/(2*pi*i*z).
pub fn circle_rule(m: usize, radius: f64) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::InvalidParameter("circle rule needs at least one node".into()));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("circle radius must be positive, got {radius}")));
    }
    let w = Complex64::new(1.0 / m as f64, 0.0);
    let nodes = (0..m)
        .map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / m as f64))
        .collect();
    Ok(QuadratureRule { nodes, weights: vec![w; m], exactness_degree: m - 1 })
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre_real(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("Gauss-Legendre rule needs at least one node".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess followed by Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..60 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d2) = legendre_pair(n, x);
                dp = d2;
                break;
            }
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Ok((nodes, weights))
}

/// Gauss-Legendre rule on the real interval [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if !(a < b) {
        return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    let (xs, ws) = gauss_legendre_real(n)?;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let nodes = xs.iter().map(|x| Complex64::new(mid + half * x, 0.0)).collect();
    let weights = ws.iter().map(|w| Complex64::new(half * w, 0.0)).collect();
    Ok(QuadratureRule { nodes, weights, exactness_degree: 2 * n - 1 })
}

/// Value and derivative of the Legendre polynomial P_n at x.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}
