//! Oriented integration contours with attached quadrature rules.
//!
//! Three shapes cover every operator in the crate:
//!
//! * `Circle`: positively oriented circle carrying the normalized measure
//!   dz/(2*pi*i*z), discretized by the equispaced circle rule;
//! * `Segment`: straight segment between two complex endpoints carrying the
//!   measure dz, discretized by Gauss-Legendre;
//! * `Wedge`: two rays leaving a vertex at angles +/-theta, oriented from
//!   the upper ray inward and out along the lower ray, carrying dz.

use num_complex::Complex64;

use super::quadrature::{circle_rule, gauss_legendre_real, QuadratureRule};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourKind {
    Circle { radius: f64 },
    Segment { start: Complex64, end: Complex64 },
    Wedge { vertex: Complex64, ray_angle: f64, extent: f64 },
}

#[derive(Debug, Clone)]
pub struct Contour {
    kind: ContourKind,
    order: usize,
    rule: QuadratureRule,
}

impl Contour {
    /// Positively oriented circle of the given radius with `order` nodes.
    pub fn circle(radius: f64, order: usize) -> Result<Self> {
        let rule = circle_rule(order, radius)?;
        Ok(Self { kind: ContourKind::Circle { radius }, order, rule })
    }

    /// Straight segment from `start` to `end` with a Gauss-Legendre rule of
    /// the given order; weights include the complex direction factor.
    pub fn segment(start: Complex64, end: Complex64, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("segment contour needs a positive order".into()));
        }
        let dir = end - start;
        if dir.norm() == 0.0 {
            return Err(Error::InvalidParameter("segment endpoints coincide".into()));
        }
        let (xs, ws) = gauss_legendre_real(order)?;
        let half = dir * 0.5;
        let mid = start + half;
        let nodes = xs.iter().map(|x| mid + half * *x).collect();
        let weights = ws.iter().map(|w| half * *w).collect();
        Ok(Self {
            kind: ContourKind::Segment { start, end },
            order,
            rule: QuadratureRule { nodes, weights, exactness_degree: 2 * order - 1 },
        })
    }

    /// Wedge through `vertex` with rays at angles +/- `ray_angle`, truncated
    /// at arclength `extent`, oriented top to bottom. Each ray carries a
    /// Gauss-Legendre rule with `order` nodes.
    pub fn wedge(vertex: Complex64, ray_angle: f64, extent: f64, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("wedge contour needs a positive order".into()));
        }
        if !(extent > 0.0) {
            return Err(Error::InvalidParameter(format!("wedge extent must be positive, got {extent}")));
        }
        if !(ray_angle > 0.0 && ray_angle < std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!("wedge ray angle out of range: {ray_angle}")));
        }
        let (xs, ws) = gauss_legendre_real(order)?;
        let up = Complex64::from_polar(1.0, ray_angle);
        let down = Complex64::from_polar(1.0, -ray_angle);
        let mut nodes = Vec::with_capacity(2 * order);
        let mut weights = Vec::with_capacity(2 * order);
        // Upper ray traversed from far field toward the vertex.
        for i in (0..order).rev() {
            let r = 0.5 * extent * (xs[i] + 1.0);
            nodes.push(vertex + up * r);
            weights.push(-up * (0.5 * extent * ws[i]));
        }
        // Lower ray traversed from the vertex outward.
        for i in 0..order {
            let r = 0.5 * extent * (xs[i] + 1.0);
            nodes.push(vertex + down * r);
            weights.push(down * (0.5 * extent * ws[i]));
        }
        Ok(Self {
            kind: ContourKind::Wedge { vertex, ray_angle, extent },
            order,
            rule: QuadratureRule { nodes, weights, exactness_degree: 2 * order - 1 },
        })
    }

    /// The same contour with (roughly) half the quadrature order, used for
    /// refinement-based error estimates.
    pub fn halved(&self) -> Result<Self> {
        let order = (self.order / 2).max(2);
        match self.kind {
            ContourKind::Circle { radius } => Self::circle(radius, order),
            ContourKind::Segment { start, end } => Self::segment(start, end, order),
            ContourKind::Wedge { vertex, ray_angle, extent } => {
                Self::wedge(vertex, ray_angle, extent, order)
            }
        }
    }

    pub fn kind(&self) -> ContourKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.rule.nodes
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.rule.weights
    }

    pub fn len(&self) -> usize {
        self.rule.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_nodes_sit_on_the_circle() {
        let c = Contour::circle(1.25, 16).unwrap();
        for z in c.nodes() {
            assert!((z.norm() - 1.25).abs() < 1e-14);
        }
        assert_eq!(c.len(), 16);
    }

    #[test]
    fn segment_reproduces_line_integrals() {
        // Integral of z^2 dz from 0 to 1+i equals (1+i)^3 / 3.
        let end = Complex64::new(1.0, 1.0);
        let c = Contour::segment(Complex64::new(0.0, 0.0), end, 8).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, w) in c.nodes().iter().zip(c.weights()) {
            acc += w * z * z;
        }
        let exact = end * end * end / 3.0;
        assert!((acc - exact).norm() < 1e-14);
    }

    #[test]
    fn wedge_nodes_lie_on_both_rays() {
        let vertex = Complex64::new(1.0, 0.0);
        let c = Contour::wedge(vertex, std::f64::consts::FRAC_PI_3, 5.0, 10).unwrap();
        assert_eq!(c.len(), 20);
        for z in c.nodes() {
            let rel = z - vertex;
            let angle = rel.arg().abs();
            assert!((angle - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
            assert!(rel.norm() <= 5.0 + 1e-12);
        }
    }

    #[test]
    fn wedge_orientation_integrates_analytic_functions_to_zero_difference() {
        // For an entire function decaying on both rays, the wedge integral
        // of its derivative telescopes to f(lower end) - f(upper end);
        // with equal truncation radii and even symmetry it must vanish.
        // On rays at angle +-pi/3 the cube z^3 is ~ -t^3, so exp(z^3/6)
        // decays superexponentially along both rays.
        let c = Contour::wedge(Complex64::new(1.0, 0.0), std::f64::consts::FRAC_PI_3, 6.0, 40).unwrap();
        let f = |z: Complex64| ((z * z * z) / 6.0).exp();
        // d/dz of exp(z^3/6) = z^2/2 * exp(z^3/6)
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, w) in c.nodes().iter().zip(c.weights()) {
            acc += w * ((z * z) / 2.0) * f(*z);
        }
        // Endpoint values at the truncation radius are ~exp(-43), i.e. zero
        // at working precision, so the oriented integral must vanish too.
        assert!(acc.norm() < 1e-11, "oriented wedge integral {acc}");
    }

    #[test]
    fn halving_preserves_kind() {
        let c = Contour::circle(1.0, 32).unwrap();
        let h = c.halved().unwrap();
        assert_eq!(h.order(), 16);
        assert_eq!(h.kind(), c.kind());
    }
}
