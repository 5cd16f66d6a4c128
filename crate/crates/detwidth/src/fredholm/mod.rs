//! Fredholm determinants det(1 + K) of trace-class kernels by Nystrom
//! discretization, and the kernels that relate determinants over finite
//! node sets to their continuous counterparts.
//!
//! The conversion kernels act on a pair of contours sandwiching the node
//! set (two circles around the unit circle, or two horizontal lines around
//! the real axis) and factor as `K(z, w) * v(w) * f(w)`, where `K` is a
//! Christoffel-Darboux kernel of the continuous weight including its `b`
//! factor, `f` is the bare weight, and `v` is a rational correction
//! carrying the residue bookkeeping of the node-set counting function.

pub mod airy;

use num_complex::Complex64;

use crate::dets::NodeSetKind;
use crate::numerics::{det_lu_full, ComplexMatrix, Contour};
use crate::orthopoly::{
    build_circle_basis, build_line_basis, cd_kernel_circle, cd_kernel_line, Support, WeightSymbol,
};
use crate::{Error, Result};

/// How the per-column weight enters the Nystrom matrix. The determinant is
/// identical either way (diagonal conjugation); the balanced form keeps
/// entries O(1) when the weight spans many orders of magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assembly {
    /// I + diag(g) K diag(g) with g_i = sqrt(w_i * mult_i).
    BalancedSqrt,
    /// I + K(z_i, z_j) * mult_j * w_j.
    RowMultiplier,
}

/// A Nystrom determinant with an order-halving error estimate.
#[derive(Debug, Clone, Copy)]
pub struct NystromResult {
    pub value: Complex64,
    pub log_abs: f64,
    /// |det(full order) - det(halved order)|.
    pub err_estimate: f64,
    /// Total node count of the full-order discretization.
    pub nodes_used: usize,
}

fn assemble_det(
    contours: &[Contour],
    kernel: &dyn Fn(Complex64, Complex64) -> Complex64,
    multiplier: &dyn Fn(Complex64) -> Complex64,
    assembly: Assembly,
) -> Result<(Complex64, f64, usize)> {
    let mut nodes: Vec<Complex64> = Vec::new();
    let mut weights: Vec<Complex64> = Vec::new();
    for c in contours {
        nodes.extend_from_slice(c.nodes());
        weights.extend_from_slice(c.weights());
    }
    let n = nodes.len();
    let mults: Vec<Complex64> = nodes.iter().map(|z| multiplier(*z)).collect();
    for (z, m) in nodes.iter().zip(&mults) {
        if !m.is_finite() {
            return Err(Error::KernelEval { z: *z, w: *z });
        }
    }
    let mut mat = ComplexMatrix::identity(n);
    match assembly {
        Assembly::BalancedSqrt => {
            let g: Vec<Complex64> =
                weights.iter().zip(&mults).map(|(w, m)| (w * m).sqrt()).collect();
            for i in 0..n {
                if g[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    if g[j] == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let k = kernel(nodes[i], nodes[j]);
                    if !k.is_finite() {
                        return Err(Error::KernelEval { z: nodes[i], w: nodes[j] });
                    }
                    let v = mat.get(i, j) + g[i] * k * g[j];
                    mat.set(i, j, v);
                }
            }
        }
        Assembly::RowMultiplier => {
            for i in 0..n {
                for j in 0..n {
                    let col = mults[j] * weights[j];
                    if col == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let k = kernel(nodes[i], nodes[j]);
                    if !k.is_finite() {
                        return Err(Error::KernelEval { z: nodes[i], w: nodes[j] });
                    }
                    let v = mat.get(i, j) + k * col;
                    mat.set(i, j, v);
                }
            }
        }
    }
    let det = det_lu_full(&mat)?;
    Ok((det.value, det.log_abs, n))
}

/// det(1 + K M) over the union of `contours`, where the operator acts as
/// `integral K(z, w) multiplier(w) g(w) dmu(w)` with each contour carrying
/// its own measure. The error estimate re-solves at half the quadrature
/// order.
pub fn fredholm_det(
    contours: &[Contour],
    kernel: &dyn Fn(Complex64, Complex64) -> Complex64,
    multiplier: &dyn Fn(Complex64) -> Complex64,
    assembly: Assembly,
) -> Result<NystromResult> {
    let (value, log_abs, nodes_used) = assemble_det(contours, kernel, multiplier, assembly)?;
    let halved: Vec<Contour> = contours.iter().map(|c| c.halved()).collect::<Result<Vec<_>>>()?;
    let (value_half, _, _) = assemble_det(&halved, kernel, multiplier, assembly)?;
    Ok(NystromResult { value, log_abs, err_estimate: (value - value_half).norm(), nodes_used })
}

/// Correction weight on the circle pair for the counting function
/// gamma(z) = z^m - s: `w/(s-w)` inside, `s/(w-s) + (1 - b(z))` outside,
/// with w = z^m.
pub fn v_circle(m: usize, s: Complex64, b_at_z: Complex64, outer: bool, z: Complex64) -> Complex64 {
    let w = z.powu(m as u32);
    if outer {
        s / (w - s) + (Complex64::new(1.0, 0.0) - b_at_z)
    } else {
        w / (s - w)
    }
}

/// Correction weight on the horizontal lines Im z = +-delta/2 for the
/// counting function gamma(z) = sin(pi (d z + s)) against the continuous
/// reference b dx (b a positive constant, usually d itself):
/// `((d - b) + (d + b) e) / (2 (1 - e))` with e = exp(+-2 pi i (d z + s)),
/// the sign chosen so |e| < 1 on the corresponding line.
pub fn v_line(d: f64, s: f64, b: f64, upper: bool, z: Complex64) -> Complex64 {
    let two_i_alpha = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * (z * d + s);
    let e = if upper { two_i_alpha.exp() } else { (-two_i_alpha).exp() };
    (Complex64::new(d - b, 0.0) + e * (d + b)) / ((Complex64::new(1.0, 0.0) - e) * 2.0)
}

/// Contour parameters for the circle-pair conversion determinant.
#[derive(Debug, Clone, Copy)]
pub struct CirclePairParams {
    pub r_in: f64,
    pub r_out: f64,
    pub order: usize,
}

/// Radii placing z^m at modulus 0.1 / 10 and a quadrature order that
/// resolves the pole layer on the unit circle.
pub fn circle_pair_defaults(f: &WeightSymbol, m: usize, n: usize) -> CirclePairParams {
    CirclePairParams {
        r_in: 0.1f64.powf(1.0 / m as f64),
        r_out: 10f64.powf(1.0 / m as f64),
        order: (10 * m + 4 * n + 2 * f.fourier_bandwidth()).max(64),
    }
}

/// Fredholm factor converting the order-n continuous Toeplitz determinant
/// of f*b into the discrete one over the zeros of z^m - s: the kernel is
/// the degree-n circle Christoffel-Darboux kernel of f*b times v*f on a
/// circle pair sandwiching the unit circle, with measure dz/(2 pi i z).
pub fn thm1_fredholm(
    f: &WeightSymbol,
    kind: &NodeSetKind,
    n: usize,
    params: &CirclePairParams,
    assembly: Assembly,
) -> Result<NystromResult> {
    if f.support != Support::Circle {
        return Err(Error::InvalidParameter("circle node sets need a circle weight".into()));
    }
    let (m, s) = match kind {
        NodeSetKind::RootsOfUnity { m } => (*m, Complex64::new(1.0, 0.0)),
        NodeSetKind::RotatedRoots { m, s } => (*m, *s),
        NodeSetKind::ShiftedLattice { .. } => {
            return Err(Error::InvalidParameter(
                "lattice node sets live on the line; use the line conversion".into(),
            ))
        }
    };
    if n == 0 {
        return Ok(NystromResult { value: Complex64::new(1.0, 0.0), log_abs: 0.0, err_estimate: 0.0, nodes_used: 0 });
    }
    if !(params.r_in < 1.0 && params.r_out > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "circle pair must sandwich the unit circle, got r_in={}, r_out={}",
            params.r_in, params.r_out
        )));
    }
    let basis = build_circle_basis(f, n, f.circle_quad_order(n))?;
    let contours = [
        Contour::circle(params.r_in, params.order)?,
        Contour::circle(params.r_out, params.order)?,
    ];
    let kernel = |z: Complex64, w: Complex64| cd_kernel_circle(&basis, n, z, w);
    let multiplier = |z: Complex64| {
        let outer = z.norm() > 1.0;
        v_circle(m, s, f.eval_b(z), outer, z) * f.eval(z)
    };
    fredholm_det(&contours, &kernel, &multiplier, assembly)
}

/// Contour parameters for the line-pair conversion determinant.
#[derive(Debug, Clone, Copy)]
pub struct LinePairParams {
    /// Vertical separation of the two lines (each sits at +-delta/2).
    pub delta: f64,
    /// Horizontal truncation: lines run over [-half_len, half_len].
    pub half_len: f64,
    /// Gauss-Legendre order per line.
    pub order: usize,
}

/// Gauss-Legendre order per line that resolves the lattice pole layer a
/// vertical distance delta/2 away: the error decays like
/// exp(-order * delta / half_len), so `digits` decimal digits need
/// order >= digits ln(10) half_len / delta.
pub fn line_pair_order(half_len: f64, delta: f64, digits: f64) -> usize {
    (digits * std::f64::consts::LN_10 * half_len / delta).ceil() as usize + 16
}

/// Fredholm factor converting the order-n continuous Hankel determinant of
/// f*b into the plain-sum discrete one over the lattice (k - s)/d: the
/// kernel is the degree-n line Christoffel-Darboux kernel of f*b times v*f
/// on the lines Im z = +-delta/2, both oriented left to right, measure dz.
pub fn thm2_fredholm(
    f: &WeightSymbol,
    d: f64,
    s: f64,
    n: usize,
    params: &LinePairParams,
    assembly: Assembly,
) -> Result<NystromResult> {
    if f.support != Support::Line {
        return Err(Error::InvalidParameter("lattice node sets need a line weight".into()));
    }
    if !(d > 0.0 && params.delta > 0.0 && params.half_len > 0.0) {
        return Err(Error::InvalidParameter("line pair needs positive d, delta, half_len".into()));
    }
    if n == 0 {
        return Ok(NystromResult { value: Complex64::new(1.0, 0.0), log_abs: 0.0, err_estimate: 0.0, nodes_used: 0 });
    }
    let b = match &f.b_factor {
        None => 1.0,
        Some(crate::orthopoly::WeightForm::Constant(c)) => *c,
        Some(other) => {
            return Err(Error::InvalidParameter(format!(
                "line conversion supports constant b factors only, got {other:?}"
            )))
        }
    };
    let basis = build_line_basis(f, n, 1.5 * params.half_len, 2 * params.order + 4 * n)?;
    let half_delta = 0.5 * params.delta;
    let contours = [
        Contour::segment(
            Complex64::new(-params.half_len, half_delta),
            Complex64::new(params.half_len, half_delta),
            params.order,
        )?,
        Contour::segment(
            Complex64::new(-params.half_len, -half_delta),
            Complex64::new(params.half_len, -half_delta),
            params.order,
        )?,
    ];
    let kernel = |z: Complex64, w: Complex64| cd_kernel_line(&basis, n, z, w);
    let multiplier = |z: Complex64| v_line(d, s, b, z.im > 0.0, z) * f.eval(z);
    fredholm_det(&contours, &kernel, &multiplier, assembly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dets::{
        continuous_hankel, continuous_toeplitz, discrete_hankel, discrete_toeplitz,
        gaussian_quad_order, DiscreteNodeSet,
    };

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn circle_conversion_is_exactly_one_for_degree_one_constant_weight() {
        // For f = 1 and n = 1 both v-contour integrals of the constant
        // kernel vanish against dz/(2 pi i z) except for the z^0 residue on
        // the outer circle, which cancels for b = 1.
        let f = WeightSymbol::constant(Support::Circle, 1.0).unwrap();
        let kind = NodeSetKind::RootsOfUnity { m: 4 };
        let params = circle_pair_defaults(&f, 4, 1);
        let det = thm1_fredholm(&f, &kind, 1, &params, Assembly::BalancedSqrt).unwrap();
        assert!((det.value - one()).norm() < 1e-10, "{}", det.value);
    }

    #[test]
    fn circle_conversion_halves_for_constant_b_two() {
        // Same setup with b = 2: the outer residue contributes 1 - b = -1
        // against the rank-one kernel 1/2, so det = 1/2 and the identity
        // reads T_1(f, D) = T_1(2 f) * 1/2.
        let f = WeightSymbol::constant(Support::Circle, 1.0).unwrap().with_b_constant(2.0).unwrap();
        let kind = NodeSetKind::RootsOfUnity { m: 4 };
        let params = circle_pair_defaults(&f, 4, 1);
        let det = thm1_fredholm(&f, &kind, 1, &params, Assembly::BalancedSqrt).unwrap();
        assert!((det.value - Complex64::new(0.5, 0.0)).norm() < 1e-10, "{}", det.value);
    }

    #[test]
    fn circle_conversion_reproduces_discrete_to_continuous_ratio() {
        let f = WeightSymbol::exp_cosh(0.8).unwrap();
        let m = 5;
        let nodes = DiscreteNodeSet::roots_of_unity(m).unwrap();
        let kind = nodes.kind().clone();
        for n in [1usize, 2, 3] {
            let disc = discrete_toeplitz(&f, &nodes, n).unwrap();
            let cont = continuous_toeplitz(&f, n, f.circle_quad_order(n)).unwrap();
            let ratio = disc.value / cont.value;
            let params = circle_pair_defaults(&f, m, n);
            let det = thm1_fredholm(&f, &kind, n, &params, Assembly::BalancedSqrt).unwrap();
            assert!(
                (det.value - ratio).norm() < 1e-8 * ratio.norm().max(1.0),
                "n={n}: det {} vs ratio {ratio}",
                det.value
            );
            assert!(det.err_estimate < 1e-8, "n={n} err {}", det.err_estimate);
        }
    }

    #[test]
    fn circle_conversion_with_rotated_roots() {
        let f = WeightSymbol::exp_cosh(0.6).unwrap();
        let s = Complex64::from_polar(1.0, 1.1);
        let m = 4;
        let nodes = DiscreteNodeSet::rotated_roots(m, s).unwrap();
        let disc = discrete_toeplitz(&f, &nodes, 2).unwrap();
        let cont = continuous_toeplitz(&f, 2, f.circle_quad_order(2)).unwrap();
        let ratio = disc.value / cont.value;
        let params = circle_pair_defaults(&f, m, 2);
        let det = thm1_fredholm(&f, nodes.kind(), 2, &params, Assembly::BalancedSqrt).unwrap();
        assert!((det.value - ratio).norm() < 1e-8 * ratio.norm().max(1.0));
    }

    #[test]
    fn circle_conversion_with_b_factor() {
        // T_n(f, D) = T_n(f b) det(1 + K) with constant b = 2.
        let f = WeightSymbol::exp_cosh(1.0).unwrap().with_b_constant(2.0).unwrap();
        let m = 5;
        let n = 2;
        let nodes = DiscreteNodeSet::roots_of_unity(m).unwrap();
        // Discrete side uses f alone.
        let f_plain = WeightSymbol::exp_cosh(1.0).unwrap();
        let disc = discrete_toeplitz(&f_plain, &nodes, n).unwrap();
        // Continuous side uses f*b.
        let cont = continuous_toeplitz(&f, n, f.circle_quad_order(n)).unwrap();
        let params = circle_pair_defaults(&f, m, n);
        let det = thm1_fredholm(&f, nodes.kind(), n, &params, Assembly::BalancedSqrt).unwrap();
        let lhs = disc.value;
        let rhs = cont.value * det.value;
        assert!((lhs - rhs).norm() < 1e-8 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn assemblies_agree() {
        let f = WeightSymbol::exp_cosh(0.9).unwrap();
        let kind = NodeSetKind::RootsOfUnity { m: 4 };
        let params = circle_pair_defaults(&f, 4, 2);
        let a = thm1_fredholm(&f, &kind, 2, &params, Assembly::BalancedSqrt).unwrap();
        let b = thm1_fredholm(&f, &kind, 2, &params, Assembly::RowMultiplier).unwrap();
        assert!((a.value - b.value).norm() < 1e-11 * a.value.norm().max(1.0));
    }

    fn line_case(n: usize, d: f64, s: f64, delta: f64) -> (Complex64, Complex64) {
        // Returns (discrete Hankel, continuous-with-b Hankel * det(1+K)).
        let a = 2.0;
        let f = WeightSymbol::gaussian(a).unwrap().with_b_constant(d).unwrap();
        let f_plain = WeightSymbol::gaussian(a).unwrap();
        let ext = 5.5;
        let nodes = DiscreteNodeSet::shifted_lattice(d, s, ext).unwrap();
        let disc = discrete_hankel(&f_plain, &nodes, n).unwrap();
        let quad = gaussian_quad_order(a, ext, 2 * n - 2);
        let cont = continuous_hankel(&f, n, ext, quad).unwrap();
        let half_len = ext + 1.0 / d;
        let order = line_pair_order(half_len, delta, 10.0);
        let params = LinePairParams { delta, half_len, order };
        let det = thm2_fredholm(&f, d, s, n, &params, Assembly::BalancedSqrt).unwrap();
        (disc.value, cont.value * det.value)
    }

    #[test]
    fn line_conversion_reproduces_hankel_ratio() {
        for n in [1usize, 2, 3] {
            let (lhs, rhs) = line_case(n, 1.3, 0.3, 0.5);
            assert!(
                (lhs - rhs).norm() < 3e-8 * lhs.norm().max(1e-30),
                "n={n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn line_conversion_is_independent_of_delta() {
        let f = WeightSymbol::gaussian(2.0).unwrap().with_b_constant(1.0).unwrap();
        let half_len = 6.3;
        let params_a = LinePairParams { delta: 0.5, half_len, order: line_pair_order(half_len, 0.5, 10.0) };
        let params_b = LinePairParams { delta: 1.0, half_len, order: line_pair_order(half_len, 1.0, 10.0) };
        let a = thm2_fredholm(&f, 1.0, 0.25, 2, &params_a, Assembly::BalancedSqrt).unwrap();
        let b = thm2_fredholm(&f, 1.0, 0.25, 2, &params_b, Assembly::BalancedSqrt).unwrap();
        assert!((a.value - b.value).norm() < 5e-9 * a.value.norm().max(1.0), "{} vs {}", a.value, b.value);
    }

    #[test]
    fn line_conversion_assemblies_agree() {
        let f = WeightSymbol::gaussian(1.5).unwrap().with_b_constant(1.2).unwrap();
        let params = LinePairParams { delta: 0.5, half_len: 6.5, order: 160 };
        let a = thm2_fredholm(&f, 1.2, 0.1, 2, &params, Assembly::BalancedSqrt).unwrap();
        let b = thm2_fredholm(&f, 1.2, 0.1, 2, &params, Assembly::RowMultiplier).unwrap();
        assert!((a.value - b.value).norm() < 1e-10 * a.value.norm().max(1.0));
    }

    #[test]
    fn v_line_matches_cotangent_form() {
        // The exponential form equals -(d/2i) cot(alpha) - b/2 above the
        // axis and (d/2i) cot(alpha) - b/2 below it.
        let (d, s, b) = (1.4, 0.3, 0.9);
        for (upper, im) in [(true, 0.35), (false, -0.35)] {
            for k in 0..5 {
                let z = Complex64::new(-1.0 + 0.6 * k as f64, im);
                let alpha = (z * d + s) * std::f64::consts::PI;
                let cot = alpha.cos() / alpha.sin();
                let direct = if upper {
                    -cot * Complex64::new(0.0, -0.5 * d) - 0.5 * b
                } else {
                    cot * Complex64::new(0.0, -0.5 * d) - 0.5 * b
                };
                let v = v_line(d, s, b, upper, z);
                assert!((v - direct).norm() < 1e-12 * (1.0 + direct.norm()), "z={z}: {v} vs {direct}");
            }
        }
    }

    #[test]
    fn kernel_eval_guard_reports_nodes() {
        let contours = [Contour::circle(0.5, 8).unwrap()];
        let kernel = |_z: Complex64, _w: Complex64| Complex64::new(f64::NAN, 0.0);
        let multiplier = |_z: Complex64| Complex64::new(1.0, 0.0);
        let err = fredholm_det(&contours, &kernel, &multiplier, Assembly::BalancedSqrt).unwrap_err();
        assert!(matches!(err, Error::KernelEval { .. }));
    }
}
