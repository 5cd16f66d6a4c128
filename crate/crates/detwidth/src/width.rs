//! Exact width distributions of three non-intersecting path ensembles.
//!
//! Each cumulative distribution is an average, over a circle or an interval
//! of lattice offsets `s`, of a ratio discrete-determinant / continuous-
//! determinant:
//!
//! * Brownian bridges: P(width < M) = (h^n / H_n(F)) Int_0^1 H_n(F, D_s) ds
//!   with F(x) = exp(-n x^2), lattice D_s = { h (m - s) : m integer },
//!   h = sqrt(2) pi / (M sqrt(n)). Evaluated either through the
//!   orthonormal-Hermite Gram matrix (the ratio equals det[h * sum_x
//!   p_j(x) p_k(x) F(x)], an identity-plus-small matrix that stays
//!   perfectly conditioned) or, for large n, through the line-lattice
//!   Fredholm factor with contour separation delta = 2 n^(-1/3).
//! * Continuous-time walks: P(width(T) < M) averages the rotated-roots
//!   Toeplitz ratio of f(z) = exp((T/2)(z + 1/z)) over s on |s| = 1.
//! * Discrete-time walks: the same with f(z) = z^(-T) (1 + z)^(2T), where
//!   every quadrature involved is exact past the polynomial bandwidth.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::dets::{
    discrete_toeplitz, continuous_toeplitz, gaussian_half_extent, DetResult, DiscreteNodeSet,
};
use crate::fredholm::{line_pair_order, thm2_fredholm, Assembly, LinePairParams};
use crate::numerics::{det_lu_full, gauss_legendre_real, ComplexMatrix};
use crate::orthopoly::{build_line_basis, WeightSymbol};
use crate::{Error, Result};

/// Which conditioned ensemble a width distribution refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcessKind {
    /// n Brownian bridges on [0,1], pinned to 0 at both ends, strictly
    /// ordered in between; width = sup over time of (top - bottom).
    BrownianBridge { n: usize },
    /// n continuous-time symmetric simple random walks started at
    /// 0..n-1, conditioned to return at time T without intersecting.
    CtSsrw { n: usize, t: f64 },
    /// n discrete-time symmetric simple random walks started at
    /// 0, 2, ..., 2n-2, conditioned to return at time 2T; the width is
    /// always even and satisfies 2n - 2 <= width <= 2n - 2 + 2T.
    DtSsrw { n: usize, t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
}

impl ProcessSpec {
    pub fn brownian_bridge(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("ensemble size must be >= 1".into()));
        }
        Ok(ProcessSpec { kind: ProcessKind::BrownianBridge { n } })
    }

    pub fn ct_ssrw(n: usize, t: f64) -> Result<Self> {
        if n == 0 || !(t > 0.0) {
            return Err(Error::InvalidParameter("need n >= 1 and T > 0".into()));
        }
        Ok(ProcessSpec { kind: ProcessKind::CtSsrw { n, t } })
    }

    pub fn dt_ssrw(n: usize, t: usize) -> Result<Self> {
        if n == 0 || t == 0 {
            return Err(Error::InvalidParameter("need n >= 1 and T >= 1".into()));
        }
        Ok(ProcessSpec { kind: ProcessKind::DtSsrw { n, t } })
    }

    /// Deterministic support bounds of the width, when the ensemble has
    /// them: (lower, upper), with None for an unbounded side.
    pub fn width_support(&self) -> (Option<f64>, Option<f64>) {
        match self.kind {
            ProcessKind::BrownianBridge { .. } => (Some(0.0), None),
            ProcessKind::CtSsrw { n, .. } => (Some(n as f64 - 1.0), None),
            ProcessKind::DtSsrw { n, t } => {
                let lo = 2.0 * n as f64 - 2.0;
                (Some(lo), Some(lo + 2.0 * t as f64))
            }
        }
    }
}

/// Centering/scale pair under which the width converges to the GUE
/// Tracy-Widom law, with the regime the parameters fall into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingLaw {
    pub center: f64,
    pub scale: f64,
    pub regime: &'static str,
}

pub fn scaling_law(spec: &ProcessSpec) -> ScalingLaw {
    match spec.kind {
        ProcessKind::BrownianBridge { n } => {
            let nf = n as f64;
            ScalingLaw {
                center: 2.0 * nf.sqrt(),
                scale: 2f64.powf(-2.0 / 3.0) * nf.powf(-1.0 / 6.0),
                regime: "bridge-edge",
            }
        }
        ProcessKind::CtSsrw { n, t } => {
            let nf = n as f64;
            if nf < t {
                ScalingLaw {
                    center: 2.0 * (nf * t).sqrt(),
                    scale: 2f64.powf(-2.0 / 3.0)
                        * t.powf(1.0 / 3.0)
                        * ((nf / t).sqrt() + (t / nf).sqrt()).powf(1.0 / 3.0),
                    regime: "unfrozen",
                }
            } else {
                ScalingLaw {
                    center: nf + t,
                    scale: 2f64.powf(-1.0 / 3.0) * t.powf(1.0 / 3.0),
                    regime: "frozen",
                }
            }
        }
        ProcessKind::DtSsrw { n, t } => {
            let (nf, tf) = (n as f64, t as f64);
            let v = nf * nf + 2.0 * nf * tf;
            ScalingLaw {
                center: 2.0 * v.sqrt(),
                scale: v.powf(-1.0 / 6.0) * tf.powf(2.0 / 3.0),
                regime: "thin-rectangle",
            }
        }
    }
}

/// Width threshold corresponding to the scaled coordinate x, together with
/// the scale (the normalizer that maps width deviations back to x-units).
pub fn scaling_eval(spec: &ProcessSpec, x: f64) -> (f64, f64) {
    let law = scaling_law(spec);
    (law.center + law.scale * x, law.scale)
}

/// A CDF value clamped to [0,1]; `clamped` is set only when the clamp moved
/// the value by more than 1e-6 (larger excursions indicate a quadrature or
/// conditioning problem rather than roundoff).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthCdf {
    pub raw: f64,
    pub value: f64,
    pub clamped: bool,
}

fn clamp_cdf(raw: f64) -> WidthCdf {
    let value = raw.clamp(0.0, 1.0);
    WidthCdf { raw, value, clamped: (raw - value).abs() > 1e-6 }
}

/// Ratio of two determinants through their log magnitudes (safe when the
/// raw values overflow or underflow f64 range).
fn det_ratio(num: &DetResult, den: &DetResult) -> Result<Complex64> {
    if den.value.norm() == 0.0 {
        return Err(Error::InvalidParameter("reference determinant is zero".into()));
    }
    if num.value.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let phase = (num.value / num.value.norm()) * (den.value.norm() / den.value);
    Ok(phase * (num.log_abs - den.log_abs).exp())
}

/// Gauss-Legendre nodes/weights on [0,1].
fn gl_unit(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (u, w) = gauss_legendre_real(order)?;
    Ok((
        u.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        w.iter().map(|x| 0.5 * x).collect(),
    ))
}

/// Lattice spacing of the bridge formula: h = sqrt(2) pi / (M sqrt(n)).
pub fn bridge_lattice_spacing(n: usize, m: f64) -> f64 {
    std::f64::consts::SQRT_2 * PI / (m * (n as f64).sqrt())
}

/// P(width of n non-intersecting Brownian bridges < M), averaging the
/// lattice/continuous Hankel ratio over the lattice offset s with an
/// s_quad-point Gauss-Legendre rule. Routes through the Gram form for
/// n <= 16 and the Fredholm form beyond.
pub fn width_cdf_bb(n: usize, m: f64, s_quad: usize) -> Result<WidthCdf> {
    if n > 16 {
        width_cdf_bb_fredholm(n, m, s_quad)
    } else {
        width_cdf_bb_gram(n, m, s_quad)
    }
}

fn check_bb_params(n: usize, m: f64, s_quad: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("ensemble size must be >= 1".into()));
    }
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("threshold must be positive, got {m}")));
    }
    if s_quad < 8 {
        return Err(Error::InvalidParameter("offset quadrature needs at least 8 points".into()));
    }
    Ok(())
}

/// Gram-matrix route: the ratio h^n H_n(F, D_s) / H_n(F) equals
/// det[ h sum_{x in D_s} p_j(x) p_k(x) F(x) ]_{j,k < n} for the orthonormal
/// polynomials of F, a matrix exponentially close to the identity — so the
/// evaluation has none of the Vandermonde conditioning of the raw moment
/// determinants and stays accurate at any n.
pub fn width_cdf_bb_gram(n: usize, m: f64, s_quad: usize) -> Result<WidthCdf> {
    check_bb_params(n, m, s_quad)?;
    let a = n as f64;
    let h = bridge_lattice_spacing(n, m);
    let weight = WeightSymbol::gaussian(a)?;
    let basis = build_line_basis(&weight, n.saturating_sub(1), 1.0, 8)?;
    let x_max = gaussian_half_extent(a, 2 * n.saturating_sub(1));
    let (s_nodes, s_weights) = gl_unit(s_quad)?;
    let dets = s_nodes
        .par_iter()
        .map(|&s| -> Result<f64> {
            let k_lo = ((s * h - x_max) / h).floor() as i64;
            let k_hi = ((s * h + x_max) / h).ceil() as i64;
            let mut gram = vec![0.0f64; n * n];
            let mut p = vec![0.0f64; n];
            for k in k_lo..=k_hi {
                let x = h * (k as f64 - s);
                let fw = h * (-a * x * x).exp();
                if fw < 1e-290 {
                    continue;
                }
                for (j, slot) in p.iter_mut().enumerate() {
                    *slot = basis.eval(j, Complex64::new(x, 0.0)).re;
                }
                for j in 0..n {
                    let pj = fw * p[j];
                    for l in j..n {
                        gram[j * n + l] += pj * p[l];
                    }
                }
            }
            let mat = ComplexMatrix::from_fn(n, n, |j, l| {
                let v = if l >= j { gram[j * n + l] } else { gram[l * n + j] };
                Complex64::new(v, 0.0)
            })?;
            Ok(det_lu_full(&mat)?.value.re)
        })
        .collect::<Result<Vec<f64>>>()?;
    let raw = dets.iter().zip(&s_weights).map(|(d, w)| d * w).sum();
    Ok(clamp_cdf(raw))
}

/// Fredholm route: the same ratio written as det(1 + K_s) for the
/// line-lattice kernel of the Gaussian weight with constant density
/// b = 1/h, on contours Im z = +- n^(-1/3). This is the conditioning-safe
/// path for large ensembles.
pub fn width_cdf_bb_fredholm(n: usize, m: f64, s_quad: usize) -> Result<WidthCdf> {
    check_bb_params(n, m, s_quad)?;
    let a = n as f64;
    let h = bridge_lattice_spacing(n, m);
    let d = 1.0 / h;
    let delta = 2.0 * a.powf(-1.0 / 3.0);
    let weight = WeightSymbol::gaussian(a)?.with_b_constant(d)?;
    let half_len = gaussian_half_extent(a, 2 * n) + delta;
    let params = LinePairParams {
        delta,
        half_len,
        order: line_pair_order(half_len, delta, 10.0),
    };
    let (s_nodes, s_weights) = gl_unit(s_quad)?;
    let dets = s_nodes
        .par_iter()
        .map(|&s| {
            thm2_fredholm(&weight, d, s, n, &params, Assembly::BalancedSqrt)
                .map(|r| r.value.re)
        })
        .collect::<Result<Vec<f64>>>()?;
    let raw = dets.iter().zip(&s_weights).map(|(v, w)| v * w).sum();
    Ok(clamp_cdf(raw))
}

/// Per-offset ratios T_n(f, D_{s_k}) / T_n(f) over the s_quad-th roots of
/// unity; their mean is the width CDF for the walk ensembles.
fn circle_offset_ratios(
    f: &WeightSymbol,
    n: usize,
    m: usize,
    s_quad: usize,
    quad_m: usize,
) -> Result<Vec<Complex64>> {
    let denominator = continuous_toeplitz(f, n, quad_m)?;
    (0..s_quad)
        .into_par_iter()
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / s_quad as f64;
            let s = Complex64::new(angle.cos(), angle.sin());
            let nodes = DiscreteNodeSet::rotated_roots(m, s)?;
            let num = discrete_toeplitz(f, &nodes, n)?;
            det_ratio(&num, &denominator)
        })
        .collect()
}

fn check_walk_params(n: usize, m: usize, s_quad: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("ensemble size must be >= 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("chamber size M must be >= 1".into()));
    }
    if s_quad < 4 {
        return Err(Error::InvalidParameter("offset rule needs at least 4 points".into()));
    }
    Ok(())
}

/// P(width of n non-intersecting continuous-time walks over [0, T] < M).
/// For M < n the chamber cannot hold n walkers and the determinants vanish
/// identically, giving an exact zero.
pub fn width_cdf_ct(n: usize, t: f64, m: usize, s_quad: usize) -> Result<WidthCdf> {
    check_walk_params(n, m, s_quad)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("duration must be positive, got {t}")));
    }
    let f = WeightSymbol::exp_cosh(t)?;
    let quad_m = f.circle_quad_order(n);
    let ratios = circle_offset_ratios(&f, n, m, s_quad, quad_m)?;
    let raw = ratios.iter().map(|r| r.re).sum::<f64>() / s_quad as f64;
    Ok(clamp_cdf(raw))
}

/// Offset-rule order past which the discrete-time s-average is exact: the
/// integrand is a Laurent polynomial in s of degree at most
/// n (T + n - 1) / M in each direction.
pub fn dt_s_quad_exact(n: usize, t: usize, m: usize) -> usize {
    let degree = (n * (t + n)) as f64 / m as f64;
    (2.0 * degree).ceil() as usize + 3
}

/// P(width of n non-intersecting discrete-time walks over [0, 2T] < 2M).
/// All quadratures involved are exact once past the polynomial bandwidth,
/// so the result is exact up to roundoff.
pub fn width_cdf_dt(n: usize, t: usize, m: usize, s_quad: usize) -> Result<WidthCdf> {
    check_walk_params(n, m, s_quad)?;
    if t == 0 {
        return Err(Error::InvalidParameter("need T >= 1".into()));
    }
    // The width never exceeds its deterministic support bound 2n - 2 + 2T,
    // so past m >= n + T the CDF is exactly one.
    if m >= n + t {
        return Ok(clamp_cdf(1.0));
    }
    let f = WeightSymbol::binom(t as u32);
    let quad_m = f.circle_quad_order(n).max(2 * t + n + 1);
    let ratios = circle_offset_ratios(&f, n, m, s_quad, quad_m)?;
    let raw = ratios.iter().map(|r| r.re).sum::<f64>() / s_quad as f64;
    Ok(clamp_cdf(raw))
}

/// Both sides of the Gaussian Poisson-summation identity
///   sum_h p(x + h M) e^(i M h theta)
///     = (1/M) sum_h exp(-(2 pi h / M - theta)^2 / 2 + i x (2 pi h / M - theta))
/// with p the standard normal density. The two forms are mutual oracles:
/// they are computed by structurally different sums.
pub fn poisson_check(
    x: f64,
    theta: f64,
    m: f64,
    h_max: usize,
) -> Result<(Complex64, Complex64)> {
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("period must be positive, got {m}")));
    }
    let hm = h_max as f64;
    let density = |y: f64| (-0.5 * y * y).exp() / (2.0 * PI).sqrt();
    let edge_lhs = density(x + hm * m).max(density(x - hm * m));
    let freq = |h: f64| 2.0 * PI * h / m - theta;
    let edge_rhs = ((-0.5 * freq(hm) * freq(hm)).exp())
        .max((-0.5 * freq(-hm) * freq(-hm)).exp())
        / m;
    if edge_lhs > 1e-14 || edge_rhs > 1e-14 {
        return Err(Error::Truncation(format!(
            "h_max = {h_max} leaves tails {edge_lhs:.2e} / {edge_rhs:.2e} above 1e-14"
        )));
    }
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    for h in -(h_max as i64)..=(h_max as i64) {
        let hf = h as f64;
        lhs += density(x + hf * m) * Complex64::new(0.0, m * hf * theta).exp();
        let u = freq(hf);
        rhs += Complex64::new(-0.5 * u * u, x * u).exp() / m;
    }
    Ok((lhs, rhs))
}
