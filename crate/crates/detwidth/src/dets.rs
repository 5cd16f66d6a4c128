//! Toeplitz and Hankel determinants, both over finite node sets and over
//! the continuous circle / line, with brute-force pair-interaction oracles.
//!
//! Conventions:
//! - Discrete Toeplitz entries are node averages:
//!   `A[j][k] = (1/|D|) sum_{z in D} z^(k-j) f(z)`.
//! - Discrete Hankel entries are plain sums:
//!   `A[j][k] = sum_{x in D} x^(j+k) f(x)`; lattice normalization is carried
//!   by a constant `b` factor on the continuous side instead.
//! - Continuous determinants use the weight including its `b` factor, since
//!   that is the reference object appearing in the determinant identities.

use num_complex::Complex64;

use crate::numerics::{circle_rule, det_lu_full, gauss_legendre, ComplexMatrix};
use crate::orthopoly::{build_circle_basis, build_line_basis, Support, WeightSymbol};
use crate::{Error, Result};

/// Finite node sets cut out by the entire functions used in the identities.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeSetKind {
    /// Zeros of z^m - 1.
    RootsOfUnity { m: usize },
    /// Zeros of z^m - s.
    RotatedRoots { m: usize, s: Complex64 },
    /// Zeros of sin(pi (d z + s)) with |z| <= half_extent.
    ShiftedLattice { d: f64, s: f64, half_extent: f64 },
}

#[derive(Debug, Clone)]
pub struct DiscreteNodeSet {
    kind: NodeSetKind,
    circle_nodes: Vec<Complex64>,
    line_nodes: Vec<f64>,
}

impl DiscreteNodeSet {
    pub fn roots_of_unity(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("roots_of_unity needs m >= 1".into()));
        }
        let nodes = (0..m)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64))
            .collect();
        Ok(Self { kind: NodeSetKind::RootsOfUnity { m }, circle_nodes: nodes, line_nodes: vec![] })
    }

    pub fn rotated_roots(m: usize, s: Complex64) -> Result<Self> {
        if m == 0 || s.norm() == 0.0 || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("rotated_roots needs m >= 1 and s != 0, got m={m}, s={s}")));
        }
        let r = s.norm().powf(1.0 / m as f64);
        let base = s.arg() / m as f64;
        let nodes = (0..m)
            .map(|j| Complex64::from_polar(r, base + 2.0 * std::f64::consts::PI * j as f64 / m as f64))
            .collect();
        Ok(Self { kind: NodeSetKind::RotatedRoots { m, s }, circle_nodes: nodes, line_nodes: vec![] })
    }

    /// Lattice points (k - s)/d, k integer, inside [-half_extent, half_extent].
    pub fn shifted_lattice(d: f64, s: f64, half_extent: f64) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() || !s.is_finite() || !(half_extent > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "shifted_lattice needs d > 0 and half_extent > 0, got d={d}, s={s}, half_extent={half_extent}"
            )));
        }
        let k_min = (-d * half_extent + s).ceil() as i64;
        let k_max = (d * half_extent + s).floor() as i64;
        if k_min > k_max {
            return Err(Error::InvalidParameter("shifted_lattice window contains no lattice points".into()));
        }
        let nodes = (k_min..=k_max).map(|k| (k as f64 - s) / d).collect();
        Ok(Self { kind: NodeSetKind::ShiftedLattice { d, s, half_extent }, circle_nodes: vec![], line_nodes: nodes })
    }

    pub fn kind(&self) -> &NodeSetKind {
        &self.kind
    }

    pub fn is_circle(&self) -> bool {
        !self.circle_nodes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.circle_nodes.len().max(self.line_nodes.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn circle_nodes(&self) -> Result<&[Complex64]> {
        if self.is_circle() {
            Ok(&self.circle_nodes)
        } else {
            Err(Error::InvalidParameter("node set does not live on the circle".into()))
        }
    }

    pub fn line_nodes(&self) -> Result<&[f64]> {
        if !self.is_circle() {
            Ok(&self.line_nodes)
        } else {
            Err(Error::InvalidParameter("node set does not live on the line".into()))
        }
    }
}

/// Which route produced a determinant value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetMethod {
    DirectLu,
    OpKappaProduct,
}

/// A determinant with its log-magnitude and a conditioning flag set when
/// independent routes disagree.
#[derive(Debug, Clone, Copy)]
pub struct DetResult {
    pub value: Complex64,
    pub log_abs: f64,
    pub method: DetMethod,
    pub cond_flag: bool,
}

/// Discrete Toeplitz determinant of order n over a circle node set,
/// det[(1/|D|) sum_z z^(k-j) f(z)]. Exactly zero when n exceeds |D|.
pub fn discrete_toeplitz(f: &WeightSymbol, nodes: &DiscreteNodeSet, n: usize) -> Result<DetResult> {
    if f.support != Support::Circle {
        return Err(Error::InvalidParameter("discrete Toeplitz needs a circle weight".into()));
    }
    let zs = nodes.circle_nodes()?;
    let m = zs.len();
    if n > m {
        // Any n-fold pair-interaction sum over fewer than n nodes repeats a
        // node and vanishes; short-circuit to an exact zero.
        return Ok(DetResult {
            value: Complex64::new(0.0, 0.0),
            log_abs: f64::NEG_INFINITY,
            method: DetMethod::DirectLu,
            cond_flag: false,
        });
    }
    if n == 0 {
        return Ok(DetResult { value: Complex64::new(1.0, 0.0), log_abs: 0.0, method: DetMethod::DirectLu, cond_flag: false });
    }
    // c_l = (1/m) sum_z z^l f(z) for |l| <= n-1; the matrix is Toeplitz so
    // only 2n-1 averages are needed.
    let offset = n as i64 - 1;
    let mut c = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for z in zs {
        let fv = f.eval(*z);
        let mut pw = z.powi(-offset as i32);
        for slot in c.iter_mut() {
            *slot += fv * pw;
            pw *= z;
        }
    }
    for slot in c.iter_mut() {
        *slot /= m as f64;
    }
    let a = ComplexMatrix::from_fn(n, n, |j, k| c[(k as i64 - j as i64 + offset) as usize])?;
    let det = det_lu_full(&a)?;
    Ok(DetResult { value: det.value, log_abs: det.log_abs, method: DetMethod::DirectLu, cond_flag: false })
}

/// Discrete Hankel determinant of order n over a line node set,
/// det[sum_x x^(j+k) f(x)]. Exactly zero when n exceeds |D|. Fails with a
/// truncation error if the weight has not decayed at the window edge.
pub fn discrete_hankel(f: &WeightSymbol, nodes: &DiscreteNodeSet, n: usize) -> Result<DetResult> {
    if f.support != Support::Line {
        return Err(Error::InvalidParameter("discrete Hankel needs a line weight".into()));
    }
    let xs = nodes.line_nodes()?;
    let m = xs.len();
    if n > m {
        return Ok(DetResult {
            value: Complex64::new(0.0, 0.0),
            log_abs: f64::NEG_INFINITY,
            method: DetMethod::DirectLu,
            cond_flag: false,
        });
    }
    if n == 0 {
        return Ok(DetResult { value: Complex64::new(1.0, 0.0), log_abs: 0.0, method: DetMethod::DirectLu, cond_flag: false });
    }
    let top = 2 * n - 2;
    let weigh = |x: f64| -> f64 {
        let v = f.eval(Complex64::new(x, 0.0));
        v.re.abs().max(v.im.abs()) * x.abs().max(1.0).powi(top as i32)
    };
    if let NodeSetKind::ShiftedLattice { .. } = nodes.kind() {
        let peak = xs.iter().map(|x| weigh(*x)).fold(0.0f64, f64::max);
        let edge = weigh(xs[0]).max(weigh(xs[m - 1]));
        if peak > 0.0 && edge > 1e-12 * peak {
            return Err(Error::Truncation(format!(
                "lattice window edge carries relative weight {:.3e}; enlarge half_extent",
                edge / peak
            )));
        }
    }
    let mut mu = vec![Complex64::new(0.0, 0.0); top + 1];
    for x in xs {
        let fv = f.eval(Complex64::new(*x, 0.0));
        let mut pw = 1.0f64;
        for slot in mu.iter_mut() {
            *slot += fv * pw;
            pw *= x;
        }
    }
    let a = ComplexMatrix::from_fn(n, n, |j, k| mu[j + k])?;
    let det = det_lu_full(&a)?;
    Ok(DetResult { value: det.value, log_abs: det.log_abs, method: DetMethod::DirectLu, cond_flag: false })
}

fn tuple_sum(
    node_values: &[(Complex64, Complex64)],
    n: usize,
) -> Complex64 {
    // Odometer over D^n of prod_{i<j} |z_i - z_j|^2 prod_i f(z_i).
    let m = node_values.len();
    let mut idx = vec![0usize; n];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let mut term = Complex64::new(1.0, 0.0);
        'term: {
            for i in 0..n {
                term *= node_values[idx[i]].1;
                if term == Complex64::new(0.0, 0.0) {
                    break 'term;
                }
            }
            let mut pair = 1.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    pair *= (node_values[idx[i]].0 - node_values[idx[j]].0).norm_sqr();
                }
            }
            term *= pair;
        }
        total += term;
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == n {
                return total;
            }
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Brute-force pair-interaction form of the discrete Toeplitz determinant:
/// (1/(n! |D|^n)) sum over D^n of prod |z_i - z_j|^2 prod f(z_k).
/// Exponential cost; guarded to |D|^n <= 2e7.
pub fn coulomb_toeplitz_oracle(f: &WeightSymbol, nodes: &DiscreteNodeSet, n: usize) -> Result<Complex64> {
    let zs = nodes.circle_nodes()?;
    let m = zs.len();
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if (m as f64).powi(n as i32) > 2e7 {
        return Err(Error::OracleScale(format!("|D|^n = {m}^{n} exceeds the brute-force budget")));
    }
    let vals: Vec<(Complex64, Complex64)> = zs.iter().map(|z| (*z, f.eval(*z))).collect();
    Ok(tuple_sum(&vals, n) / (factorial(n) * (m as f64).powi(n as i32)))
}

/// Brute-force pair-interaction form of the discrete Hankel determinant:
/// (1/n!) sum over D^n of prod (x_i - x_j)^2 prod f(x_k).
pub fn coulomb_hankel_oracle(f: &WeightSymbol, nodes: &DiscreteNodeSet, n: usize) -> Result<Complex64> {
    let xs = nodes.line_nodes()?;
    let m = xs.len();
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if (m as f64).powi(n as i32) > 2e7 {
        return Err(Error::OracleScale(format!("|D|^n = {m}^{n} exceeds the brute-force budget")));
    }
    let vals: Vec<(Complex64, Complex64)> = xs
        .iter()
        .map(|x| (Complex64::new(*x, 0.0), f.eval(Complex64::new(*x, 0.0))))
        .collect();
    Ok(tuple_sum(&vals, n) / factorial(n))
}

/// Continuous Toeplitz determinant det[m_{k-j}(f b)] with Fourier moments
/// from a circle rule, cross-checked against the leading-coefficient
/// product of the orthonormal basis; disagreement beyond 1e-8 sets
/// `cond_flag`.
pub fn continuous_toeplitz(f: &WeightSymbol, n: usize, quad_m: usize) -> Result<DetResult> {
    if f.support != Support::Circle {
        return Err(Error::InvalidParameter("continuous Toeplitz needs a circle weight".into()));
    }
    if n == 0 {
        return Ok(DetResult { value: Complex64::new(1.0, 0.0), log_abs: 0.0, method: DetMethod::DirectLu, cond_flag: false });
    }
    let rule = circle_rule(quad_m, 1.0)?;
    let offset = n as i64 - 1;
    let mut c = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for z in &rule.nodes {
        let fv = f.eval_with_b(*z);
        let mut pw = z.powi(-offset as i32);
        for slot in c.iter_mut() {
            *slot += fv * pw;
            pw *= z;
        }
    }
    for slot in c.iter_mut() {
        *slot /= quad_m as f64;
    }
    let a = ComplexMatrix::from_fn(n, n, |j, k| c[(k as i64 - j as i64 + offset) as usize])?;
    let lu = det_lu_full(&a)?;

    let basis = build_circle_basis(f, n.saturating_sub(1), quad_m)?;
    let kappa_log: f64 = (0..n).map(|k| -2.0 * basis.kappa(k).ln()).sum();
    let kappa_value = kappa_log.exp();
    let cond_flag = !det_agrees(lu.value, lu.log_abs, kappa_value, kappa_log);
    Ok(DetResult { value: lu.value, log_abs: lu.log_abs, method: DetMethod::DirectLu, cond_flag })
}

/// Continuous Hankel determinant det[mu_{j+k}(f b)] with moments from
/// Gauss-Legendre on [-truncation, truncation], cross-checked against the
/// leading-coefficient product.
pub fn continuous_hankel(f: &WeightSymbol, n: usize, truncation: f64, quad_m: usize) -> Result<DetResult> {
    if f.support != Support::Line {
        return Err(Error::InvalidParameter("continuous Hankel needs a line weight".into()));
    }
    if n == 0 {
        return Ok(DetResult { value: Complex64::new(1.0, 0.0), log_abs: 0.0, method: DetMethod::DirectLu, cond_flag: false });
    }
    let rule = gauss_legendre(quad_m, -truncation, truncation)?;
    let mut mu = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for (z, w) in rule.nodes.iter().zip(&rule.weights) {
        let fv = f.eval_with_b(*z) * w;
        let mut pw = Complex64::new(1.0, 0.0);
        for slot in mu.iter_mut() {
            *slot += fv * pw;
            pw *= z;
        }
    }
    let a = ComplexMatrix::from_fn(n, n, |j, k| mu[j + k])?;
    let lu = det_lu_full(&a)?;

    let basis = build_line_basis(f, n.saturating_sub(1), truncation, quad_m)?;
    let kappa_log: f64 = (0..n).map(|k| -2.0 * basis.kappa(k).ln()).sum();
    let kappa_value = kappa_log.exp();
    let cond_flag = !det_agrees(lu.value, lu.log_abs, kappa_value, kappa_log);
    Ok(DetResult { value: lu.value, log_abs: lu.log_abs, method: DetMethod::DirectLu, cond_flag })
}

/// Leading-coefficient route alone: det = prod_{k<n} kappa_k^(-2), reported
/// in log form to survive extreme scales.
pub fn kappa_product_det(basis: &crate::orthopoly::OrthoBasis, n: usize) -> Result<DetResult> {
    if n > basis.degree_max() + 1 {
        return Err(Error::InvalidParameter(format!(
            "kappa product needs degrees 0..{} but basis stops at {}",
            n.saturating_sub(1),
            basis.degree_max()
        )));
    }
    let log_abs: f64 = (0..n).map(|k| -2.0 * basis.kappa(k).ln()).sum();
    Ok(DetResult {
        value: Complex64::new(log_abs.exp(), 0.0),
        log_abs,
        method: DetMethod::OpKappaProduct,
        cond_flag: false,
    })
}

fn det_agrees(v1: Complex64, log1: f64, v2: f64, log2: f64) -> bool {
    // Compare in log-magnitude plus phase so huge/tiny dets are handled.
    if !log1.is_finite() || !log2.is_finite() {
        return log1 == log2;
    }
    if (log1 - log2).abs() > 1e-8 {
        return false;
    }
    // Phases: v1 should be essentially real positive when v2 is.
    let phase = v1.arg().abs();
    v2 <= 0.0 || phase < 1e-6
}

/// Fixed-point choice of a lattice half-extent so that exp(-a x^2) times
/// x^(2 degree) has dropped below 1e-18 of its peak at the window edge.
pub fn gaussian_half_extent(a: f64, degree: usize) -> f64 {
    let mut x: f64 = (42.0f64 / a).sqrt();
    for _ in 0..8 {
        x = ((42.0 + 2.0 * degree as f64 * (1.0 + x).ln()) / a).sqrt();
    }
    x + 1.0
}

/// Gauss-Legendre order that resolves exp(-a x^2) x^degree on [-L, L].
pub fn gaussian_quad_order(a: f64, half_extent: f64, degree: usize) -> usize {
    ((2.6 * half_extent * a.sqrt()).ceil() as usize + degree + 32).max(48)
}
