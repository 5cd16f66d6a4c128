//! Weight symbols and orthonormal polynomial bases on the unit circle and
//! the real line, with their Christoffel-Darboux kernels.
//!
//! Circle bases are orthonormalized against the inner product
//! `<g, h> = avg over |z|=1 of conj(g) h f` (measure dz/(2*pi*i*z)); line
//! bases against `integral of g h f dx`. Leading coefficients are kept real
//! and positive. For Gaussian line weights the basis is scaled Hermite with
//! closed-form recurrences; monomial Gram-Schmidt is the generic fallback
//! and doubles as an independent oracle for the Hermite route in tests.

use num_complex::Complex64;

use crate::numerics::{circle_rule, gauss_legendre};
use crate::{Error, Result};

/// Where a weight lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    Circle,
    Line,
}

/// Analytic weight families used by the determinant identities.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightForm {
    /// Constant c > 0.
    Constant(f64),
    /// exp((t/2)(z + 1/z)); positive on the unit circle.
    ExpCosh(f64),
    /// z^(-t) (1+z)^(2t); equals (2 + 2 cos theta)^t on the unit circle.
    Binom(u32),
    /// exp(-a x^2) on the line.
    Gaussian(f64),
    /// Finite Laurent series starting at `min_degree`.
    Laurent { min_degree: i64, coeffs: Vec<Complex64> },
}

impl WeightForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            WeightForm::Constant(c) => Complex64::new(*c, 0.0),
            WeightForm::ExpCosh(t) => ((z + z.inv()) * (0.5 * t)).exp(),
            WeightForm::Binom(t) => {
                let one_plus = Complex64::new(1.0, 0.0) + z;
                z.powi(-(*t as i32)) * one_plus.powi(2 * *t as i32)
            }
            WeightForm::Gaussian(a) => (-(z * z) * *a).exp(),
            WeightForm::Laurent { min_degree, coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                acc * z.powi(*min_degree as i32)
            }
        }
    }
}

/// A weight together with its support and an optional second factor `b`
/// (the generalized identities orthonormalize against f*b while the kernel
/// keeps f itself).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSymbol {
    pub support: Support,
    pub form: WeightForm,
    pub b_factor: Option<WeightForm>,
}

impl WeightSymbol {
    pub fn constant(support: Support, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("constant weight must be positive, got {c}")));
        }
        Ok(Self { support, form: WeightForm::Constant(c), b_factor: None })
    }

    pub fn exp_cosh(t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("exp_cosh parameter must be >= 0, got {t}")));
        }
        Ok(Self { support: Support::Circle, form: WeightForm::ExpCosh(t), b_factor: None })
    }

    pub fn binom(t: u32) -> Self {
        Self { support: Support::Circle, form: WeightForm::Binom(t), b_factor: None }
    }

    pub fn gaussian(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("gaussian exponent must be positive, got {a}")));
        }
        Ok(Self { support: Support::Line, form: WeightForm::Gaussian(a), b_factor: None })
    }

    pub fn laurent(min_degree: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("laurent weight needs at least one coefficient".into()));
        }
        Ok(Self { support: Support::Circle, form: WeightForm::Laurent { min_degree, coeffs }, b_factor: None })
    }

    pub fn with_b_constant(mut self, b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("b factor must be positive, got {b}")));
        }
        self.b_factor = Some(WeightForm::Constant(b));
        Ok(self)
    }

    /// The weight f alone.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.form.eval(z)
    }

    /// The product f*b (equals f when no b factor is set).
    pub fn eval_with_b(&self, z: Complex64) -> Complex64 {
        match &self.b_factor {
            None => self.form.eval(z),
            Some(b) => self.form.eval(z) * b.eval(z),
        }
    }

    /// The b factor alone (1 when unset).
    pub fn eval_b(&self, z: Complex64) -> Complex64 {
        match &self.b_factor {
            None => Complex64::new(1.0, 0.0),
            Some(b) => b.eval(z),
        }
    }

    /// Checks real non-negativity of f on its support by sampling.
    pub fn check_nonneg_on_support(&self, samples: usize) -> Result<()> {
        for i in 0..samples {
            let z = match self.support {
                Support::Circle => {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (i as f64 + 0.3) / samples as f64)
                }
                Support::Line => Complex64::new(-4.0 + 8.0 * (i as f64 + 0.5) / samples as f64, 0.0),
            };
            let v = self.eval(z);
            if v.im.abs() > 1e-10 * (1.0 + v.re.abs()) || v.re < -1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "weight is not non-negative on its support at {z}: {v}"
                )));
            }
        }
        Ok(())
    }

    /// Circle-rule order that resolves moments up to degree 2n without
    /// aliasing from the symbol's own Fourier content.
    pub fn circle_quad_order(&self, n: usize) -> usize {
        (2 * n + self.fourier_bandwidth() + 17).max(32)
    }

    /// Largest Laurent mode carrying more than ~1e-18 of the symbol's mass;
    /// quadrature orders are sized from this.
    pub fn fourier_bandwidth(&self) -> usize {
        match &self.form {
            WeightForm::Constant(_) => 0,
            WeightForm::Binom(t) => *t as usize,
            WeightForm::Laurent { min_degree, coeffs } => {
                let max_degree = min_degree + coeffs.len() as i64 - 1;
                min_degree.unsigned_abs().max(max_degree.unsigned_abs()) as usize
            }
            WeightForm::ExpCosh(t) => {
                // Fourier coefficients decay like (t/2)^l / l!; find where
                // they drop below 1e-18.
                let half = 0.5 * t;
                let mut term = 1.0f64;
                let mut l = 0usize;
                while term >= 1e-18 && l < 400 {
                    l += 1;
                    term *= half / l as f64;
                }
                l
            }
            WeightForm::Gaussian(_) => 0,
        }
    }
}

/// How a basis evaluates its polynomials.
#[derive(Debug, Clone)]
enum EvalBackend {
    /// Horner on the stored monomial coefficients.
    Monomial,
    /// Scaled Hermite recurrence for the weight amp * exp(-a x^2).
    Hermite { a: f64, inv_sqrt_amp: f64 },
}

/// Orthonormal polynomials p_0..p_degree_max with positive leading
/// coefficients.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    support: Support,
    degree_max: usize,
    /// coeffs[k] holds the monomial coefficients of p_k (length k+1).
    coeffs: Vec<Vec<Complex64>>,
    kappas: Vec<f64>,
    backend: EvalBackend,
}

impl OrthoBasis {
    pub fn support(&self) -> Support {
        self.support
    }

    pub fn degree_max(&self) -> usize {
        self.degree_max
    }

    /// Leading coefficient of p_k.
    pub fn kappa(&self, k: usize) -> f64 {
        self.kappas[k]
    }

    /// Monomial coefficients of p_k.
    pub fn coeffs(&self, k: usize) -> &[Complex64] {
        &self.coeffs[k]
    }

    /// p_k(z).
    pub fn eval(&self, k: usize, z: Complex64) -> Complex64 {
        match &self.backend {
            EvalBackend::Monomial => horner(&self.coeffs[k], z),
            EvalBackend::Hermite { a, inv_sqrt_amp } => {
                let y = z * a.sqrt();
                hermite_orthonormal(k, y) * (a.powf(0.25) * inv_sqrt_amp)
            }
        }
    }

    /// p_k'(z).
    pub fn eval_deriv(&self, k: usize, z: Complex64) -> Complex64 {
        match &self.backend {
            EvalBackend::Monomial => horner_deriv(&self.coeffs[k], z),
            EvalBackend::Hermite { a, inv_sqrt_amp } => {
                if k == 0 {
                    return Complex64::new(0.0, 0.0);
                }
                let y = z * a.sqrt();
                hermite_orthonormal(k - 1, y)
                    * ((2.0 * k as f64).sqrt() * a.powf(0.75) * inv_sqrt_amp)
            }
        }
    }

    /// Reversed polynomial p*_k(z) = z^k conj(p_k(1/conj(z))), evaluated via
    /// its own coefficient table so z = 0 needs no special case.
    pub fn reversed(&self, k: usize, z: Complex64) -> Complex64 {
        debug_assert_eq!(self.support, Support::Circle, "reversal is a circle-basis operation");
        let c = &self.coeffs[k];
        // Coefficient of z^a in p*_k is conj(c[k - a]).
        let mut acc = Complex64::new(0.0, 0.0);
        for a in (0..=k).rev() {
            acc = acc * z + c[k - a].conj();
        }
        acc
    }

    /// Derivative of the reversed polynomial.
    pub fn reversed_deriv(&self, k: usize, z: Complex64) -> Complex64 {
        debug_assert_eq!(self.support, Support::Circle, "reversal is a circle-basis operation");
        let c = &self.coeffs[k];
        let mut acc = Complex64::new(0.0, 0.0);
        for a in (1..=k).rev() {
            acc = acc * z + c[k - a].conj() * a as f64;
        }
        acc
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn horner_deriv(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * a as f64;
    }
    acc
}

/// Orthonormal Hermite polynomial h_k for the weight exp(-y^2), by the
/// three-term recurrence; stable for complex arguments.
fn hermite_orthonormal(k: usize, y: Complex64) -> Complex64 {
    let mut h_prev = Complex64::new(std::f64::consts::PI.powf(-0.25), 0.0);
    if k == 0 {
        return h_prev;
    }
    let mut h = y * h_prev * std::f64::consts::SQRT_2;
    for j in 1..k {
        let jf = j as f64;
        let next = y * h * (2.0 / (jf + 1.0)).sqrt() - h_prev * (jf / (jf + 1.0)).sqrt();
        h_prev = h;
        h = next;
    }
    h
}

/// Builds the circle basis for `f` (including its b factor) up to degree
/// `n`, with moments from a `quad_m`-point circle rule.
pub fn build_circle_basis(f: &WeightSymbol, n: usize, quad_m: usize) -> Result<OrthoBasis> {
    if f.support != Support::Circle {
        return Err(Error::InvalidParameter("circle basis requested for a line weight".into()));
    }
    if quad_m < 2 * n + 2 {
        return Err(Error::InvalidParameter(format!(
            "circle quadrature order {quad_m} too small for degree {n}"
        )));
    }
    let rule = circle_rule(quad_m, 1.0)?;
    let samples: Vec<Complex64> = rule.nodes.iter().map(|z| f.eval_with_b(*z)).collect();
    // mom(l) = average of z^l f(z) over the circle, |l| <= 2n.
    let offset = 2 * n as i64;
    let mut moments = vec![Complex64::new(0.0, 0.0); 4 * n + 1];
    for (z, fv) in rule.nodes.iter().zip(&samples) {
        let mut pw = z.powi(-offset as i32);
        for slot in moments.iter_mut() {
            *slot += fv * pw;
            pw *= z;
        }
    }
    for slot in moments.iter_mut() {
        *slot /= quad_m as f64;
    }
    let mom = |l: i64| moments[(l + offset) as usize];
    gram_schmidt(Support::Circle, n, &|j, k| mom(k as i64 - j as i64))
}

/// Builds the line basis for `f` (including its b factor) up to degree `n`.
/// Gaussian weights use the exact scaled-Hermite backend; anything else goes
/// through monomial Gram-Schmidt with Gauss-Legendre moments on
/// [-truncation, truncation].
pub fn build_line_basis(f: &WeightSymbol, n: usize, truncation: f64, quad_m: usize) -> Result<OrthoBasis> {
    if f.support != Support::Line {
        return Err(Error::InvalidParameter("line basis requested for a circle weight".into()));
    }
    if let WeightForm::Gaussian(a) = f.form {
        let amp = match &f.b_factor {
            None => 1.0,
            Some(WeightForm::Constant(c)) => *c,
            Some(other) => {
                return Err(Error::InvalidParameter(format!(
                    "non-constant b factor {other:?} not supported with the Hermite backend"
                )))
            }
        };
        return Ok(hermite_basis(a, amp, n));
    }
    build_line_basis_gram(f, n, truncation, quad_m)
}

/// Generic monomial Gram-Schmidt route on the line; kept public as the
/// independent oracle for the Hermite backend.
pub fn build_line_basis_gram(
    f: &WeightSymbol,
    n: usize,
    truncation: f64,
    quad_m: usize,
) -> Result<OrthoBasis> {
    if f.support != Support::Line {
        return Err(Error::InvalidParameter("line basis requested for a circle weight".into()));
    }
    if !(truncation > 0.0) {
        return Err(Error::InvalidParameter(format!("truncation must be positive, got {truncation}")));
    }
    let rule = gauss_legendre(quad_m, -truncation, truncation)?;
    let mut moments = vec![Complex64::new(0.0, 0.0); 4 * n + 1];
    for (z, w) in rule.nodes.iter().zip(&rule.weights) {
        let fv = f.eval_with_b(*z) * w;
        let mut pw = Complex64::new(1.0, 0.0);
        for slot in moments.iter_mut() {
            *slot += fv * pw;
            pw *= z;
        }
    }
    gram_schmidt(Support::Line, n, &|j, k| moments[j + k])
}

/// Exact scaled-Hermite basis for the weight amp * exp(-a x^2).
fn hermite_basis(a: f64, amp: f64, n: usize) -> OrthoBasis {
    // Coefficient tables come from the same recurrence as evaluation:
    // h_{k+1}(y) = sqrt(2/(k+1)) y h_k(y) - sqrt(k/(k+1)) h_{k-1}(y),
    // with y = sqrt(a) x and an overall amp^(-1/2) a^(1/4) factor.
    let sqrt_a = a.sqrt();
    let scale = a.powf(0.25) / amp.sqrt();
    let mut tables: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
    let mut prev = vec![Complex64::new(std::f64::consts::PI.powf(-0.25), 0.0)];
    tables.push(prev.clone());
    if n >= 1 {
        let mut cur = vec![Complex64::new(0.0, 0.0), prev[0] * std::f64::consts::SQRT_2 * sqrt_a];
        tables.push(cur.clone());
        for k in 1..n {
            let kf = k as f64;
            let c1 = (2.0 / (kf + 1.0)).sqrt() * sqrt_a;
            let c2 = (kf / (kf + 1.0)).sqrt();
            let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
            for (i, v) in cur.iter().enumerate() {
                next[i + 1] += v * c1;
            }
            for (i, v) in prev.iter().enumerate() {
                next[i] -= v * c2;
            }
            prev = std::mem::replace(&mut cur, next);
            tables.push(cur.clone());
        }
    }
    for t in tables.iter_mut() {
        for c in t.iter_mut() {
            *c *= scale;
        }
    }
    let kappas = tables.iter().map(|t| t.last().unwrap().re).collect();
    OrthoBasis {
        support: Support::Line,
        degree_max: n,
        coeffs: tables,
        kappas,
        backend: EvalBackend::Hermite { a, inv_sqrt_amp: 1.0 / amp.sqrt() },
    }
}

/// Twice-iterated Gram-Schmidt in monomial coefficient space against the
/// Gram matrix `gram(j, k) = <z^j, z^k>`.
fn gram_schmidt(
    support: Support,
    n: usize,
    gram: &dyn Fn(usize, usize) -> Complex64,
) -> Result<OrthoBasis> {
    let inner = |p: &[Complex64], q: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, pa) in p.iter().enumerate() {
            if *pa == Complex64::new(0.0, 0.0) {
                continue;
            }
            let pc = pa.conj();
            for (b, qb) in q.iter().enumerate() {
                if *qb == Complex64::new(0.0, 0.0) {
                    continue;
                }
                acc += pc * qb * gram(a, b);
            }
        }
        acc
    };
    let mut coeffs: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
    let mut kappas = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut v = vec![Complex64::new(0.0, 0.0); k + 1];
        v[k] = Complex64::new(1.0, 0.0);
        let initial_norm2 = inner(&v, &v).re;
        if !(initial_norm2 > 0.0) {
            return Err(Error::SingularGram { degree: k });
        }
        for _pass in 0..2 {
            for p in coeffs.iter() {
                let r = inner(p, &v);
                for (i, pc) in p.iter().enumerate() {
                    v[i] -= r * pc;
                }
            }
        }
        let norm2 = inner(&v, &v);
        if !(norm2.re > 1e-26 * initial_norm2) || norm2.im.abs() > 1e-8 * norm2.re.abs() {
            return Err(Error::SingularGram { degree: k });
        }
        let inv_norm = 1.0 / norm2.re.sqrt();
        for c in v.iter_mut() {
            *c *= inv_norm;
        }
        // Orthogonalizing against lower degrees never touches the top
        // coefficient, so the leading coefficient is 1/norm: real, positive.
        let kappa = v[k];
        debug_assert!(kappa.im.abs() <= 1e-10 * kappa.re.abs());
        kappas.push(kappa.re);
        coeffs.push(v);
    }
    Ok(OrthoBasis { support, degree_max: n, coeffs, kappas, backend: EvalBackend::Monomial })
}

/// Reversed polynomial p*_k at z (thin wrapper kept for discoverability).
pub fn reversed_poly(basis: &OrthoBasis, k: usize, z: Complex64) -> Complex64 {
    basis.reversed(k, z)
}

/// Degree-n reproducing kernel on the circle in its analytically continued
/// form z^(-n) (p_n(z) p*_n(w) - p*_n(z) p_n(w)) / (1 - w/z), with the
/// removable z = w singularity evaluated through derivatives.
pub fn cd_kernel_circle(basis: &OrthoBasis, n: usize, z: Complex64, w: Complex64) -> Complex64 {
    assert!(n >= 1 && n <= basis.degree_max, "kernel degree out of range");
    assert_eq!(basis.support(), Support::Circle);
    if (z - w).norm() < 1e-6 * (1.0 + z.norm()) {
        let pn = basis.eval(n, z);
        let rev = basis.reversed(n, z);
        let dpn = basis.eval_deriv(n, z);
        let drev = basis.reversed_deriv(n, z);
        return -z.powi(1 - n as i32) * (pn * drev - rev * dpn);
    }
    let num = basis.eval(n, z) * basis.reversed(n, w) - basis.reversed(n, z) * basis.eval(n, w);
    z.powi(-(n as i32)) * num / (Complex64::new(1.0, 0.0) - w / z)
}

/// Degree-n Christoffel-Darboux kernel on the line,
/// (kappa_{n-1}/kappa_n) (p_n(z) p_{n-1}(w) - p_{n-1}(z) p_n(w)) / (z - w).
pub fn cd_kernel_line(basis: &OrthoBasis, n: usize, z: Complex64, w: Complex64) -> Complex64 {
    assert!(n >= 1 && n <= basis.degree_max, "kernel degree out of range");
    assert_eq!(basis.support(), Support::Line);
    let ratio = basis.kappa(n - 1) / basis.kappa(n);
    if (z - w).norm() < 1e-6 * (1.0 + z.norm()) {
        let val = basis.eval(n - 1, z) * basis.eval_deriv(n, z) - basis.eval(n, z) * basis.eval_deriv(n - 1, z);
        return val * ratio;
    }
    let num = basis.eval(n, z) * basis.eval(n - 1, w) - basis.eval(n - 1, z) * basis.eval(n, w);
    num * ratio / (z - w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle_inner(
        f: &WeightSymbol,
        basis: &OrthoBasis,
        j: usize,
        k: usize,
        quad_m: usize,
    ) -> Complex64 {
        let rule = circle_rule(quad_m, 1.0).unwrap();
        rule.integrate(|z| basis.eval(j, z).conj() * basis.eval(k, z) * f.eval_with_b(z))
    }

    #[test]
    fn constant_weight_gives_monomials() {
        let f = WeightSymbol::constant(Support::Circle, 1.0).unwrap();
        let basis = build_circle_basis(&f, 4, 32).unwrap();
        for k in 0..=4 {
            assert_relative_eq!(basis.kappa(k), 1.0, max_relative = 1e-13);
            let z = c(0.3, 0.4);
            assert!((basis.eval(k, z) - z.powu(k as u32)).norm() < 1e-13);
        }
    }

    #[test]
    fn exp_cosh_basis_is_orthonormal() {
        let f = WeightSymbol::exp_cosh(1.0).unwrap();
        let quad = f.circle_quad_order(3);
        let basis = build_circle_basis(&f, 3, quad).unwrap();
        for j in 0..=3 {
            for k in 0..=3 {
                let expected = if j == k { 1.0 } else { 0.0 };
                let v = circle_inner(&f, &basis, j, k, quad);
                assert!(
                    (v - c(expected, 0.0)).norm() < 1e-12,
                    "({j},{k}) -> {v}"
                );
            }
        }
        // Same inner products at doubled quadrature order.
        for j in 0..=3 {
            for k in 0..=3 {
                let expected = if j == k { 1.0 } else { 0.0 };
                let v = circle_inner(&f, &basis, j, k, 2 * quad);
                assert!((v - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kappa_zero_matches_zeroth_moment() {
        // kappa_0^(-2) equals the average of f over the circle; check the
        // quadrature against its own order-doubled value.
        let f = WeightSymbol::exp_cosh(1.0).unwrap();
        let quad = f.circle_quad_order(1);
        let basis = build_circle_basis(&f, 1, quad).unwrap();
        let m0 = circle_rule(quad, 1.0).unwrap().integrate(|z| f.eval(z));
        let m0_fine = circle_rule(2 * quad, 1.0).unwrap().integrate(|z| f.eval(z));
        assert!((m0 - m0_fine).norm() < 1e-12);
        assert_relative_eq!(basis.kappa(0).powi(-2), m0.re, max_relative = 1e-12);
    }

    #[test]
    fn binom_weight_is_nonnegative_on_circle() {
        WeightSymbol::binom(3).check_nonneg_on_support(64).unwrap();
        WeightSymbol::exp_cosh(2.0).unwrap().check_nonneg_on_support(64).unwrap();
        WeightSymbol::gaussian(3.0).unwrap().check_nonneg_on_support(64).unwrap();
    }

    #[test]
    fn laurent_form_matches_binom_coefficients() {
        // binom(1) = z^(-1) (1+z)^2 has Laurent coefficients {1, 2, 1}
        // starting at degree -1.
        let b = WeightSymbol::binom(1);
        let l = WeightSymbol::laurent(-1, vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        for k in 0..8 {
            let z = Complex64::from_polar(1.1, 0.7 * k as f64);
            assert!((b.eval(z) - l.eval(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn reversal_basics() {
        let f = WeightSymbol::exp_cosh(0.8).unwrap();
        let quad = f.circle_quad_order(4);
        let basis = build_circle_basis(&f, 4, quad).unwrap();
        // Degree zero: p*_0 = kappa_0 everywhere.
        let z = c(0.2, -0.1);
        assert!((basis.reversed(0, z) - c(basis.kappa(0), 0.0)).norm() < 1e-13);
        // |p*_k| = |p_k| on the unit circle.
        for k in 0..=4 {
            for i in 0..5 {
                let z = Complex64::from_polar(1.0, 1.3 * i as f64 + 0.2);
                assert_relative_eq!(
                    basis.reversed(k, z).norm(),
                    basis.eval(k, z).norm(),
                    max_relative = 1e-11
                );
            }
        }
        // Reversal is an involution on coefficients: (p*)* = p.
        for k in 0..=4 {
            let coeffs = basis.coeffs(k);
            let rev: Vec<Complex64> = (0..=k).map(|a| coeffs[k - a].conj()).collect();
            let revrev: Vec<Complex64> = (0..=k).map(|a| rev[k - a].conj()).collect();
            for (orig, back) in coeffs.iter().zip(&revrev) {
                assert!((orig - back).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn circle_kernel_reduces_to_geometric_sum_for_constant_weight() {
        let f = WeightSymbol::constant(Support::Circle, 1.0).unwrap();
        let basis = build_circle_basis(&f, 5, 40).unwrap();
        let n = 5;
        let z = Complex64::from_polar(1.2, 0.4);
        let w = Complex64::from_polar(0.8, -1.1);
        let mut geom = Complex64::new(0.0, 0.0);
        for k in 0..n {
            geom += (w / z).powu(k as u32);
        }
        let v = cd_kernel_circle(&basis, n, z, w);
        assert!((v - geom).norm() < 1e-12);
        // Diagonal limit: the geometric sum at w = z is n.
        let d = cd_kernel_circle(&basis, n, z, z);
        assert!((d - c(n as f64, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn circle_kernel_matches_conjugated_partial_sum() {
        // The continued kernel at (z, w) equals
        // sum_{k<n} conj(p_k(1/conj(z))) p_k(w).
        let f = WeightSymbol::exp_cosh(1.3).unwrap();
        let quad = f.circle_quad_order(4);
        let basis = build_circle_basis(&f, 4, quad).unwrap();
        let n = 4;
        let pts = [
            (Complex64::from_polar(1.15, 0.3), Complex64::from_polar(0.85, 2.0)),
            (Complex64::from_polar(0.9, -0.7), Complex64::from_polar(0.9, 1.9)),
            (Complex64::from_polar(1.1, 2.4), Complex64::from_polar(1.1, -2.8)),
        ];
        for (z, w) in pts {
            let mut sum = Complex64::new(0.0, 0.0);
            let z_refl = z.conj().inv();
            for k in 0..n {
                sum += basis.eval(k, z_refl).conj() * basis.eval(k, w);
            }
            let v = cd_kernel_circle(&basis, n, z, w);
            assert!((v - sum).norm() < 1e-10, "z={z} w={w}: {v} vs {sum}");
        }
    }

    #[test]
    fn circle_kernel_diagonal_on_circle_is_sum_of_squares() {
        let f = WeightSymbol::exp_cosh(0.9).unwrap();
        let quad = f.circle_quad_order(3);
        let basis = build_circle_basis(&f, 3, quad).unwrap();
        let n = 3;
        for i in 0..6 {
            let z = Complex64::from_polar(1.0, 1.0 + 0.8 * i as f64);
            let mut sum = 0.0;
            for k in 0..n {
                sum += basis.eval(k, z).norm_sqr();
            }
            let v = cd_kernel_circle(&basis, n, z, z);
            assert!((v - c(sum, 0.0)).norm() < 1e-8 * sum.max(1.0));
        }
    }

    #[test]
    fn gaussian_basis_ground_state_and_kappa_ratio() {
        for a in [1.0, 3.0, 16.0] {
            let f = WeightSymbol::gaussian(a).unwrap();
            let basis = build_line_basis(&f, 8, 0.0, 0).unwrap();
            let p0 = basis.eval(0, c(0.37, 0.0));
            assert_relative_eq!(p0.re, (a / std::f64::consts::PI).powf(0.25), max_relative = 1e-13);
            assert!(p0.im.abs() < 1e-15);
        }
        let f = WeightSymbol::gaussian(1.0).unwrap();
        let basis = build_line_basis(&f, 2, 0.0, 0).unwrap();
        assert_relative_eq!(basis.kappa(1) / basis.kappa(0), std::f64::consts::SQRT_2, max_relative = 1e-13);
    }

    #[test]
    fn hermite_route_agrees_with_gram_schmidt_oracle() {
        let f = WeightSymbol::gaussian(2.0).unwrap();
        let hermite = build_line_basis(&f, 6, 0.0, 0).unwrap();
        let gram = build_line_basis_gram(&f, 6, 7.0, 120).unwrap();
        for k in 0..=6 {
            assert_relative_eq!(hermite.kappa(k), gram.kappa(k), max_relative = 1e-10);
            for i in 0..5 {
                let z = c(-1.5 + 0.75 * i as f64, 0.3);
                let a = hermite.eval(k, z);
                let b = gram.eval(k, z);
                assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "k={k} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn gaussian_basis_is_orthonormal_under_quadrature() {
        let f = WeightSymbol::gaussian(1.0).unwrap();
        let basis = build_line_basis(&f, 8, 0.0, 0).unwrap();
        let rule = gauss_legendre(160, -8.0, 8.0).unwrap();
        for j in 0..=8 {
            for k in j..=8 {
                let v = rule.integrate(|z| basis.eval(j, z) * basis.eval(k, z) * f.eval(z));
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((v - c(expected, 0.0)).norm() < 1e-12, "({j},{k}) -> {v}");
            }
        }
    }

    #[test]
    fn hermite_eval_derivative_is_consistent() {
        let f = WeightSymbol::gaussian(3.0).unwrap();
        let basis = build_line_basis(&f, 10, 0.0, 0).unwrap();
        let z = c(0.8, 0.25);
        let h = 1e-6;
        for k in [1usize, 4, 10] {
            let num = (basis.eval(k, z + c(h, 0.0)) - basis.eval(k, z - c(h, 0.0))) / (2.0 * h);
            let ana = basis.eval_deriv(k, z);
            assert!((num - ana).norm() < 1e-6 * (1.0 + ana.norm()));
        }
    }

    #[test]
    fn line_kernel_constant_diagonal_for_degree_one() {
        // For n = 1 the kernel is kappa_0^2 everywhere.
        let f = WeightSymbol::gaussian(1.0).unwrap();
        let basis = build_line_basis(&f, 1, 0.0, 0).unwrap();
        let k0 = basis.kappa(0);
        for (z, w) in [(c(0.3, 0.1), c(-1.2, -0.4)), (c(0.5, 0.0), c(0.5, 0.0))] {
            let v = cd_kernel_line(&basis, 1, z, w);
            assert!((v - c(k0 * k0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn line_kernel_is_symmetric_and_matches_partial_sum() {
        let f = WeightSymbol::gaussian(2.0).unwrap();
        let basis = build_line_basis(&f, 5, 0.0, 0).unwrap();
        let n = 5;
        let pts = [(c(0.7, 0.2), c(-0.4, -0.6)), (c(1.4, -0.3), c(1.1, 0.8))];
        for (z, w) in pts {
            let a = cd_kernel_line(&basis, n, z, w);
            let b = cd_kernel_line(&basis, n, w, z);
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..n {
                sum += basis.eval(k, z) * basis.eval(k, w);
            }
            assert!((a - sum).norm() < 1e-9 * (1.0 + sum.norm()), "{a} vs {sum}");
        }
        // Diagonal limit agrees with the sum of squares.
        let z = c(0.45, 0.0);
        let diag = cd_kernel_line(&basis, n, z, z);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..n {
            sum += basis.eval(k, z) * basis.eval(k, z);
        }
        assert!((diag - sum).norm() < 1e-9 * (1.0 + sum.norm()));
    }

    #[test]
    fn invalid_weights_are_rejected() {
        assert!(WeightSymbol::constant(Support::Circle, 0.0).is_err());
        assert!(WeightSymbol::gaussian(-1.0).is_err());
        assert!(WeightSymbol::exp_cosh(f64::NAN).is_err());
        assert!(WeightSymbol::laurent(0, vec![]).is_err());
    }

    #[test]
    fn mismatched_support_is_rejected() {
        let line = WeightSymbol::gaussian(1.0).unwrap();
        assert!(build_circle_basis(&line, 3, 32).is_err());
        let circle = WeightSymbol::exp_cosh(1.0).unwrap();
        assert!(build_line_basis(&circle, 3, 5.0, 64).is_err());
    }
}
