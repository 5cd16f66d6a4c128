//! Dense complex matrices and LU-based determinants.
//!
//! The matrices in this crate are small (a couple of hundred rows at most,
//! coming from Nystrom discretizations and moment tables), so a plain
//! row-major `Vec<Complex64>` with partial-pivot LU covers every need.

use num_complex::Complex64;

use crate::{Error, Result};

/// Row-major dense complex matrix. Constructors reject non-finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        for (idx, v) in data.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite { row: idx / cols.max(1), col: idx % cols.max(1) });
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix by evaluating `f(i, j)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

/// Determinant returned both as a plain complex value and through its
/// overflow-safe log-modulus.
#[derive(Debug, Clone, Copy)]
pub struct DetValue {
    pub value: Complex64,
    /// ln |det|; `-inf` for an exactly singular matrix.
    pub log_abs: f64,
}

/// Determinant via LU with partial pivoting.
pub fn det_lu(m: &ComplexMatrix) -> Result<Complex64> {
    det_lu_full(m).map(|d| d.value)
}

/// Determinant with log-modulus bookkeeping.
///
/// `value` is the direct pivot product (exact for permutation matrices);
/// `log_abs` stays meaningful when the product itself would leave the f64
/// range.
pub fn det_lu_full(m: &ComplexMatrix) -> Result<DetValue> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of non-square {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(DetValue { value: Complex64::new(1.0, 0.0), log_abs: 0.0 });
    }
    let mut a = m.data.clone();
    let mut sign = 1.0f64;
    let mut value = Complex64::new(1.0, 0.0);
    let mut log_abs = 0.0f64;
    for k in 0..n {
        // Pivot on norm() rather than norm_sqr(): the latter underflows for
        // magnitudes below ~1e-154 and would misreport tiny determinants as
        // exact zeros.
        let mut pivot_row = k;
        let mut pivot_mag = a[k * n + k].norm();
        for i in (k + 1)..n {
            let mag = a[i * n + k].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag == 0.0 {
            return Ok(DetValue { value: Complex64::new(0.0, 0.0), log_abs: f64::NEG_INFINITY });
        }
        if pivot_row != k {
            for j in 0..n {
                a.swap(k * n + j, pivot_row * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        value *= pivot;
        log_abs += pivot_mag.ln();
        for i in (k + 1)..n {
            // Skip structural zeros before dividing: complex division by a
            // subnormal pivot routes through norm_sqr and would turn an
            // exact 0/pivot into NaN.
            if a[i * n + k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let factor = a[i * n + k] / pivot;
            for j in (k + 1)..n {
                let sub = factor * a[k * n + j];
                a[i * n + j] -= sub;
            }
        }
    }
    Ok(DetValue { value: value * sign, log_abs })
}
