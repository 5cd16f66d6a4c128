//! Last-passage percolation with geometric weights: exact-sample Monte
//! Carlo for the point-to-point passage time, its Tracy-Widom rescaling,
//! and the antidiagonal cut decomposition behind the two-field maximum
//! identity.
//!
//! For i.i.d. weights with P(w = k) = (1-q) q^k the passage time to the
//! corner of an N x N field concentrates as G ~ mu N + sigma N^(1/3) chi,
//! where chi follows the GUE Tracy-Widom law and
//!   mu    = 2 sqrt(q) / (1 - sqrt(q)),
//!   sigma = q^(1/6) (1 + sqrt(q))^(1/3) / (1 - sqrt(q)).
//! The lattice-direction constant d = q^(1/6) (1 + sqrt(q))^(-2/3) converts
//! scaled antidiagonal coordinates tau into lattice offsets u = d^(-1)
//! n^(2/3) tau.

use rayon::prelude::*;

use crate::numerics::{geometric_variate, SeedSpec};
use crate::{Error, Result};

/// Rectangular field of geometric weights, stored row-major.
#[derive(Debug, Clone)]
pub struct LppField {
    pub rows: usize,
    pub cols: usize,
    pub q: f64,
    weights: Vec<u32>,
}

impl LppField {
    /// Draws a field from the stream derived from (seed, sample_index), so
    /// a given index always reproduces the same field bit-for-bit.
    pub fn sample(rows: usize, cols: usize, q: f64, seed: &SeedSpec, sample_index: u64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("field must have positive dimensions".into()));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("geometric parameter must lie in (0,1), got {q}")));
        }
        let ln_q_inv = 1.0 / q.ln();
        let mut rng = seed.sample_rng(sample_index);
        let weights = (0..rows * cols)
            .map(|_| geometric_variate(&mut rng, ln_q_inv) as u32)
            .collect();
        Ok(LppField { rows, cols, q, weights })
    }

    pub fn from_weights(rows: usize, cols: usize, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "weight count {} does not fill a {rows} x {cols} field",
                weights.len()
            )));
        }
        Ok(LppField { rows, cols, q: f64::NAN, weights })
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.weights[i * self.cols + j]
    }

    /// The same field read from the opposite corner (180 degree rotation);
    /// passage times from its origin are passage times *to* the original
    /// corner.
    pub fn rotated_180(&self) -> LppField {
        let mut weights = self.weights.clone();
        weights.reverse();
        LppField { rows: self.rows, cols: self.cols, q: self.q, weights }
    }
}

/// Longest up/right passage time from (0,0) to the far corner:
/// G(i,j) = max(G(i-1,j), G(i,j-1)) + w(i,j), by a rolling single-row sweep.
pub fn lpp_passage(field: &LppField) -> u64 {
    let mut row = vec![0u64; field.cols];
    for i in 0..field.rows {
        let mut left = 0u64;
        for j in 0..field.cols {
            let up = if i == 0 { 0 } else { row[j] };
            let best = if j == 0 { up } else { up.max(left) };
            let value = best + field.weight(i, j) as u64;
            // Passage times grow along both lattice directions.
            debug_assert!(value >= left && value >= up);
            left = value;
            row[j] = left;
        }
    }
    row[field.cols - 1]
}

/// Passage times from (0,0) to every cell on the antidiagonal
/// i + j = diag_sum, ordered by increasing row index i. The first entry
/// corresponds to i = max(0, diag_sum - (cols-1)).
pub fn antidiagonal_passage_profile(field: &LppField, diag_sum: usize) -> Result<Vec<u64>> {
    if diag_sum > field.rows + field.cols - 2 {
        return Err(Error::InvalidParameter(format!(
            "antidiagonal {diag_sum} lies outside a {} x {} field",
            field.rows, field.cols
        )));
    }
    let i_min = diag_sum.saturating_sub(field.cols - 1);
    let i_max = diag_sum.min(field.rows - 1);
    let mut profile = vec![0u64; i_max - i_min + 1];
    let mut row = vec![0u64; field.cols];
    for i in 0..=i_max {
        let mut left = 0u64;
        for j in 0..field.cols {
            let up = if i == 0 { 0 } else { row[j] };
            let best = if j == 0 { up } else { up.max(left) };
            let value = best + field.weight(i, j) as u64;
            debug_assert!(value >= left && value >= up);
            left = value;
            row[j] = left;
        }
        if i >= i_min && diag_sum - i < field.cols {
            profile[i - i_min] = row[diag_sum - i];
        }
    }
    Ok(profile)
}

/// Exact cut decomposition of the corner passage time: every monotone
/// path crosses the antidiagonal i + j = diag_sum exactly once, so
///   G = max over cells p on the cut of [to(p) + from(p) - w(p)],
/// where to(p) is the passage time from (0,0) to p and from(p) the passage
/// time from p to the far corner. Returns (direct corner value, cut
/// maximum); the two must agree exactly on every realization.
pub fn cut_decomposition(field: &LppField, diag_sum: usize) -> Result<(u64, u64)> {
    let forward = antidiagonal_passage_profile(field, diag_sum)?;
    let rotated = field.rotated_180();
    let opposite_sum = (field.rows - 1) + (field.cols - 1) - diag_sum;
    let backward = antidiagonal_passage_profile(&rotated, opposite_sum)?;
    let i_min = diag_sum.saturating_sub(field.cols - 1);
    let mut cut_max = 0u64;
    for (offset, fwd) in forward.iter().enumerate() {
        let i = i_min + offset;
        let j = diag_sum - i;
        // Cell (i,j) corresponds to (rows-1-i, cols-1-j) in the rotated
        // field, which sits on its antidiagonal `opposite_sum`.
        let rot_i = field.rows - 1 - i;
        let rot_i_min = opposite_sum.saturating_sub(field.cols - 1);
        let bwd = backward[rot_i - rot_i_min];
        cut_max = cut_max.max(fwd + bwd - field.weight(i, j) as u64);
    }
    Ok((lpp_passage(field), cut_max))
}

/// Law-of-large-numbers and fluctuation constants (mu, sigma, d) of the
/// geometric-weight passage time along the main diagonal.
pub fn lpp_constants(q: f64) -> Result<(f64, f64, f64)> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("geometric parameter must lie in (0,1), got {q}")));
    }
    let r = q.sqrt();
    let mu = 2.0 * r / (1.0 - r);
    let sigma = q.powf(1.0 / 6.0) * (1.0 + r).powf(1.0 / 3.0) / (1.0 - r);
    let d = q.powf(1.0 / 6.0) * (1.0 + r).powf(-2.0 / 3.0);
    Ok((mu, sigma, d))
}

/// Corner passage times of n x n fields, recentred by mu n and rescaled by
/// sigma n^(1/3); the empirical law converges to GUE Tracy-Widom.
pub fn lpp_normalized_samples(
    n: usize,
    q: f64,
    samples: usize,
    seed: &SeedSpec,
) -> Result<Vec<f64>> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and at least one sample".into()));
    }
    let (mu, sigma, _) = lpp_constants(q)?;
    let nf = n as f64;
    let denom = sigma * nf.powf(1.0 / 3.0);
    (0..samples as u64)
        .into_par_iter()
        .map(|index| {
            let field = LppField::sample(n, n, q, seed, index)?;
            Ok((lpp_passage(&field) as f64 - mu * nf) / denom)
        })
        .collect()
}

/// Configuration of the two-field antidiagonal maximum experiment.
#[derive(Debug, Clone, Copy)]
pub struct AirySumConfig {
    /// Aspect parameters of the two independent fields; alpha * n and
    /// beta * n are floored to lattice sizes (callers should record the
    /// rounding when the products are not integers).
    pub alpha: f64,
    pub beta: f64,
    /// Base size; the glued geometry corresponds to an
    /// (alpha + beta) n square.
    pub n: usize,
    pub q: f64,
    /// Half-width of the scan window in scaled units tau; the lattice
    /// window is u = ceil(tau_max d^(-1) n^(2/3)), and tau = 0 restricts
    /// the scan to the shared corner alone. None scans the whole shared
    /// antidiagonal range.
    pub tau_window: Option<f64>,
}

impl AirySumConfig {
    /// Floored lattice endpoint distance of the first field.
    pub fn alpha_n(&self) -> usize {
        (self.alpha * self.n as f64).floor() as usize
    }

    /// Floored lattice endpoint distance of the second field.
    pub fn beta_n(&self) -> usize {
        (self.beta * self.n as f64).floor() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.alpha_n() == 0 || self.beta_n() == 0 {
            return Err(Error::InvalidParameter(
                "need n >= 1 and alpha n, beta n >= 1 after flooring".into(),
            ));
        }
        Ok(())
    }

    /// Lattice half-width of the endpoint scan, clamped so that all
    /// endpoints stay inside both fields.
    pub fn lattice_window(&self) -> Result<usize> {
        self.validate()?;
        let full = self.alpha_n().min(self.beta_n()) - 1;
        match self.tau_window {
            None => Ok(full),
            Some(tau) => {
                if !(tau >= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "scan window must be nonnegative, got {tau}"
                    )));
                }
                let (_, _, d) = lpp_constants(self.q)?;
                let u = (tau / d * (self.n as f64).powf(2.0 / 3.0)).ceil() as usize;
                Ok(u.min(full))
            }
        }
    }
}

/// Endpoint-profile scan shared by the sampling entry points: maximum of
/// profile1(an - 1 + u) + profile2(bn - 1 + u) over |u| <= u_win, where
/// each profile starts at the given row index.
fn profile_scan_max(
    profile1: &[u64],
    start1: usize,
    an: usize,
    profile2: &[u64],
    start2: usize,
    bn: usize,
    u_win: usize,
) -> u64 {
    let mut best = 0u64;
    for u in -(u_win as i64)..=(u_win as i64) {
        let i1 = (an as i64 - 1 + u) as usize;
        let i2 = (bn as i64 - 1 + u) as usize;
        best = best.max(profile1[i1 - start1] + profile2[i2 - start2]);
    }
    best
}

struct AirySumRealization {
    profile1: Vec<u64>,
    start1: usize,
    profile2: Vec<u64>,
    start2: usize,
}

impl AirySumConfig {
    fn normalize(&self, best: u64) -> Result<f64> {
        let (mu, sigma, _) = lpp_constants(self.q)?;
        let nf = (self.alpha_n() + self.beta_n()) as f64;
        Ok((best as f64 - mu * nf) / (sigma * nf.powf(1.0 / 3.0)))
    }

    /// Draws the two independent fields sized for scans up to `u_win` and
    /// reduces them to their shared-antidiagonal passage profiles.
    fn realize(&self, seed: &SeedSpec, index: u64, u_win: usize) -> Result<AirySumRealization> {
        self.validate()?;
        let an = self.alpha_n();
        let bn = self.beta_n();
        let size1 = an + u_win;
        let size2 = bn + u_win;
        let field1 =
            LppField::sample(size1, size1, self.q, &seed.with_stream(2 * seed.stream_id), index)?;
        let field2 = LppField::sample(
            size2,
            size2,
            self.q,
            &seed.with_stream(2 * seed.stream_id + 1),
            index,
        )?;
        let profile1 = antidiagonal_passage_profile(&field1, 2 * an - 2)?;
        let profile2 = antidiagonal_passage_profile(&field2, 2 * bn - 2)?;
        // Endpoint (an + u, an - u) is 0-indexed (an - 1 + u, an - 1 - u);
        // the profile starts at i = max(0, 2 an - 2 - (size1 - 1)).
        Ok(AirySumRealization {
            profile1,
            start1: (2 * an - 2).saturating_sub(size1 - 1),
            profile2,
            start2: (2 * bn - 2).saturating_sub(size2 - 1),
        })
    }
}

/// One realization of the two-field maximum
///   max_u [ G1(alpha n + u, alpha n - u) + G2(beta n + u, beta n - u) ],
/// reported already recentred by mu (alpha+beta) n and rescaled by
/// sigma ((alpha+beta) n)^(1/3). The two fields are drawn from independent
/// substreams of `seed` at the given sample index.
pub fn airy_sum_sample(cfg: &AirySumConfig, seed: &SeedSpec, index: u64) -> Result<f64> {
    let u_win = cfg.lattice_window()?;
    let real = cfg.realize(seed, index, u_win)?;
    let an = cfg.alpha_n();
    let bn = cfg.beta_n();
    let best = profile_scan_max(
        &real.profile1, real.start1, an, &real.profile2, real.start2, bn, u_win,
    );
    cfg.normalize(best)
}

/// Windowed and full-antidiagonal maxima evaluated on the *same* pair of
/// fields (sampled at full-scan size), normalized as in
/// [`airy_sum_sample`]. Used to quantify how often the restricted scan
/// already attains the global maximum.
pub fn airy_sum_sample_windowed_and_full(
    cfg: &AirySumConfig,
    seed: &SeedSpec,
    index: u64,
) -> Result<(f64, f64)> {
    let full_cfg = AirySumConfig { tau_window: None, ..*cfg };
    let full_win = full_cfg.lattice_window()?;
    let u_win = cfg.lattice_window()?;
    let real = cfg.realize(seed, index, full_win)?;
    let an = cfg.alpha_n();
    let bn = cfg.beta_n();
    let windowed = profile_scan_max(
        &real.profile1, real.start1, an, &real.profile2, real.start2, bn, u_win,
    );
    let full = profile_scan_max(
        &real.profile1, real.start1, an, &real.profile2, real.start2, bn, full_win,
    );
    Ok((cfg.normalize(windowed)?, cfg.normalize(full)?))
}

/// Batch of normalized two-field maxima over consecutive sample indices.
pub fn airy_sum_samples(
    cfg: &AirySumConfig,
    seed: &SeedSpec,
    samples: usize,
) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    (0..samples as u64)
        .into_par_iter()
        .map(|index| airy_sum_sample(cfg, seed, index))
        .collect()
}
