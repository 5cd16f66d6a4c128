//! Distribution comparisons for the Monte-Carlo experiments: empirical
//! CDFs, Kolmogorov-Smirnov distances against the Tracy-Widom reference,
//! and a chi-square check of the geometric weight sampler.

use crate::fredholm::airy::tracy_widom_f;
use crate::{Error, Result};

/// Empirical and reference CDF values tabulated on a common grid.
#[derive(Debug, Clone)]
pub struct DistTable {
    pub xs: Vec<f64>,
    pub empirical: Vec<f64>,
    pub reference: Vec<f64>,
}

impl DistTable {
    /// Largest pointwise gap between the two tabulated CDFs.
    pub fn sup_distance(&self) -> f64 {
        self.empirical
            .iter()
            .zip(&self.reference)
            .map(|(e, r)| (e - r).abs())
            .fold(0.0, f64::max)
    }
}

/// Fraction of samples <= x, given an ascending-sorted slice.
pub fn empirical_cdf_sorted(sorted: &[f64], x: f64) -> f64 {
    let count = sorted.partition_point(|&v| v <= x);
    count as f64 / sorted.len() as f64
}

/// The evaluation grid used for Tracy-Widom comparisons: [-5, 2] in steps
/// of 0.05, which brackets all but ~1e-4 of the limiting law's mass.
pub fn tracy_widom_grid() -> Vec<f64> {
    (0..=140).map(|i| -5.0 + 0.05 * i as f64).collect()
}

/// One-sample Kolmogorov-Smirnov distance between the samples and the GUE
/// Tracy-Widom CDF, evaluated on [`tracy_widom_grid`]; returns the
/// distance together with the tabulated comparison.
pub fn ks_against_tracy_widom(samples: &[f64], quad_order: usize) -> Result<(f64, DistTable)> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample"));
    let xs = tracy_widom_grid();
    let mut empirical = Vec::with_capacity(xs.len());
    let mut reference = Vec::with_capacity(xs.len());
    for &x in &xs {
        empirical.push(empirical_cdf_sorted(&sorted, x));
        reference.push(tracy_widom_f(x, quad_order)?);
    }
    let table = DistTable { xs, empirical, reference };
    Ok((table.sup_distance(), table))
}

/// Two-sample Kolmogorov-Smirnov distance: the largest gap between the two
/// empirical CDFs over the pooled sample points.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("need samples on both sides".into()));
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|x, y| x.partial_cmp(y).expect("non-finite sample"));
    sb.sort_by(|x, y| x.partial_cmp(y).expect("non-finite sample"));
    let mut sup: f64 = 0.0;
    for &x in sa.iter().chain(sb.iter()) {
        let fa = empirical_cdf_sorted(&sa, x);
        let fb = empirical_cdf_sorted(&sb, x);
        sup = sup.max((fa - fb).abs());
    }
    Ok(sup)
}

/// Chi-square goodness-of-fit verdict for geometric(q) observations.
#[derive(Debug, Clone, Copy)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    /// Rejection threshold at significance 1e-3 for the fixed binning.
    pub critical: f64,
    pub pass: bool,
}

/// Bins observed weights into counts {0, 1, ..., 20, >= 21} and compares
/// against P(w = k) = (1-q) q^k. The critical value 46.80 is the 0.999
/// quantile of chi-square with 21 degrees of freedom.
pub fn chi_square_geometric(observations: &[u32], q: f64) -> Result<ChiSquareResult> {
    const CUT: usize = 21;
    const CRITICAL: f64 = 46.80;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("geometric parameter must lie in (0,1), got {q}")));
    }
    let n = observations.len();
    if n < 1000 {
        return Err(Error::InvalidParameter(format!(
            "chi-square binning needs at least 1000 observations, got {n}"
        )));
    }
    let mut counts = [0u64; CUT + 1];
    for &w in observations {
        counts[(w as usize).min(CUT)] += 1;
    }
    let nf = n as f64;
    let mut statistic = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        let p = if k < CUT { (1.0 - q) * q.powi(k as i32) } else { q.powi(CUT as i32) };
        let expected = nf * p;
        let diff = c as f64 - expected;
        statistic += diff * diff / expected;
    }
    Ok(ChiSquareResult { statistic, dof: CUT, critical: CRITICAL, pass: statistic < CRITICAL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{geometric_variate, normal_pair, SeedSpec};

    #[test]
    fn empirical_cdf_counts_ties_inclusively() {
        let sorted = [1.0, 2.0, 2.0, 3.0];
        assert_eq!(empirical_cdf_sorted(&sorted, 0.5), 0.0);
        assert_eq!(empirical_cdf_sorted(&sorted, 2.0), 0.75);
        assert_eq!(empirical_cdf_sorted(&sorted, 3.0), 1.0);
        assert_eq!(empirical_cdf_sorted(&sorted, 10.0), 1.0);
    }

    #[test]
    fn ks_two_sample_detects_shift_and_accepts_identity() {
        let a: Vec<f64> = (0..200).map(|i| i as f64 / 200.0).collect();
        assert!(ks_two_sample(&a, &a).unwrap() <= 1.0 / 200.0 + 1e-12);
        let b: Vec<f64> = a.iter().map(|x| x + 0.5).collect();
        assert!(ks_two_sample(&a, &b).unwrap() >= 0.45);
    }

    #[test]
    fn ks_grid_reference_is_a_cdf() {
        let (ks, table) = ks_against_tracy_widom(&[0.0], 24).unwrap();
        assert!(ks <= 1.0);
        let mut prev = 0.0;
        for (&x, &f) in table.xs.iter().zip(&table.reference) {
            assert!(f >= prev - 1e-12, "reference not monotone at {x}");
            assert!((0.0..=1.0).contains(&f));
            prev = f;
        }
        assert!(table.reference.first().unwrap() < &1e-3);
        assert!(table.reference.last().unwrap() > &0.95);
    }

    #[test]
    fn tracy_widom_samples_pass_their_own_ks() {
        // Draw from the reference law by inverse transform on a dense
        // grid interpolant; the resulting KS distance must be small.
        let xs = tracy_widom_grid();
        let fs: Vec<f64> = xs.iter().map(|&x| tracy_widom_f(x, 24).unwrap()).collect();
        let mut rng = SeedSpec::new(42, 0).rng();
        let mut samples = Vec::with_capacity(800);
        while samples.len() < 800 {
            let u = crate::numerics::uniform_open01(&mut rng);
            if u <= fs[0] || u >= *fs.last().unwrap() {
                continue;
            }
            let k = fs.partition_point(|&f| f < u);
            let t = (u - fs[k - 1]) / (fs[k] - fs[k - 1]);
            samples.push(xs[k - 1] + t * (xs[k] - xs[k - 1]));
        }
        let (ks, _) = ks_against_tracy_widom(&samples, 24).unwrap();
        // 99.9% quantile of the KS statistic at m = 800 is about 0.069.
        assert!(ks < 0.069, "self-consistency KS {ks}");
    }

    #[test]
    fn chi_square_accepts_matching_and_rejects_wrong_q() {
        let mut rng = SeedSpec::new(7, 1).rng();
        let ln_q_inv = 1.0 / 0.25f64.ln();
        let obs: Vec<u32> = (0..20000).map(|_| geometric_variate(&mut rng, ln_q_inv) as u32).collect();
        let good = chi_square_geometric(&obs, 0.25).unwrap();
        assert!(good.pass, "statistic {} above {}", good.statistic, good.critical);
        let bad = chi_square_geometric(&obs, 0.35).unwrap();
        assert!(!bad.pass, "wrong-parameter fit should fail, got {}", bad.statistic);
    }

    #[test]
    fn ks_against_gaussian_samples_is_large() {
        let mut rng = SeedSpec::new(3, 0).rng();
        let mut samples = Vec::with_capacity(600);
        while samples.len() < 600 {
            let (a, b) = normal_pair(&mut rng);
            samples.push(a);
            samples.push(b);
        }
        let (ks, _) = ks_against_tracy_widom(&samples, 24).unwrap();
        // A standard normal is centered at 0, Tracy-Widom near -1.77.
        assert!(ks > 0.3, "expected a clear mismatch, got {ks}");
    }
}
