//! Monte-Carlo oracles for the width distributions and the two-field
//! maximum: direct path simulation, with no determinants involved, checked
//! against the analytic evaluations.

use detwidth::lpp::{
    airy_sum_sample_windowed_and_full, airy_sum_samples, cut_decomposition, AirySumConfig,
    LppField,
};
use detwidth::numerics::{geometric_variate, normal_pair, uniform_open01, SeedSpec};
use detwidth::stats::{chi_square_geometric, empirical_cdf_sorted, ks_two_sample};
use detwidth::width::{dt_s_quad_exact, width_cdf_bb, width_cdf_ct, width_cdf_dt};
use rand_chacha::ChaCha8Rng;

/// Theta-series law of the maximum of a normalized Brownian excursion:
/// P(max <= u) = 1 + 2 sum_{k>=1} (1 - 4 k^2 u^2) exp(-2 k^2 u^2).
fn excursion_max_cdf(u: f64) -> f64 {
    let mut acc = 1.0;
    for k in 1..60 {
        let ku = (k * k) as f64 * u * u;
        let term = 2.0 * (1.0 - 4.0 * ku) * (-2.0 * ku).exp();
        acc += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    acc
}

struct NormalBuffer {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalBuffer {
    fn new(rng: ChaCha8Rng) -> Self {
        NormalBuffer { rng, spare: None }
    }
    fn next(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        let (a, b) = normal_pair(&mut self.rng);
        self.spare = Some(b);
        a
    }
}

/// Maximum of a normalized Brownian excursion sampled exactly in law as the
/// radius of a three-dimensional Brownian bridge (sequential conditioning
/// on a K-point grid). Returns the grid maxima on the fine grid and on its
/// four-fold coarsening, for Richardson extrapolation of the sqrt(h)
/// discretization bias of the CDF.
fn excursion_max_pair(normals: &mut NormalBuffer, k_fine: usize) -> (f64, f64) {
    let mut b = [0.0f64; 3];
    let mut max_fine = 0.0f64;
    let mut max_coarse = 0.0f64;
    for j in 0..k_fine - 1 {
        let t = j as f64 / k_fine as f64;
        let t_next = (j + 1) as f64 / k_fine as f64;
        let shrink = (1.0 - t_next) / (1.0 - t);
        let sd = ((t_next - t) * shrink).sqrt();
        let mut r2 = 0.0;
        for slot in b.iter_mut() {
            *slot = *slot * shrink + sd * normals.next();
            r2 += *slot * *slot;
        }
        let r = r2.sqrt();
        max_fine = max_fine.max(r);
        if (j + 1) % 4 == 0 {
            max_coarse = max_coarse.max(r);
        }
    }
    (max_fine, max_coarse)
}

#[test]
fn bridge_pair_width_matches_excursion_monte_carlo() {
    // The width of two non-intersecting bridges is sqrt(2) times the
    // excursion maximum; the Monte-Carlo estimate (with the grid bias
    // removed by Richardson extrapolation: bias ~ c sqrt(h), so
    // 2 P_fine - P_coarse cancels it for a 4x grid ratio) must agree with
    // both the theta series and the determinant evaluation.
    let samples = 30_000usize;
    let k_fine = 512usize;
    let mut normals = NormalBuffer::new(SeedSpec::new(4242, 0).rng());
    let thresholds = [1.8f64, 2.4];
    let us: Vec<f64> = thresholds.iter().map(|m| m / std::f64::consts::SQRT_2).collect();
    let mut hits_fine = [0usize; 2];
    let mut hits_coarse = [0usize; 2];
    for _ in 0..samples {
        let (max_fine, max_coarse) = excursion_max_pair(&mut normals, k_fine);
        for (i, &u) in us.iter().enumerate() {
            if max_fine <= u {
                hits_fine[i] += 1;
            }
            if max_coarse <= u {
                hits_coarse[i] += 1;
            }
        }
    }
    for (i, &m) in thresholds.iter().enumerate() {
        let p_fine = hits_fine[i] as f64 / samples as f64;
        let p_coarse = hits_coarse[i] as f64 / samples as f64;
        let extrapolated = 2.0 * p_fine - p_coarse;
        let series = excursion_max_cdf(us[i]);
        let det = width_cdf_bb(2, m, 24).unwrap().value;
        assert!(
            (extrapolated - series).abs() < 0.015,
            "M={m}: MC {extrapolated:.4} vs series {series:.4} (fine {p_fine:.4}, coarse {p_coarse:.4})"
        );
        assert!(
            (extrapolated - det).abs() < 0.015,
            "M={m}: MC {extrapolated:.4} vs determinant {det:.4}"
        );
    }
}

/// One continuous-time walker trajectory over [0, t_max]: jump times of a
/// rate-1 Poisson clock with fair +-1 marks. Returns (times, steps).
fn sample_ct_walker(rng: &mut ChaCha8Rng, t_max: f64) -> (Vec<f64>, Vec<i64>) {
    let mut times = Vec::new();
    let mut steps = Vec::new();
    let mut t = -uniform_open01(rng).ln();
    while t < t_max {
        times.push(t);
        steps.push(if uniform_open01(rng) < 0.5 { 1 } else { -1 });
        t -= uniform_open01(rng).ln();
    }
    (times, steps)
}

#[test]
fn ct_walk_width_matches_rejection_monte_carlo() {
    // Two rate-1 symmetric walkers from (0, 1), conditioned to return at
    // T = 1.5 and stay strictly ordered; the maximal gap distribution is
    // compared to the circle-average determinant ratio.
    let t_max = 1.5f64;
    let mut rng = SeedSpec::new(5151, 0).rng();
    let wanted = 25_000usize;
    let mut widths = Vec::with_capacity(wanted);
    while widths.len() < wanted {
        let (t0, s0) = sample_ct_walker(&mut rng, t_max);
        let (t1, s1) = sample_ct_walker(&mut rng, t_max);
        if s0.iter().sum::<i64>() != 0 || s1.iter().sum::<i64>() != 0 {
            continue;
        }
        // Merge the two event sequences chronologically; simultaneous
        // events have probability zero.
        let (mut i0, mut i1) = (0usize, 0usize);
        let (mut x0, mut x1) = (0i64, 1i64);
        let mut width = x1 - x0;
        let mut ordered = true;
        while i0 < t0.len() || i1 < t1.len() {
            let take0 = i1 >= t1.len() || (i0 < t0.len() && t0[i0] < t1[i1]);
            if take0 {
                x0 += s0[i0];
                i0 += 1;
            } else {
                x1 += s1[i1];
                i1 += 1;
            }
            if x0 >= x1 {
                ordered = false;
                break;
            }
            width = width.max(x1 - x0);
        }
        if ordered {
            widths.push(width);
        }
    }
    for m in [2i64, 3, 4] {
        let mc = widths.iter().filter(|&&w| w < m).count() as f64 / wanted as f64;
        let det = width_cdf_ct(2, t_max, m as usize, 24).unwrap().value;
        assert!(
            (mc - det).abs() < 0.012,
            "M={m}: rejection MC {mc:.4} vs determinant {det:.4}"
        );
    }
}

/// Exhaustive check of the discrete-time formula for three walkers: all
/// triples of returning +-1 sequences, strict order at every step.
#[test]
fn dt_three_walker_enumeration_matches_determinant() {
    for t in [1usize, 2] {
        let steps = 2 * t;
        let seqs: Vec<Vec<i64>> = (0..1u32 << steps)
            .filter_map(|mask| {
                let moves: Vec<i64> =
                    (0..steps).map(|b| if mask >> b & 1 == 1 { 1 } else { -1 }).collect();
                (moves.iter().sum::<i64>() == 0).then_some(moves)
            })
            .collect();
        let mut widths = Vec::new();
        for p0 in &seqs {
            for p1 in &seqs {
                'mid: for p2 in &seqs {
                    let mut xs = [0i64, 2, 4];
                    let mut width = xs[2] - xs[0];
                    for step in 0..steps {
                        xs[0] += p0[step];
                        xs[1] += p1[step];
                        xs[2] += p2[step];
                        if xs[0] >= xs[1] || xs[1] >= xs[2] {
                            continue 'mid;
                        }
                        width = width.max(xs[2] - xs[0]);
                    }
                    widths.push(width);
                }
            }
        }
        let total = widths.len() as f64;
        assert!(total > 0.0);
        for m in 2..=(3 + t + 1) {
            let expected = widths.iter().filter(|&&w| w < 2 * m as i64).count() as f64 / total;
            let got = width_cdf_dt(3, t, m, dt_s_quad_exact(3, t, m)).unwrap().value;
            assert!(
                (got - expected).abs() < 1e-10,
                "T={t} M={m}: determinant {got} vs enumeration {expected}"
            );
        }
    }
}

#[test]
fn windowed_two_field_scan_agrees_with_full_scan() {
    let cfg = AirySumConfig { alpha: 1.0, beta: 1.0, n: 64, q: 0.25, tau_window: Some(2.0) };
    assert!(cfg.lattice_window().unwrap() < 63, "window must truncate the scan");
    let seed = SeedSpec::new(8088, 0);
    let trials = 1200u64;
    let mut agree = 0usize;
    for index in 0..trials {
        let (w, f) = airy_sum_sample_windowed_and_full(&cfg, &seed, index).unwrap();
        assert!(w <= f + 1e-12, "windowed {w} above full {f}");
        if (w - f).abs() < 1e-12 {
            agree += 1;
        }
    }
    let frac = agree as f64 / trials as f64;
    assert!(frac >= 0.995, "windowed scan found the maximum in only {frac:.4} of trials");
}

#[test]
fn two_field_maximum_is_symmetric_in_the_aspect_pair() {
    let base = AirySumConfig { alpha: 2.0, beta: 1.0, n: 20, q: 0.25, tau_window: Some(1.5) };
    let flipped = AirySumConfig { alpha: 1.0, beta: 2.0, ..base };
    let a = airy_sum_samples(&base, &SeedSpec::new(606, 0), 1500).unwrap();
    let b = airy_sum_samples(&flipped, &SeedSpec::new(707, 0), 1500).unwrap();
    let ks = ks_two_sample(&a, &b).unwrap();
    // Same law, independent streams: 1500-vs-1500 two-sample KS should sit
    // near its null typical value (~0.02-0.03).
    assert!(ks < 0.06, "aspect-swapped samples differ: KS {ks:.4}");
}

#[test]
fn corner_only_scan_is_stochastically_below_the_full_scan() {
    // tau = 0 keeps only the shared corner endpoint u = 0. Pathwise the
    // corner sum is <= the scanned maximum, so its CDF must dominate
    // pointwise, with a strictly positive gap in the bulk.
    let cfg = AirySumConfig { alpha: 1.0, beta: 1.0, n: 24, q: 0.25, tau_window: Some(0.0) };
    assert_eq!(cfg.lattice_window().unwrap(), 0);
    let seed = SeedSpec::new(9099, 0);
    let trials = 800u64;
    let mut corner = Vec::with_capacity(trials as usize);
    let mut full = Vec::with_capacity(trials as usize);
    for index in 0..trials {
        let (w, f) = airy_sum_sample_windowed_and_full(&cfg, &seed, index).unwrap();
        assert!(w <= f + 1e-12, "corner sum {w} above scanned maximum {f}");
        corner.push(w);
        full.push(f);
    }
    corner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    full.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut grid: Vec<f64> = corner.iter().chain(full.iter()).copied().collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for &x in &grid {
        assert!(
            empirical_cdf_sorted(&corner, x) + 1e-12 >= empirical_cdf_sorted(&full, x),
            "corner-sum CDF dips below the full-scan CDF at {x}"
        );
    }
    let median_full = full[full.len() / 2];
    let gap = empirical_cdf_sorted(&corner, median_full) - 0.5;
    assert!(gap > 0.05, "expected a clear gap at the full-scan median, got {gap:.4}");
}

#[test]
fn cut_identity_holds_on_a_thousand_random_fields() {
    // All nine (rows, cols) pairs from {8, 16, 32}^2, square and
    // rectangular alike, with the cut position swept deterministically.
    let seed = SeedSpec::new(515, 9);
    let sides = [8usize, 16, 32];
    let mut checked = 0usize;
    let mut stream = 0u64;
    for &rows in &sides {
        for &cols in &sides {
            for index in 0..112u64 {
                let field =
                    LppField::sample(rows, cols, 0.25, &seed.with_stream(stream), index).unwrap();
                let diag = (index as usize * 7 + stream as usize) % (rows + cols - 1);
                let (direct, via_cut) = cut_decomposition(&field, diag).unwrap();
                assert_eq!(direct, via_cut, "{rows}x{cols}, sample {index}, cut {diag}");
                checked += 1;
            }
            stream += 1;
        }
    }
    assert!(checked >= 1000);
}

#[test]
fn geometric_sampler_matches_its_pmf_at_one_million_draws() {
    let q = 0.25f64;
    let ln_q_inv = 1.0 / q.ln();
    let mut rng = SeedSpec::new(321, 4).rng();
    let obs: Vec<u32> =
        (0..1_000_000).map(|_| geometric_variate(&mut rng, ln_q_inv) as u32).collect();
    let result = chi_square_geometric(&obs, q).unwrap();
    assert!(
        result.pass,
        "chi-square {:.2} above the 0.1% critical value {:.2}",
        result.statistic, result.critical
    );
}
