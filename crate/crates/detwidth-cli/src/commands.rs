//! One function per subcommand. Each returns the CSV table, a JSON summary
//! for the manifest, and a pass/fail verdict; persistence and exit-code
//! mapping live in main.

use detwidth::dets::{
    continuous_hankel, continuous_toeplitz, discrete_hankel, discrete_toeplitz,
    gaussian_half_extent, gaussian_quad_order, DiscreteNodeSet,
};
use detwidth::fredholm::airy::{limiting_kernel_det, tracy_widom_f, SoftEdgeParams};
use detwidth::fredholm::{
    circle_pair_defaults, line_pair_order, thm1_fredholm, thm2_fredholm, Assembly, LinePairParams,
};
use detwidth::lpp::{
    airy_sum_samples, cut_decomposition, lpp_constants, lpp_normalized_samples, AirySumConfig,
    LppField,
};
use detwidth::numerics::{uniform_open01, SeedSpec};
use detwidth::orthopoly::{Support, WeightSymbol};
use detwidth::stats::{ks_against_tracy_widom, DistTable};
use detwidth::width::{
    dt_s_quad_exact, poisson_check, scaling_law, width_cdf_bb, width_cdf_ct, width_cdf_dt,
    ProcessSpec, WidthCdf,
};
use serde_json::json;

use crate::config::{CliError, CliResult};
use crate::output::{fmt_float, fmt_int, CommandOutcome, CsvTable};

const NAN: f64 = f64::NAN;
/// Fixed quadrature order of the reference CDF used for comparison columns.
const REFERENCE_TW_ORDER: usize = 40;

/// Parses "name" or "name:arg" circle-symbol labels: constant:<c>,
/// exp_cosh:<t>, binom:<T>.
fn parse_circle_symbol(spec: &str) -> CliResult<WeightSymbol> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (spec.trim(), None),
    };
    let num = |what: &str| -> CliResult<f64> {
        let raw = arg.ok_or_else(|| {
            CliError::Config(format!("symbol {spec:?} needs an argument ({what}), e.g. {name}:1.0"))
        })?;
        raw.parse::<f64>()
            .map_err(|_| CliError::Config(format!("symbol {spec:?}: cannot parse {raw:?} as a number")))
    };
    match name {
        "constant" => {
            let c = match arg {
                None => 1.0,
                Some(_) => num("the constant value")?,
            };
            WeightSymbol::constant(Support::Circle, c).map_err(|e| CliError::Config(e.to_string()))
        }
        "exp_cosh" => {
            let t = num("the duration T")?;
            WeightSymbol::exp_cosh(t).map_err(|e| CliError::Config(e.to_string()))
        }
        "binom" => {
            let t = num("the step count T")?;
            if !(t >= 1.0 && t.fract() == 0.0 && t <= u32::MAX as f64) {
                return Err(CliError::Config(format!(
                    "symbol {spec:?}: binom needs a positive integer argument"
                )));
            }
            Ok(WeightSymbol::binom(t as u32))
        }
        other => Err(CliError::Config(format!(
            "unknown symbol {other:?}; supported: constant[:c], exp_cosh:t, binom:T"
        ))),
    }
}

pub struct VerifyToeplitzParams {
    pub symbols: Vec<String>,
    pub n_min: usize,
    pub n_max: usize,
    pub tol: f64,
}

/// Circle identity over a symbol grid: the discrete determinant over the
/// m-th roots of unity against the continuous determinant times the
/// conversion factor. Rows with n > m have a structurally zero left side
/// and are marked skipped.
pub fn verify_toeplitz(p: &VerifyToeplitzParams) -> CliResult<CommandOutcome> {
    if p.n_min == 0 || p.n_min > p.n_max {
        return Err(CliError::Config(format!(
            "need 1 <= n-min <= n-max, got {}..{}",
            p.n_min, p.n_max
        )));
    }
    if !(p.tol > 0.0) {
        return Err(CliError::Config("tol must be positive".into()));
    }
    let mut table =
        CsvTable::new(vec!["f", "n", "m", "lhs", "rhs", "relative_residual", "status"]);
    let mut max_residual = 0.0f64;
    let mut max_err_estimate = 0.0f64;
    let (mut cases, mut skipped) = (0usize, 0usize);
    for spec in &p.symbols {
        let f = parse_circle_symbol(spec)?;
        for n in p.n_min..=p.n_max {
            let cont = continuous_toeplitz(&f, n, f.circle_quad_order(n))?;
            for m in n.saturating_sub(1).max(1)..=(2 * n + 4) {
                let nodes = DiscreteNodeSet::roots_of_unity(m)?;
                let disc = discrete_toeplitz(&f, &nodes, n)?;
                if n > m {
                    table.push(vec![
                        spec.clone(),
                        fmt_int(n),
                        fmt_int(m),
                        fmt_float(disc.value.re),
                        fmt_float(NAN),
                        fmt_float(NAN),
                        "skipped".into(),
                    ]);
                    skipped += 1;
                    continue;
                }
                let det =
                    thm1_fredholm(&f, nodes.kind(), n, &circle_pair_defaults(&f, m, n), Assembly::BalancedSqrt)?;
                let rhs = cont.value * det.value;
                let residual = (rhs - disc.value).norm() / disc.value.norm();
                max_residual = max_residual.max(residual);
                max_err_estimate = max_err_estimate.max(det.err_estimate);
                cases += 1;
                let status = if residual < p.tol { "ok" } else { "fail" };
                table.push(vec![
                    spec.clone(),
                    fmt_int(n),
                    fmt_int(m),
                    fmt_float(disc.value.re),
                    fmt_float(rhs.re),
                    fmt_float(residual),
                    status.into(),
                ]);
            }
        }
    }
    let numeric_ok = max_residual < p.tol;
    Ok(CommandOutcome {
        table,
        config_echo: json!({
            "symbols": p.symbols, "n-min": p.n_min, "n-max": p.n_max, "tol": p.tol,
        }),
        results: json!({
            "cases": cases,
            "skipped": skipped,
            "max_relative_residual": max_residual,
            "max_conversion_det_err_estimate": max_err_estimate,
            "tol": p.tol,
        }),
        numeric_ok,
        status_line: format!(
            "verify-toeplitz: {cases} cases ({skipped} skipped), max residual {max_residual:.2e} (tol {:.0e})",
            p.tol
        ),
    })
}

pub struct VerifyHankelParams {
    pub n_min: usize,
    pub n_max: usize,
    pub d: f64,
    pub delta: f64,
    pub a: Option<f64>,
    pub s_values: Vec<f64>,
    pub tol: f64,
}

/// Line identity on the shifted lattice (k - s)/d with a Gaussian weight:
/// plain lattice sums against the continuous determinant times the line
/// conversion factor. The Gaussian rate defaults to the matrix size so the
/// instance stays well scaled at every n.
pub fn verify_hankel(p: &VerifyHankelParams) -> CliResult<CommandOutcome> {
    if p.n_min == 0 || p.n_min > p.n_max {
        return Err(CliError::Config(format!(
            "need 1 <= n-min <= n-max, got {}..{}",
            p.n_min, p.n_max
        )));
    }
    if !(p.d > 0.0 && p.delta > 0.0 && p.tol > 0.0) {
        return Err(CliError::Config("d, delta, and tol must be positive".into()));
    }
    if p.s_values.is_empty() {
        return Err(CliError::Config("need at least one lattice shift s".into()));
    }
    let mut table =
        CsvTable::new(vec!["f", "n", "d", "s", "lhs", "rhs", "relative_residual", "status"]);
    let mut max_residual = 0.0f64;
    let mut max_err_estimate = 0.0f64;
    let mut cases = 0usize;
    for n in p.n_min..=p.n_max {
        let a = p.a.unwrap_or(n as f64);
        let label = format!("gaussian:{a}");
        let f = WeightSymbol::gaussian(a)?.with_b_constant(p.d)?;
        let f_plain = WeightSymbol::gaussian(a)?;
        let ext = gaussian_half_extent(a, 2 * n) + 2.0 / p.d;
        let quad = gaussian_quad_order(a, ext, 2 * n.saturating_sub(1));
        let cont = continuous_hankel(&f, n, ext, quad)?;
        let half_len = ext + 1.0 / p.d;
        let params = LinePairParams {
            delta: p.delta,
            half_len,
            order: line_pair_order(half_len, p.delta, 10.0),
        };
        for &s in &p.s_values {
            let nodes = DiscreteNodeSet::shifted_lattice(p.d, s, ext)?;
            let disc = discrete_hankel(&f_plain, &nodes, n)?;
            let det = thm2_fredholm(&f, p.d, s, n, &params, Assembly::BalancedSqrt)?;
            let rhs = cont.value * det.value;
            let residual = (rhs - disc.value).norm() / disc.value.norm();
            max_residual = max_residual.max(residual);
            max_err_estimate = max_err_estimate.max(det.err_estimate);
            cases += 1;
            let status = if residual < p.tol { "ok" } else { "fail" };
            table.push(vec![
                label.clone(),
                fmt_int(n),
                fmt_float(p.d),
                fmt_float(s),
                fmt_float(disc.value.re),
                fmt_float(rhs.re),
                fmt_float(residual),
                status.into(),
            ]);
        }
    }
    let numeric_ok = max_residual < p.tol;
    Ok(CommandOutcome {
        table,
        config_echo: json!({
            "n-min": p.n_min, "n-max": p.n_max, "d": p.d, "delta": p.delta,
            "a": p.a, "s-values": p.s_values, "tol": p.tol,
        }),
        results: json!({
            "cases": cases,
            "max_relative_residual": max_residual,
            "max_conversion_det_err_estimate": max_err_estimate,
            "tol": p.tol,
        }),
        numeric_ok,
        status_line: format!(
            "verify-hankel: {cases} cases, max residual {max_residual:.2e} (tol {:.0e})",
            p.tol
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthProcess {
    BrownianBridge,
    CtSsrw,
    DtSsrw,
}

impl WidthProcess {
    pub fn parse(raw: &str) -> CliResult<Self> {
        match raw {
            "bb" | "brownian-bridge" => Ok(WidthProcess::BrownianBridge),
            "ct" | "ct-ssrw" => Ok(WidthProcess::CtSsrw),
            "dt" | "dt-ssrw" => Ok(WidthProcess::DtSsrw),
            other => Err(CliError::Config(format!(
                "unknown process {other:?}; supported: bb | ct | dt"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            WidthProcess::BrownianBridge => "brownian-bridge",
            WidthProcess::CtSsrw => "ct-ssrw",
            WidthProcess::DtSsrw => "dt-ssrw",
        }
    }
}

pub struct WidthParams {
    pub process: WidthProcess,
    pub n: usize,
    pub t: Option<f64>,
    pub m_values: Option<Vec<f64>>,
    pub x_values: Option<Vec<f64>>,
    pub s_quad: Option<usize>,
}

enum WidthRow {
    Ok { cdf: WidthCdf, err_estimate: f64 },
    Failed(String),
}

/// Evaluates one width CDF with an a-posteriori error estimate from an
/// offset-rule refinement (the discrete-time rule is already exact, so its
/// refinement only probes roundoff).
fn width_eval(
    process: WidthProcess,
    n: usize,
    t: Option<f64>,
    s_quad: Option<usize>,
    m_native: f64,
) -> Result<(WidthCdf, f64), detwidth::Error> {
    match process {
        WidthProcess::BrownianBridge => {
            let sq = s_quad.unwrap_or(32);
            let v = width_cdf_bb(n, m_native, sq)?;
            let r = width_cdf_bb(n, m_native, sq + 8)?;
            Ok((v, (v.value - r.value).abs()))
        }
        WidthProcess::CtSsrw => {
            let sq = s_quad.unwrap_or(16);
            let m = m_native as usize;
            let v = width_cdf_ct(n, t.expect("validated"), m, sq)?;
            let r = width_cdf_ct(n, t.expect("validated"), m, sq + 8)?;
            Ok((v, (v.value - r.value).abs()))
        }
        WidthProcess::DtSsrw => {
            let t_steps = t.expect("validated") as usize;
            let m = m_native as usize;
            let sq = s_quad.unwrap_or_else(|| dt_s_quad_exact(n, t_steps, m));
            let v = width_cdf_dt(n, t_steps, m, sq)?;
            let r = width_cdf_dt(n, t_steps, m, sq + 4)?;
            Ok((v, (v.value - r.value).abs()))
        }
    }
}

/// Width CDF table for one ensemble, either on explicit thresholds
/// (m-values, in each process's native units) or on a scaled grid
/// (x-values) with a reference-law comparison column. Rows that fail to
/// compute are reported in place and the run continues; monotonicity
/// violations are soft warnings.
pub fn width(p: &WidthParams) -> CliResult<CommandOutcome> {
    let spec = match p.process {
        WidthProcess::BrownianBridge => ProcessSpec::brownian_bridge(p.n),
        WidthProcess::CtSsrw => {
            let t = p.t.ok_or_else(|| CliError::Config("ct needs --t (duration T > 0)".into()))?;
            ProcessSpec::ct_ssrw(p.n, t)
        }
        WidthProcess::DtSsrw => {
            let t = p.t.ok_or_else(|| CliError::Config("dt needs --t (step count T >= 1)".into()))?;
            if !(t >= 1.0 && t.fract() == 0.0) {
                return Err(CliError::Config(format!(
                    "dt needs an integer step count T >= 1, got {t}"
                )));
            }
            ProcessSpec::dt_ssrw(p.n, t as usize)
        }
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    if p.m_values.is_some() && p.x_values.is_some() {
        return Err(CliError::Config("give m-values or x-values, not both".into()));
    }
    let law = scaling_law(&spec);
    let scaled_mode = p.m_values.is_none();
    let default_grid = vec![-2.0, -1.0, 0.0, 1.0, 2.0];
    let grid: &[f64] = match (&p.m_values, &p.x_values) {
        (Some(ms), _) => ms,
        (_, Some(xs)) => xs,
        (None, None) => &default_grid,
    };
    if grid.is_empty() {
        return Err(CliError::Config("the evaluation grid is empty".into()));
    }

    // Native CDF argument per row: the bridge takes a real threshold, the
    // walks an integer one (the discrete-time count is in half-widths:
    // the CDF is P(width < 2m)). Scaled thresholds are rounded to the
    // lattice and the rounded value is reported in the m_arg column.
    let native_arg = |value: f64| -> CliResult<f64> {
        match (p.process, scaled_mode) {
            (WidthProcess::BrownianBridge, false) => Ok(value),
            (WidthProcess::BrownianBridge, true) => Ok(law.center + law.scale * value),
            (WidthProcess::CtSsrw, false) | (WidthProcess::DtSsrw, false) => {
                if !(value >= 1.0 && value.fract().abs() < 1e-9) {
                    return Err(CliError::Config(format!(
                        "walk thresholds must be positive integers, got {value}"
                    )));
                }
                Ok(value.round())
            }
            (WidthProcess::CtSsrw, true) => Ok((law.center + law.scale * value).round().max(1.0)),
            (WidthProcess::DtSsrw, true) => {
                Ok(((law.center + law.scale * value) / 2.0).round().max(1.0))
            }
        }
    };

    let header = if scaled_mode {
        vec!["x", "m_arg", "cdf", "err_estimate", "reference_f", "abs_diff", "status"]
    } else {
        vec!["m", "cdf", "err_estimate", "status"]
    };
    let mut table = CsvTable::new(header);
    let mut rows: Vec<(f64, WidthRow)> = Vec::with_capacity(grid.len());
    let mut args: Vec<f64> = Vec::with_capacity(grid.len());
    for &g in grid {
        let arg = native_arg(g)?;
        args.push(arg);
        let row = match width_eval(p.process, p.n, p.t, p.s_quad, arg) {
            Ok((cdf, err)) => WidthRow::Ok { cdf, err_estimate: err },
            Err(e) => WidthRow::Failed(e.to_string()),
        };
        rows.push((g, row));
    }

    // Soft monotonicity check in threshold order over the computed rows.
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&i, &j| args[i].partial_cmp(&args[j]).expect("finite thresholds"));
    let mut non_monotone = vec![false; rows.len()];
    let mut prev: Option<f64> = None;
    for &i in &order {
        if let (_, WidthRow::Ok { cdf, .. }) = &rows[i] {
            if let Some(prev_cdf) = prev {
                if cdf.value < prev_cdf - 1e-12 {
                    non_monotone[i] = true;
                }
            }
            prev = Some(cdf.value);
        }
    }

    let mut errors = 0usize;
    let mut warnings = 0usize;
    let mut max_err_estimate = 0.0f64;
    let mut max_abs_diff = 0.0f64;
    for (i, (g, row)) in rows.iter().enumerate() {
        let (cdf_str, err_str, status, cdf_val) = match row {
            WidthRow::Failed(msg) => {
                errors += 1;
                (fmt_float(NAN), fmt_float(NAN), format!("error: {msg}"), None)
            }
            WidthRow::Ok { cdf, err_estimate } => {
                max_err_estimate = max_err_estimate.max(*err_estimate);
                let mut notes = Vec::new();
                if non_monotone[i] {
                    notes.push("non-monotone".to_string());
                }
                if cdf.clamped {
                    notes.push(format!("clamped (raw {:.3e})", cdf.raw));
                }
                let status = if notes.is_empty() {
                    "ok".to_string()
                } else {
                    warnings += 1;
                    format!("warning: {}", notes.join("; "))
                };
                (fmt_float(cdf.value), fmt_float(*err_estimate), status, Some(cdf.value))
            }
        };
        if scaled_mode {
            let reference = tracy_widom_f(*g, REFERENCE_TW_ORDER)?;
            let diff = cdf_val.map(|v| (v - reference).abs());
            if let Some(d) = diff {
                max_abs_diff = max_abs_diff.max(d);
            }
            table.push(vec![
                fmt_float(*g),
                fmt_float(args[i]),
                cdf_str,
                err_str,
                fmt_float(reference),
                fmt_float(diff.unwrap_or(NAN)),
                status,
            ]);
        } else {
            table.push(vec![fmt_float(args[i]), cdf_str, err_str, status]);
        }
    }

    let numeric_ok = errors == 0;
    let units_note = match p.process {
        WidthProcess::BrownianBridge => "threshold is the real-valued width bound M",
        WidthProcess::CtSsrw => "threshold m is the integer width bound: CDF = P(width < m)",
        WidthProcess::DtSsrw => {
            "widths are even; threshold m counts half-widths: CDF = P(width < 2m)"
        }
    };
    let mut results = json!({
        "rows": rows.len(),
        "row_errors": errors,
        "row_warnings": warnings,
        "max_err_estimate": max_err_estimate,
        "scaling": { "center": law.center, "scale": law.scale, "regime": law.regime },
        "units": units_note,
    });
    if scaled_mode {
        results["max_abs_diff_vs_reference"] = json!(max_abs_diff);
        results["reference_quad_order"] = json!(REFERENCE_TW_ORDER);
    }
    Ok(CommandOutcome {
        table,
        config_echo: json!({
            "process": p.process.name(), "n": p.n, "t": p.t,
            "m-values": p.m_values, "x-values": p.x_values, "s-quad": p.s_quad,
        }),
        results,
        numeric_ok,
        status_line: format!(
            "width {} n={}: {} rows, {errors} errors, {warnings} warnings{}",
            p.process.name(),
            p.n,
            rows.len(),
            if scaled_mode { format!(", max |CDF - F| {max_abs_diff:.4}") } else { String::new() }
        ),
    })
}

pub struct TwTableParams {
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
    pub order: usize,
    pub contour_order: usize,
    pub tol: f64,
}

/// Tabulates the limiting edge CDF by both routes (Airy-kernel determinant
/// and mirrored-contour determinant) and cross-checks them pointwise.
pub fn tw_table(p: &TwTableParams) -> CliResult<CommandOutcome> {
    if !(p.step > 0.0 && p.x_max >= p.x_min) {
        return Err(CliError::Config("need step > 0 and x-max >= x-min".into()));
    }
    if !(p.tol > 0.0) {
        return Err(CliError::Config("tol must be positive".into()));
    }
    let count = ((p.x_max - p.x_min) / p.step).round() as usize + 1;
    let contour_params = SoftEdgeParams { order: p.contour_order, ..SoftEdgeParams::default() };
    let mut table = CsvTable::new(vec!["x", "f_airy", "f_contour", "abs_diff"]);
    let mut max_diff = 0.0f64;
    let mut max_contour_err = 0.0f64;
    let mut monotone = true;
    let mut prev = f64::NEG_INFINITY;
    let mut last_f = 0.0f64;
    for i in 0..count {
        let x = p.x_min + i as f64 * p.step;
        let f_airy = tracy_widom_f(x, p.order)?;
        let contour = limiting_kernel_det(x, &contour_params)?;
        let f_contour = contour.value.re;
        let diff = (f_airy - f_contour).abs();
        max_diff = max_diff.max(diff);
        max_contour_err = max_contour_err.max(contour.err_estimate);
        if f_airy < prev - 1e-12 {
            monotone = false;
        }
        prev = f_airy;
        last_f = f_airy;
        table.push(vec![fmt_float(x), fmt_float(f_airy), fmt_float(f_contour), fmt_float(diff)]);
    }
    let tail_ok = p.x_max < 2.0 || last_f > 0.99;
    let numeric_ok = max_diff < p.tol && monotone && tail_ok;
    Ok(CommandOutcome {
        table,
        config_echo: json!({
            "x-min": p.x_min, "x-max": p.x_max, "step": p.step,
            "order": p.order, "contour-order": p.contour_order, "tol": p.tol,
        }),
        results: json!({
            "points": count,
            "max_abs_diff": max_diff,
            "tol": p.tol,
            "monotone": monotone,
            "f_at_x_max": last_f,
            "tail_ok": tail_ok,
            "max_contour_err_estimate": max_contour_err,
        }),
        numeric_ok,
        status_line: format!(
            "tw-table: {count} points, max |route gap| {max_diff:.2e} (tol {:.0e}), monotone {monotone}, F({}) = {last_f:.6}",
            p.tol, p.x_max
        ),
    })
}

pub struct LppTwParams {
    pub n: usize,
    pub q: f64,
    pub samples: usize,
    pub tw_order: usize,
    pub tol: f64,
    pub seed: u64,
}

/// Corner growth fluctuations: normalized corner passage times of n x n
/// geometric fields against the limiting edge law, reported as a tabulated
/// CDF pair plus the KS distance.
pub fn lpp_tw(p: &LppTwParams) -> CliResult<CommandOutcome> {
    if p.n < 8 {
        return Err(CliError::Config(format!(
            "finite-size too small: the scaling comparison needs n >= 8, got {}",
            p.n
        )));
    }
    if !(p.q > 0.0 && p.q < 1.0) {
        return Err(CliError::Config(format!("q must lie in (0,1), got {}", p.q)));
    }
    if p.samples < 10 {
        return Err(CliError::Config("need at least 10 samples".into()));
    }
    let (mu, sigma, d) = lpp_constants(p.q)?;
    let seed = SeedSpec::new(p.seed, 1);
    let samples = lpp_normalized_samples(p.n, p.q, p.samples, &seed)?;
    let (ks, dist) = ks_against_tracy_widom(&samples, p.tw_order)?;
    let table = dist_table_csv(&dist);
    let numeric_ok = ks < p.tol;
    Ok(CommandOutcome {
        table,
        config_echo: json!({
            "n": p.n, "q": p.q, "samples": p.samples,
            "tw-order": p.tw_order, "tol": p.tol,
        }),
        results: json!({
            "ks_distance": ks,
            "tol": p.tol,
            "mu": mu,
            "sigma": sigma,
            "d": d,
            "mc_standard_error_scale": 0.5 / (p.samples as f64).sqrt(),
            "seed_stream": 1,
        }),
        numeric_ok,
        status_line: format!(
            "lpp-tw: n={}, {} samples, KS {ks:.4} (tol {})",
            p.n, p.samples, p.tol
        ),
    })
}

fn dist_table_csv(dist: &DistTable) -> CsvTable {
    let mut table = CsvTable::new(vec!["x", "empirical_cdf", "reference_cdf"]);
    for ((x, e), r) in dist.xs.iter().zip(&dist.empirical).zip(&dist.reference) {
        table.push(vec![fmt_float(*x), fmt_float(*e), fmt_float(*r)]);
    }
    table
}

pub struct LppIdentityParams {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub q: f64,
    pub samples: usize,
    pub tau_window: f64,
    pub full_scan: bool,
    pub cut_trials: usize,
    pub cut_size: Option<usize>,
    pub tw_order: usize,
    pub tol: f64,
    pub seed: u64,
}

/// Two-field antidiagonal maximum: its empirical law against the limiting
/// edge CDF, plus an exact cut-decomposition audit (corner passage time
/// equals the max over a cut of forward + backward - weight) on freshly
/// sampled fields.
pub fn lpp_identity(p: &LppIdentityParams) -> CliResult<CommandOutcome> {
    if p.n < 8 {
        return Err(CliError::Config(format!(
            "finite-size too small: the scaling comparison needs n >= 8, got {}",
            p.n
        )));
    }
    if !(p.q > 0.0 && p.q < 1.0) {
        return Err(CliError::Config(format!("q must lie in (0,1), got {}", p.q)));
    }
    if !(p.alpha > 0.0 && p.beta > 0.0) {
        return Err(CliError::Config("alpha and beta must be positive".into()));
    }
    if p.samples < 10 {
        return Err(CliError::Config("need at least 10 samples".into()));
    }
    if !(p.tau_window >= 0.0) {
        return Err(CliError::Config("tau-window must be nonnegative".into()));
    }
    let cfg = AirySumConfig {
        alpha: p.alpha,
        beta: p.beta,
        n: p.n,
        q: p.q,
        tau_window: if p.full_scan { None } else { Some(p.tau_window) },
    };
    let lattice_u = cfg.lattice_window().map_err(|e| CliError::Config(e.to_string()))?;
    let (mu, sigma, d) = lpp_constants(p.q)?;
    let samples = airy_sum_samples(&cfg, &SeedSpec::new(p.seed, 2), p.samples)?;
    let (ks, dist) = ks_against_tracy_widom(&samples, p.tw_order)?;
    let table = dist_table_csv(&dist);

    // Cut-decomposition audit on an independent stream; the default field
    // matches the glued geometry (alpha n + beta n per side), cut two steps
    // inside the far corner's antidiagonal.
    let cut_size = p.cut_size.unwrap_or(cfg.alpha_n() + cfg.beta_n());
    if cut_size < 2 {
        return Err(CliError::Config("cut-size must be at least 2".into()));
    }
    let cut_diag = cut_size - 2;
    let cut_seed = SeedSpec::new(p.seed, 3);
    let mut cut_failures = 0usize;
    for index in 0..p.cut_trials as u64 {
        let field = LppField::sample(cut_size, cut_size, p.q, &cut_seed, index)?;
        let (direct, via_cut) = cut_decomposition(&field, cut_diag)?;
        if direct != via_cut {
            cut_failures += 1;
        }
    }

    let numeric_ok = ks < p.tol && cut_failures == 0;
    Ok(CommandOutcome {
        table,
        config_echo: json!({
            "alpha": p.alpha, "beta": p.beta, "n": p.n, "q": p.q,
            "samples": p.samples, "tau-window": p.tau_window, "full-scan": p.full_scan,
            "cut-trials": p.cut_trials, "cut-size": p.cut_size,
            "tw-order": p.tw_order, "tol": p.tol,
        }),
        results: json!({
            "ks_distance": ks,
            "tol": p.tol,
            "mu": mu,
            "sigma": sigma,
            "d": d,
            "window": {
                "mode": if p.full_scan { "full-scan" } else { "windowed" },
                "tau": if p.full_scan { serde_json::Value::Null } else { json!(p.tau_window) },
                "lattice_u": lattice_u,
            },
            "rounding": {
                "alpha_n": cfg.alpha_n(),
                "beta_n": cfg.beta_n(),
                "alpha_n_exact": p.alpha * p.n as f64,
                "beta_n_exact": p.beta * p.n as f64,
            },
            "cut": {
                "trials": p.cut_trials,
                "size": cut_size,
                "diag": cut_diag,
                "failures": cut_failures,
            },
            "mc_standard_error_scale": 0.5 / (p.samples as f64).sqrt(),
            "seed_streams": { "samples": 2, "cut": 3 },
        }),
        numeric_ok,
        status_line: format!(
            "lpp-identity: {} samples, KS {ks:.4} (tol {}), cut identity {}/{} exact",
            p.samples,
            p.tol,
            p.cut_trials - cut_failures,
            p.cut_trials
        ),
    })
}

pub struct PoissonParams {
    pub triples: usize,
    pub tol: f64,
    pub seed: u64,
}

/// Gaussian periodization identity at randomized parameters: both sides
/// are structurally different sums and must agree to near machine
/// precision.
pub fn poisson(p: &PoissonParams) -> CliResult<CommandOutcome> {
    if p.triples == 0 {
        return Err(CliError::Config("need at least one triple".into()));
    }
    if !(p.tol > 0.0) {
        return Err(CliError::Config("tol must be positive".into()));
    }
    let mut rng = SeedSpec::new(p.seed, 4).rng();
    let mut table = CsvTable::new(vec![
        "x", "theta", "period", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff",
    ]);
    let mut max_diff = 0.0f64;
    for _ in 0..p.triples {
        let x = -3.0 + 6.0 * uniform_open01(&mut rng);
        let theta = 2.0 * std::f64::consts::PI * uniform_open01(&mut rng);
        let period = 0.5 + 2.5 * uniform_open01(&mut rng);
        let h_max = (45.0 / period).ceil() as usize + 10;
        let (lhs, rhs) = poisson_check(x, theta, period, h_max)?;
        let diff = (lhs - rhs).norm();
        max_diff = max_diff.max(diff);
        table.push(vec![
            fmt_float(x),
            fmt_float(theta),
            fmt_float(period),
            fmt_float(lhs.re),
            fmt_float(lhs.im),
            fmt_float(rhs.re),
            fmt_float(rhs.im),
            fmt_float(diff),
        ]);
    }
    let numeric_ok = max_diff < p.tol;
    Ok(CommandOutcome {
        table,
        config_echo: json!({ "triples": p.triples, "tol": p.tol }),
        results: json!({
            "triples": p.triples,
            "max_abs_diff": max_diff,
            "tol": p.tol,
            "seed_stream": 4,
        }),
        numeric_ok,
        status_line: format!(
            "poisson-check: {} triples, max |lhs - rhs| {max_diff:.2e} (tol {:.0e})",
            p.triples, p.tol
        ),
    })
}
