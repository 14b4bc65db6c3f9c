//! Exponential sampling operators and their convergence diagnostics.
//!
//! Two operators are provided, both indexed by a rate `w > 0` and built from
//! a [`KernelSpec`] `chi`:
//!
//! * classical sampling, [`apply_classical`]:
//!   `(S_w f)(x) = sum_k chi(e^-k x^w) f(e^(k/w))`
//! * the Kantorovich variant, [`apply_kantorovich`], which replaces each
//!   sample by the mean of `f(e^u)` over the cell `[k/w, (k+1)/w]`:
//!   `(I_w f)(x) = sum_k chi(e^-k x^w) * w * integral over the cell`.
//!
//! Everything runs in log coordinates: with `t = w log x` the kernel weight
//! of index `k` is `chi` evaluated at `t - k`, so no intermediate huge powers
//! `x^w` are ever formed. Summation windows come from the kernel's
//! [`TruncationPolicy`] and are intersected (conservatively, with one index
//! of padding) with the signal's nonzero coverage; skipped terms are exactly
//! zero, so the optimization does not change results.
//!
//! The diagnostics mirror the convergence theory for these operators:
//!
//! * [`voronovskaya_check`] — the scaled error `w ((I_w f)(x) - f(x))`
//!   against its pointwise limit `(theta f)(x) / 2` (valid for kernels whose
//!   first discrete moment vanishes).
//! * [`modulus_bound_check`] — the quantitative estimate
//!   `|(I_w f)(x) - f(x)| <= lambda * omega(f, 1/w)` with
//!   `lambda = sup M_0 + sup M_1` built from absolute kernel moments and
//!   `omega` the logarithmic modulus of continuity.
//! * [`representation_decompose`] — the finite Taylor expansion of `I_w` in
//!   powers of `1/w` with explicit remainder: reconstruction must match the
//!   direct evaluation to machine precision, and the remainder obeys
//!   `|R| <= sup|theta^n f| * sup M_0 / ((n+1)! w^n)`.
//! * [`estimate_saturation`] — least-squares slope of `log error` against
//!   `log w`, exposing the O(1/w) saturation rate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{factorial, KernelSpec, TruncationPolicy};
use crate::quad;
use crate::signal::{DerivativeMethod, MellinDerivativeSpec, PiecewiseSignal};

/// Relative roundoff floor for rate fitting: errors below
/// `DEGENERATE_ERROR_FLOOR * (1 + signal scale)` are treated as exact
/// reproduction (the fit would otherwise regress on pure roundoff).
pub const DEGENERATE_ERROR_FLOOR: f64 = 1e-13;

/// Rate, truncation, and quadrature resolution for one operator application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    pub w: f64,
    pub truncation: TruncationPolicy,
    pub quad_order: usize,
}

impl OperatorParams {
    pub fn new(w: f64, truncation: TruncationPolicy, quad_order: usize) -> Result<Self> {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rate w must be finite and positive, got {w}"
            )));
        }
        if !(quad::MIN_ORDER..=quad::MAX_ORDER).contains(&quad_order) {
            return Err(Error::InvalidParameter(format!(
                "quadrature order must be in {}..={}, got {quad_order}",
                quad::MIN_ORDER,
                quad::MAX_ORDER
            )));
        }
        Ok(Self {
            w,
            truncation,
            quad_order,
        })
    }

    /// Defaults appropriate for the kernel: exact windows for compact
    /// support, tail-tolerance windows otherwise.
    pub fn for_kernel(kernel: &KernelSpec, w: f64) -> Result<Self> {
        Self::new(w, kernel.default_truncation(), quad::DEFAULT_ORDER)
    }

    /// Same policy and quadrature at a different rate.
    pub fn with_w(&self, w: f64) -> Result<Self> {
        Self::new(w, self.truncation, self.quad_order)
    }
}

fn check_point(x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "operators are evaluated at finite x > 0, got {x}"
        )));
    }
    Ok(())
}

/// Intersect the kernel window `[k_lo, k_hi]` with the indices whose sample
/// point (or integration cell, when `cells` is true) can intersect the
/// signal's nonzero coverage. Bounds are padded by one index so float
/// fenceposts only ever add terms that evaluate to exactly zero.
fn restrict_to_coverage(
    signal: &PiecewiseSignal,
    w: f64,
    k_lo: i64,
    k_hi: i64,
    cells: bool,
) -> (i64, i64) {
    let (cov_lo, cov_hi) = signal.coverage_log();
    let mut lo = k_lo;
    let mut hi = k_hi;
    if cov_lo.is_finite() {
        let pad = if cells { 2 } else { 1 };
        lo = lo.max((cov_lo * w).floor() as i64 - pad);
    }
    if cov_hi.is_finite() {
        hi = hi.min((cov_hi * w).ceil() as i64 + 1);
    }
    (lo, hi)
}

/// Classical exponential sampling series `(S_w f)(x)`.
pub fn apply_classical(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    params: &OperatorParams,
    x: f64,
) -> Result<f64> {
    check_point(x)?;
    let w = params.w;
    let t = w * x.ln();
    let (k_lo, k_hi) = kernel.window_log(&params.truncation, t)?;
    let (k_lo, k_hi) = restrict_to_coverage(signal, w, k_lo, k_hi, false);
    let mut sum = 0.0;
    for k in k_lo..=k_hi {
        let chi = kernel.eval_log(t - k as f64);
        if chi == 0.0 {
            continue;
        }
        sum += chi * signal.eval_log(k as f64 / w);
    }
    Ok(sum)
}

/// Kantorovich-type exponential sampling series `(I_w f)(x)`.
pub fn apply_kantorovich(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    params: &OperatorParams,
    x: f64,
) -> Result<f64> {
    check_point(x)?;
    let w = params.w;
    let t = w * x.ln();
    let (k_lo, k_hi) = kernel.window_log(&params.truncation, t)?;
    let (k_lo, k_hi) = restrict_to_coverage(signal, w, k_lo, k_hi, true);
    let mut sum = 0.0;
    for k in k_lo..=k_hi {
        let chi = kernel.eval_log(t - k as f64);
        if chi == 0.0 {
            continue;
        }
        let a = k as f64 / w;
        let b = (k as f64 + 1.0) / w;
        sum += chi * w * signal.exp_mean(a, b, params.quad_order)?;
    }
    Ok(sum)
}

/// Operator, signal, and error values over a grid of evaluation points.
#[derive(Debug, Clone, Serialize)]
pub struct GridEvaluation {
    pub w: f64,
    pub x: Vec<f64>,
    pub operator: Vec<f64>,
    pub signal: Vec<f64>,
    pub abs_error: Vec<f64>,
}

/// Evaluate `(I_w f)` on a grid along with pointwise absolute errors.
pub fn apply_on_grid(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    params: &OperatorParams,
    xs: &[f64],
) -> Result<GridEvaluation> {
    let mut operator = Vec::with_capacity(xs.len());
    let mut values = Vec::with_capacity(xs.len());
    let mut abs_error = Vec::with_capacity(xs.len());
    for &x in xs {
        let op = apply_kantorovich(kernel, signal, params, x)?;
        let fx = signal.eval(x)?;
        operator.push(op);
        values.push(fx);
        abs_error.push((op - fx).abs());
    }
    Ok(GridEvaluation {
        w: params.w,
        x: xs.to_vec(),
        operator,
        signal: values,
        abs_error,
    })
}

/// Pointwise asymptotic check `w ((I_w f)(x) - f(x)) -> (theta f)(x) / 2`.
#[derive(Debug, Clone, Serialize)]
pub struct VoronovskayaCheck {
    pub x: f64,
    pub w: f64,
    pub operator_value: f64,
    pub signal_value: f64,
    /// `w * (operator_value - signal_value)`.
    pub scaled_error: f64,
    /// The limit `(theta f)(x) / 2`.
    pub predicted: f64,
    /// `scaled_error - predicted`; tends to zero as `w` grows.
    pub residual: f64,
    /// The limit formula requires the kernel's first discrete moment to
    /// vanish identically; false means the comparison is not meaningful.
    pub first_moment_ok: bool,
}

/// Compare the scaled approximation error against its Voronovskaya limit.
pub fn voronovskaya_check(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    params: &OperatorParams,
    x: f64,
    method: DerivativeMethod,
) -> Result<VoronovskayaCheck> {
    let operator_value = apply_kantorovich(kernel, signal, params, x)?;
    let signal_value = signal.eval(x)?;
    let spec = MellinDerivativeSpec { order: 1, method };
    let predicted = 0.5 * signal.mellin_derivative(&spec, x)?;
    let scaled_error = params.w * (operator_value - signal_value);
    Ok(VoronovskayaCheck {
        x,
        w: params.w,
        operator_value,
        signal_value,
        scaled_error,
        predicted,
        residual: scaled_error - predicted,
        first_moment_ok: kernel.first_moment_vanishes(),
    })
}

/// Quantitative error bound `|(I_w f)(x) - f(x)| <= lambda * omega(f, 1/w)`.
#[derive(Debug, Clone, Serialize)]
pub struct ModulusBoundCheck {
    pub x: f64,
    pub w: f64,
    pub abs_error: f64,
    /// `sup M_0 + sup M_1` over a period of the absolute kernel moments.
    pub lambda: f64,
    /// Modulus scale, `1/w`.
    pub delta: f64,
    /// Estimated logarithmic modulus of continuity at `delta`.
    pub modulus: f64,
    /// `lambda * modulus`.
    pub bound: f64,
    pub holds: bool,
    /// True when the first absolute moment is a truncation-dependent proxy
    /// (kernels with slow decay); the bound is then only indicative.
    pub window_dependent: bool,
}

/// Check the modulus-of-continuity error bound at one point.
pub fn modulus_bound_check(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    params: &OperatorParams,
    x: f64,
    grid_density: usize,
) -> Result<ModulusBoundCheck> {
    let operator_value = apply_kantorovich(kernel, signal, params, x)?;
    let signal_value = signal.eval(x)?;
    let abs_error = (operator_value - signal_value).abs();
    let (m0, dep0) = kernel.sup_absolute_moment(0, &params.truncation)?;
    let (m1, dep1) = kernel.sup_absolute_moment(1, &params.truncation)?;
    let lambda = m0 + m1;
    let delta = 1.0 / params.w;
    let modulus = signal.log_modulus(delta, grid_density)?;
    let bound = lambda * modulus;
    Ok(ModulusBoundCheck {
        x,
        w: params.w,
        abs_error,
        lambda,
        delta,
        modulus,
        bound,
        // Tiny slack so exact equality cases survive roundoff.
        holds: abs_error <= bound * (1.0 + 1e-12) + 1e-15,
        window_dependent: dep0 || dep1,
    })
}

/// Finite Taylor decomposition of `(I_w f)(x)` in powers of `1/w`.
#[derive(Debug, Clone, Serialize)]
pub struct RepresentationReport {
    pub x: f64,
    pub w: f64,
    /// Expansion order `n`: cell means are expanded to `n` Taylor terms.
    pub order: u32,
    /// Direct evaluation of `(I_w f)(x)`.
    pub direct: f64,
    /// `terms[j] = (S_w theta^j f)(x) / ((j+1)! w^j)` for `j = 0..n-1`.
    pub terms: Vec<f64>,
    /// Aggregated Taylor remainder of all cells.
    pub remainder: f64,
    /// `sum(terms) + remainder`; equals `direct` up to roundoff.
    pub reconstruction: f64,
    pub identity_gap: f64,
    /// `sup |theta^n f| * sup M_0 / ((n+1)! w^n)` over the active window.
    pub remainder_bound: f64,
    pub bound_holds: bool,
}

/// Maximum Taylor expansion order for [`representation_decompose`].
pub const MAX_REPRESENTATION_ORDER: u32 = 12;

/// Expand each Kantorovich cell mean into `order` Taylor terms around the
/// cell's left endpoint plus an explicit remainder, and verify both the
/// exact reconstruction identity and the remainder bound.
pub fn representation_decompose(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    params: &OperatorParams,
    x: f64,
    order: u32,
) -> Result<RepresentationReport> {
    check_point(x)?;
    if order == 0 || order > MAX_REPRESENTATION_ORDER {
        return Err(Error::InvalidParameter(format!(
            "expansion order must be in 1..={MAX_REPRESENTATION_ORDER}, got {order}"
        )));
    }
    let n = order as usize;
    let w = params.w;
    let t = w * x.ln();
    let (win_lo, win_hi) = kernel.window_log(&params.truncation, t)?;
    let (k_lo, k_hi) = restrict_to_coverage(signal, w, win_lo, win_hi, true);

    // theta-iterates f, theta f, ..., theta^n f (all formulas are closed
    // under the Mellin derivative).
    let mut thetas: Vec<PiecewiseSignal> = Vec::with_capacity(n + 1);
    thetas.push(signal.clone());
    for j in 0..n {
        thetas.push(thetas[j].theta());
    }
    // Scale of term j: 1 / ((j+1)! w^j).
    let scales: Vec<f64> = (0..n)
        .map(|j| 1.0 / (factorial(j as u32 + 1) * w.powi(j as i32)))
        .collect();

    let mut direct = 0.0;
    let mut terms = vec![0.0; n];
    let mut remainder = 0.0;
    for k in k_lo..=k_hi {
        let chi = kernel.eval_log(t - k as f64);
        if chi == 0.0 {
            continue;
        }
        let a = k as f64 / w;
        let b = (k as f64 + 1.0) / w;
        let cell_mean = w * signal.exp_mean(a, b, params.quad_order)?;
        direct += chi * cell_mean;
        let mut taylor = 0.0;
        for j in 0..n {
            let term = thetas[j].eval_log(a) * scales[j];
            terms[j] += chi * term;
            taylor += term;
        }
        remainder += chi * (cell_mean - taylor);
    }
    let reconstruction = terms.iter().sum::<f64>() + remainder;
    let identity_gap = (direct - reconstruction).abs();

    // Remainder bound over the log-range the window can touch, intersected
    // with the signal's nonzero coverage.
    let (m0, _) = kernel.sup_absolute_moment(0, &params.truncation)?;
    let (cov_lo, cov_hi) = signal.coverage_log();
    let a_win = (k_lo as f64 / w).max(if cov_lo.is_finite() { cov_lo } else { f64::MIN });
    let b_win = ((k_hi as f64 + 1.0) / w).min(if cov_hi.is_finite() { cov_hi } else { f64::MAX });
    let sup_theta_n = if a_win <= b_win {
        thetas[n].sup_abs_log_range(a_win, b_win, 4096)
    } else {
        0.0
    };
    let remainder_bound = sup_theta_n * m0 / (factorial(order + 1) * w.powi(order as i32));
    Ok(RepresentationReport {
        x,
        w,
        order,
        direct,
        terms,
        remainder,
        reconstruction,
        identity_gap,
        remainder_bound,
        // The logarithm attains the bound with equality; allow roundoff.
        bound_holds: remainder.abs() <= remainder_bound + 1e-12,
    })
}

/// Least-squares saturation estimate from errors at increasing rates.
#[derive(Debug, Clone, Serialize)]
pub struct SaturationEstimate {
    pub x: f64,
    pub ws: Vec<f64>,
    pub errors: Vec<f64>,
    /// Fitted slope of `log error` vs `log w`; `None` when degenerate.
    pub exponent: Option<f64>,
    pub intercept: Option<f64>,
    /// True when every error is below the scaled
    /// [`DEGENERATE_ERROR_FLOOR`] (the operator reproduces the signal,
    /// e.g. constants).
    pub degenerate: bool,
}

/// Fit `log |I_w f - f|(x) ~ intercept + exponent * log w` over the given
/// strictly increasing rates (at least three).
pub fn estimate_saturation(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    truncation: TruncationPolicy,
    quad_order: usize,
    ws: &[f64],
    x: f64,
) -> Result<SaturationEstimate> {
    if ws.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "rate fits need at least 3 rates, got {}",
            ws.len()
        )));
    }
    for pair in ws.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::InvalidParameter(
                "rates must be strictly increasing".into(),
            ));
        }
    }
    let mut errors = Vec::with_capacity(ws.len());
    for &w in ws {
        let params = OperatorParams::new(w, truncation, quad_order)?;
        let op = apply_kantorovich(kernel, signal, &params, x)?;
        errors.push((op - signal.eval(x)?).abs());
    }
    let floor = DEGENERATE_ERROR_FLOOR * (1.0 + signal.eval(x)?.abs());
    if errors.iter().all(|&e| e < floor) {
        return Ok(SaturationEstimate {
            x,
            ws: ws.to_vec(),
            errors,
            exponent: None,
            intercept: None,
            degenerate: true,
        });
    }
    let xs: Vec<f64> = ws.iter().map(|w| w.ln()).collect();
    let ys: Vec<f64> = errors
        .iter()
        .map(|e| e.max(f64::MIN_POSITIVE).ln())
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(SaturationEstimate {
        x,
        ws: ws.to_vec(),
        errors,
        exponent: Some(slope),
        intercept: Some(my - slope * mx),
        degenerate: false,
    })
}

/// `n >= 2` log-uniform points spanning `[a, b]`, endpoints exact.
pub fn log_spaced(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite()) || a <= 0.0 || !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "log grid needs 0 < a < b, got [{a}, {b}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "log grid needs at least 2 points, got {n}"
        )));
    }
    let (la, lb) = (a.ln(), b.ln());
    let mut xs = Vec::with_capacity(n);
    xs.push(a);
    for i in 1..n - 1 {
        xs.push((la + (lb - la) * i as f64 / (n - 1) as f64).exp());
    }
    xs.push(b);
    Ok(xs)
}

/// Log-uniform grid at `per_decade` points per decade over `[a, b]`,
/// dropping points whose log-distance to any listed breakpoint is below
/// `guard_log_radius`. Used for sup-norm scans of discontinuous signals,
/// where points inside the kernel's smoothing zone around a jump would
/// measure the jump rather than the convergence rate.
pub fn guarded_log_grid(
    a: f64,
    b: f64,
    per_decade: usize,
    breakpoints: &[f64],
    guard_log_radius: f64,
) -> Result<Vec<f64>> {
    if per_decade == 0 {
        return Err(Error::InvalidParameter(
            "grid density must be positive".into(),
        ));
    }
    if !guard_log_radius.is_finite() || guard_log_radius < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "guard radius must be finite and nonnegative, got {guard_log_radius}"
        )));
    }
    let decades = (b.ln() - a.ln()) / std::f64::consts::LN_10;
    let n = ((decades * per_decade as f64).ceil() as usize + 1).max(2);
    let log_bps: Vec<f64> = breakpoints.iter().map(|b| b.ln()).collect();
    Ok(log_spaced(a, b, n)?
        .into_iter()
        .filter(|x| {
            let lx = x.ln();
            log_bps.iter().all(|lb| (lx - lb).abs() >= guard_log_radius)
        })
        .collect())
}
