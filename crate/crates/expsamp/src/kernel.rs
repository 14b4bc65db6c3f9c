//! Sampling kernels in the Mellin setting and their discrete moments.
//!
//! Two families are provided:
//!
//! * **Mellin B-splines** `bspline:n` — compactly supported in log scale
//!   (`|log x| < n/2`), built from the classical truncated-power formula.
//!   Their Mellin transform on the line `Re s = 0` is `(sin(t/2) / (t/2))^n`.
//! * **Mellin-Fejér kernels** `fejer:alpha:c` — supported on all of
//!   `(0, inf)` with inverse-square decay in log scale. Their Mellin
//!   transform on `Re s = c` is the triangle `max(0, 1 - |t|/alpha)`.
//!
//! Both families expose pointwise evaluation, closed-form transforms,
//! windowed discrete moments (algebraic and absolute), a partition-of-unity
//! sum, and the transform values at the nodes `2*pi*k` that decide whether
//! the kernel reproduces constants and has a vanishing first moment.
//!
//! Series over the non-compact Fejér family must be truncated; the
//! [`TruncationPolicy`] type selects the window and the associated tail
//! bound. Windows are always symmetric around `round(log u)` so that
//! conditionally convergent moment sums are not biased.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Largest accepted B-spline order. Beyond this the alternating
/// truncated-power sum loses too many digits to cancellation to be useful
/// without switching to a recursive evaluation scheme.
pub const MAX_BSPLINE_ORDER: u32 = 20;

/// Default tail tolerance used for Fejér kernels when the caller does not
/// pick a truncation policy explicitly.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-6;

/// Hard cap on the half-window a tail tolerance may request, to keep an
/// accidentally tiny tolerance from turning one series into 10^9 terms.
const MAX_TAIL_HALF_WINDOW: usize = 50_000_000;

/// Normalized sinc: `sin(pi v) / (pi v)`, with `sinc(0) = 1`.
///
/// A short series branch covers tiny arguments so the ratio never evaluates
/// `0/0`; for `|v| < 1e-8` the quadratic term is already below one ulp.
pub fn sinc(v: f64) -> f64 {
    let z = std::f64::consts::PI * v;
    if v.abs() < 1e-8 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// Half-angle sinc used by the B-spline transform: `sin(t/2) / (t/2)`.
fn sinc_half(t: f64) -> f64 {
    let z = 0.5 * t;
    if z.abs() < 1e-8 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// `n!` as an f64. Exact for every `n` accepted here (`n <= 20`).
pub(crate) fn factorial(n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

/// Binomial coefficient `C(n, k)` as an f64, exact for `n <= 20`.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * ((n - i) as f64) / ((i + 1) as f64);
    }
    acc.round()
}

/// Kernel family plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// Mellin B-spline of the given order (1..=20).
    BSpline { order: u32 },
    /// Mellin-Fejér kernel with bandwidth `alpha > 0` and Mellin line `c`.
    Fejer { alpha: f64, c: f64 },
}

/// How fast the kernel decays in log scale. Compactly supported kernels
/// admit exact windows; inverse-square decay forces truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decay {
    Compact,
    InverseSquareLog,
}

/// A validated kernel description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
}

impl KernelSpec {
    /// Mellin B-spline of `order` in 1..=[`MAX_BSPLINE_ORDER`].
    pub fn bspline(order: u32) -> Result<Self> {
        if order == 0 || order > MAX_BSPLINE_ORDER {
            return Err(Error::InvalidKernel(format!(
                "B-spline order must be in 1..={MAX_BSPLINE_ORDER}, got {order}"
            )));
        }
        Ok(Self {
            family: KernelFamily::BSpline { order },
        })
    }

    /// Mellin-Fejér kernel with bandwidth `alpha > 0` on the line `Re s = c`.
    pub fn fejer(alpha: f64, c: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidKernel(format!(
                "Fejér bandwidth must be finite and positive, got {alpha}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidKernel(format!(
                "Fejér line parameter must be finite, got {c}"
            )));
        }
        Ok(Self {
            family: KernelFamily::Fejer { alpha, c },
        })
    }

    /// Parse a kernel spec string: `bspline:<order>` or `fejer:<alpha>:<c>`.
    /// `<alpha>` accepts the literal `pi` and `2pi` for convenience.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["bspline", order] => {
                let order: u32 = order.parse().map_err(|_| {
                    Error::Parse(format!("bad B-spline order {order:?} in kernel spec {s:?}"))
                })?;
                Self::bspline(order)
            }
            ["fejer", alpha, c] => {
                let alpha = parse_alpha(alpha)
                    .ok_or_else(|| Error::Parse(format!("bad alpha {alpha:?} in kernel spec {s:?}")))?;
                let c: f64 = c.parse().map_err(|_| {
                    Error::Parse(format!("bad line parameter {c:?} in kernel spec {s:?}"))
                })?;
                Self::fejer(alpha, c)
            }
            _ => Err(Error::Parse(format!(
                "kernel spec {s:?} (expected bspline:<order> or fejer:<alpha>:<c>)"
            ))),
        }
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    /// Radius of the support in log scale, when compact (`n/2` for
    /// B-splines). `None` for the Fejér family.
    pub fn support_log_radius(&self) -> Option<f64> {
        match self.family {
            KernelFamily::BSpline { order } => Some(order as f64 / 2.0),
            KernelFamily::Fejer { .. } => None,
        }
    }

    pub fn decay(&self) -> Decay {
        match self.family {
            KernelFamily::BSpline { .. } => Decay::Compact,
            KernelFamily::Fejer { .. } => Decay::InverseSquareLog,
        }
    }

    /// Truncation policy used when callers do not pick one: exact windows
    /// for compact kernels, a tail tolerance of [`DEFAULT_TAIL_TOLERANCE`]
    /// for the Fejér family.
    pub fn default_truncation(&self) -> TruncationPolicy {
        match self.decay() {
            Decay::Compact => TruncationPolicy::ExactSupport,
            Decay::InverseSquareLog => TruncationPolicy::TailTolerance(DEFAULT_TAIL_TOLERANCE),
        }
    }

    /// Evaluate the kernel at `x > 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::Domain(format!(
                "kernel evaluation requires finite x > 0, got {x}"
            )));
        }
        Ok(self.eval_log(x.ln()))
    }

    /// Evaluate the kernel at `x = e^v`. This is the native code path: all
    /// series machinery works in log coordinates so large bandwidths never
    /// exponentiate out of range.
    pub fn eval_log(&self, v: f64) -> f64 {
        match self.family {
            KernelFamily::BSpline { order } => bspline_log(order, v),
            KernelFamily::Fejer { alpha, c } => fejer_log(alpha, c, v),
        }
    }

    /// Closed-form Mellin transform along the kernel's natural line
    /// (`Re s = 0` for B-splines, `Re s = c` for Fejér), as a function of the
    /// imaginary coordinate `t`. Both families have real transforms.
    pub fn mellin_transform(&self, t: f64) -> f64 {
        match self.family {
            KernelFamily::BSpline { order } => sinc_half(t).powi(order as i32),
            KernelFamily::Fejer { alpha, .. } => (1.0 - t.abs() / alpha).max(0.0),
        }
    }

    /// Transform value at the node `t = 2*pi*k`. Evaluated through the
    /// closed form with the integer structure made explicit: `sin(pi k)`
    /// vanishes identically, so B-splines give exactly `delta_{k,0}`, and the
    /// triangle gives exactly `max(0, 1 - 2*pi*|k|/alpha)`.
    pub fn transform_at_node(&self, k: i64) -> f64 {
        match self.family {
            KernelFamily::BSpline { .. } => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            KernelFamily::Fejer { alpha, .. } => {
                let t = 2.0 * std::f64::consts::PI * (k.unsigned_abs() as f64);
                (1.0 - t / alpha).max(0.0)
            }
        }
    }

    /// First derivative of the transform at `t = 2*pi*k`, where it exists.
    ///
    /// For B-splines the transform is `g(t)^n` with `g = sin(t/2)/(t/2)`;
    /// at `t = 2*pi*k, k != 0` the factor `g` vanishes, so the derivative is
    /// `0` exactly for `n >= 2` and `(-1)^k / (2*pi*k)` for `n = 1`. At the
    /// origin the B-spline transform is smooth and even, so its derivative
    /// is 0; the triangle has a corner there (and at `|t| = alpha`),
    /// reported as `None`.
    pub fn transform_derivative_at_node(&self, k: i64) -> Option<f64> {
        match self.family {
            KernelFamily::BSpline { order } => {
                if k == 0 || order >= 2 {
                    Some(0.0)
                } else {
                    let kf = k as f64;
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    Some(sign / (2.0 * std::f64::consts::PI * kf))
                }
            }
            KernelFamily::Fejer { alpha, .. } => {
                let t = 2.0 * std::f64::consts::PI * (k.unsigned_abs() as f64);
                if k == 0 || (t - alpha).abs() < 1e-12 {
                    None // corner of the triangle
                } else if t > alpha {
                    Some(0.0)
                } else {
                    Some(-k.signum() as f64 / alpha)
                }
            }
        }
    }

    /// Whether the discrete first moment vanishes identically for this
    /// kernel (the hypothesis behind the asymptotic `1/(2w)` expansion).
    /// True for B-splines of order >= 2; false for order 1 and for Fejér
    /// kernels, whose transform has a corner at the origin.
    pub fn first_moment_vanishes(&self) -> bool {
        matches!(self.family, KernelFamily::BSpline { order } if order >= 2)
    }

    /// Mellin transform computed by quadrature of the kernel itself over its
    /// compact support in log scale (real part; the imaginary part vanishes
    /// by symmetry). Split at the knots so each panel integrates a
    /// polynomial times a cosine. Only available for compact kernels —
    /// the inverse-square tail of the Fejér family cannot be truncated to
    /// quadrature accuracy.
    ///
    /// This is an independent route to the same quantity as
    /// [`mellin_transform`]; agreement of the two certifies the exponent in
    /// the truncated-power formula.
    pub fn mellin_transform_numeric(&self, t: f64, quad_order: usize) -> Result<f64> {
        let KernelFamily::BSpline { order } = self.family else {
            return Err(Error::Unsupported(
                "numeric Mellin transform requires a compactly supported kernel".into(),
            ));
        };
        let rule = GaussLegendre::cached(quad_order)?;
        let half = order as f64 / 2.0;
        let mut acc = 0.0;
        for j in 0..order {
            let a = -half + j as f64;
            let b = a + 1.0;
            acc += rule.integrate(a, b, |v| (t * v).cos() * self.eval_log(v));
        }
        Ok(acc)
    }

    /// Resolve the summation window (inclusive index range) for a series
    /// whose terms live at integers `k` near `t = log u`.
    pub(crate) fn window_log(&self, policy: &TruncationPolicy, t: f64) -> Result<(i64, i64)> {
        match policy {
            TruncationPolicy::ExactSupport => self.exact_window(t),
            TruncationPolicy::WindowTerms(k) => {
                if *k == 0 {
                    return Err(Error::InvalidParameter(
                        "window term count must be positive".into(),
                    ));
                }
                let center = t.round() as i64;
                let k = *k as i64;
                Ok((center - k, center + k))
            }
            TruncationPolicy::TailTolerance(tol) => match self.family {
                KernelFamily::BSpline { .. } => {
                    if !tol.is_finite() || *tol <= 0.0 {
                        return Err(Error::InvalidParameter(format!(
                            "tail tolerance must be finite and positive, got {tol}"
                        )));
                    }
                    // Compact support: the tail past the support is zero for
                    // any tolerance, so the exact window already qualifies.
                    self.exact_window(t)
                }
                KernelFamily::Fejer { alpha, .. } => {
                    let k = tail_half_window(alpha, *tol)?;
                    let center = t.round() as i64;
                    Ok((center - k as i64, center + k as i64))
                }
            },
        }
    }

    fn exact_window(&self, t: f64) -> Result<(i64, i64)> {
        let radius = self.support_log_radius().ok_or_else(|| {
            Error::Truncation(
                "ExactSupport requires a compactly supported kernel; \
                 pick WindowTerms or TailTolerance for Fejér kernels"
                    .into(),
            )
        })?;
        // One extra index on each side keeps the window a superset of the
        // support even when an integration cell [k/w, (k+1)/w] pokes past it;
        // the extra terms evaluate to exactly zero.
        let lo = (t - radius).ceil() as i64 - 1;
        let hi = (t + radius).floor() as i64 + 1;
        Ok((lo, hi))
    }

    /// Upper bound on the absolute tail mass left out by `policy` for the
    /// order-zero sum (the partition-of-unity series). Zero for compact
    /// kernels. `None` when no finite bound exists (absolute Fejér moments
    /// of order >= 1 diverge, so their truncations are window-dependent).
    pub fn truncation_tail_bound(&self, policy: &TruncationPolicy, nu: u32) -> Option<f64> {
        match self.family {
            KernelFamily::BSpline { .. } => Some(0.0),
            KernelFamily::Fejer { alpha, .. } => {
                if nu > 0 {
                    return None;
                }
                let half_window = match policy {
                    TruncationPolicy::ExactSupport => return None,
                    TruncationPolicy::WindowTerms(k) => *k,
                    TruncationPolicy::TailTolerance(tol) => tail_half_window(alpha, *tol).ok()?,
                };
                Some(fejer_tail_bound(alpha, half_window))
            }
        }
    }

    /// Discrete moment of order `nu` at `u > 0`: the windowed sums
    /// `sum_k chi(e^-k u) (k - log u)^nu` (algebraic) and
    /// `sum_k |chi(e^-k u)| |k - log u|^nu` (absolute).
    pub fn moment(&self, nu: u32, u: f64, policy: &TruncationPolicy) -> Result<MomentValue> {
        if !u.is_finite() || u <= 0.0 {
            return Err(Error::Domain(format!(
                "moments are defined for finite u > 0, got {u}"
            )));
        }
        self.moment_log(nu, u.ln(), policy)
    }

    /// Same as [`moment`](Self::moment) with `t = log u` supplied directly,
    /// so callers with large bandwidths never form `u = x^w` explicitly.
    pub fn moment_log(&self, nu: u32, t: f64, policy: &TruncationPolicy) -> Result<MomentValue> {
        let (lo, hi) = self.window_log(policy, t)?;
        let mut algebraic = 0.0;
        let mut absolute = 0.0;
        for k in lo..=hi {
            let chi = self.eval_log(t - k as f64);
            if chi == 0.0 {
                continue;
            }
            let d = k as f64 - t;
            algebraic += chi * d.powi(nu as i32);
            absolute += chi.abs() * d.abs().powi(nu as i32);
        }
        let window_dependent = self.decay() == Decay::InverseSquareLog && nu >= 1;
        Ok(MomentValue {
            algebraic,
            absolute,
            window_dependent,
        })
    }

    /// Partition-of-unity sum `sum_k chi(e^-k x^w)` evaluated under `policy`.
    /// Equals 1 (up to the truncation tail) for every kernel whose transform
    /// vanishes at all nonzero nodes `2*pi*k`.
    pub fn partition_sum(&self, x: f64, w: f64, policy: &TruncationPolicy) -> Result<f64> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::Domain(format!(
                "partition sum requires finite x > 0, got {x}"
            )));
        }
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be finite and positive, got {w}"
            )));
        }
        Ok(self.moment_log(0, w * x.ln(), policy)?.algebraic)
    }

    /// Moment report over a grid of evaluation points.
    pub fn moment_report(
        &self,
        nu: u32,
        grid: &[f64],
        policy: &TruncationPolicy,
    ) -> Result<MomentReport> {
        if grid.is_empty() {
            return Err(Error::InvalidParameter("moment grid is empty".into()));
        }
        let mut algebraic = Vec::with_capacity(grid.len());
        let mut absolute = Vec::with_capacity(grid.len());
        let mut sup_absolute: f64 = 0.0;
        let mut window_dependent = false;
        for &u in grid {
            let m = self.moment(nu, u, policy)?;
            sup_absolute = sup_absolute.max(m.absolute);
            window_dependent |= m.window_dependent;
            algebraic.push(m.algebraic);
            absolute.push(m.absolute);
        }
        Ok(MomentReport {
            order: nu,
            grid: grid.to_vec(),
            algebraic,
            absolute,
            sup_absolute,
            window_dependent,
        })
    }

    /// Supremum of the absolute moment of order `nu` over one log-period
    /// (the moments are 1-periodic in `log u`), sampled on a fixed 128-point
    /// grid. Returns the supremum and whether it is window-dependent.
    pub fn sup_absolute_moment(&self, nu: u32, policy: &TruncationPolicy) -> Result<(f64, bool)> {
        let mut sup: f64 = 0.0;
        let mut window_dependent = false;
        for j in 0..128 {
            let t = j as f64 / 128.0;
            let m = self.moment_log(nu, t, policy)?;
            sup = sup.max(m.absolute);
            window_dependent |= m.window_dependent;
        }
        Ok((sup, window_dependent))
    }

    /// Check the transform against the Kronecker-delta pattern at the nodes
    /// `2*pi*k` for `|k| <= kmax`, and report the first-derivative values
    /// where they exist. A kernel passes (`max_deviation == 0`) exactly when
    /// it reproduces constants.
    pub fn poisson_check(&self, kmax: u32) -> PoissonReport {
        let kmax = kmax as i64;
        let mut nodes = Vec::with_capacity((2 * kmax + 1) as usize);
        let mut max_deviation: f64 = 0.0;
        for k in -kmax..=kmax {
            let transform = self.transform_at_node(k);
            let expected = if k == 0 { 1.0 } else { 0.0 };
            let deviation = (transform - expected).abs();
            max_deviation = max_deviation.max(deviation);
            nodes.push(PoissonNode {
                k,
                transform,
                deviation,
                transform_derivative: self.transform_derivative_at_node(k),
            });
        }
        PoissonReport {
            kernel: self.to_string(),
            nodes,
            max_deviation,
            first_moment_vanishes: self.first_moment_vanishes(),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            KernelFamily::BSpline { order } => write!(f, "bspline:{order}"),
            KernelFamily::Fejer { alpha, c } => write!(f, "fejer:{alpha}:{c}"),
        }
    }
}

fn parse_alpha(s: &str) -> Option<f64> {
    match s {
        "pi" => Some(std::f64::consts::PI),
        "2pi" => Some(2.0 * std::f64::consts::PI),
        _ => s.parse().ok(),
    }
}

/// Evaluate the Mellin B-spline of order `n` at `x = e^t` via the
/// truncated-power formula
/// `B_n(t) = 1/(n-1)! * sum_j (-1)^j C(n,j) (n/2 + t - j)_+^(n-1)`.
///
/// Order 1 reduces to the indicator of `(-1/2, 1/2]` (the truncated power
/// `y_+^0` is taken as 1 for `y > 0`), which keeps the partition of unity
/// exact even when `t` lands on a half-integer. For `n >= 2` the spline is
/// continuous and vanishes at the support boundary, so points with
/// `|t| >= n/2` short-circuit to an exact zero instead of round-tripping
/// through the alternating sum.
fn bspline_log(n: u32, t: f64) -> f64 {
    if n == 1 {
        return if t > -0.5 && t <= 0.5 { 1.0 } else { 0.0 };
    }
    let half = n as f64 / 2.0;
    if t.abs() >= half {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut sign = 1.0;
    for j in 0..=n {
        let base = half + t - j as f64;
        if base <= 0.0 {
            break; // later bases only decrease
        }
        acc += sign * binomial(n, j) * base.powi(n as i32 - 1);
        sign = -sign;
    }
    acc / factorial(n - 1)
}

/// Evaluate the Mellin-Fejér kernel at `x = e^v`:
/// `F(x) = alpha/(2 pi x^c) * sinc(alpha v / (2 pi))^2`.
fn fejer_log(alpha: f64, c: f64, v: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let s = sinc(alpha * v / two_pi);
    alpha / two_pi * (-c * v).exp() * s * s
}

/// Half-window needed so the absolute tail of the order-zero Fejér series
/// drops below `tol`, from the envelope `|chi(e^v)| <= 2/(pi alpha v^2)`:
/// the tail past `K` terms is at most `4 / (pi alpha (K - 1/2))`.
fn tail_half_window(alpha: f64, tol: f64) -> Result<usize> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tail tolerance must be finite and positive, got {tol}"
        )));
    }
    let k = (4.0 / (std::f64::consts::PI * alpha * tol)).ceil() + 1.0;
    if !(k as f64).is_finite() || k > MAX_TAIL_HALF_WINDOW as f64 {
        return Err(Error::Truncation(format!(
            "tail tolerance {tol} would need a half-window of {k:.0} terms \
             (cap {MAX_TAIL_HALF_WINDOW}); loosen it or use terms:<K>"
        )));
    }
    Ok((k as usize).max(2))
}

/// Tail bound `4 / (pi alpha (K - 1/2))` for a half-window of `K` terms.
fn fejer_tail_bound(alpha: f64, half_window: usize) -> f64 {
    4.0 / (std::f64::consts::PI * alpha * (half_window as f64 - 0.5))
}

/// Free-function form of B-spline evaluation at `x > 0`.
pub fn eval_bspline(order: u32, x: f64) -> Result<f64> {
    KernelSpec::bspline(order)?.eval(x)
}

/// Free-function form of Fejér evaluation at `x > 0`.
pub fn eval_fejer(alpha: f64, c: f64, x: f64) -> Result<f64> {
    KernelSpec::fejer(alpha, c)?.eval(x)
}

/// One windowed moment value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    /// `sum_k chi(e^-k u) (k - log u)^nu`
    pub algebraic: f64,
    /// `sum_k |chi(e^-k u)| |k - log u|^nu`
    pub absolute: f64,
    /// True when the untruncated absolute series diverges, so the reported
    /// numbers depend on the chosen window.
    pub window_dependent: bool,
}

/// Moments of one order tabulated over a grid of `u` values.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub order: u32,
    pub grid: Vec<f64>,
    pub algebraic: Vec<f64>,
    pub absolute: Vec<f64>,
    pub sup_absolute: f64,
    pub window_dependent: bool,
}

/// Transform data at one node `t = 2*pi*k`.
#[derive(Debug, Clone, Serialize)]
pub struct PoissonNode {
    pub k: i64,
    pub transform: f64,
    /// `|transform - delta_{k,0}|`
    pub deviation: f64,
    /// First derivative of the transform at the node, `None` at corners.
    pub transform_derivative: Option<f64>,
}

/// Result of [`KernelSpec::poisson_check`].
#[derive(Debug, Clone, Serialize)]
pub struct PoissonReport {
    pub kernel: String,
    pub nodes: Vec<PoissonNode>,
    pub max_deviation: f64,
    pub first_moment_vanishes: bool,
}

/// Series truncation strategy for kernel sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    /// Sum exactly over the kernel's compact support (errors on Fejér).
    ExactSupport,
    /// Symmetric window of `K` indices on each side of `round(log u)`.
    WindowTerms(usize),
    /// Window sized so the absolute order-zero tail is below the tolerance.
    /// Equivalent to `ExactSupport` for compact kernels.
    TailTolerance(f64),
}

impl fmt::Display for TruncationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationPolicy::ExactSupport => write!(f, "exact"),
            TruncationPolicy::WindowTerms(k) => write!(f, "terms:{k}"),
            TruncationPolicy::TailTolerance(tol) => write!(f, "tol:{tol}"),
        }
    }
}

impl TruncationPolicy {
    /// Parse `exact`, `terms:<K>`, or `tol:<T>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "exact" {
            return Ok(TruncationPolicy::ExactSupport);
        }
        if let Some(k) = s.strip_prefix("terms:") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad term count in truncation spec {s:?}")))?;
            if k == 0 {
                return Err(Error::InvalidParameter(
                    "window term count must be positive".into(),
                ));
            }
            return Ok(TruncationPolicy::WindowTerms(k));
        }
        if let Some(tol) = s.strip_prefix("tol:") {
            let tol: f64 = tol
                .parse()
                .map_err(|_| Error::Parse(format!("bad tolerance in truncation spec {s:?}")))?;
            if !tol.is_finite() || tol <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "tail tolerance must be finite and positive, got {tol}"
                )));
            }
            return Ok(TruncationPolicy::TailTolerance(tol));
        }
        Err(Error::Parse(format!(
            "truncation spec {s:?} (expected exact, terms:<K>, or tol:<T>)"
        )))
    }
}

/// Convenience handle pairing cached quadrature with a kernel for the
/// transform-consistency check.
pub fn transform_consistency_deviation(
    kernel: &KernelSpec,
    ts: &[f64],
    quad_order: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in ts {
        let numeric = kernel.mellin_transform_numeric(t, quad_order)?;
        let closed = kernel.mellin_transform(t);
        worst = worst.max((numeric - closed).abs());
    }
    Ok(worst)
}
