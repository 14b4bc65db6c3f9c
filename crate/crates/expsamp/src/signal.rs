//! Piecewise test signals on the positive half-line.
//!
//! A [`PiecewiseSignal`] is a sorted list of disjoint half-open pieces
//! `[lo, hi)`, each carrying a closed-form [`Formula`]; evaluation outside
//! every piece is an explicit zero extension. The built-ins are the two
//! benchmark signals (`f1`: zero on `[1/2, 1)` and `-2/x` on `[1, 4)`;
//! `f2`: zero on `(0, 1)` and `cos x` on `[1, 4)`), plus globally defined
//! constants and the logarithm.
//!
//! Three pieces of analysis machinery live here:
//!
//! * [`exp_mean`](PiecewiseSignal::exp_mean) — the exact mean
//!   `integral of f(e^u) du` over a log-scale interval, split at the signal's
//!   log-breakpoints, with closed forms wherever the piece formula admits one
//!   and Gauss-Legendre quadrature otherwise. This is the cell average the
//!   Kantorovich-type operator consumes.
//! * [`mellin_derivative`](PiecewiseSignal::mellin_derivative) — iterates of
//!   the Mellin derivative `(theta f)(x) = x f'(x)`, either symbolically
//!   (every built-in formula family is closed under `theta`) or by central
//!   finite differences in log scale.
//! * [`log_modulus`](PiecewiseSignal::log_modulus) — a grid estimate of the
//!   logarithmic modulus of continuity
//!   `sup { |f(x) - f(y)| : |log x - log y| <= delta }`, with forced sample
//!   pairs straddling each breakpoint so jumps are never missed.
//!
//! All evaluation is done in log coordinates (`u = log x`) so that operator
//! windows with thousands of terms never exponentiate out of f64 range.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Default step for log-scale central finite differences.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Transcendental factor of a closed-form term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Factor {
    One,
    LogX,
    SinX,
    CosX,
}

/// One term `coeff * x^power * factor(x)` of a closed-form expression.
/// The family of such sums is closed under the Mellin derivative
/// `theta = x d/dx`, which is what makes symbolic derivatives possible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub power: i32,
    pub factor: Factor,
}

impl Term {
    fn eval_log(&self, u: f64) -> f64 {
        let base = self.coeff * (self.power as f64 * u).exp();
        match self.factor {
            Factor::One => base,
            Factor::LogX => base * u,
            Factor::SinX => base * u.exp().sin(),
            Factor::CosX => base * u.exp().cos(),
        }
    }

    /// `integral over [a, b] of coeff * e^(p u) * factor(e^u) du` where a
    /// closed form exists (no trigonometric factor).
    fn mean_log_closed(&self, a: f64, b: f64) -> Option<f64> {
        let p = self.power as f64;
        match self.factor {
            Factor::One => Some(if self.power == 0 {
                self.coeff * (b - a)
            } else {
                self.coeff * ((p * b).exp() - (p * a).exp()) / p
            }),
            Factor::LogX => Some(if self.power == 0 {
                0.5 * self.coeff * (b * b - a * a)
            } else {
                let anti = |u: f64| (p * u).exp() * (u / p - 1.0 / (p * p));
                self.coeff * (anti(b) - anti(a))
            }),
            Factor::SinX | Factor::CosX => None,
        }
    }

    /// Mellin derivative of the term:
    /// `theta(c x^p g(x)) = c p x^p g(x) + c x^(p+1) g'(x)`.
    fn theta(&self) -> Vec<Term> {
        let mut out = Vec::with_capacity(2);
        if self.power != 0 {
            out.push(Term {
                coeff: self.coeff * self.power as f64,
                ..*self
            });
        }
        match self.factor {
            Factor::One => {}
            Factor::LogX => out.push(Term {
                coeff: self.coeff,
                power: self.power,
                factor: Factor::One,
            }),
            Factor::SinX => out.push(Term {
                coeff: self.coeff,
                power: self.power + 1,
                factor: Factor::CosX,
            }),
            Factor::CosX => out.push(Term {
                coeff: -self.coeff,
                power: self.power + 1,
                factor: Factor::SinX,
            }),
        }
        out
    }
}

/// Closed-form expression carried by one piece.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    /// The constant `v`.
    Constant(f64),
    /// `log x`.
    Log,
    /// `scale / x`.
    Reciprocal(f64),
    /// `cos x`.
    CosOfX,
    /// Identically zero (an explicit zero-extension piece).
    Zero,
    /// General term sum, produced by Mellin differentiation.
    Terms(Vec<Term>),
}

impl Formula {
    /// Evaluate at `x = e^u`.
    pub fn eval_log(&self, u: f64) -> f64 {
        match self {
            Formula::Constant(v) => *v,
            Formula::Log => u,
            Formula::Reciprocal(s) => s * (-u).exp(),
            Formula::CosOfX => u.exp().cos(),
            Formula::Zero => 0.0,
            Formula::Terms(terms) => terms.iter().map(|t| t.eval_log(u)).sum(),
        }
    }

    fn to_terms(&self) -> Vec<Term> {
        match self {
            Formula::Constant(v) => vec![Term {
                coeff: *v,
                power: 0,
                factor: Factor::One,
            }],
            Formula::Log => vec![Term {
                coeff: 1.0,
                power: 0,
                factor: Factor::LogX,
            }],
            Formula::Reciprocal(s) => vec![Term {
                coeff: *s,
                power: -1,
                factor: Factor::One,
            }],
            Formula::CosOfX => vec![Term {
                coeff: 1.0,
                power: 0,
                factor: Factor::CosX,
            }],
            Formula::Zero => vec![],
            Formula::Terms(terms) => terms.clone(),
        }
    }

    /// Symbolic Mellin derivative `theta f = x f'`, with like terms merged
    /// (deterministically, keyed by `(power, factor)`).
    pub fn theta(&self) -> Formula {
        use std::collections::BTreeMap;
        let mut merged: BTreeMap<(i32, Factor), f64> = BTreeMap::new();
        for term in self.to_terms() {
            for t in term.theta() {
                *merged.entry((t.power, t.factor)).or_insert(0.0) += t.coeff;
            }
        }
        let terms: Vec<Term> = merged
            .into_iter()
            .filter(|&(_, coeff)| coeff != 0.0)
            .map(|((power, factor), coeff)| Term {
                coeff,
                power,
                factor,
            })
            .collect();
        if terms.is_empty() {
            Formula::Zero
        } else {
            Formula::Terms(terms)
        }
    }

    /// Closed-form `integral over [a, b] of f(e^u) du`, when available.
    fn mean_log_closed(&self, a: f64, b: f64) -> Option<f64> {
        match self {
            Formula::Constant(v) => Some(v * (b - a)),
            Formula::Log => Some(0.5 * (b * b - a * a)),
            Formula::Reciprocal(s) => Some(s * ((-a).exp() - (-b).exp())),
            Formula::CosOfX => None,
            Formula::Zero => Some(0.0),
            Formula::Terms(terms) => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.mean_log_closed(a, b)?;
                }
                Some(acc)
            }
        }
    }
}

/// One half-open piece `[lo, hi)` of a signal (`lo = 0` means `(0, hi)`).
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    lo: f64,
    hi: f64,
    formula: Formula,
    // Cached log endpoints; lo = 0 maps to -inf, hi = inf to +inf.
    log_lo: f64,
    log_hi: f64,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, formula: Formula) -> Result<Self> {
        if lo.is_nan() || lo < 0.0 || !(hi > lo) {
            return Err(Error::InvalidSignal(format!(
                "piece bounds must satisfy 0 <= lo < hi, got [{lo}, {hi})"
            )));
        }
        Ok(Self {
            log_lo: if lo == 0.0 { f64::NEG_INFINITY } else { lo.ln() },
            log_hi: hi.ln(), // inf maps to inf
            lo,
            hi,
            formula,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

/// How to compute a Mellin derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMethod {
    /// Differentiate the active piece's formula symbolically.
    ClosedForm,
    /// Central differences of `u -> f(e^u)` with the given log-scale step.
    LogScaleFiniteDifference { step: f64 },
}

/// Order and method for [`PiecewiseSignal::mellin_derivative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinDerivativeSpec {
    pub order: u32,
    pub method: DerivativeMethod,
}

impl MellinDerivativeSpec {
    pub fn closed_form(order: u32) -> Self {
        Self {
            order,
            method: DerivativeMethod::ClosedForm,
        }
    }

    pub fn finite_difference(order: u32) -> Self {
        Self {
            order,
            method: DerivativeMethod::LogScaleFiniteDifference {
                step: DEFAULT_FD_STEP,
            },
        }
    }
}

/// A piecewise signal with explicit zero extension outside its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSignal {
    pieces: Vec<Piece>,
}

impl PiecewiseSignal {
    /// Build from pieces, which must be sorted and pairwise disjoint
    /// (`hi <= next lo`).
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        for pair in pieces.windows(2) {
            if pair[0].hi > pair[1].lo {
                return Err(Error::InvalidSignal(format!(
                    "pieces overlap or are out of order: [{}, {}) then [{}, {})",
                    pair[0].lo, pair[0].hi, pair[1].lo, pair[1].hi
                )));
            }
        }
        Ok(Self { pieces })
    }

    /// Single piece covering all of `(0, inf)`.
    pub fn single(formula: Formula) -> Self {
        Self {
            pieces: vec![Piece::new(0.0, f64::INFINITY, formula).expect("valid full-line piece")],
        }
    }

    /// The constant signal `x -> v`.
    pub fn constant(v: f64) -> Self {
        Self::single(Formula::Constant(v))
    }

    /// The signal `x -> log x`.
    pub fn log() -> Self {
        Self::single(Formula::Log)
    }

    /// Benchmark signal: `0` on `[1/2, 1)`, `-2/x` on `[1, 4)`, zero outside.
    pub fn f1() -> Self {
        Self::new(vec![
            Piece::new(0.5, 1.0, Formula::Zero).expect("valid piece"),
            Piece::new(1.0, 4.0, Formula::Reciprocal(-2.0)).expect("valid piece"),
        ])
        .expect("f1 pieces are disjoint")
    }

    /// Benchmark signal: `0` on `(0, 1)`, `cos x` on `[1, 4)`, zero outside.
    pub fn f2() -> Self {
        Self::new(vec![
            Piece::new(0.0, 1.0, Formula::Zero).expect("valid piece"),
            Piece::new(1.0, 4.0, Formula::CosOfX).expect("valid piece"),
        ])
        .expect("f2 pieces are disjoint")
    }

    /// Parse a signal spec: `f1`, `f2`, `log`, `const:<v>`, or a JSON
    /// piecewise descriptor
    /// `{"pieces":[{"from":0.5,"to":1,"kind":"const","v":0}, ...]}` with
    /// kinds `const`, `log`, `recip`, `cos`, `zero` (`to` omitted means
    /// unbounded).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Self::from_json(s);
        }
        match s {
            "f1" => Ok(Self::f1()),
            "f2" => Ok(Self::f2()),
            "log" => Ok(Self::log()),
            _ => {
                if let Some(v) = s.strip_prefix("const:") {
                    let v: f64 = v.parse().map_err(|_| {
                        Error::Parse(format!("bad constant in signal spec {s:?}"))
                    })?;
                    if !v.is_finite() {
                        return Err(Error::InvalidSignal(format!(
                            "constant signal value must be finite, got {v}"
                        )));
                    }
                    Ok(Self::constant(v))
                } else {
                    Err(Error::Parse(format!(
                        "signal spec {s:?} (expected f1, f2, log, const:<v>, or JSON pieces)"
                    )))
                }
            }
        }
    }

    fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct RawSignal {
            pieces: Vec<RawPiece>,
        }
        #[derive(Deserialize)]
        struct RawPiece {
            from: f64,
            to: Option<f64>,
            kind: String,
            v: Option<f64>,
        }
        let raw: RawSignal = serde_json::from_str(s)?;
        let mut pieces = Vec::with_capacity(raw.pieces.len());
        for p in raw.pieces {
            let value = |kind: &str| {
                p.v.ok_or_else(|| {
                    Error::InvalidSignal(format!("piece kind {kind:?} requires a value \"v\""))
                })
            };
            let formula = match p.kind.as_str() {
                "const" => Formula::Constant(value("const")?),
                "log" => Formula::Log,
                "recip" => Formula::Reciprocal(value("recip")?),
                "cos" => Formula::CosOfX,
                "zero" => Formula::Zero,
                other => {
                    return Err(Error::InvalidSignal(format!(
                        "unknown piece kind {other:?} (expected const, log, recip, cos, zero)"
                    )))
                }
            };
            pieces.push(Piece::new(p.from, p.to.unwrap_or(f64::INFINITY), formula)?);
        }
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Finite positive piece endpoints, sorted and deduplicated. These are
    /// the only points where the signal may fail to be smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut bps: Vec<f64> = Vec::new();
        for p in &self.pieces {
            if p.lo > 0.0 {
                bps.push(p.lo);
            }
            if p.hi.is_finite() {
                bps.push(p.hi);
            }
        }
        bps.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        bps.dedup();
        bps
    }

    /// `log` of each breakpoint.
    pub fn log_breakpoints(&self) -> Vec<f64> {
        self.breakpoints().iter().map(|b| b.ln()).collect()
    }

    /// Log-scale interval outside of which the signal is identically zero:
    /// `(-inf, inf)` when any non-trivial piece is unbounded. Explicit
    /// [`Formula::Zero`] pieces evaluate to zero anyway, so they do not
    /// widen the interval; operator windows use this to skip terms that
    /// contribute exactly nothing.
    pub(crate) fn coverage_log(&self) -> (f64, f64) {
        let nonzero = self.pieces.iter().filter(|p| p.formula != Formula::Zero);
        let lo = nonzero
            .clone()
            .map(|p| p.log_lo)
            .fold(f64::INFINITY, f64::min);
        let hi = nonzero
            .map(|p| p.log_hi)
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Evaluate at `x > 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::Domain(format!(
                "signals are defined for finite x > 0, got {x}"
            )));
        }
        Ok(self.eval_log(x.ln()))
    }

    /// Evaluate at `x = e^u` without forming `x` (zero outside all pieces).
    pub fn eval_log(&self, u: f64) -> f64 {
        for p in &self.pieces {
            if u < p.log_lo {
                return 0.0; // pieces are sorted
            }
            if u < p.log_hi {
                return p.formula.eval_log(u);
            }
        }
        0.0
    }

    /// Exact mean value `integral over [a, b] of f(e^u) du` in log scale
    /// (`a <= b`). The integral splits at the log-breakpoints; each segment
    /// uses the piece's closed form when it has one and `quad_order`-point
    /// Gauss-Legendre otherwise. Regions outside all pieces contribute zero.
    pub fn exp_mean(&self, a: f64, b: f64, quad_order: usize) -> Result<f64> {
        if !a.is_finite() || !b.is_finite() || a > b {
            return Err(Error::InvalidParameter(format!(
                "exp_mean interval must be finite with a <= b, got [{a}, {b}]"
            )));
        }
        let mut acc = 0.0;
        for p in &self.pieces {
            let lo = a.max(p.log_lo);
            let hi = b.min(p.log_hi);
            if lo >= hi {
                continue;
            }
            acc += match p.formula.mean_log_closed(lo, hi) {
                Some(v) => v,
                None => {
                    let rule = GaussLegendre::cached(quad_order)?;
                    rule.integrate(lo, hi, |u| p.formula.eval_log(u))
                }
            };
        }
        Ok(acc)
    }

    /// Signal whose pieces carry the symbolic Mellin derivative of this
    /// signal's formulas (breakpoints unchanged). Jump discontinuities are
    /// not differentiated — each piece is treated on its own interior.
    pub fn theta(&self) -> PiecewiseSignal {
        PiecewiseSignal {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: p.lo,
                    hi: p.hi,
                    formula: p.formula.theta(),
                    log_lo: p.log_lo,
                    log_hi: p.log_hi,
                })
                .collect(),
        }
    }

    /// Iterated Mellin derivative `theta^order f (x)`.
    ///
    /// `ClosedForm` differentiates the active piece symbolically (any
    /// order). Finite differences support orders 1 and 2 and refuse to
    /// straddle a breakpoint: the stencil must stay inside one piece.
    pub fn mellin_derivative(&self, spec: &MellinDerivativeSpec, x: f64) -> Result<f64> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::Domain(format!(
                "derivatives are defined for finite x > 0, got {x}"
            )));
        }
        let u = x.ln();
        if spec.order == 0 {
            return Ok(self.eval_log(u));
        }
        match spec.method {
            DerivativeMethod::ClosedForm => {
                let mut formula = match self.pieces.iter().find(|p| u >= p.log_lo && u < p.log_hi)
                {
                    Some(p) => p.formula.clone(),
                    None => Formula::Zero, // zero extension is smooth
                };
                for _ in 0..spec.order {
                    formula = formula.theta();
                }
                Ok(formula.eval_log(u))
            }
            DerivativeMethod::LogScaleFiniteDifference { step } => {
                if !step.is_finite() || step <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "finite-difference step must be finite and positive, got {step}"
                    )));
                }
                for lb in self.log_breakpoints() {
                    if (u - lb).abs() <= step {
                        return Err(Error::NonSmoothPoint(format!(
                            "finite differences at x = {x} straddle the breakpoint at {}",
                            lb.exp()
                        )));
                    }
                }
                let g = |du: f64| self.eval_log(u + du);
                match spec.order {
                    1 => Ok((g(step) - g(-step)) / (2.0 * step)),
                    2 => Ok((g(step) - 2.0 * g(0.0) + g(-step)) / (step * step)),
                    n => Err(Error::Unsupported(format!(
                        "finite differences support orders 1 and 2, got {n}; \
                         use the closed form for higher orders"
                    ))),
                }
            }
        }
    }

    /// Estimate the logarithmic modulus of continuity
    /// `omega(delta) = sup { |f(x) - f(y)| : |log x - log y| <= delta }`.
    ///
    /// The estimate is a supremum over sample pairs and therefore a lower
    /// bound of the true modulus. Pairs are drawn from a log-uniform grid of
    /// `64 * grid_density` points per decade, every in-grid pair within
    /// `delta`, one exact-`delta` pair per grid point, and a fixed ladder of
    /// pairs straddling each breakpoint (so jump heights are captured to
    /// machine precision regardless of `delta`).
    pub fn log_modulus(&self, delta: f64, grid_density: usize) -> Result<f64> {
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "modulus scale delta must be finite and positive, got {delta}"
            )));
        }
        if grid_density == 0 || grid_density > 64 {
            return Err(Error::InvalidParameter(format!(
                "grid density must be in 1..=64, got {grid_density}"
            )));
        }
        // Sample domain in log scale: the span of the finite breakpoints,
        // padded so the zero extension participates; two decades around 1
        // when the signal has no finite structure at all.
        let log_bps = self.log_breakpoints();
        let pad = delta.max(0.25);
        let (t_lo, t_hi) = match (log_bps.first(), log_bps.last()) {
            (Some(&first), Some(&last)) => (first - pad, last + pad),
            _ => (-2.5, 2.5),
        };
        let h = std::f64::consts::LN_10 / (64.0 * grid_density as f64);
        let mut ts: Vec<f64> = Vec::new();
        let count = ((t_hi - t_lo) / h).ceil() as usize + 1;
        for i in 0..count {
            ts.push(t_lo + i as f64 * h);
        }
        // Breakpoint ladder: tiny fixed offsets on both sides plus the
        // breakpoint itself, independent of delta so estimates stay
        // monotone in delta.
        const LADDER: [f64; 6] = [0.0, 1e-9, 1e-7, 1e-5, 1e-3, 1e-2];
        for &lb in &log_bps {
            for &off in &LADDER {
                ts.push(lb - off);
                ts.push(lb + off);
            }
        }
        ts.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
        ts.dedup();
        let values: Vec<f64> = ts.iter().map(|&t| self.eval_log(t)).collect();

        let mut sup: f64 = 0.0;
        // All in-grid pairs within delta (two-pointer sweep).
        let mut j_hi = 0usize;
        for i in 0..ts.len() {
            if j_hi < i + 1 {
                j_hi = i + 1;
            }
            while j_hi < ts.len() && ts[j_hi] - ts[i] <= delta {
                j_hi += 1;
            }
            for j in (i + 1)..j_hi {
                sup = sup.max((values[i] - values[j]).abs());
            }
        }
        // Exact-delta partners (attains the modulus of smooth unbounded
        // signals like the logarithm exactly).
        for (i, &t) in ts.iter().enumerate() {
            sup = sup.max((values[i] - self.eval_log(t + delta)).abs());
        }
        Ok(sup)
    }

    /// Supremum of `|f|` over `x in [e^a, e^b]`, by dense sampling plus the
    /// breakpoint ladder. Used for remainder bounds over operator windows.
    pub fn sup_abs_log_range(&self, a: f64, b: f64, samples: usize) -> f64 {
        let n = samples.max(2);
        let mut sup: f64 = 0.0;
        for i in 0..n {
            let t = a + (b - a) * i as f64 / (n - 1) as f64;
            sup = sup.max(self.eval_log(t).abs());
        }
        for lb in self.log_breakpoints() {
            for off in [-1e-9, 0.0, 1e-9] {
                let t = lb + off;
                if t >= a && t <= b {
                    sup = sup.max(self.eval_log(t).abs());
                }
            }
        }
        sup
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn builtin_signal_values() {
        let f1 = PiecewiseSignal::f1();
        assert_eq!(f1.eval(0.9).unwrap(), 0.0);
        assert_eq!(f1.eval(0.3).unwrap(), 0.0); // zero extension below 1/2
        assert_abs_diff_eq!(f1.eval(1.0).unwrap(), -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f1.eval(2.0).unwrap(), -1.0, epsilon = 1e-15);
        assert_eq!(f1.eval(4.0).unwrap(), 0.0); // right endpoint excluded
        assert_eq!(f1.eval(10.0).unwrap(), 0.0);

        let f2 = PiecewiseSignal::f2();
        assert_eq!(f2.eval(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(f2.eval(1.0).unwrap(), 1.0_f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(f2.eval(2.0).unwrap(), 2.0_f64.cos(), epsilon = 1e-15);
        assert_eq!(f2.eval(4.0).unwrap(), 0.0);

        assert_abs_diff_eq!(
            PiecewiseSignal::log().eval(2.0).unwrap(),
            2.0_f64.ln(),
            epsilon = 1e-15
        );
        assert_eq!(PiecewiseSignal::constant(3.5).eval(77.0).unwrap(), 3.5);
    }

    #[test]
    fn domain_errors() {
        let f1 = PiecewiseSignal::f1();
        assert!(f1.eval(0.0).is_err());
        assert!(f1.eval(-2.0).is_err());
        assert!(f1.eval(f64::NAN).is_err());
        assert!(f1
            .mellin_derivative(&MellinDerivativeSpec::closed_form(1), 0.0)
            .is_err());
    }

    #[test]
    fn breakpoints_are_piece_endpoints() {
        assert_eq!(PiecewiseSignal::f1().breakpoints(), vec![0.5, 1.0, 4.0]);
        assert_eq!(PiecewiseSignal::f2().breakpoints(), vec![1.0, 4.0]);
        assert!(PiecewiseSignal::log().breakpoints().is_empty());
    }

    #[test]
    fn exp_mean_frozen_values() {
        let f1 = PiecewiseSignal::f1();
        // Window [log 1 - 0.1, log 1 + 0.1]: zero piece below, -2 e^{-u} above.
        let got = f1.exp_mean(-0.1, 0.1, 16).unwrap();
        let want = -2.0 * (1.0 - (-0.1_f64).exp());
        assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        // Far outside every piece the mean is identically zero.
        assert_eq!(f1.exp_mean(3.0, 5.0, 16).unwrap(), 0.0);

        // Constants and logarithm have elementary antiderivatives.
        assert_abs_diff_eq!(
            PiecewiseSignal::constant(3.0).exp_mean(-1.0, 2.0, 16).unwrap(),
            9.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            PiecewiseSignal::log().exp_mean(1.0, 2.0, 16).unwrap(),
            1.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn exp_mean_closed_forms_match_quadrature() {
        // Rebuild the integral with Gauss-Legendre panels split at the
        // log-breakpoints (quadrature cannot cross a jump) and compare
        // against the analytic route taken by exp_mean.
        let rule = GaussLegendre::new(32).unwrap();
        let cases = [
            (PiecewiseSignal::f1(), -0.3, 1.1),
            (PiecewiseSignal::log(), -1.0, 0.7),
            (PiecewiseSignal::constant(2.5), -0.4, 0.9),
        ];
        for (signal, a, b) in cases {
            let mut cuts = vec![a];
            for lb in signal.log_breakpoints() {
                if lb > a && lb < b {
                    cuts.push(lb);
                }
            }
            cuts.push(b);
            let direct: f64 = cuts
                .windows(2)
                .map(|seg| rule.integrate(seg[0], seg[1], |u| signal.eval_log(u)))
                .sum();
            let closed = signal.exp_mean(a, b, 16).unwrap();
            assert_abs_diff_eq!(closed, direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn exp_mean_rejects_reversed_intervals() {
        assert!(PiecewiseSignal::log().exp_mean(1.0, 0.0, 16).is_err());
        assert_eq!(PiecewiseSignal::log().exp_mean(1.0, 1.0, 16).unwrap(), 0.0);
    }

    #[test]
    fn mellin_derivative_closed_forms() {
        let spec1 = MellinDerivativeSpec::closed_form(1);
        let spec2 = MellinDerivativeSpec::closed_form(2);
        // theta log = 1, theta^2 log = 0
        let log = PiecewiseSignal::log();
        assert_abs_diff_eq!(log.mellin_derivative(&spec1, 2.7).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(log.mellin_derivative(&spec2, 2.7).unwrap(), 0.0);
        // theta cos = -x sin x at x = 2
        let f2 = PiecewiseSignal::f2();
        assert_abs_diff_eq!(
            f2.mellin_derivative(&spec1, 2.0).unwrap(),
            -2.0 * 2.0_f64.sin(),
            epsilon = 1e-13
        );
        // theta^2 cos = -x sin x - x^2 cos x
        assert_abs_diff_eq!(
            f2.mellin_derivative(&spec2, 2.0).unwrap(),
            -2.0 * 2.0_f64.sin() - 4.0 * 2.0_f64.cos(),
            epsilon = 1e-13
        );
        // theta(-2/x) = 2/x
        let f1 = PiecewiseSignal::f1();
        assert_abs_diff_eq!(f1.mellin_derivative(&spec1, 2.0).unwrap(), 1.0, epsilon = 1e-13);
        // order 0 is plain evaluation
        assert_abs_diff_eq!(
            f1.mellin_derivative(&MellinDerivativeSpec::closed_form(0), 2.0)
                .unwrap(),
            -1.0,
            epsilon = 1e-15
        );
        // outside all pieces the zero extension differentiates to zero
        assert_eq!(f1.mellin_derivative(&spec1, 9.0).unwrap(), 0.0);
    }

    #[test]
    fn finite_differences_agree_with_closed_forms() {
        let fd1 = MellinDerivativeSpec::finite_difference(1);
        let fd2 = MellinDerivativeSpec::finite_difference(2);
        let f2 = PiecewiseSignal::f2();
        let closed1 = f2
            .mellin_derivative(&MellinDerivativeSpec::closed_form(1), 2.0)
            .unwrap();
        let closed2 = f2
            .mellin_derivative(&MellinDerivativeSpec::closed_form(2), 2.0)
            .unwrap();
        assert_abs_diff_eq!(
            f2.mellin_derivative(&fd1, 2.0).unwrap(),
            closed1,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            f2.mellin_derivative(&fd2, 2.0).unwrap(),
            closed2,
            epsilon = 1e-4
        );
    }

    #[test]
    fn finite_difference_error_shrinks_quadratically() {
        // Central differences are second-order: quartering the step should
        // cut the error by roughly 16 (allow slack for roundoff).
        let f2 = PiecewiseSignal::f2();
        let closed = f2
            .mellin_derivative(&MellinDerivativeSpec::closed_form(1), 2.0)
            .unwrap();
        let err_at = |step: f64| {
            let spec = MellinDerivativeSpec {
                order: 1,
                method: DerivativeMethod::LogScaleFiniteDifference { step },
            };
            (f2.mellin_derivative(&spec, 2.0).unwrap() - closed).abs()
        };
        let coarse = err_at(1e-2);
        let fine = err_at(2.5e-3);
        assert!(fine < coarse / 8.0, "coarse {coarse}, fine {fine}");
    }

    #[test]
    fn finite_differences_refuse_breakpoints() {
        let f1 = PiecewiseSignal::f1();
        let fd = MellinDerivativeSpec::finite_difference(1);
        let err = f1.mellin_derivative(&fd, 1.0).unwrap_err();
        assert!(matches!(err, Error::NonSmoothPoint(_)));
        // A stencil that would straddle the breakpoint is also refused.
        let near = 1.0 * (0.5 * DEFAULT_FD_STEP).exp();
        assert!(f1.mellin_derivative(&fd, near).is_err());
        // Higher orders are closed-form only.
        let fd3 = MellinDerivativeSpec {
            order: 3,
            method: DerivativeMethod::LogScaleFiniteDifference { step: 1e-5 },
        };
        assert!(matches!(
            f1.mellin_derivative(&fd3, 2.0).unwrap_err(),
            Error::Unsupported(_)
        ));
    }

    #[test]
    fn theta_signal_differentiates_each_piece() {
        let theta_f1 = PiecewiseSignal::f1().theta();
        assert_abs_diff_eq!(theta_f1.eval(2.0).unwrap(), 1.0, epsilon = 1e-13);
        assert_eq!(theta_f1.eval(0.7).unwrap(), 0.0);
        assert_eq!(theta_f1.breakpoints(), vec![0.5, 1.0, 4.0]);
    }

    #[test]
    fn log_modulus_reference_values() {
        // The logarithm attains its modulus exactly: omega(delta) = delta.
        let log = PiecewiseSignal::log();
        for delta in [0.05, 0.1, 0.3] {
            assert_abs_diff_eq!(log.log_modulus(delta, 1).unwrap(), delta, epsilon = 1e-12);
        }
        // Constants have zero modulus.
        assert_eq!(PiecewiseSignal::constant(4.2).log_modulus(0.2, 1).unwrap(), 0.0);
        // f1 jumps by 2 at x = 1; the jump dominates every delta.
        let f1 = PiecewiseSignal::f1();
        for delta in [0.01, 0.1, 0.5] {
            assert_abs_diff_eq!(f1.log_modulus(delta, 1).unwrap(), 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn log_modulus_monotone_in_delta() {
        let signals = [
            PiecewiseSignal::log(),
            PiecewiseSignal::constant(1.0),
            PiecewiseSignal::f1(),
            PiecewiseSignal::f2(),
        ];
        for signal in &signals {
            let mut prev = 0.0;
            for delta in [0.02, 0.05, 0.1, 0.2, 0.4] {
                let m = signal.log_modulus(delta, 1).unwrap();
                assert!(
                    m >= prev - 1e-12,
                    "modulus decreased: {prev} -> {m} at delta {delta}"
                );
                prev = m;
            }
        }
    }

    #[test]
    fn log_modulus_validates_arguments() {
        let log = PiecewiseSignal::log();
        assert!(log.log_modulus(0.0, 1).is_err());
        assert!(log.log_modulus(-0.1, 1).is_err());
        assert!(log.log_modulus(0.1, 0).is_err());
    }

    #[test]
    fn parse_builtins_and_json() {
        assert_eq!(PiecewiseSignal::parse("f1").unwrap(), PiecewiseSignal::f1());
        assert_eq!(PiecewiseSignal::parse("log").unwrap(), PiecewiseSignal::log());
        assert_eq!(
            PiecewiseSignal::parse("const:2.5").unwrap().eval(9.0).unwrap(),
            2.5
        );
        let json = r#"{"pieces":[
            {"from":0.5,"to":1,"kind":"const","v":0},
            {"from":1,"to":4,"kind":"recip","v":-2}
        ]}"#;
        let parsed = PiecewiseSignal::parse(json).unwrap();
        for x in [0.6, 1.0, 1.7, 3.3, 5.0] {
            assert_abs_diff_eq!(
                parsed.eval(x).unwrap(),
                PiecewiseSignal::f1().eval(x).unwrap(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for bad in [
            "f3",
            "const:",
            "const:nan",
            r#"{"pieces":[{"from":-1,"to":1,"kind":"log"}]}"#,
            r#"{"pieces":[{"from":1,"to":0.5,"kind":"log"}]}"#,
            r#"{"pieces":[{"from":0.5,"to":2,"kind":"const"}]}"#, // missing v
            r#"{"pieces":[{"from":0.5,"to":2,"kind":"tan"}]}"#,
            r#"{"pieces":[{"from":0.5,"to":2,"kind":"log"},{"from":1,"to":3,"kind":"log"}]}"#,
        ] {
            assert!(PiecewiseSignal::parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    proptest! {
        /// exp_mean is additive over adjacent intervals.
        #[test]
        fn exp_mean_additivity(
            a in -2.0f64..2.0,
            gap1 in 0.01f64..1.5,
            gap2 in 0.01f64..1.5,
        ) {
            let b = a + gap1;
            let c = b + gap2;
            for signal in [PiecewiseSignal::f1(), PiecewiseSignal::f2(), PiecewiseSignal::log()] {
                let whole = signal.exp_mean(a, c, 16).unwrap();
                let split = signal.exp_mean(a, b, 16).unwrap() + signal.exp_mean(b, c, 16).unwrap();
                prop_assert!((whole - split).abs() < 1e-12);
            }
        }

        /// eval and eval_log agree wherever both are defined.
        #[test]
        fn eval_log_consistent_with_eval(u in -5.0f64..5.0) {
            for signal in [PiecewiseSignal::f1(), PiecewiseSignal::f2(), PiecewiseSignal::log()] {
                let via_x = signal.eval(u.exp()).unwrap();
                let via_log = signal.eval_log(u);
                prop_assert!((via_x - via_log).abs() < 1e-12);
            }
        }
    }
}
