//! Kantorovich-type exponential sampling operators.
//!
//! This crate evaluates exponential sampling series — the classical form
//! `(S_w f)(x) = sum_k chi(e^-k x^w) f(e^(k/w))` and its Kantorovich variant
//! `(I_w f)(x)`, which replaces point samples with local mean values — for
//! two kernel families (Mellin B-splines and Mellin-Fejer kernels) and
//! piecewise closed-form test signals. Alongside evaluation it verifies the
//! structural identities the theory rests on: discrete partition of unity,
//! Mellin transform values at the Poisson nodes, vanishing first moments,
//! the Voronovskaya asymptotic, a modulus-of-continuity error bound, a
//! finite Taylor representation with explicit remainder, and the O(1/w)
//! saturation rate.
//!
//! # Layout
//!
//! * [`kernel`] — kernel families, Mellin transforms, discrete moments, and
//!   truncation policies for the series windows.
//! * [`signal`] — piecewise signals closed under the Mellin derivative,
//!   exact cell means in log scale, and the logarithmic modulus of
//!   continuity.
//! * [`operators`] — the two sampling operators plus the convergence
//!   diagnostics (Voronovskaya, modulus bound, Taylor representation, rate
//!   fits).
//! * [`quad`] — Gauss-Legendre quadrature used wherever closed forms run
//!   out.
//! * [`cli`] — the table/figure/check/rate/moments commands behind the
//!   `expsamp` binary, exposed as a library so runs are scriptable.
//!
//! # Quick start
//!
//! ```
//! use expsamp::kernel::KernelSpec;
//! use expsamp::operators::{apply_kantorovich, OperatorParams};
//! use expsamp::signal::PiecewiseSignal;
//!
//! let kernel = KernelSpec::bspline(3)?;
//! let signal = PiecewiseSignal::f1();
//! let params = OperatorParams::for_kernel(&kernel, 40.0)?;
//! let value = apply_kantorovich(&kernel, &signal, &params, 2.0)?;
//! let error = (value - signal.eval(2.0)?).abs();
//! assert!(error < 0.02);
//! # Ok::<(), expsamp::Error>(())
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a walkthrough under `examples/`:
//! `cargo run --example <name>` with `kernels`, `signals`, `reconstruct`,
//! `voronovskaya`, `modulus_bound`, `representation`, `saturation_rate`,
//! `tables`, or `custom_signal`.

pub mod cli;
pub mod error;
pub mod kernel;
pub mod operators;
pub mod quad;
pub mod signal;

pub use error::{Error, Result};
pub use kernel::{KernelSpec, TruncationPolicy};
pub use operators::{apply_classical, apply_kantorovich, OperatorParams};
pub use signal::PiecewiseSignal;
