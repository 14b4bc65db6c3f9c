//! Saturation: the operator converges at rate O(1/w) and no faster.
//!
//! Fits `log error` against `log w` pointwise and in sup norm. Smooth
//! non-constant signals sit on the O(1/w) line (slope -1); constants are
//! reproduced exactly (degenerate fit); and no signal beats slope -1 --
//! the Kantorovich construction saturates at first order.
//!
//! Run with: cargo run --example saturation_rate

use expsamp::kernel::{KernelSpec, TruncationPolicy};
use expsamp::operators::{estimate_saturation, guarded_log_grid, log_spaced};
use expsamp::signal::PiecewiseSignal;

fn main() -> expsamp::Result<()> {
    let kernel = KernelSpec::bspline(2)?;
    let ws: Vec<f64> = log_spaced(5.0, 320.0, 7)?;

    println!("pointwise saturation fits, kernel {kernel}:");
    let cases = [
        ("log      at x = 2.0", PiecewiseSignal::log(), 2.0),
        ("f2       at x = 1.5", PiecewiseSignal::f2(), 1.5),
        ("f2       at x = 3.0", PiecewiseSignal::f2(), 3.0),
        ("f1       at x = 2.0", PiecewiseSignal::f1(), 2.0),
        ("const:7  at x = 2.0", PiecewiseSignal::constant(7.0), 2.0),
    ];
    for (label, signal, x) in &cases {
        let est = estimate_saturation(
            &kernel,
            signal,
            TruncationPolicy::ExactSupport,
            16,
            &ws,
            *x,
        )?;
        match est.exponent {
            Some(slope) => println!(
                "  {label}: slope = {slope:>7.4}, errors {:.2e} .. {:.2e}",
                est.errors[0],
                est.errors[est.errors.len() - 1]
            ),
            None => println!("  {label}: degenerate (reproduced to roundoff)"),
        }
    }

    // Sup-norm version on a grid that guards a smoothing zone around each
    // jump; without the guard the jump dominates and hides the O(1/w) law.
    println!("\nsup-norm fit for f1 over [0.5, 4] with guarded breakpoints:");
    let signal = PiecewiseSignal::f1();
    let guard = 2.0 / ws[0];
    let grid = guarded_log_grid(0.5, 4.0, 256, &signal.breakpoints(), guard)?;
    println!("  grid: {} points, guard radius {guard} (log scale)", grid.len());
    let mut errors = Vec::new();
    for &w in &ws {
        let params = expsamp::operators::OperatorParams::for_kernel(&kernel, w)?;
        let eval = expsamp::operators::apply_on_grid(&kernel, &signal, &params, &grid)?;
        let sup = eval.abs_error.iter().cloned().fold(0.0, f64::max);
        errors.push(sup);
        println!("  w = {w:>7.2}: sup error = {sup:.6}");
    }
    let ratio = errors[errors.len() - 2] / errors[errors.len() - 1];
    println!("  last doubling shrinks the sup error by x{ratio:.3} (ideal 2)");
    Ok(())
}
