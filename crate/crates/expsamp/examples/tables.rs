//! Reproduce the two benchmark error tables.
//!
//! table1: Kantorovich operator with the order-3 Mellin B-spline kernel on
//! the discontinuous signal `f1` (zero on [1/2, 1), -2/x on [1, 4)).
//! table2: the Mellin-Fejer kernel `fejer:pi:0` on `f2` (cos x on [1, 4)),
//! truncated to 5000 indices on each side of the window center.
//!
//! Errors `|I_w f(x) - f(x)|` shrink like O(1/w): doubling the rate roughly
//! halves each column.
//!
//! Run with: cargo run --example tables

use expsamp::kernel::{KernelSpec, TruncationPolicy};
use expsamp::operators::{apply_kantorovich, OperatorParams};
use expsamp::signal::PiecewiseSignal;

fn print_table(
    title: &str,
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    truncation: TruncationPolicy,
    ws: &[f64],
    xs: &[f64],
) -> expsamp::Result<()> {
    println!("{title}");
    print!("{:>6}", "x");
    for w in ws {
        print!("  {:>12}", format!("w = {w}"));
    }
    println!();
    for &x in xs {
        print!("{x:>6}");
        for &w in ws {
            let params = OperatorParams::new(w, truncation, 16)?;
            let value = apply_kantorovich(kernel, signal, &params, x)?;
            let err = (value - signal.eval(x)?).abs();
            print!("  {:>12.4}", err);
        }
        println!();
    }
    println!();
    Ok(())
}

fn main() -> expsamp::Result<()> {
    print_table(
        "absolute errors, Kantorovich operator, bspline:3 kernel, signal f1",
        &KernelSpec::bspline(3)?,
        &PiecewiseSignal::f1(),
        TruncationPolicy::ExactSupport,
        &[5.0, 40.0, 70.0],
        &[1.1, 1.8, 2.9, 3.8],
    )?;
    print_table(
        "absolute errors, Kantorovich operator, fejer:pi:0 kernel, signal f2",
        &KernelSpec::fejer(std::f64::consts::PI, 0.0)?,
        &PiecewiseSignal::f2(),
        TruncationPolicy::WindowTerms(5000),
        &[10.0, 40.0, 80.0],
        &[1.4, 2.3, 3.4, 3.9],
    )?;
    Ok(())
}
