//! Quantitative error bound via the logarithmic modulus of continuity.
//!
//! For bounded signals, `|I_w f - f|(x) <= lambda * omega(f, 1/w)` with
//! `lambda = sup M_0 + sup M_1` built from the kernel's absolute moments
//! and `omega` the modulus of continuity in log scale. On the logarithm the
//! bound is tight up to the constant; on signals with jumps the modulus
//! saturates at the jump height and the bound stops shrinking.
//!
//! Run with: cargo run --example modulus_bound

use expsamp::kernel::KernelSpec;
use expsamp::operators::{modulus_bound_check, OperatorParams};
use expsamp::signal::PiecewiseSignal;

fn main() -> expsamp::Result<()> {
    let kernel = KernelSpec::bspline(2)?;
    println!("kernel {kernel}:");

    let log = PiecewiseSignal::log();
    println!("  logarithm at x = 2 (omega(delta) = delta, error = 1/(2w)):");
    for w in [5.0, 10.0, 40.0] {
        let params = OperatorParams::for_kernel(&kernel, w)?;
        let c = modulus_bound_check(&kernel, &log, &params, 2.0, 2)?;
        println!(
            "    w = {w:>3}: error = {:.6}, lambda = {:.3}, omega(1/w) = {:.6}, \
             bound = {:.6}, holds = {}",
            c.abs_error, c.lambda, c.modulus, c.bound, c.holds
        );
    }

    println!("  f2 = cos x at x = 3.4 (smooth piece, modulus ~ delta):");
    let f2 = PiecewiseSignal::f2();
    for w in [10.0, 40.0, 160.0] {
        let params = OperatorParams::for_kernel(&kernel, w)?;
        let c = modulus_bound_check(&kernel, &f2, &params, 3.4, 2)?;
        println!(
            "    w = {w:>3}: error = {:.6}, bound = {:.6}, holds = {}",
            c.abs_error, c.bound, c.holds
        );
    }

    println!("  f1 at x = 2 (jump at x = 1 keeps the modulus from vanishing):");
    let f1 = PiecewiseSignal::f1();
    for w in [5.0, 40.0, 160.0] {
        let params = OperatorParams::for_kernel(&kernel, w)?;
        let c = modulus_bound_check(&kernel, &f1, &params, 2.0, 2)?;
        println!(
            "    w = {w:>3}: error = {:.6}, omega(1/w) = {:.6}, bound = {:.6}",
            c.abs_error, c.modulus, c.bound
        );
    }

    // Fejer kernels decay like 1/v^2 in log scale, so their first absolute
    // moment diverges: lambda depends on the truncation window and the
    // bound is only indicative.
    let fejer = KernelSpec::fejer(std::f64::consts::PI, 0.0)?;
    let params = OperatorParams::for_kernel(&fejer, 40.0)?;
    let c = modulus_bound_check(&fejer, &log, &params, 2.0, 2)?;
    println!(
        "\nkernel {fejer}: lambda = {:.3} (window-dependent = {}), holds = {}",
        c.lambda, c.window_dependent, c.holds
    );
    Ok(())
}
