//! Finite Taylor representation of the Kantorovich operator.
//!
//! For n-times Mellin-differentiable signals,
//!
//!   I_w f = S_w f + sum_{j=1..n-1} S_w(theta^j f) / ((j+1)! w^j) + R_n,
//!
//! where `S_w` is the classical operator. The decomposition splits the
//! Kantorovich value into the point-sampling part, higher-derivative
//! corrections shrinking like powers of 1/w, and a remainder bounded by
//! `sup |theta^n f| * sup M_0 / ((n+1)! w^n)`.
//!
//! Run with: cargo run --example representation

use expsamp::kernel::KernelSpec;
use expsamp::operators::{representation_decompose, OperatorParams};
use expsamp::signal::PiecewiseSignal;

fn main() -> expsamp::Result<()> {
    let kernel = KernelSpec::bspline(3)?;
    let f2 = PiecewiseSignal::f2();

    println!("f2 = cos x at x = 2, kernel {kernel}:");
    for w in [10.0, 40.0] {
        let params = OperatorParams::for_kernel(&kernel, w)?;
        for order in 1..=3 {
            let r = representation_decompose(&kernel, &f2, &params, 2.0, order)?;
            println!(
                "  w = {w:>3}, n = {order}: direct = {:.10}, identity gap = {:.1e}",
                r.direct, r.identity_gap
            );
            println!(
                "           sampling term = {:.10}, corrections = {:?}",
                r.terms[0],
                &r.terms[1..]
            );
            println!(
                "           remainder = {:>12.5e}, bound = {:>12.5e}, holds = {}",
                r.remainder, r.remainder_bound, r.bound_holds
            );
        }
    }

    // On the logarithm theta^2 log = 0, so the order-2 remainder vanishes
    // identically and the order-1 remainder attains its bound.
    let log = PiecewiseSignal::log();
    let params = OperatorParams::for_kernel(&kernel, 10.0)?;
    println!("\nlogarithm at x = 2, w = 10:");
    for order in 1..=2 {
        let r = representation_decompose(&kernel, &log, &params, 2.0, order)?;
        println!(
            "  n = {order}: remainder = {:.12}, bound = {:.12} (ratio {:.6})",
            r.remainder,
            r.remainder_bound,
            r.remainder.abs() / r.remainder_bound.max(f64::MIN_POSITIVE)
        );
    }
    Ok(())
}
