//! Tour of the two kernel families and their structural properties.
//!
//! Prints, for each kernel: its log-scale profile, the partition-of-unity
//! deviation, the Mellin transform at a few frequencies, the transform at
//! the Poisson nodes `t = 2 pi k` (a discrete delta when the partition of
//! unity holds), and the first few moments.
//!
//! Run with: cargo run --example kernels

use expsamp::kernel::{KernelSpec, TruncationPolicy};

fn describe(kernel: &KernelSpec) -> expsamp::Result<()> {
    let policy = kernel.default_truncation();
    println!("kernel {kernel} (truncation {policy})");

    print!("  profile chi(e^v): ");
    for v in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        print!(" {:>8.5}", kernel.eval_log(v));
    }
    println!();
    match kernel.support_log_radius() {
        Some(r) => println!("  compact support: |v| <= {r}"),
        None => println!("  support: unbounded, inverse-square log decay"),
    }

    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let x = 0.7 + 0.08 * i as f64;
        worst = worst.max((kernel.partition_sum(x, 13.7, &policy)? - 1.0).abs());
    }
    println!("  partition of unity: max |sum - 1| = {worst:.3e}");

    print!("  transform at t = 0, 1, 2pi:");
    for t in [0.0, 1.0, 2.0 * std::f64::consts::PI] {
        print!(" {:>9.6}", kernel.mellin_transform(t));
    }
    println!();

    let poisson = kernel.poisson_check(5);
    println!(
        "  poisson nodes: max |transform(2 pi k) - delta_k0| = {:.1e}",
        poisson.max_deviation
    );

    for nu in 0..=2 {
        let m = kernel.moment_log(nu, 0.3, &policy)?;
        println!(
            "  moment nu={nu} at log-phase 0.3: m = {:>12.6}, |m| = {:.6}{}",
            m.algebraic,
            m.absolute,
            if m.window_dependent {
                "  (window-dependent)"
            } else {
                ""
            }
        );
    }
    println!(
        "  first moment vanishes identically: {}",
        kernel.first_moment_vanishes()
    );
    println!();
    Ok(())
}

fn main() -> expsamp::Result<()> {
    for order in 1..=4 {
        describe(&KernelSpec::bspline(order)?)?;
    }
    describe(&KernelSpec::fejer(std::f64::consts::PI, 0.0)?)?;
    // A tighter bandwidth spreads the kernel in log scale; the partition of
    // unity survives for alpha <= 2 pi.
    describe(&KernelSpec::fejer(2.0, 0.0)?)?;

    // Truncation policies trade terms for tail mass on slowly decaying
    // kernels.
    let fejer = KernelSpec::fejer(std::f64::consts::PI, 0.0)?;
    println!("fejer:pi:0 partition deviation by truncation policy:");
    for policy in [
        TruncationPolicy::WindowTerms(10),
        TruncationPolicy::WindowTerms(100),
        TruncationPolicy::WindowTerms(1000),
        TruncationPolicy::TailTolerance(1e-6),
    ] {
        let dev = (fejer.partition_sum(1.7, 9.0, &policy)? - 1.0).abs();
        let bound = fejer
            .truncation_tail_bound(&policy, 0)
            .expect("order-0 tail bound exists for term/tolerance policies");
        println!("  {policy:>10}: |sum - 1| = {dev:.3e} (tail bound {bound:.3e})");
    }
    Ok(())
}
