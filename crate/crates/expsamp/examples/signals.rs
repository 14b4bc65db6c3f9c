//! Tour of the piecewise test signals and their Mellin calculus.
//!
//! Shows evaluation, exact cell averages (the Kantorovich building block),
//! the Mellin derivative theta f = x f'(x) in closed form and by log-scale
//! finite differences, and the logarithmic modulus of continuity.
//!
//! Run with: cargo run --example signals

use expsamp::signal::{DerivativeMethod, MellinDerivativeSpec, PiecewiseSignal};

fn main() -> expsamp::Result<()> {
    let signals = [
        ("f1 (0 on [1/2,1), -2/x on [1,4))", PiecewiseSignal::f1()),
        ("f2 (cos x on [1,4))", PiecewiseSignal::f2()),
        ("log", PiecewiseSignal::log()),
    ];

    for (label, signal) in &signals {
        println!("signal {label}");
        print!("  values at x = 0.6, 1, 2, 3.5:");
        for x in [0.6, 1.0, 2.0, 3.5] {
            match signal.eval(x) {
                Ok(v) => print!(" {v:>9.5}"),
                Err(_) => print!(" {:>9}", "outside"),
            }
        }
        println!();
        println!("  breakpoints: {:?}", signal.breakpoints());

        // Exact mean of u -> f(e^u) over a log cell, the quantity the
        // Kantorovich operator samples instead of point values.
        let mean = signal.exp_mean(0.5, 0.6, 16)?;
        println!("  cell average over log-interval [0.5, 0.6]: {mean:.10}");

        // Mellin derivatives via the closed form of each piece.
        let x = 2.0;
        for order in 1..=2 {
            let spec = MellinDerivativeSpec::closed_form(order);
            println!(
                "  theta^{order} f({x}) = {:.10} (closed form)",
                signal.mellin_derivative(&spec, x)?
            );
        }
        // The same first derivative by central differences in log scale.
        let fd = MellinDerivativeSpec {
            order: 1,
            method: DerivativeMethod::LogScaleFiniteDifference { step: 1e-5 },
        };
        println!(
            "  theta   f({x}) = {:.10} (finite differences)",
            signal.mellin_derivative(&fd, x)?
        );

        // Logarithmic modulus of continuity: for the logarithm itself,
        // omega(delta) = delta; for signals with jumps it saturates at the
        // jump height.
        for delta in [0.05, 0.2] {
            println!(
                "  log-modulus omega({delta}) = {:.6}",
                signal.log_modulus(delta, 2)?
            );
        }
        println!();
    }

    // theta maps the closed signal class to itself: differentiating f2
    // symbolically yields another piecewise signal.
    let theta_f2 = PiecewiseSignal::f2().theta();
    println!("theta f2 at x = 2: {:.10} (= -2 sin 2)", theta_f2.eval(2.0)?);
    println!("  -2 sin 2       = {:.10}", -2.0 * 2.0_f64.sin());
    Ok(())
}
