//! End-to-end acceptance suite. Each test prints a single
//! `acceptance N (<label>): PASS|FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and asserts the
//! corresponding guarantee. Tolerances are pinned in [`tol`].

use std::time::Instant;

use expsamp::cli::{self, RawArgs, RunConfig};
use expsamp::kernel::{transform_consistency_deviation, KernelSpec, TruncationPolicy};
use expsamp::operators::{
    estimate_saturation, log_spaced, modulus_bound_check, representation_decompose,
    voronovskaya_check, OperatorParams,
};
use expsamp::signal::{DerivativeMethod, PiecewiseSignal};

/// Pinned acceptance tolerances.
mod tol {
    /// Benchmark tables: relative tolerance against the reference values.
    pub const TABLE_REL: f64 = 0.10;
    /// Benchmark tables: absolute tolerance floor (whichever is looser).
    pub const TABLE_ABS: f64 = 0.003;
    /// Structural fallback: fitted per-row decay exponent range.
    pub const FALLBACK_SLOPE: (f64, f64) = (-1.2, -0.8);
    /// Partition-of-unity deviation for compact kernels.
    pub const PARTITION: f64 = 1e-12;
    /// Numeric vs closed-form Mellin transform.
    pub const TRANSFORM: f64 = 1e-8;
    /// Voronovskaya residual on the logarithm (exact modulo roundoff).
    pub const VORONOVSKAYA_LOG: f64 = 1e-12;
    /// Reconstruction identity gap in the Taylor representation.
    pub const REPRESENTATION: f64 = 1e-10;
    /// Saturation exponent for the logarithm: -1 within this margin.
    pub const RATE_MARGIN: f64 = 0.01;
    /// No non-constant signal may fit an exponent below this barrier.
    pub const RATE_BARRIER: f64 = -1.3;
}

fn report(n: u32, label: &str, pass: bool) {
    println!(
        "acceptance {n} ({label}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// `|got - reference|` within 10% relative or 0.003 absolute, whichever
/// is looser.
fn within_table_tolerance(got: f64, reference: f64) -> bool {
    let allowed = (tol::TABLE_REL * reference.abs()).max(tol::TABLE_ABS);
    (got - reference).abs() <= allowed
}

/// Unrounded error grid |f(x) - I_w f(x)| for a kernel/signal/table layout.
fn raw_errors(
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    truncation: TruncationPolicy,
    ws: &[f64],
    xs: &[f64],
) -> Vec<Vec<f64>> {
    xs.iter()
        .map(|&x| {
            let fx = signal.eval(x).unwrap();
            ws.iter()
                .map(|&w| {
                    let params = OperatorParams::new(w, truncation, 16).unwrap();
                    (expsamp::apply_kantorovich(kernel, signal, &params, x).unwrap() - fx).abs()
                })
                .collect()
        })
        .collect()
}

struct TableOutcome {
    direct: bool,
    fallback: bool,
    detail: String,
}

/// Direct-tolerance comparison against the reference grid, falling back to
/// the structural rules (rows decrease with w; per-row fitted exponent in
/// the fallback band) when the values themselves do not match.
fn judge_table(
    errors: &[Vec<f64>],
    reference: &[[f64; 3]],
    kernel: &KernelSpec,
    signal: &PiecewiseSignal,
    truncation: TruncationPolicy,
    ws: &[f64],
    xs: &[f64],
) -> TableOutcome {
    let mut direct = true;
    let mut detail = String::new();
    for (i, row) in errors.iter().enumerate() {
        for (j, &err) in row.iter().enumerate() {
            if !within_table_tolerance(err, reference[i][j]) {
                direct = false;
                detail.push_str(&format!(
                    "  value mismatch at x = {}, w = {}: {err:.4} vs reference {:.4}\n",
                    xs[i], ws[j], reference[i][j]
                ));
            }
        }
    }
    let mut fallback = true;
    for (i, row) in errors.iter().enumerate() {
        if !row.windows(2).all(|p| p[0] > p[1]) {
            fallback = false;
            detail.push_str(&format!("  row x = {} does not decrease with w\n", xs[i]));
        }
        let est = estimate_saturation(kernel, signal, truncation, 16, ws, xs[i]).unwrap();
        let slope = est.exponent.unwrap_or(f64::NAN);
        if !(tol::FALLBACK_SLOPE.0..=tol::FALLBACK_SLOPE.1).contains(&slope) {
            fallback = false;
            detail.push_str(&format!(
                "  row x = {} decay exponent {slope:.3} outside [{}, {}]\n",
                xs[i],
                tol::FALLBACK_SLOPE.0,
                tol::FALLBACK_SLOPE.1
            ));
        }
    }
    TableOutcome {
        direct,
        fallback,
        detail,
    }
}

#[test]
fn a1_benchmark_table1() {
    let start = Instant::now();
    let signal = PiecewiseSignal::f1();
    let truncation = TruncationPolicy::TailTolerance(1e-8);
    let ws = [5.0, 40.0, 70.0];
    let xs = [1.1, 1.8, 2.9, 3.8];
    let reference = [
        [0.1621, 0.0225, 0.0129],
        [0.1028, 0.0137, 0.0079],
        [0.0620, 0.0085, 0.0049],
        [0.0471, 0.0065, 0.0037],
    ];

    // Best-matching B-spline order in 1..=5: any order passing directly,
    // or any order passing the structural fallback.
    let mut best: Option<(u32, TableOutcome)> = None;
    let mut pass = false;
    for order in 1..=5 {
        let kernel = KernelSpec::bspline(order).unwrap();
        let errors = raw_errors(&kernel, &signal, truncation, &ws, &xs);
        let outcome = judge_table(&errors, &reference, &kernel, &signal, truncation, &ws, &xs);
        if outcome.direct || outcome.fallback {
            pass = true;
        }
        let better = match &best {
            None => true,
            Some((_, b)) => outcome.detail.len() < b.detail.len(),
        };
        if better {
            best = Some((order, outcome));
        }
    }
    let elapsed = start.elapsed();
    let in_time = elapsed.as_secs_f64() < 10.0;
    report(1, "benchmark table 1", pass && in_time);
    assert!(in_time, "table 1 sweep took {elapsed:?} (limit 10 s)");
    let (order, outcome) = best.unwrap();
    assert!(
        pass,
        "no B-spline order in 1..=5 matches the reference table directly or structurally; \
         closest order {order} (direct {}, fallback {}):\n{}",
        outcome.direct, outcome.fallback, outcome.detail
    );
}

#[test]
fn a2_benchmark_table2() {
    let start = Instant::now();
    let kernel = KernelSpec::fejer(std::f64::consts::PI, 0.0).unwrap();
    let signal = PiecewiseSignal::f2();
    // 5000 indices per side = 10001-term windows (>= 10^4 terms).
    let truncation = TruncationPolicy::WindowTerms(5000);
    let ws = [10.0, 40.0, 80.0];
    let xs = [1.4, 2.3, 3.4, 3.9];
    let reference = [
        [0.0954, 0.0216, 0.0123],
        [0.0322, 0.0059, 0.0033],
        [0.1635, 0.0391, 0.0271],
        [0.2262, 0.0571, 0.0336],
    ];
    let errors = raw_errors(&kernel, &signal, truncation, &ws, &xs);
    let outcome = judge_table(&errors, &reference, &kernel, &signal, truncation, &ws, &xs);
    let pass = outcome.direct || outcome.fallback;
    let elapsed = start.elapsed();
    let in_time = elapsed.as_secs_f64() < 60.0;
    report(2, "benchmark table 2", pass && in_time);
    assert!(in_time, "table 2 took {elapsed:?} (limit 60 s)");
    assert!(
        pass,
        "Fejer table matches neither directly nor structurally:\n{}",
        outcome.detail
    );
}

#[test]
fn a3_partition_of_unity() {
    let start = Instant::now();
    let policy = TruncationPolicy::ExactSupport;
    let mut worst = 0.0_f64;
    // 50 x 20 = 10^3 (x, w) pairs per order.
    let xs = log_spaced(0.5, 4.0, 50).unwrap();
    let ws: Vec<f64> = (0..20).map(|i| 2.5 + 7.3 * i as f64).collect();
    for order in 1..=5 {
        let kernel = KernelSpec::bspline(order).unwrap();
        for &x in &xs {
            for &w in &ws {
                worst = worst.max((kernel.partition_sum(x, w, &policy).unwrap() - 1.0).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= tol::PARTITION && elapsed.as_secs_f64() < 1.0;
    report(3, "partition of unity", pass);
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "partition scan took {elapsed:?} (limit 1 s)"
    );
    assert!(
        worst <= tol::PARTITION,
        "max |sum - 1| = {worst:.3e} exceeds {:.0e}",
        tol::PARTITION
    );
}

#[test]
fn a4_poisson_nodes_and_transform() {
    let mut exact_ok = true;
    let mut worst_numeric = 0.0_f64;
    for order in 1..=5 {
        let kernel = KernelSpec::bspline(order).unwrap();
        // Transform at the nodes t = 2 pi k is exactly the discrete delta.
        let poisson = kernel.poisson_check(10);
        if poisson.max_deviation != 0.0 {
            exact_ok = false;
        }
        // Quadrature of the kernel against the closed form sinc^n.
        let ts = [0.0, std::f64::consts::PI, 2.0 * std::f64::consts::PI];
        worst_numeric =
            worst_numeric.max(transform_consistency_deviation(&kernel, &ts, 32).unwrap());
    }
    let pass = exact_ok && worst_numeric <= tol::TRANSFORM;
    report(4, "poisson nodes and transform", pass);
    assert!(exact_ok, "transform at nodes 2 pi k is not exactly delta_k0");
    assert!(
        worst_numeric <= tol::TRANSFORM,
        "numeric transform deviates by {worst_numeric:.3e} (limit {:.0e})",
        tol::TRANSFORM
    );
}

#[test]
fn a5_voronovskaya() {
    // Logarithm: the scaled error equals 1/2 exactly at every rate for
    // B-splines of order >= 2.
    let log = PiecewiseSignal::log();
    let mut worst_log = 0.0_f64;
    for order in 2..=5 {
        let kernel = KernelSpec::bspline(order).unwrap();
        for &w in &[5.0, 20.0, 80.0] {
            for &x in &[0.8, 2.0, 3.5] {
                let params = OperatorParams::for_kernel(&kernel, w).unwrap();
                let check =
                    voronovskaya_check(&kernel, &log, &params, x, DerivativeMethod::ClosedForm)
                        .unwrap();
                worst_log = worst_log.max(check.residual.abs());
            }
        }
    }

    // f2 at interior points: the residual shrinks from w = 20 to w = 80
    // (order-3 kernel, the benchmark-table kernel).
    let f2 = PiecewiseSignal::f2();
    let kernel = KernelSpec::bspline(3).unwrap();
    let mut shrink_ok = true;
    let mut detail = String::new();
    for &x in &[1.5, 2.0, 3.0] {
        let mut residuals = Vec::new();
        for &w in &[20.0, 80.0] {
            let params = OperatorParams::for_kernel(&kernel, w).unwrap();
            let check =
                voronovskaya_check(&kernel, &f2, &params, x, DerivativeMethod::ClosedForm)
                    .unwrap();
            residuals.push(check.residual.abs());
        }
        if !(residuals[1] < residuals[0]) {
            shrink_ok = false;
            detail.push_str(&format!(
                "  x = {x}: |residual| {:.3e} (w=20) -> {:.3e} (w=80)\n",
                residuals[0], residuals[1]
            ));
        }
    }

    let pass = worst_log <= tol::VORONOVSKAYA_LOG && shrink_ok;
    report(5, "voronovskaya asymptotics", pass);
    assert!(
        worst_log <= tol::VORONOVSKAYA_LOG,
        "log residual {worst_log:.3e} exceeds {:.0e}",
        tol::VORONOVSKAYA_LOG
    );
    assert!(shrink_ok, "f2 residual did not shrink:\n{detail}");
}

#[test]
fn a6_modulus_bound() {
    let kernel = KernelSpec::bspline(2).unwrap();
    let log = PiecewiseSignal::log();
    let mut all_hold = true;
    let mut detail = String::new();
    for &w in &[5.0, 10.0, 40.0] {
        let params = OperatorParams::for_kernel(&kernel, w).unwrap();
        for x in log_spaced(0.5, 4.0, 25).unwrap() {
            let check = modulus_bound_check(&kernel, &log, &params, x, 2).unwrap();
            if !check.holds {
                all_hold = false;
                detail.push_str(&format!(
                    "  x = {x:.4}, w = {w}: error {:.6e} > bound {:.6e}\n",
                    check.abs_error, check.bound
                ));
            }
        }
    }
    report(6, "modulus-of-continuity bound", all_hold);
    assert!(all_hold, "bound violations:\n{detail}");
}

#[test]
fn a7_taylor_representation() {
    let cases = [
        ("log", PiecewiseSignal::log(), vec![1.3, 2.0]),
        ("f2", PiecewiseSignal::f2(), vec![2.0, 3.0]),
    ];
    let mut worst_gap = 0.0_f64;
    let mut bounds_ok = true;
    let mut detail = String::new();
    for order in [2_u32, 3] {
        let kernel = KernelSpec::bspline(order).unwrap();
        for (name, signal, xs) in &cases {
            for &x in xs {
                for &w in &[10.0, 40.0] {
                    let params = OperatorParams::for_kernel(&kernel, w).unwrap();
                    for n in [1, 2] {
                        let r = representation_decompose(&kernel, signal, &params, x, n).unwrap();
                        worst_gap = worst_gap.max(r.identity_gap);
                        if !r.bound_holds {
                            bounds_ok = false;
                            detail.push_str(&format!(
                                "  {name} x = {x}, w = {w}, n = {n} ({kernel}): remainder \
                                 {:.3e} exceeds bound {:.3e}\n",
                                r.remainder.abs(),
                                r.remainder_bound
                            ));
                        }
                    }
                }
            }
        }
    }
    let pass = worst_gap <= tol::REPRESENTATION && bounds_ok;
    report(7, "taylor representation", pass);
    assert!(
        worst_gap <= tol::REPRESENTATION,
        "identity gap {worst_gap:.3e} exceeds {:.0e}",
        tol::REPRESENTATION
    );
    assert!(bounds_ok, "remainder bound violations:\n{detail}");
}

#[test]
fn a8_saturation_diagnostic() {
    let kernel = KernelSpec::bspline(2).unwrap();
    let ws = log_spaced(5.0, 320.0, 7).unwrap();

    // The logarithm sits exactly on the O(1/w) line.
    let est = estimate_saturation(
        &kernel,
        &PiecewiseSignal::log(),
        TruncationPolicy::ExactSupport,
        16,
        &ws,
        2.0,
    )
    .unwrap();
    let log_slope = est.exponent.unwrap();
    let log_ok = (log_slope + 1.0).abs() <= tol::RATE_MARGIN;

    // Constants are reproduced exactly: degenerate fit, no exponent.
    let est = estimate_saturation(
        &kernel,
        &PiecewiseSignal::constant(7.0),
        TruncationPolicy::ExactSupport,
        16,
        &ws,
        2.0,
    )
    .unwrap();
    let const_ok = est.degenerate && est.exponent.is_none();

    // Saturation barrier: no non-constant test signal beats O(1/w).
    // Pointwise fits at interior points (f2 points avoid x = pi, where
    // theta f2 vanishes and the pointwise rate is not first-order).
    let mut barrier_ok = true;
    let mut detail = String::new();
    let cases = [
        ("log", PiecewiseSignal::log(), vec![0.8, 2.0, 3.5]),
        ("f1", PiecewiseSignal::f1(), vec![1.6, 2.0, 3.0]),
        ("f2", PiecewiseSignal::f2(), vec![1.5, 2.0, 3.0]),
    ];
    for (name, signal, xs) in &cases {
        for &x in xs {
            let est = estimate_saturation(
                &kernel,
                signal,
                TruncationPolicy::ExactSupport,
                16,
                &ws,
                x,
            )
            .unwrap();
            if let Some(slope) = est.exponent {
                if slope < tol::RATE_BARRIER {
                    barrier_ok = false;
                    detail.push_str(&format!("  {name} at x = {x}: exponent {slope:.3}\n"));
                }
            }
        }
        // Sup-norm fit over the breakpoint-guarded grid.
        let raw = RawArgs {
            command: "rate".into(),
            kernel: Some("bspline:2".into()),
            signal: Some(name.to_string()),
            ..Default::default()
        };
        let report = cli::run_rate(&RunConfig::resolve(&raw).unwrap()).unwrap();
        if let Some(slope) = report.exponent {
            if slope < tol::RATE_BARRIER {
                barrier_ok = false;
                detail.push_str(&format!("  {name} sup-norm: exponent {slope:.3}\n"));
            }
        }
    }

    let pass = log_ok && const_ok && barrier_ok;
    report(8, "saturation diagnostic", pass);
    assert!(
        log_ok,
        "log exponent {log_slope:.4} not within {} of -1",
        tol::RATE_MARGIN
    );
    assert!(const_ok, "constant signal not flagged degenerate");
    assert!(barrier_ok, "saturation barrier violated:\n{detail}");
}

#[test]
fn a9_preset_determinism() {
    let exe = env!("CARGO_BIN_EXE_expsamp");
    let dir = std::env::temp_dir();
    let tag = std::process::id();
    let mut all_identical = true;
    let mut detail = String::new();
    for preset in ["table1", "table2", "figure1", "figure2"] {
        let command = if preset.starts_with("table") {
            "table"
        } else {
            "figure"
        };
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("expsamp-acc-{tag}-{preset}-{run}.csv"));
            let status = std::process::Command::new(exe)
                .args([
                    command,
                    "--preset",
                    preset,
                    "--out",
                    path.to_str().unwrap(),
                ])
                .status()
                .expect("binary runs");
            assert!(status.success(), "preset {preset} run {run} failed");
            outputs.push(std::fs::read(&path).expect("output file exists"));
            let _ = std::fs::remove_file(&path);
        }
        if outputs[0] != outputs[1] {
            all_identical = false;
            detail.push_str(&format!("  preset {preset}: outputs differ\n"));
        }
        assert!(
            !outputs[0].is_empty(),
            "preset {preset} produced empty output"
        );
    }
    report(9, "preset determinism", all_identical);
    assert!(all_identical, "non-deterministic presets:\n{detail}");
}
