//! Gauss-Legendre quadrature on finite intervals.
//!
//! Nodes and weights are computed once per order by Newton iteration on the
//! Legendre polynomials and memoized behind a process-wide cache, so repeated
//! integration with the same order (the common case when averaging a signal
//! over many short cells) costs only the integrand evaluations. All
//! computations are deterministic: fixed starting guesses, fixed iteration
//! tolerance, fixed summation order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default number of nodes used when callers do not ask for a specific order.
pub const DEFAULT_ORDER: usize = 16;

/// Smallest and largest accepted node counts. One-point rules are rejected
/// because the integrands here are rarely constant; beyond 64 nodes the
/// Newton bootstrap still converges but adds nothing at f64 precision.
pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 64;

/// A Gauss-Legendre rule with `order` nodes on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build the rule with `order` nodes. Fails outside
    /// [`MIN_ORDER`]..=[`MAX_ORDER`].
    pub fn new(order: usize) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidParameter(format!(
                "quadrature order {order} outside {MIN_ORDER}..={MAX_ORDER}"
            )));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Roots come in +/- pairs; solve for the non-negative half.
        let half = n.div_ceil(2);
        for i in 0..half {
            // Chebyshev-like initial guess for the i-th root of P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    // One cleanup step tightens the root to full precision.
                    let (p2, d2) = legendre_with_derivative(n, x);
                    dp = d2;
                    x -= p2 / d2;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            // Odd rules have a node exactly at the origin.
            nodes[n / 2] = 0.0;
            let (_, d) = legendre_with_derivative(n, 0.0);
            weights[n / 2] = 2.0 / (d * d);
        }
        Ok(Self { nodes, weights })
    }

    /// Fetch (building on first use) the shared rule for `order`.
    pub fn cached(order: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        if let Some(rule) = guard.get(&order) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(Self::new(order)?);
        guard.insert(order, Arc::clone(&rule));
        Ok(rule)
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `f` over `[a, b]` (exact for polynomials of degree
    /// `2 * order - 1`). An empty or reversed interval integrates to the
    /// signed value in the usual way.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let scale = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + scale * x);
        }
        acc * scale
    }
}

/// Evaluate `P_n(x)` and `P_n'(x)` via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let d = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_out_of_range_orders() {
        assert!(GaussLegendre::new(0).is_err());
        assert!(GaussLegendre::new(1).is_err());
        assert!(GaussLegendre::new(65).is_err());
        assert!(GaussLegendre::new(2).is_ok());
        assert!(GaussLegendre::new(64).is_ok());
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for order in [2, 3, 5, 8, 16, 33, 64] {
            let rule = GaussLegendre::new(order).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        for order in [4, 7, 16] {
            let rule = GaussLegendre::new(order).unwrap();
            for i in 0..order {
                assert_abs_diff_eq!(rule.nodes[i], -rule.nodes[order - 1 - i], epsilon = 1e-15);
                if i > 0 {
                    assert!(rule.nodes[i] > rule.nodes[i - 1]);
                }
            }
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        // integral of x^d over [0, 1] is 1 / (d + 1)
        for order in [2usize, 3, 5, 10] {
            let rule = GaussLegendre::new(order).unwrap();
            for d in 0..(2 * order) {
                let got = rule.integrate(0.0, 1.0, |x| x.powi(d as i32));
                assert_abs_diff_eq!(got, 1.0 / (d as f64 + 1.0), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn integrates_transcendental_reference_values() {
        let rule = GaussLegendre::new(16).unwrap();
        // integral of sin over [0, pi] = 2
        assert_abs_diff_eq!(
            rule.integrate(0.0, std::f64::consts::PI, f64::sin),
            2.0,
            epsilon = 1e-12
        );
        // integral of e^u over [0, 1] = e - 1
        assert_abs_diff_eq!(
            rule.integrate(0.0, 1.0, f64::exp),
            std::f64::consts::E - 1.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn cached_rules_are_shared() {
        let a = GaussLegendre::cached(16).unwrap();
        let b = GaussLegendre::cached(16).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let rule = GaussLegendre::new(8).unwrap();
        let fwd = rule.integrate(0.0, 1.0, |x| x * x);
        let rev = rule.integrate(1.0, 0.0, |x| x * x);
        assert_abs_diff_eq!(fwd, -rev, epsilon = 1e-15);
    }
}
