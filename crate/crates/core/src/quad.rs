//! Gauss-Legendre quadrature on the unit interval (0,1).

use crate::error::{Error, Result};

/// Maximum supported rule order.
pub const MAX_ORDER: usize = 64;

/// Gauss-Legendre rule with nodes in (0,1) and weights summing to 1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the rule to `f` over (0,1).
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Evaluates the Legendre polynomial P_n and its derivative at `x` by the
/// three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    // P'_n from P_n and P_{n-1}; x = ±1 cannot occur at interior Gauss nodes.
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Builds the `n`-point Gauss-Legendre rule on (0,1).
///
/// Nodes are found by Newton iteration on P_n to 1e-15 starting from the
/// Chebyshev estimates, then mapped from (-1,1) to (0,1).
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::invalid(format!(
            "quadrature order {n} outside 1..={MAX_ORDER}"
        )));
    }
    if n == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.5],
            weights: vec![1.0],
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut last_step = f64::INFINITY;
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() <= 1e-15 {
                break;
            }
            // Stop once the step stagnates at rounding level.
            if step.abs() >= last_step && step.abs() < 1e-13 {
                break;
            }
            last_step = step.abs();
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // cos() enumerates the (-1,1) roots right-to-left; store ascending.
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 0.5 * w;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Adaptive Simpson integration of `f` over `[a, b]` to the absolute
/// tolerance `tol`. Depth- and work-limited; at either limit it returns the
/// extrapolated estimate of the deepest panel reached, so worst-case error
/// degrades gracefully for integrands it cannot resolve.
thread_local! {
    pub static QUAD_EVALS: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

pub(crate) fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let f = &|x: f64| {
        QUAD_EVALS.with(|c| c.set(c.get() + 1));
        f(x)
    };
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
        budget: &mut u64,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // Second acceptance test: the panel's own rounding floor. Without it
        // a tolerance below what f64 can deliver refines every panel to the
        // depth limit.
        let floor = (m - a) / 6.0 * (fa.abs() + 4.0 * flm.abs() + fm.abs())
            + (b - m) / 6.0 * (fm.abs() + 4.0 * frm.abs() + fb.abs());
        if depth == 0 || *budget == 0 || delta.abs() <= 15.0 * tol || delta.abs() <= 1e-15 * floor
        {
            return left + right + delta / 15.0;
        }
        *budget -= 1;
        recurse(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1, budget)
            + recurse(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1, budget)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Caps the total split count so an integrand whose features sit below the
    // acceptance tests everywhere still terminates promptly.
    let mut budget: u64 = 1 << 20;
    recurse(f, a, fa, m, fm, b, fb, whole, tol, 40, &mut budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn one_point_rule_is_midpoint() {
        let rule = gauss_legendre(1).unwrap();
        assert_eq!(rule.nodes, vec![0.5]);
        assert_eq!(rule.weights, vec![1.0]);
    }

    #[test]
    fn two_point_rule_matches_closed_form() {
        let rule = gauss_legendre(2).unwrap();
        let d = 1.0 / 3.0_f64.sqrt();
        assert_relative_eq!(rule.nodes[0], 0.5 * (1.0 - d), epsilon = 1e-15);
        assert_relative_eq!(rule.nodes[1], 0.5 * (1.0 + d), epsilon = 1e-15);
        assert_relative_eq!(rule.weights[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn adaptive_simpson_resolves_a_boundary_layer() {
        let f = |x: f64| 1.0 / (x + 1e-4).sqrt();
        let exact = 2.0 * ((1.0 + 1e-4_f64).sqrt() - 1e-2);
        let value = adaptive_simpson(&f, 0.0, 1.0, 1e-13);
        assert_relative_eq!(value, exact, epsilon = 1e-12);
    }

    #[test]
    fn five_point_rule_integrates_degree_nine() {
        let rule = gauss_legendre(5).unwrap();
        let value = rule.integrate(|x| x.powi(9));
        assert_relative_eq!(value, 0.1, epsilon = 1e-14);
    }

    #[test]
    fn weights_sum_to_one_and_monomials_are_exact() {
        for n in 1..=MAX_ORDER {
            let rule = gauss_legendre(n).unwrap();
            let sum: f64 = rule.weights.iter().sum();
            assert_relative_eq!(sum, 1.0, epsilon = 1e-14);
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            assert!(rule.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(rule.nodes.windows(2).all(|p| p[0] < p[1]));
            // Exactness up to degree 2n-1, checked at the highest degree.
            let k = 2 * n - 1;
            let value = rule.integrate(|x| x.powi(k as i32));
            assert_relative_eq!(value, 1.0 / (k as f64 + 1.0), epsilon = 1e-13);
        }
    }

    #[test]
    fn rejects_out_of_range_orders() {
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(MAX_ORDER + 1).is_err());
    }
}
