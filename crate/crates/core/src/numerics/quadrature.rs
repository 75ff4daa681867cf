//! Gauss-Legendre quadrature on arbitrary finite intervals.
//!
//! Nodes are the roots of the Legendre polynomial P_n, found by Newton
//! iteration from the Chebyshev-style initial guess cos(pi (i + 3/4) / (n + 1/2)),
//! with weights 2 / ((1 - x^2) P_n'(x)^2), then mapped affinely onto [lo, hi].
//! Roots are computed for one half of [-1, 1] and mirrored, so the rule is
//! exactly symmetric about the interval midpoint; for an interval centered at
//! zero the nodes come out exactly antisymmetric, which the parity tests of
//! the eigenfunctions downstream rely on.

use super::NumericsError;

/// An n-point quadrature rule on `[interval_lo, interval_hi]`.
///
/// Invariants (checked in tests, relied on everywhere): nodes strictly
/// increasing and interior to the interval, weights positive, weights summing
/// to the interval length, and exactness on polynomials of degree `2n - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub interval_lo: f64,
    pub interval_hi: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate a function over the interval.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Weighted inner product of two sample vectors living on the nodes.
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), self.len());
        debug_assert_eq!(b.len(), self.len());
        self.weights
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&w, (&x, &y))| w * x * y)
            .sum()
    }

    /// Weighted L2 norm of a sample vector living on the nodes.
    pub fn norm(&self, a: &[f64]) -> f64 {
        self.dot(a, a).sqrt()
    }

    /// Whether two rules discretize the same interval with the same node
    /// count. Used to reject mixing densities across incompatible bases.
    pub fn compatible(&self, other: &QuadratureRule) -> bool {
        self.len() == other.len()
            && self.interval_lo == other.interval_lo
            && self.interval_hi == other.interval_hi
    }
}

/// Legendre polynomial value P_m(x) by the three-term recurrence.
pub fn legendre_p(m: usize, x: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=m {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    p
}

/// P_n(x) and P_n'(x) together, as Newton on the roots needs both.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // Derivative via the standard identity; the roots are interior so the
    // denominator never vanishes where this is used.
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Build the n-point Gauss-Legendre rule on `[lo, hi]`.
pub fn gauss_legendre_rule(n: usize, lo: f64, hi: f64) -> Result<QuadratureRule, NumericsError> {
    if n == 0 {
        return Err(NumericsError::EmptyRule);
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }

    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];

    // Roots in descending order for the right half; mirror for the left.
    let half_count = (n + 1) / 2;
    for i in 0..half_count {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-14 * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(NumericsError::RootNotConverged { index: i, order: n });
        }
        // One polishing step, then recompute the derivative at the final x.
        let (p, d) = legendre_pair(n, x);
        x -= p / d;
        let mut dp = legendre_pair(n, x).1;

        // The middle root of an odd-order polynomial is exactly zero.
        if n % 2 == 1 && i == half_count - 1 && x.abs() < 1e-12 {
            x = 0.0;
            dp = legendre_pair(n, x).1;
        }

        let w_std = 2.0 / ((1.0 - x * x) * dp * dp);
        // Guess i counts down from the largest root.
        nodes[n - 1 - i] = center + half * x;
        nodes[i] = center - half * x;
        weights[n - 1 - i] = w_std * half;
        weights[i] = w_std * half;
    }

    Ok(QuadratureRule {
        interval_lo: lo,
        interval_hi: hi,
        nodes,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Series evaluation of 2 sin(1), kept independent of libm so the
    /// quadrature check has its own reference.
    fn two_sin_one_series() -> f64 {
        let mut term = 1.0f64; // x^1 / 1! at x = 1
        let mut sum = 0.0;
        let mut k = 0u32;
        while term.abs() > 1e-18 {
            sum += term;
            // next odd-power term: * (-1) / ((2k+2)(2k+3))
            term *= -1.0 / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
            k += 1;
        }
        2.0 * sum
    }

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_legendre_rule(1, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(r.nodes[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[0], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn two_point_rule_matches_closed_form() {
        let r = gauss_legendre_rule(2, -1.0, 1.0).unwrap();
        let x = 1.0 / 3.0f64.sqrt();
        assert_abs_diff_eq!(r.nodes[0], -x, epsilon = 1e-15);
        assert_abs_diff_eq!(r.nodes[1], x, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sixty_four_point_rule_integrates_cosine() {
        let r = gauss_legendre_rule(64, -1.0, 1.0).unwrap();
        let integral = r.integrate(f64::cos);
        assert_abs_diff_eq!(integral, two_sin_one_series(), epsilon = 1e-14);
    }

    #[test]
    fn exact_on_polynomials_up_to_degree_2n_minus_1() {
        for n in [1usize, 2, 3, 4, 5, 8, 16, 32] {
            let r = gauss_legendre_rule(n, -1.0, 1.0).unwrap();
            for deg in 0..2 * n {
                let got = r.integrate(|t| t.powi(deg as i32));
                let want = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert_abs_diff_eq!(got, want, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            gauss_legendre_rule(0, -1.0, 1.0),
            Err(NumericsError::EmptyRule)
        ));
        assert!(matches!(
            gauss_legendre_rule(4, 1.0, 1.0),
            Err(NumericsError::InvalidInterval { .. })
        ));
        assert!(matches!(
            gauss_legendre_rule(4, 2.0, -2.0),
            Err(NumericsError::InvalidInterval { .. })
        ));
    }

    #[test]
    fn centered_interval_nodes_are_antisymmetric() {
        let r = gauss_legendre_rule(33, -1.5, 1.5).unwrap();
        for i in 0..r.len() {
            assert_eq!(r.nodes[i], -r.nodes[r.len() - 1 - i]);
            assert_eq!(r.weights[i], r.weights[r.len() - 1 - i]);
        }
        // Odd count: middle node exactly zero.
        assert_eq!(r.nodes[16], 0.0);
    }

    proptest! {
        #[test]
        fn rule_invariants_hold(n in 1usize..64, lo in -10.0f64..9.0, span in 0.1f64..10.0) {
            let hi = lo + span;
            let r = gauss_legendre_rule(n, lo, hi).unwrap();
            prop_assert_eq!(r.len(), n);
            for i in 0..n {
                prop_assert!(r.nodes[i] > lo && r.nodes[i] < hi);
                prop_assert!(r.weights[i] > 0.0);
                if i > 0 {
                    prop_assert!(r.nodes[i] > r.nodes[i - 1]);
                }
            }
            let wsum: f64 = r.weights.iter().sum();
            prop_assert!(((wsum - span) / span).abs() < 1e-12);
        }
    }
}
