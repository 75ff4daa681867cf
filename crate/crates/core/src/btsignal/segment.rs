//! Best kernel-image approximation of an arbitrary segment of data.
//!
//! Given samples of some function g on [a, b] and a bandwidth, expand the
//! restriction of g in the basis for the centered window of half-length
//! T' = (b - a) / 2:
//!
//! ```text
//! g(x + center) ~ sum_k c_k phi_k(x),   c_k = <g, phi_k> / lambda_k
//! ```
//!
//! (the division by lambda_k is because ||phi_k||^2 on the window is
//! lambda_k, not 1). The matching density q = sum_k (c_k / lambda_k) phi_k
//! reproduces that expansion through the kernel, which is what lets the
//! approximation be evaluated anywhere on the line, not just inside [a, b].
//! More basis terms can only shrink the in-window residual; how fast it
//! shrinks is a smoothness statement about g.

use super::{KernelDensity, SignalError};
use crate::pswf::{build_basis, BandParams, PswfBasis};
use std::sync::Arc;

/// Outcome of fitting a kernel image to a segment of samples.
#[derive(Clone, Debug)]
pub struct SegmentApproximation {
    basis: Arc<PswfBasis>,
    center: f64,
    coeffs: Vec<f64>,
    density: KernelDensity,
    residual: f64,
}

impl SegmentApproximation {
    pub fn basis(&self) -> &Arc<PswfBasis> {
        &self.basis
    }

    /// Midpoint of the original segment; evaluation shifts by this amount.
    pub fn center(&self) -> f64 {
        self.center
    }

    /// Expansion coefficients c_k of the windowed restriction.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Density whose kernel image realizes the approximation.
    pub fn density(&self) -> &KernelDensity {
        &self.density
    }

    /// L2 norm of (g - approximation) over the segment.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Evaluate the bandlimited approximant at `t` (any real t).
    pub fn eval(&self, t: f64) -> f64 {
        self.basis
            .kernel_apply(&self.density, t - self.center)
            .expect("density was built on this basis's rule")
    }
}

/// Interpolate uniform samples of g onto an arbitrary point with a cubic
/// through the four nearest samples.
fn cubic_interp(samples: &[f64], lo: f64, h: f64, x: f64) -> f64 {
    let len = samples.len();
    let raw = ((x - lo) / h).floor() as isize - 1;
    let i0 = raw.clamp(0, len as isize - 4) as usize;
    let mut acc = 0.0;
    for j in 0..4 {
        let xj = lo + (i0 + j) as f64 * h;
        let mut basis = 1.0;
        for m in 0..4 {
            if m != j {
                let xm = lo + (i0 + m) as f64 * h;
                basis *= (x - xm) / (xj - xm);
            }
        }
        acc += samples[i0 + j] * basis;
    }
    acc
}

/// Fit the first `count` basis functions of bandwidth `bandwidth` to uniform
/// samples of g over `segment = (a, b)`. Needs at least `4 * count` samples
/// so the interpolation onto quadrature nodes does not invent resolution.
pub fn approximate_segment(
    samples: &[f64],
    segment: (f64, f64),
    bandwidth: f64,
    count: usize,
) -> Result<SegmentApproximation, SignalError> {
    let (a, b) = segment;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(SignalError::InvalidSegment { lo: a, hi: b });
    }
    let needed = (4 * count).max(4);
    if samples.len() < needed {
        return Err(SignalError::TooFewSamples {
            needed,
            count,
            got: samples.len(),
        });
    }

    let t_half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let params = BandParams::new(bandwidth, t_half)?;
    let resolution = (4 * count).max(256);
    let basis = Arc::new(build_basis(params, count, resolution)?);

    // Resample g onto the quadrature nodes (shifted to be centered).
    let h = (b - a) / (samples.len() - 1) as f64;
    let rule = basis.rule();
    let g_nodes: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&x| cubic_interp(samples, a, h, x + center))
        .collect();

    let mut coeffs = Vec::with_capacity(count);
    for k in 0..count {
        let inner: f64 = rule
            .weights
            .iter()
            .zip(&g_nodes)
            .zip(basis.node_values(k))
            .map(|((&w, &g), &phi)| w * g * phi)
            .sum();
        coeffs.push(inner / basis.eigenvalue(k));
    }

    // Density q = sum_k (c_k / lambda_k) phi_k; its kernel image restricted
    // to the window is exactly sum_k c_k phi_k.
    let density_values: Vec<f64> = (0..rule.len())
        .map(|i| {
            (0..count)
                .map(|k| coeffs[k] / basis.eigenvalue(k) * basis.node_values(k)[i])
                .sum()
        })
        .collect();
    let density = KernelDensity::new(rule.clone(), density_values)?;

    let approx_nodes: Vec<f64> = (0..rule.len())
        .map(|i| {
            (0..count)
                .map(|k| coeffs[k] * basis.node_values(k)[i])
                .sum()
        })
        .collect();
    let residual: f64 = rule
        .weights
        .iter()
        .zip(&g_nodes)
        .zip(&approx_nodes)
        .map(|((&w, &g), &p)| w * (g - p) * (g - p))
        .sum::<f64>()
        .sqrt();

    Ok(SegmentApproximation {
        basis,
        center,
        coeffs,
        density,
        residual,
    })
}
