//! Multiband combinations of kernel-image signals.
//!
//! A component occupying the frequency band [A, B] and time window [a, b] is
//! a frequency- and time-shifted copy of the centered construction: with
//! `Omega_i = (B_i - A_i) / 2` and `T_i = (b_i - a_i) / 2`,
//!
//! ```text
//! f(t) = sum_i alpha_i e^{j (A_i + Omega_i) t}
//!        integral_{-T_i}^{T_i} k_{Omega_i}(t + a_i + T_i - s) q_i(s) ds
//! ```
//!
//! A single component with A = -Omega, a = -T collapses back to the plain
//! real-valued centered case (the phase factor is 1 and the shifts cancel).
//! Components over different bands make the combination occupy every band
//! involved, which is what the spectral check downstream demonstrates.

use super::{KernelDensity, SignalError};
use crate::pswf::sinc_kernel;
use num_complex::Complex64;

/// A frequency band [freq_lo, freq_hi] paired with a time window
/// [time_lo, time_hi] (the A, B, a, b of the shifted class).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandSpec {
    pub freq_lo: f64,
    pub freq_hi: f64,
    pub time_lo: f64,
    pub time_hi: f64,
}

impl BandSpec {
    pub fn new(
        freq_lo: f64,
        freq_hi: f64,
        time_lo: f64,
        time_hi: f64,
    ) -> Result<Self, SignalError> {
        let all_finite = freq_lo.is_finite()
            && freq_hi.is_finite()
            && time_lo.is_finite()
            && time_hi.is_finite();
        if !all_finite || freq_lo >= freq_hi || time_lo >= time_hi {
            return Err(SignalError::InvalidBand {
                freq_lo,
                freq_hi,
                time_lo,
                time_hi,
            });
        }
        Ok(BandSpec {
            freq_lo,
            freq_hi,
            time_lo,
            time_hi,
        })
    }

    /// Half-bandwidth `Omega_i = (B - A) / 2`.
    pub fn omega(&self) -> f64 {
        0.5 * (self.freq_hi - self.freq_lo)
    }

    /// Half-length of the time window `T_i = (b - a) / 2`.
    pub fn t_half(&self) -> f64 {
        0.5 * (self.time_hi - self.time_lo)
    }

    /// Whether two bands share frequencies.
    pub fn overlaps(&self, other: &BandSpec) -> bool {
        self.freq_lo <= other.freq_hi && other.freq_lo <= self.freq_hi
    }
}

/// One term of a multiband combination.
#[derive(Clone, Debug)]
pub struct MultibandComponent {
    pub alpha: Complex64,
    pub band: BandSpec,
    /// Density on the centered window [-T_i, T_i] of this component's band.
    pub density: KernelDensity,
}

impl MultibandComponent {
    /// Checks that the density lives on the centered window of the band.
    pub fn new(
        alpha: Complex64,
        band: BandSpec,
        density: KernelDensity,
    ) -> Result<Self, SignalError> {
        let t_half = band.t_half();
        let rule = density.rule();
        if (rule.interval_lo + t_half).abs() > 1e-9 || (rule.interval_hi - t_half).abs() > 1e-9 {
            return Err(SignalError::RuleMismatch);
        }
        Ok(MultibandComponent {
            alpha,
            band,
            density,
        })
    }
}

/// Evaluate the multiband combination at time `t`.
pub fn synth_multiband(
    components: &[MultibandComponent],
    t: f64,
) -> Result<Complex64, SignalError> {
    if components.is_empty() {
        return Err(SignalError::EmptyComponents);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for comp in components {
        let omega = comp.band.omega();
        let t_half = comp.band.t_half();
        let shift = t + comp.band.time_lo + t_half;
        let rule = comp.density.rule();
        let integral: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .zip(comp.density.values())
            .map(|((&s, &w), &q)| w * sinc_kernel(omega, shift - s) * q)
            .sum();
        let phase = Complex64::from_polar(1.0, (comp.band.freq_lo + omega) * t);
        acc += comp.alpha * phase * integral;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btsignal::random_bt_signal;
    use crate::numerics::SeededRng;
    use crate::pswf::{build_basis, BandParams};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn single_centered_band_reduces_to_the_real_kernel_image() {
        let basis = Arc::new(build_basis(BandParams::new(PI, 1.0).unwrap(), 8, 128).unwrap());
        let mut rng = SeededRng::new(21);
        let (q, _) = random_bt_signal(&basis, &mut rng, 1.0);
        let band = BandSpec::new(-PI, PI, -1.0, 1.0).unwrap();
        let comp =
            MultibandComponent::new(Complex64::new(1.0, 0.0), band, q.clone()).unwrap();
        for i in 0..101 {
            let t = -3.0 + 6.0 * i as f64 / 100.0;
            let direct = basis.kernel_apply(&q, t).unwrap();
            let combined = synth_multiband(std::slice::from_ref(&comp), t).unwrap();
            assert_abs_diff_eq!(combined.re, direct, epsilon = 1e-10);
            assert_abs_diff_eq!(combined.im, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_weights_give_zero() {
        let basis = Arc::new(build_basis(BandParams::new(PI, 1.0).unwrap(), 4, 64).unwrap());
        let mut rng = SeededRng::new(2);
        let (q, _) = random_bt_signal(&basis, &mut rng, 0.0);
        let band = BandSpec::new(0.0, 2.0 * PI, -1.0, 1.0).unwrap();
        let comp = MultibandComponent::new(Complex64::new(0.0, 0.0), band, q).unwrap();
        let v = synth_multiband(&[comp], 0.7).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn empty_component_list_is_an_error() {
        assert!(matches!(
            synth_multiband(&[], 0.0),
            Err(SignalError::EmptyComponents)
        ));
    }

    #[test]
    fn band_validation_and_overlap() {
        assert!(BandSpec::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(BandSpec::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(BandSpec::new(f64::NAN, 1.0, 0.0, 1.0).is_err());
        let a = BandSpec::new(0.0, PI, -1.0, 1.0).unwrap();
        let b = BandSpec::new(2.0 * PI, 3.0 * PI, -1.0, 1.0).unwrap();
        let c = BandSpec::new(0.5 * PI, 2.5 * PI, -1.0, 1.0).unwrap();
        assert!(!a.overlaps(&b));
        assert!(a.overlaps(&c));
        assert!(c.overlaps(&b));
    }

    #[test]
    fn component_rejects_density_on_the_wrong_window() {
        let basis = Arc::new(build_basis(BandParams::new(PI, 1.0).unwrap(), 4, 64).unwrap());
        let q = KernelDensity::zero(basis.rule().clone()); // lives on [-1, 1]
        let band = BandSpec::new(0.0, PI, 0.0, 4.0).unwrap(); // needs [-2, 2]
        assert!(matches!(
            MultibandComponent::new(Complex64::new(1.0, 0.0), band, q),
            Err(SignalError::RuleMismatch)
        ));
    }
}
