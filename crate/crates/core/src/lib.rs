//! Prolate spheroidal wavefunction (PSWF) bases, synthesis of signals that are
//! both bandlimited and time-concentrated, and minimum norm extrapolation of
//! such signals from noisy finite segments.
//!
//! Everything revolves around the sinc-kernel integral operator on `[-T, T]`:
//!
//! ```text
//! (K q)(t) = integral_{-T}^{T} sin(Omega (t - s)) / (pi (t - s)) q(s) ds
//! ```
//!
//! Its eigenfunctions are the PSWFs `phi_k` with eigenvalues
//! `1 > lambda_0 > lambda_1 > ... > 0`. A signal of the form `f = K q` is
//! bandlimited to `[-Omega, Omega]` and determined by a density `q` living on
//! the finite interval, which is what makes stable extrapolation from a noisy
//! segment possible at all.
//!
//! Module map:
//!
//! * [`numerics`]: Gauss-Legendre quadrature, a dense symmetric eigensolver,
//!   and a small deterministic RNG. No external linear algebra.
//! * [`pswf`]: Nystrom discretization of `K`, eigenpairs, evaluation of
//!   `phi_k` anywhere on the real line, CSV caching of built bases.
//! * [`btsignal`]: densities, coefficient expansions, random test signals,
//!   membership diagnostics, multiband synthesis, spectral checks.
//! * [`extrapolate`]: the minimum norm solver (operator splitting), a
//!   Tikhonov baseline, error metrics, and the noise-level sweep harness.

pub mod btsignal;
pub mod extrapolate;
pub mod numerics;
pub mod pswf;
