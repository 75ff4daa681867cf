//! Low level numerical kernels shared by the rest of the crate.
//!
//! Three things live here: Gauss-Legendre quadrature rules (the integrals in
//! the kernel operator are all computed through these), a dense symmetric
//! eigensolver (tridiagonalization followed by implicit-shift QL), and a tiny
//! seeded RNG with a fixed, documented algorithm so that experiment outputs
//! are reproducible bit for bit across runs and platforms.
//!
//! Everything is `f64`; the eigenvalue decay that the rest of the crate leans
//! on spans 13 orders of magnitude, which single precision cannot represent.

mod eigen;
mod matrix;
mod quadrature;
mod rng;

pub use eigen::{sym_eig, SymmetricEigenResult};
pub use matrix::Matrix;
pub use quadrature::{gauss_legendre_rule, legendre_p, QuadratureRule};
pub use rng::SeededRng;

use thiserror::Error;

/// Errors from the numerical kernels.
#[derive(Debug, Error)]
pub enum NumericsError {
    /// A quadrature rule with zero nodes was requested.
    #[error("quadrature rule needs at least one node")]
    EmptyRule,

    /// The integration interval is empty, inverted, or not finite.
    #[error("invalid interval: lo = {lo}, hi = {hi} (need finite lo < hi)")]
    InvalidInterval { lo: f64, hi: f64 },

    /// Newton iteration for a Legendre root did not settle. Does not happen
    /// for the orders used in practice; kept as a hard error rather than a
    /// silent bad rule.
    #[error("Newton iteration for Legendre root {index} of order {order} stalled")]
    RootNotConverged { index: usize, order: usize },

    /// The eigensolver was handed a non-square matrix.
    #[error("eigensolver needs a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// The eigensolver was handed a matrix that is not symmetric.
    #[error("matrix asymmetry {max_dev:e} exceeds the 1e-12 per-entry bound")]
    Asymmetric { max_dev: f64 },

    /// The QL iteration hit its sweep cap without isolating an eigenvalue.
    #[error("eigensolver failed to converge within {0} QL sweeps for one eigenvalue")]
    EigenNoConvergence(usize),
}
