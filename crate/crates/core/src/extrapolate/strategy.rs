//! Name-keyed registry of extrapolation strategies.
//!
//! Callers that take a method name (the CLI, the sweep driver) go through
//! [`by_name`] and hold a `Box<dyn Extrapolator>`; adding a solver means one
//! new unit struct, one trait impl, and one line in the registry.

use super::{
    solve_tikhonov, ExtrapolateError, ExtrapolationResult, MnsProblem, MuSelection,
    ObservationSet,
};
use crate::pswf::PswfBasis;
use std::sync::Arc;

/// A solver that turns observations into an extrapolant.
pub trait Extrapolator: Send + Sync {
    /// Registry key, also used in output file naming.
    fn name(&self) -> &'static str;

    fn solve(
        &self,
        basis: &Arc<PswfBasis>,
        obs: &ObservationSet,
    ) -> Result<ExtrapolationResult, ExtrapolateError>;
}

/// Constrained minimum-norm solve; the method with the epsilon^(1/3) error law.
#[derive(Clone, Copy, Debug)]
pub struct MnsExtrapolator {
    pub solver_tol: f64,
    pub max_iters: usize,
}

impl Default for MnsExtrapolator {
    fn default() -> Self {
        MnsExtrapolator {
            solver_tol: 1e-8,
            max_iters: 200_000,
        }
    }
}

impl Extrapolator for MnsExtrapolator {
    fn name(&self) -> &'static str {
        "mns"
    }

    fn solve(
        &self,
        basis: &Arc<PswfBasis>,
        obs: &ObservationSet,
    ) -> Result<ExtrapolationResult, ExtrapolateError> {
        MnsProblem::new(Arc::clone(basis), obs.clone())?
            .with_solver_tol(self.solver_tol)
            .with_max_iters(self.max_iters)
            .solve()
    }
}

/// Penalized least-squares baseline with Morozov weight selection by default.
#[derive(Clone, Copy, Debug)]
pub struct TikhonovExtrapolator {
    pub selection: MuSelection,
}

impl Default for TikhonovExtrapolator {
    fn default() -> Self {
        TikhonovExtrapolator {
            selection: MuSelection::Discrepancy,
        }
    }
}

impl Extrapolator for TikhonovExtrapolator {
    fn name(&self) -> &'static str {
        "tikhonov"
    }

    fn solve(
        &self,
        basis: &Arc<PswfBasis>,
        obs: &ObservationSet,
    ) -> Result<ExtrapolationResult, ExtrapolateError> {
        solve_tikhonov(basis, obs, self.selection)
    }
}

/// Every registered method name, in presentation order.
pub fn method_names() -> &'static [&'static str] {
    &["mns", "tikhonov"]
}

/// Look a strategy up by its registry key.
pub fn by_name(name: &str) -> Option<Box<dyn Extrapolator>> {
    match name {
        "mns" => Some(Box::new(MnsExtrapolator::default())),
        "tikhonov" => Some(Box::new(TikhonovExtrapolator::default())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btsignal::{add_noise, random_bt_signal};
    use crate::extrapolate::uniform_grid;
    use crate::numerics::SeededRng;
    use crate::pswf::{build_basis, BandParams};
    use std::f64::consts::PI;

    #[test]
    fn registry_knows_every_listed_name_and_nothing_else() {
        for &name in method_names() {
            let solver = by_name(name).expect("listed method must resolve");
            assert_eq!(solver.name(), name);
        }
        assert!(by_name("gradient-descent").is_none());
        assert!(by_name("").is_none());
        assert!(by_name("MNS").is_none(), "lookup is case-sensitive");
    }

    #[test]
    fn every_registered_method_solves_a_small_problem() {
        let basis =
            Arc::new(build_basis(BandParams::new(PI, 1.0).unwrap(), 10, 256).unwrap());
        let mut rng = SeededRng::new(31);
        let (_, f_true) = random_bt_signal(&basis, &mut rng, 0.0);
        let eps = 0.05;
        let clean: Vec<f64> = uniform_grid(1.0, 41)
            .iter()
            .map(|&t| f_true.eval(t))
            .collect();
        let mut noise_rng = SeededRng::new(32);
        let noisy = add_noise(&clean, &mut noise_rng, eps);
        let obs = ObservationSet::new(1.0, noisy, eps).unwrap();

        for &name in method_names() {
            let solver = by_name(name).unwrap();
            let result = solver.solve(&basis, &obs).unwrap();
            assert!(result.converged(), "{name} did not converge");
            // Both methods must track the data to within a few noise widths.
            assert!(
                result.residual_inf() <= 3.0 * eps,
                "{name} residual {} way off the data",
                result.residual_inf()
            );
        }
    }
}
