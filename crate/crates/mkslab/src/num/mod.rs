//! Shared numerical kernels: polynomial roots, adaptive ODE integration,
//! Newton solves, dense complex eigendecomposition, scalar minimization,
//! and banded linear algebra. All operations are pure and reentrant.

mod banded;
mod cubic;
mod eig;
mod minimize;
mod newton;
mod ode;
mod poly;

pub use banded::{BandedLu, BandedMatrix, CyclicPenta};
pub use cubic::solve_cubic_real;
pub use eig::{eig_dense, eigvals};
pub use minimize::{minimize_scalar, MinimizeResult};
pub use newton::{newton_solve, NewtonResult};
pub use ode::{integrate_rk45, rk45_final, rk45_final_complex, Trajectory};
pub use poly::companion_roots;

use crate::{Error, Result};

/// Convergence contract shared by the iterative kernels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_iter: 100,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}
