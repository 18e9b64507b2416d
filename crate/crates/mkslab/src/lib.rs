//! Numerical toolbox for traveling fronts of the modified Kuramoto-Sivashinsky
//! equation p_t = -p_xx - p_xxxx + (p^3)_x.
//!
//! In the co-moving frame z = x + st the front profile satisfies the third-order
//! ODE phi''' = s*phi - phi' + phi^3 + mu, and the crate covers the full pipeline
//! around that equation:
//!
//! - [`profile`]: front/back profiles by shooting plus projective-boundary
//!   collocation, with continuation in mu and the front/back symmetry.
//! - [`essential`]: dispersion curves and Fredholm borders of the linearization
//!   in exponentially weighted spaces, admissible weight windows, and the
//!   critical constants s* and mu*.
//! - [`point`]: eigenvalue confinement bounds, the Evans function for the
//!   weighted linearization (compound-matrix form), and winding-number counts.
//! - [`evolve`]: Crank-Nicolson time integration of perturbed fronts, linear
//!   weighted evolution, and slope-to-height reconstruction.
//! - [`periodic`]: periodized front-back patterns, Floquet-Bloch spectra by
//!   Hill's method, critical spacings, and refinement to exact periodic orbits.
//! - [`num`]: the shared numerical kernels (roots, RK45, Newton, dense complex
//!   eigensolver, scalar minimization, banded LU).
//! - [`io`]: serialization (CSV, binary containers, JSON reports), run
//!   configuration, and deterministic SVG plots.

pub mod error;
pub mod essential;
pub mod evolve;
pub mod num;
pub mod point;
pub mod profile;

pub use error::{Error, Result};
