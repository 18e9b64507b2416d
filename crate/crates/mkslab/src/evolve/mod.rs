//! Time evolution of the model equation and its weighted linearization.
//!
//! The nonlinear solver advances p_t = s p_z - p_zz - p_zzzz + (p^3)_z by
//! Crank-Nicolson with a banded Newton solve per step, on either a
//! periodic grid or a truncated line whose tails are pinned to the rest
//! states. On top of it sit the packet experiment, which perturbs a front
//! and tracks how the disturbance convects away in weighted and unweighted
//! norms, and the linear weighted evolution used to measure the decay rate
//! toward the shifted-front direction. A small utility converts slope
//! fields back to the physical height description.

mod linear;
mod nonlinear;
mod packet;
mod slope;

pub use linear::{
    linear_weighted_evolve, weighted_operator, LinearDecayReport, LinearInit, LinearOptions,
};
pub use nonlinear::{
    discrete_front, evolve, Boundary, EvolutionState, EvolveOptions, EvolveRun, StepDiag,
};
pub use packet::{
    perturbation_experiment, PacketOptions, PacketRecord, PacketReport, PerturbationShape,
    PerturbationSpec,
};
pub use slope::{gradient_to_slope, slope_to_gradient, slope_to_height};
