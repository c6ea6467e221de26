//! Numerical kit for time-fractional advection-reaction-diffusion (FADR)
//! problems in one and two space dimensions.
//!
//! The building blocks:
//!
//! * [`ml_special`] — one-parameter Mittag-Leffler function and gamma helpers,
//! * [`caputo`] — L1 quadrature weights for the Caputo derivative, solution
//!   history storage, and the step-doubling time-step controller,
//! * [`grid`] — structured 2D grids, upwind/central spatial operators and
//!   boundary-condition application,
//! * [`linsolve`] — matrix-free Gauss-Seidel for the constant-coefficient
//!   implicit systems produced by the stepper,
//! * [`theta_fadr`] — the θ-family IMEX stepper (explicit advection/reaction,
//!   θ-blended diffusion, L1 memory) plus the 2D fractional-diffusion
//!   validation cases,
//! * [`dispersion`] — von Neumann amplification-factor roots, phase-speed
//!   error and group-velocity diagnostics for the 1D linear scheme,
//! * [`channel`] — the coupled vorticity–streamfunction–conformation solver
//!   for subdiffusive viscoelastic channel flow.

pub mod caputo;
pub mod channel;
pub mod dispersion;
mod error;
pub mod grid;
pub mod linsolve;
pub mod ml_special;
pub mod theta_fadr;

pub use error::{Error, Result};
