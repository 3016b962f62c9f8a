//! One-dimensional finite-volume solvers for initial-boundary value problems
//! of hyperbolic systems whose vanishing-viscosity limit depends on the
//! viscosity mechanism.
//!
//! The crate provides
//! - grids, cell-average fields and ghost-cell boundary handling ([`grid`]),
//! - the [`HyperbolicModel`] abstraction with a generic constant-coefficient
//!   [`linear::LinearModel`], the linearized shallow water system ([`swlin`])
//!   and the Euler equations ([`euler`]),
//! - exact boundary Riemann solutions for linear systems ([`linear_exact`]),
//! - Roe, entropy-conservative, CND and second-order CND2 fluxes ([`schemes`]),
//! - SSP-RK2 time stepping ([`timeint`]) and resolved viscous reference
//!   solvers ([`viscous`]),
//! - entropy, conservation and error diagnostics ([`diagnostics`]).

pub mod diagnostics;
pub mod error;
pub mod euler;
pub mod grid;
pub mod linalg;
pub mod linear;
pub mod linear_exact;
pub mod model;
pub mod schemes;
pub mod swlin;
pub mod timeint;
pub mod viscous;

pub use error::{Error, Result};
pub use grid::{apply_boundary, init_field, make_grid, max_wave_speed, BoundaryCondition, Grid, StateField};
pub use model::{Eigensystem, HyperbolicModel, Matrix, State};
