//! Numerical toolkit for helical vortex solutions of a coupled
//! Ginzburg-Landau system.
//!
//! The crate builds, at desk scale, the constructive machinery behind
//! multi-helix vortex configurations of the two-component Ginzburg-Landau
//! system: the radial vortex-profile solver, the screw-symmetric reduction to
//! two dimensions, multi-vortex product fields and their residual operators,
//! weighted error norms with angular Fourier splitting, the non-degeneracy
//! check of the linearized operator, the renormalized filament energy with
//! its equilibrium polygon radii, and the one-dimensional reduction that
//! pins the vortex distance.
//!
//! See the `book/` directory for a guided tour; chapter snippets double as
//! doc-tests (`cargo test --doc`).

pub mod ansatz;
pub mod energy;
pub mod error;
pub mod field;
pub mod fourier;
pub mod helix;
pub mod interp;
pub mod kernel;
mod linalg;
pub mod norms;
pub mod params;
pub mod profile;
pub mod reduction;
pub mod residual;

pub mod cli;
pub mod config;

pub mod book;

pub use error::{Error, Result};
pub use params::{Component, GLParams};
