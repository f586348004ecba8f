//! Method-of-lines WENO finite-difference solver for hyperbolic conservation
//! laws with inverse Lax-Wendroff boundary treatment that stays consistent
//! across Runge-Kutta stages.
//!
//! The crate is organized bottom-up: [`tableau`] holds Shu-Osher Runge-Kutta
//! coefficients, [`mesh`] and [`reconstruction`] provide grids and WENO
//! stencils, [`flux`] assembles the upwind and downwind operators,
//! [`boundary`] builds ghost values, [`integrator`] and [`solver2d`] advance
//! solutions in time and [`harness`] runs convergence and stability studies.

pub mod boundary;
pub mod error;
pub mod exec;
pub mod flux;
pub mod harness;
pub mod integrator;
pub mod linalg;
pub mod mesh;
pub mod physics;
pub mod problems;
pub mod reconstruction;
pub mod solver2d;
pub mod tableau;

pub use error::{Result, SolverError};
