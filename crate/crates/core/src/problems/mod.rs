//! Benchmark problems: physics, boundary conditions, initial and exact data.

mod advection;
mod burgers;
mod euler;
mod vortex;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Result, SolverError};
use crate::linalg::State;
use crate::physics::Physics;
use crate::reconstruction::Extrapolation;

pub use advection::{make_linear_advection, AdvectionVariant};
pub use burgers::{burgers_exact, make_burgers, make_burgers_with_inflow};
pub use euler::{make_blast_wave, make_euler_smooth};
pub use vortex::{make_euler2d_vortex, vortex_primitive, Exact2dFn, Gradient2dFn, Initial2dFn, Problem2d, VortexPrimitive};

/// Scalar function of the state constrained by a boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// A conservative component `U[i]`.
    Component(usize),
    /// Velocity along an axis, `U[1 + axis] / U[0]`.
    Velocity(usize),
}

impl Quantity {
    #[inline]
    pub fn value<const M: usize>(self, u: &State<M>) -> f64 {
        match self {
            Quantity::Component(i) => u[i],
            Quantity::Velocity(a) => u[1 + a] / u[0],
        }
    }

    pub fn gradient<const M: usize>(self, u: &State<M>) -> State<M> {
        let mut g = [0.0; M];
        match self {
            Quantity::Component(i) => g[i] = 1.0,
            Quantity::Velocity(a) => {
                g[0] = -u[1 + a] / (u[0] * u[0]);
                g[1 + a] = 1.0 / u[0];
            }
        }
        g
    }
}

/// `(t, tangential coordinate, time-derivative order) -> data values`.
pub type BoundaryData = Arc<dyn Fn(f64, f64, usize) -> Vec<f64> + Send + Sync>;

/// Boundary condition `B(U, t) = phi(U) - g(t) = 0` with one row per
/// prescribed quantity.
#[derive(Clone)]
pub struct BoundaryCondition {
    pub quantities: Vec<Quantity>,
    data: BoundaryData,
    /// Highest time derivative of `g` available analytically.
    pub max_derivative: usize,
}

impl fmt::Debug for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryCondition")
            .field("quantities", &self.quantities)
            .field("max_derivative", &self.max_derivative)
            .finish()
    }
}

impl BoundaryCondition {
    pub fn new(quantities: Vec<Quantity>, max_derivative: usize, data: BoundaryData) -> Self {
        Self { quantities, data, max_derivative }
    }

    /// Number of rows `p`.
    pub fn rows(&self) -> usize {
        self.quantities.len()
    }

    /// k-th time derivative of the data at `(t, s)`.
    pub fn data(&self, t: f64, s: f64, k: usize) -> Result<Vec<f64>> {
        if k > self.max_derivative {
            return Err(SolverError::Unsupported(format!(
                "boundary data provides {} time derivatives, {k} requested",
                self.max_derivative
            )));
        }
        Ok((self.data)(t, s, k))
    }

    pub fn phi<const M: usize>(&self, u: &State<M>) -> Vec<f64> {
        self.quantities.iter().map(|q| q.value(u)).collect()
    }

    /// `B(U, t)` at tangential coordinate `s`.
    pub fn residual<const M: usize>(&self, u: &State<M>, t: f64, s: f64) -> Result<Vec<f64>> {
        let g = self.data(t, s, 0)?;
        Ok(self.phi(u).iter().zip(g).map(|(a, b)| a - b).collect())
    }
}

pub type InitialFn<const M: usize> = Arc<dyn Fn(f64) -> State<M> + Send + Sync>;
pub type ExactFn<const M: usize> = Arc<dyn Fn(f64, f64) -> Result<State<M>> + Send + Sync>;

/// A 1D initial-boundary-value problem.
#[derive(Clone)]
pub struct Problem<const M: usize> {
    pub name: &'static str,
    pub physics: Arc<dyn Physics<M>>,
    pub domain: (f64, f64),
    pub left: Option<BoundaryCondition>,
    pub right: Option<BoundaryCondition>,
    pub initial: InitialFn<M>,
    pub exact: Option<ExactFn<M>>,
    /// Extrapolation used for boundary derivatives unless overridden.
    pub extrapolation: Extrapolation,
    /// Taylor depth fixed by the problem (otherwise taken from the scheme).
    pub taylor_depth: Option<usize>,
    pub default_t_final: f64,
}

impl<const M: usize> fmt::Debug for Problem<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("left", &self.left)
            .field("right", &self.right)
            .finish_non_exhaustive()
    }
}

impl<const M: usize> Problem<M> {
    pub fn exact(&self, t: f64, x: f64) -> Result<State<M>> {
        match &self.exact {
            Some(f) => f(t, x),
            None => Err(SolverError::Unsupported(format!("problem `{}` has no exact solution", self.name))),
        }
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// Problems selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    AdvectSmooth,
    AdvectStep,
    Burgers,
    EulerSmooth,
    Blast,
    Vortex2d,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        ProblemKind::AdvectSmooth,
        ProblemKind::AdvectStep,
        ProblemKind::Burgers,
        ProblemKind::EulerSmooth,
        ProblemKind::Blast,
        ProblemKind::Vortex2d,
    ];

    pub fn cli_name(self) -> &'static str {
        match self {
            ProblemKind::AdvectSmooth => "advect-smooth",
            ProblemKind::AdvectStep => "advect-step",
            ProblemKind::Burgers => "burgers",
            ProblemKind::EulerSmooth => "euler-smooth",
            ProblemKind::Blast => "blast",
            ProblemKind::Vortex2d => "vortex2d",
        }
    }

    /// `(a, b)`; the 2D problem uses the same interval on both axes.
    pub fn domain(self) -> (f64, f64) {
        match self {
            ProblemKind::AdvectSmooth | ProblemKind::AdvectStep => (-1.0, 1.0),
            ProblemKind::Burgers => (-0.5, 1.5),
            ProblemKind::EulerSmooth => (-std::f64::consts::PI, std::f64::consts::PI),
            ProblemKind::Blast => (0.0, 1.0),
            ProblemKind::Vortex2d => (-0.5, 1.0),
        }
    }

    pub fn default_t_final(self) -> f64 {
        match self {
            ProblemKind::AdvectSmooth | ProblemKind::Vortex2d => 1.0,
            ProblemKind::AdvectStep => 1.5,
            ProblemKind::Burgers => 0.4,
            ProblemKind::EulerSmooth => 2.0,
            ProblemKind::Blast => 0.038,
        }
    }

    pub fn components(self) -> usize {
        match self {
            ProblemKind::AdvectSmooth | ProblemKind::AdvectStep | ProblemKind::Burgers => 1,
            ProblemKind::EulerSmooth | ProblemKind::Blast => 3,
            ProblemKind::Vortex2d => 4,
        }
    }

    /// Point count giving spacing closest to `dx`.
    pub fn points_for_dx(self, dx: f64) -> usize {
        let (a, b) = self.domain();
        ((b - a) / dx).round() as usize
    }
}

impl FromStr for ProblemKind {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|p| p.cli_name() == s.trim())
            .ok_or_else(|| SolverError::Config(format!("unknown problem `{s}`")))
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocity_quantity_gradient() {
        let u = [2.0, 3.0, 4.0];
        assert_eq!(Quantity::Velocity(0).value(&u), 1.5);
        let g = Quantity::Velocity(0).gradient(&u);
        assert_eq!(g, [-0.75, 0.5, 0.0]);
        assert_eq!(Quantity::Component(2).gradient(&u), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn names_round_trip() {
        for p in ProblemKind::ALL {
            assert_eq!(p.cli_name().parse::<ProblemKind>().unwrap(), p);
        }
        assert!("sod".parse::<ProblemKind>().is_err());
        assert_eq!(ProblemKind::EulerSmooth.points_for_dx(std::f64::consts::PI / 20.0), 40);
        assert_eq!(ProblemKind::Vortex2d.points_for_dx(1.5 / 80.0), 80);
    }
}
