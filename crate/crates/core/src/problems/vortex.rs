use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::{BoundaryCondition, Quantity};
use crate::linalg::State;
use crate::physics::{Axis, Euler2d, Physics, GAMMA};

/// Primitive vortex variables and their spatial gradients `[d/dx, d/dy]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexPrimitive {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub d_rho: [f64; 2],
    pub d_u: [f64; 2],
    pub d_v: [f64; 2],
    pub d_p: [f64; 2],
}

impl VortexPrimitive {
    pub fn conservative(&self) -> State<4> {
        [self.rho, self.rho * self.u, self.rho * self.v, self.p / (GAMMA - 1.0) + 0.5 * self.rho * (self.u * self.u + self.v * self.v)]
    }

    pub fn conservative_gradient(&self) -> [State<4>; 2] {
        let mut out = [[0.0; 4]; 2];
        let q2 = self.u * self.u + self.v * self.v;
        for (a, g) in out.iter_mut().enumerate() {
            g[0] = self.d_rho[a];
            g[1] = self.d_rho[a] * self.u + self.rho * self.d_u[a];
            g[2] = self.d_rho[a] * self.v + self.rho * self.d_v[a];
            g[3] = self.d_p[a] / (GAMMA - 1.0) + 0.5 * self.d_rho[a] * q2 + self.rho * (self.u * self.d_u[a] + self.v * self.d_v[a]);
        }
        out
    }

    /// `d/dt = -(d/dx + d/dy)` for a vortex advected with unit velocity on both axes.
    fn rate(d: [f64; 2]) -> f64 {
        -(d[0] + d[1])
    }
}

/// Isentropic vortex of strength `eps` centered at `(t, t)`, mean flow `(1, 1, 1)`.
pub fn vortex_primitive(eps: f64, t: f64, x: f64, y: f64) -> VortexPrimitive {
    let (xb, yb) = (x - t, y - t);
    let r2 = xb * xb + yb * yb;
    let e1 = (0.5 * (1.0 - r2)).exp();
    let k = eps / (2.0 * PI);
    let du = -k * e1 * yb;
    let dv = k * e1 * xb;
    let dt = -(GAMMA - 1.0) * eps * eps / (8.0 * GAMMA * PI * PI) * (1.0 - r2).exp();
    let temp = 1.0 + dt;
    let gm1 = GAMMA - 1.0;
    let rho = temp.powf(1.0 / gm1);
    let p = temp.powf(GAMMA / gm1);
    let d_t = [-2.0 * xb * dt, -2.0 * yb * dt];
    let drho_dt = rho / (gm1 * temp);
    let dp_dt = GAMMA * p / (gm1 * temp);
    VortexPrimitive {
        rho,
        u: 1.0 + du,
        v: 1.0 + dv,
        p,
        d_rho: [drho_dt * d_t[0], drho_dt * d_t[1]],
        d_u: [k * xb * yb * e1, -k * (1.0 - yb * yb) * e1],
        d_v: [k * (1.0 - xb * xb) * e1, -k * xb * yb * e1],
        d_p: [dp_dt * d_t[0], dp_dt * d_t[1]],
    }
}

pub type Initial2dFn<const M: usize> = Arc<dyn Fn(f64, f64) -> State<M> + Send + Sync>;
pub type Exact2dFn<const M: usize> = Arc<dyn Fn(f64, f64, f64) -> State<M> + Send + Sync>;
pub type Gradient2dFn<const M: usize> = Arc<dyn Fn(f64, f64, f64) -> [State<M>; 2] + Send + Sync>;

/// Edge order used throughout: left, right, bottom, top.
#[derive(Clone)]
pub struct Problem2d<const M: usize> {
    pub name: &'static str,
    pub physics_x: Arc<dyn Physics<M>>,
    pub physics_y: Arc<dyn Physics<M>>,
    /// Square domain `[a, b]^2`.
    pub domain: (f64, f64),
    pub edges: [Option<BoundaryCondition>; 4],
    pub initial: Initial2dFn<M>,
    pub exact: Exact2dFn<M>,
    /// Exact `[U_x, U_y]`, used for the tangential derivative at `t_n`.
    pub exact_gradient: Gradient2dFn<M>,
    pub default_t_final: f64,
}

impl<const M: usize> fmt::Debug for Problem2d<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem2d").field("name", &self.name).field("domain", &self.domain).field("edges", &self.edges).finish_non_exhaustive()
    }
}

/// Vortex convected through `[-0.5, 1]^2`. Inflow edges (left, bottom)
/// prescribe density and both velocities; outflow edges prescribe density.
pub fn make_euler2d_vortex(eps: f64) -> Problem2d<4> {
    let (a, b) = (-0.5, 1.0);
    let inflow = |normal_x: bool| {
        BoundaryCondition::new(
            vec![Quantity::Component(0), Quantity::Velocity(0), Quantity::Velocity(1)],
            1,
            Arc::new(move |t: f64, s: f64, k: usize| {
                let w = if normal_x { vortex_primitive(eps, t, a, s) } else { vortex_primitive(eps, t, s, a) };
                if k == 0 {
                    vec![w.rho, w.u, w.v]
                } else {
                    vec![VortexPrimitive::rate(w.d_rho), VortexPrimitive::rate(w.d_u), VortexPrimitive::rate(w.d_v)]
                }
            }),
        )
    };
    let outflow = |normal_x: bool| {
        BoundaryCondition::new(
            vec![Quantity::Component(0)],
            1,
            Arc::new(move |t: f64, s: f64, k: usize| {
                let w = if normal_x { vortex_primitive(eps, t, b, s) } else { vortex_primitive(eps, t, s, b) };
                vec![if k == 0 { w.rho } else { VortexPrimitive::rate(w.d_rho) }]
            }),
        )
    };
    Problem2d {
        name: "vortex2d",
        physics_x: Arc::new(Euler2d::new(Axis::X)),
        physics_y: Arc::new(Euler2d::new(Axis::Y)),
        domain: (a, b),
        edges: [Some(inflow(true)), Some(outflow(true)), Some(inflow(false)), Some(outflow(false))],
        initial: Arc::new(move |x, y| vortex_primitive(eps, 0.0, x, y).conservative()),
        exact: Arc::new(move |t, x, y| vortex_primitive(eps, t, x, y).conservative()),
        exact_gradient: Arc::new(move |t, x, y| vortex_primitive(eps, t, x, y).conservative_gradient()),
        default_t_final: 1.0,
    }
}
