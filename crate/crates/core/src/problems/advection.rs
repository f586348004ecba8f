use std::f64::consts::PI;
use std::sync::Arc;

use super::{BoundaryCondition, Problem, Quantity};
use crate::physics::LinearAdvection;
use crate::reconstruction::Extrapolation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvectionVariant {
    /// `g(t) = 0.25 - 0.5 sin(pi (1 + t))`, exact `0.25 + 0.5 sin(pi (x - t))`.
    Smooth,
    /// Inflow jumps from 0.25 to -1 at `t = 1`.
    Step,
}

fn wave(t: f64, x: f64) -> f64 {
    0.25 + 0.5 * (PI * (x - t)).sin()
}

/// `u_t + u_x = 0` on `[-1, 1]` with inflow at `x = -1`; the right side is
/// pure outflow and carries no condition.
pub fn make_linear_advection(variant: AdvectionVariant) -> Problem<1> {
    let (left, exact, name, extrapolation): (BoundaryCondition, super::ExactFn<1>, _, _) = match variant {
        AdvectionVariant::Smooth => {
            let data = Arc::new(|t: f64, _s: f64, k: usize| {
                let th = PI * (1.0 + t);
                let v = match k {
                    0 => 0.25 - 0.5 * th.sin(),
                    1 => -0.5 * PI * th.cos(),
                    2 => 0.5 * PI * PI * th.sin(),
                    _ => 0.5 * PI.powi(3) * th.cos(),
                };
                vec![v]
            });
            (
                BoundaryCondition::new(vec![Quantity::Component(0)], 3, data),
                Arc::new(|t: f64, x: f64| Ok([wave(t, x)])),
                "advect-smooth",
                Extrapolation::Lagrange,
            )
        }
        AdvectionVariant::Step => {
            let data = Arc::new(|t: f64, _s: f64, k: usize| {
                let v = match k {
                    0 if t <= 1.0 => 0.25,
                    0 => -1.0,
                    _ => 0.0,
                };
                vec![v]
            });
            (
                BoundaryCondition::new(vec![Quantity::Component(0)], 3, data),
                Arc::new(|t: f64, x: f64| {
                    let v = if x < t - 2.0 {
                        -1.0
                    } else if x < t - 1.0 {
                        0.25
                    } else {
                        wave(t, x)
                    };
                    Ok([v])
                }),
                "advect-step",
                Extrapolation::Weno,
            )
        }
    };
    Problem {
        name,
        physics: Arc::new(LinearAdvection { speed: 1.0 }),
        domain: (-1.0, 1.0),
        left: Some(left),
        right: None,
        initial: Arc::new(|x| [wave(0.0, x)]),
        exact: Some(exact),
        extrapolation,
        taylor_depth: None,
        default_t_final: if variant == AdvectionVariant::Smooth { 1.0 } else { 1.5 },
    }
}
