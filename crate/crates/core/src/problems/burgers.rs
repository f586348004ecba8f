use std::sync::Arc;

use super::{BoundaryCondition, BoundaryData, Problem, Quantity};
use crate::error::{Result, SolverError};
use crate::physics::Burgers;
use crate::reconstruction::Extrapolation;

/// Piecewise solution with a rarefaction-free compression fan; valid for `t < 1`.
pub fn burgers_exact(t: f64, x: f64) -> Result<f64> {
    if !(t < 1.0) {
        return Err(SolverError::OutOfRange(format!("Burgers solution only defined for t < 1, got t = {t}")));
    }
    Ok(if x < t {
        1.0
    } else if x < 2.0 - t {
        (1.0 - x) / (1.0 - t)
    } else {
        -1.0
    })
}

/// `u_t + (u^2/2)_x = 0` on `[-1/2, 3/2]`, conditions on both sides.
pub fn make_burgers() -> Problem<1> {
    let left = BoundaryCondition::new(vec![Quantity::Component(0)], 3, Arc::new(|_t, _s, k| vec![if k == 0 { 1.0 } else { 0.0 }]));
    let right = BoundaryCondition::new(
        vec![Quantity::Component(0)],
        3,
        Arc::new(|t: f64, _s, k| {
            // u(t, 3/2) = -0.5/(1-t) until the shock-free fan edge passes at t = 1/2.
            if t < 0.5 {
                let w = 1.0 / (1.0 - t);
                let v = match k {
                    0 => -0.5 * w,
                    1 => -0.5 * w * w,
                    2 => -w.powi(3),
                    _ => -3.0 * w.powi(4),
                };
                vec![v]
            } else {
                vec![if k == 0 { -1.0 } else { 0.0 }]
            }
        }),
    );
    Problem {
        name: "burgers",
        physics: Arc::new(Burgers),
        domain: (-0.5, 1.5),
        left: Some(left),
        right: Some(right),
        initial: Arc::new(|x| [burgers_exact(0.0, x).expect("t = 0 is valid")]),
        exact: Some(Arc::new(|t, x| Ok([burgers_exact(t, x)?]))),
        extrapolation: Extrapolation::Weno,
        taylor_depth: None,
        default_t_final: 0.4,
    }
}

/// Burgers with inflow `u(t, a) = g(t)` on the left only and smooth initial
/// data; used to study stage-consistency of boundary data.
pub fn make_burgers_with_inflow(
    domain: (f64, f64),
    data: BoundaryData,
    initial: Arc<dyn Fn(f64) -> [f64; 1] + Send + Sync>,
) -> Problem<1> {
    Problem {
        name: "burgers-inflow",
        physics: Arc::new(Burgers),
        domain,
        left: Some(BoundaryCondition::new(vec![Quantity::Component(0)], 3, data)),
        right: None,
        initial,
        exact: None,
        extrapolation: Extrapolation::Lagrange,
        taylor_depth: None,
        default_t_final: 0.1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_branches() {
        assert_eq!(burgers_exact(0.4, 1.0).unwrap(), 0.0);
        assert_eq!(burgers_exact(0.4, -0.5).unwrap(), 1.0);
        assert_eq!(burgers_exact(0.4, 1.7).unwrap(), -1.0);
        assert!(burgers_exact(1.0, 0.0).is_err());
        assert!(burgers_exact(0.99999, 0.0).is_ok());
    }

    #[test]
    fn boundary_data_matches_exact() {
        let p = make_burgers();
        for t in [0.0, 0.2, 0.49, 0.6, 0.99] {
            let ul = p.exact(t, -0.5).unwrap();
            let ur = p.exact(t, 1.5).unwrap();
            assert!(p.left.as_ref().unwrap().residual(&ul, t, 0.0).unwrap()[0].abs() < 1e-12);
            assert!(p.right.as_ref().unwrap().residual(&ur, t, 0.0).unwrap()[0].abs() < 1e-12);
        }
        let bc = p.right.as_ref().unwrap();
        let h = 1e-6;
        for k in 0..3 {
            let fd = (bc.data(0.2 + h, 0.0, k).unwrap()[0] - bc.data(0.2 - h, 0.0, k).unwrap()[0]) / (2.0 * h);
            assert!((fd - bc.data(0.2, 0.0, k + 1).unwrap()[0]).abs() < 1e-5);
        }
    }
}
