use std::sync::Arc;

use super::{BoundaryCondition, Problem, Quantity};
use crate::physics::Euler1d;
use crate::reconstruction::Extrapolation;

/// Smooth density wave `rho = 1 + 0.2 sin(x - t)`, `u = 1`, `p = 2` on
/// `[-pi, pi]`. Density and velocity are given on the left, density on the right.
pub fn make_euler_smooth() -> Problem<3> {
    let e = Euler1d::default();
    let density = |t: f64, k: usize| match k {
        0 => 1.0 + 0.2 * t.sin(),
        1 => 0.2 * t.cos(),
        2 => -0.2 * t.sin(),
        _ => -0.2 * t.cos(),
    };
    let left = BoundaryCondition::new(
        vec![Quantity::Component(0), Quantity::Velocity(0)],
        3,
        Arc::new(move |t, _s, k| vec![density(t, k), if k == 0 { 1.0 } else { 0.0 }]),
    );
    // sin(pi - t) = sin(t), so the right data coincide with the left density.
    let right = BoundaryCondition::new(vec![Quantity::Component(0)], 3, Arc::new(move |t, _s, k| vec![density(t, k)]));
    Problem {
        name: "euler-smooth",
        physics: Arc::new(e),
        domain: (-std::f64::consts::PI, std::f64::consts::PI),
        left: Some(left),
        right: Some(right),
        initial: Arc::new(move |x| e.from_primitive(1.0 + 0.2 * x.sin(), 1.0, 2.0)),
        exact: Some(Arc::new(move |t, x| Ok(e.from_primitive(1.0 + 0.2 * (x - t).sin(), 1.0, 2.0)))),
        extrapolation: Extrapolation::Lagrange,
        taylor_depth: None,
        default_t_final: 2.0,
    }
}

/// Interacting blast waves between reflecting walls on `[0, 1]`.
pub fn make_blast_wave() -> Problem<3> {
    let e = Euler1d::default();
    let wall = || BoundaryCondition::new(vec![Quantity::Velocity(0)], 3, Arc::new(|_t, _s, _k| vec![0.0]));
    Problem {
        name: "blast",
        physics: Arc::new(e),
        domain: (0.0, 1.0),
        left: Some(wall()),
        right: Some(wall()),
        initial: Arc::new(move |x| {
            let p = if x < 0.1 {
                1000.0
            } else if x < 0.9 {
                0.01
            } else {
                100.0
            };
            e.from_primitive(1.0, 0.0, p)
        }),
        exact: None,
        extrapolation: Extrapolation::Weno,
        taylor_depth: Some(3),
        default_t_final: 0.038,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_boundary_rows_and_exact() {
        let p = make_euler_smooth();
        assert_eq!(p.left.as_ref().unwrap().rows(), 2);
        assert_eq!(p.right.as_ref().unwrap().rows(), 1);
        let (a, b) = p.domain;
        for t in [0.0, 0.7, 2.0] {
            let ul = p.exact(t, a).unwrap();
            let ur = p.exact(t, b).unwrap();
            assert!(p.left.as_ref().unwrap().residual(&ul, t, 0.0).unwrap().iter().all(|r| r.abs() < 1e-12));
            assert!(p.right.as_ref().unwrap().residual(&ur, t, 0.0).unwrap()[0].abs() < 1e-12);
            // one negative and two positive speeds at both ends
            for u in [ul, ur] {
                let l = p.physics.eigensystem(&u).unwrap().values;
                assert!(l[0] < 0.0 && l[1] > 0.0 && l[2] > 0.0);
            }
        }
        let bc = p.left.as_ref().unwrap();
        let h = 1e-6;
        for k in 0..3 {
            let fd = (bc.data(0.3 + h, 0.0, k).unwrap()[0] - bc.data(0.3 - h, 0.0, k).unwrap()[0]) / (2.0 * h);
            assert!((fd - bc.data(0.3, 0.0, k + 1).unwrap()[0]).abs() < 1e-6, "k = {k}");
        }
    }

    #[test]
    fn blast_initial_pressures() {
        let p = make_blast_wave();
        let e = Euler1d::default();
        assert_eq!(e.pressure(&(p.initial)(0.05)), 1000.0);
        assert!((e.pressure(&(p.initial)(0.5)) - 0.01).abs() < 1e-15);
        assert_eq!(e.pressure(&(p.initial)(0.95)), 100.0);
        let wall = p.left.as_ref().unwrap();
        assert_eq!(wall.residual(&[1.0, 0.0, 2.0], 0.0, 0.0).unwrap(), vec![0.0]);
        assert_eq!(p.taylor_depth, Some(3));
    }
}
