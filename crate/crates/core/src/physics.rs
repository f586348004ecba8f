//! Flux functions with their derivatives and characteristic decompositions.

use crate::error::{Result, SolverError};
use crate::linalg::{Matrix, State};

pub const GAMMA: f64 = 1.4;

/// Eigenvalues with matching left (rows) and right (columns) eigenvectors of
/// the flux Jacobian, `left * right = I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<const M: usize> {
    pub values: State<M>,
    pub left: Matrix<M>,
    pub right: Matrix<M>,
}

impl<const M: usize> Eigensystem<M> {
    pub fn left_row(&self, m: usize) -> &State<M> {
        &self.left[m]
    }

    pub fn project(&self, u: &State<M>) -> State<M> {
        crate::linalg::mat_vec(&self.left, u)
    }

    pub fn reconstruct(&self, v: &State<M>) -> State<M> {
        crate::linalg::mat_vec(&self.right, v)
    }
}

/// A one-dimensional flux `F(U)` with Jacobian, Hessian and eigensystem.
pub trait Physics<const M: usize>: Send + Sync {
    fn flux(&self, u: &State<M>) -> State<M>;

    fn jacobian(&self, u: &State<M>) -> Matrix<M>;

    /// Bilinear second derivative `F_UU(u)[v, w]`.
    fn hessian(&self, u: &State<M>, v: &State<M>, w: &State<M>) -> State<M>;

    fn eigensystem(&self, u: &State<M>) -> Result<Eigensystem<M>>;

    fn max_speed(&self, u: &State<M>) -> Result<f64> {
        Ok(self.eigensystem(u)?.values.iter().fold(0.0_f64, |m, l| m.max(l.abs())))
    }

    fn hessian_action(&self, u: &State<M>, v: &State<M>) -> State<M> {
        self.hessian(u, v, v)
    }
}

fn non_hyperbolic(reason: impl Into<String>) -> SolverError {
    SolverError::NonHyperbolic { x: f64::NAN, reason: reason.into() }
}

/// Attaches a location to a hyperbolicity failure.
pub fn at_location(err: SolverError, x: f64) -> SolverError {
    match err {
        SolverError::NonHyperbolic { reason, .. } => SolverError::NonHyperbolic { x, reason },
        other => other,
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LinearAdvection {
    pub speed: f64,
}

impl Physics<1> for LinearAdvection {
    fn flux(&self, u: &State<1>) -> State<1> {
        [self.speed * u[0]]
    }
    fn jacobian(&self, _u: &State<1>) -> Matrix<1> {
        [[self.speed]]
    }
    fn hessian(&self, _u: &State<1>, _v: &State<1>, _w: &State<1>) -> State<1> {
        [0.0]
    }
    fn eigensystem(&self, _u: &State<1>) -> Result<Eigensystem<1>> {
        Ok(Eigensystem { values: [self.speed], left: [[1.0]], right: [[1.0]] })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl Physics<1> for Burgers {
    fn flux(&self, u: &State<1>) -> State<1> {
        [0.5 * u[0] * u[0]]
    }
    fn jacobian(&self, u: &State<1>) -> Matrix<1> {
        [[u[0]]]
    }
    fn hessian(&self, _u: &State<1>, v: &State<1>, w: &State<1>) -> State<1> {
        [v[0] * w[0]]
    }
    fn eigensystem(&self, u: &State<1>) -> Result<Eigensystem<1>> {
        if !u[0].is_finite() {
            return Err(non_hyperbolic("non-finite state"));
        }
        Ok(Eigensystem { values: [u[0]], left: [[1.0]], right: [[1.0]] })
    }
}

/// Ideal-gas Euler equations in conservative variables `(rho, rho u, E)`.
#[derive(Debug, Clone, Copy)]
pub struct Euler1d {
    pub gamma: f64,
}

impl Default for Euler1d {
    fn default() -> Self {
        Self { gamma: GAMMA }
    }
}

impl Euler1d {
    pub fn pressure(&self, u: &State<3>) -> f64 {
        (self.gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
    }

    pub fn from_primitive(&self, rho: f64, vel: f64, p: f64) -> State<3> {
        [rho, rho * vel, p / (self.gamma - 1.0) + 0.5 * rho * vel * vel]
    }

    pub fn to_primitive(&self, u: &State<3>) -> (f64, f64, f64) {
        (u[0], u[1] / u[0], self.pressure(u))
    }

    fn sound_speed(&self, u: &State<3>) -> Result<f64> {
        let rho = u[0];
        let p = self.pressure(u);
        if !(rho > 0.0) || !(p > 0.0) || !rho.is_finite() || !p.is_finite() {
            return Err(non_hyperbolic(format!("rho = {rho}, p = {p}")));
        }
        Ok((self.gamma * p / rho).sqrt())
    }
}

impl Physics<3> for Euler1d {
    fn flux(&self, u: &State<3>) -> State<3> {
        let vel = u[1] / u[0];
        let p = self.pressure(u);
        [u[1], u[1] * vel + p, (u[2] + p) * vel]
    }

    fn jacobian(&self, u: &State<3>) -> Matrix<3> {
        let g = self.gamma;
        let vel = u[1] / u[0];
        let h = (u[2] + self.pressure(u)) / u[0];
        [
            [0.0, 1.0, 0.0],
            [0.5 * (g - 3.0) * vel * vel, (3.0 - g) * vel, g - 1.0],
            [vel * (0.5 * (g - 1.0) * vel * vel - h), h - (g - 1.0) * vel * vel, g * vel],
        ]
    }

    fn hessian(&self, u: &State<3>, v: &State<3>, w: &State<3>) -> State<3> {
        let g = self.gamma;
        let c2 = 0.5 * (3.0 - g);
        let c3 = 0.5 * (g - 1.0);
        let (r, m, e) = (u[0], u[1], u[2]);
        let r2 = r * r;
        let r3 = r2 * r;
        let r4 = r3 * r;
        let h2 = [[2.0 * c2 * m * m / r3, -2.0 * c2 * m / r2, 0.0], [-2.0 * c2 * m / r2, 2.0 * c2 / r, 0.0], [0.0; 3]];
        let rr = 2.0 * g * e * m / r3 - 6.0 * c3 * m * m * m / r4;
        let rm = -g * e / r2 + 6.0 * c3 * m * m / r3;
        let re = -g * m / r2;
        let mm = -6.0 * c3 * m / r2;
        let me = g / r;
        let h3 = [[rr, rm, re], [rm, mm, me], [re, me, 0.0]];
        [0.0, bilinear(&h2, v, w), bilinear(&h3, v, w)]
    }

    fn eigensystem(&self, u: &State<3>) -> Result<Eigensystem<3>> {
        let c = self.sound_speed(u)?;
        let vel = u[1] / u[0];
        let h = (u[2] + self.pressure(u)) / u[0];
        let b1 = (self.gamma - 1.0) / (c * c);
        let b2 = 0.5 * b1 * vel * vel;
        let right = [[1.0, 1.0, 1.0], [vel - c, vel, vel + c], [h - vel * c, 0.5 * vel * vel, h + vel * c]];
        let left = [
            [0.5 * (b2 + vel / c), -0.5 * (b1 * vel + 1.0 / c), 0.5 * b1],
            [1.0 - b2, b1 * vel, -b1],
            [0.5 * (b2 - vel / c), -0.5 * (b1 * vel - 1.0 / c), 0.5 * b1],
        ];
        Ok(Eigensystem { values: [vel - c, vel, vel + c], left, right })
    }

    fn max_speed(&self, u: &State<3>) -> Result<f64> {
        Ok((u[1] / u[0]).abs() + self.sound_speed(u)?)
    }
}

#[inline]
fn bilinear<const M: usize>(h: &Matrix<M>, v: &State<M>, w: &State<M>) -> f64 {
    let mut acc = 0.0;
    for a in 0..M {
        for b in 0..M {
            acc += h[a][b] * v[a] * w[b];
        }
    }
    acc
}

/// Direction of a 2D Euler flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// 2D Euler flux along one axis, state `(rho, rho u, rho v, E)`.
///
/// The y-flux is the x-flux conjugated by the momentum swap `P`:
/// `G(U) = P F(P U)`.
#[derive(Debug, Clone, Copy)]
pub struct Euler2d {
    pub gamma: f64,
    pub axis: Axis,
}

impl Euler2d {
    pub fn new(axis: Axis) -> Self {
        Self { gamma: GAMMA, axis }
    }

    pub fn pressure(&self, u: &State<4>) -> f64 {
        (self.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
    }

    pub fn from_primitive(&self, rho: f64, vx: f64, vy: f64, p: f64) -> State<4> {
        [rho, rho * vx, rho * vy, p / (self.gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy)]
    }

    #[inline]
    fn permute(&self, u: &State<4>) -> State<4> {
        match self.axis {
            Axis::X => *u,
            Axis::Y => [u[0], u[2], u[1], u[3]],
        }
    }

    fn permute_matrix(&self, a: &Matrix<4>) -> Matrix<4> {
        match self.axis {
            Axis::X => *a,
            Axis::Y => {
                let p = [0usize, 2, 1, 3];
                let mut out = [[0.0; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        out[i][j] = a[p[i]][p[j]];
                    }
                }
                out
            }
        }
    }

    fn sound_speed(&self, u: &State<4>) -> Result<f64> {
        let rho = u[0];
        let p = self.pressure(u);
        if !(rho > 0.0) || !(p > 0.0) || !rho.is_finite() || !p.is_finite() {
            return Err(non_hyperbolic(format!("rho = {rho}, p = {p}")));
        }
        Ok((self.gamma * p / rho).sqrt())
    }

    fn flux_x(&self, u: &State<4>) -> State<4> {
        let vx = u[1] / u[0];
        let p = self.pressure(u);
        [u[1], u[1] * vx + p, u[2] * vx, (u[3] + p) * vx]
    }

    fn jacobian_x(&self, u: &State<4>) -> Matrix<4> {
        let g = self.gamma;
        let (vx, vy) = (u[1] / u[0], u[2] / u[0]);
        let q2 = vx * vx + vy * vy;
        let h = (u[3] + self.pressure(u)) / u[0];
        [
            [0.0, 1.0, 0.0, 0.0],
            [0.5 * (g - 1.0) * q2 - vx * vx, (3.0 - g) * vx, -(g - 1.0) * vy, g - 1.0],
            [-vx * vy, vy, vx, 0.0],
            [vx * (0.5 * (g - 1.0) * q2 - h), h - (g - 1.0) * vx * vx, -(g - 1.0) * vx * vy, g * vx],
        ]
    }

    fn hessian_x(&self, u: &State<4>, v: &State<4>, w: &State<4>) -> State<4> {
        let g = self.gamma;
        let c2 = 0.5 * (3.0 - g);
        let c3 = 0.5 * (g - 1.0);
        let (r, m, n, e) = (u[0], u[1], u[2], u[3]);
        let r2 = r * r;
        let r3 = r2 * r;
        let r4 = r3 * r;
        let h2 = [
            [2.0 * c2 * m * m / r3 - 2.0 * c3 * n * n / r3, -2.0 * c2 * m / r2, 2.0 * c3 * n / r2, 0.0],
            [-2.0 * c2 * m / r2, 2.0 * c2 / r, 0.0, 0.0],
            [2.0 * c3 * n / r2, 0.0, -2.0 * c3 / r, 0.0],
            [0.0; 4],
        ];
        let h3 = [
            [2.0 * m * n / r3, -n / r2, -m / r2, 0.0],
            [-n / r2, 0.0, 1.0 / r, 0.0],
            [-m / r2, 1.0 / r, 0.0, 0.0],
            [0.0; 4],
        ];
        let k = m * m * m + m * n * n;
        let (km, kn) = (3.0 * m * m + n * n, 2.0 * m * n);
        let (kmm, kmn, knn) = (6.0 * m, 2.0 * n, 2.0 * m);
        let rr = 2.0 * g * e * m / r3 - 6.0 * c3 * k / r4;
        let rm = -g * e / r2 + 2.0 * c3 * km / r3;
        let rn = 2.0 * c3 * kn / r3;
        let re = -g * m / r2;
        let h4 = [
            [rr, rm, rn, re],
            [rm, -c3 * kmm / r2, -c3 * kmn / r2, g / r],
            [rn, -c3 * kmn / r2, -c3 * knn / r2, 0.0],
            [re, g / r, 0.0, 0.0],
        ];
        [0.0, bilinear(&h2, v, w), bilinear(&h3, v, w), bilinear(&h4, v, w)]
    }

    fn eigensystem_x(&self, u: &State<4>) -> Result<Eigensystem<4>> {
        let c = self.sound_speed(u)?;
        let (vx, vy) = (u[1] / u[0], u[2] / u[0]);
        let q2 = vx * vx + vy * vy;
        let h = (u[3] + self.pressure(u)) / u[0];
        let b1 = (self.gamma - 1.0) / (c * c);
        let b2 = 0.5 * b1 * q2;
        let right = [
            [1.0, 1.0, 0.0, 1.0],
            [vx - c, vx, 0.0, vx + c],
            [vy, vy, 1.0, vy],
            [h - vx * c, 0.5 * q2, vy, h + vx * c],
        ];
        let left = [
            [0.5 * (b2 + vx / c), -0.5 * (b1 * vx + 1.0 / c), -0.5 * b1 * vy, 0.5 * b1],
            [1.0 - b2, b1 * vx, b1 * vy, -b1],
            [-vy, 0.0, 1.0, 0.0],
            [0.5 * (b2 - vx / c), -0.5 * (b1 * vx - 1.0 / c), -0.5 * b1 * vy, 0.5 * b1],
        ];
        Ok(Eigensystem { values: [vx - c, vx, vx, vx + c], left, right })
    }
}

impl Physics<4> for Euler2d {
    fn flux(&self, u: &State<4>) -> State<4> {
        self.permute(&self.flux_x(&self.permute(u)))
    }

    fn jacobian(&self, u: &State<4>) -> Matrix<4> {
        self.permute_matrix(&self.jacobian_x(&self.permute(u)))
    }

    fn hessian(&self, u: &State<4>, v: &State<4>, w: &State<4>) -> State<4> {
        self.permute(&self.hessian_x(&self.permute(u), &self.permute(v), &self.permute(w)))
    }

    fn eigensystem(&self, u: &State<4>) -> Result<Eigensystem<4>> {
        let es = self.eigensystem_x(&self.permute(u))?;
        Ok(Eigensystem { values: es.values, left: self.permute_matrix(&es.left), right: self.permute_matrix(&es.right) })
    }

    fn max_speed(&self, u: &State<4>) -> Result<f64> {
        let vn = match self.axis {
            Axis::X => u[1] / u[0],
            Axis::Y => u[2] / u[0],
        };
        Ok(vn.abs() + self.sound_speed(u)?)
    }
}

/// The same physics seen in the mirrored coordinate `xi = a + b - x`:
/// the flux changes sign, eigenvectors are shared.
pub struct Reflected<'a, const M: usize>(pub &'a dyn Physics<M>);

impl<const M: usize> Physics<M> for Reflected<'_, M> {
    fn flux(&self, u: &State<M>) -> State<M> {
        self.0.flux(u).map(|v| -v)
    }

    fn jacobian(&self, u: &State<M>) -> Matrix<M> {
        self.0.jacobian(u).map(|row| row.map(|v| -v))
    }

    fn hessian(&self, u: &State<M>, v: &State<M>, w: &State<M>) -> State<M> {
        self.0.hessian(u, v, w).map(|x| -x)
    }

    fn eigensystem(&self, u: &State<M>) -> Result<Eigensystem<M>> {
        let mut es = self.0.eigensystem(u)?;
        es.values = es.values.map(|v| -v);
        Ok(es)
    }

    fn max_speed(&self, u: &State<M>) -> Result<f64> {
        self.0.max_speed(u)
    }
}
