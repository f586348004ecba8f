//! Pointwise WENO interface reconstruction and one-sided boundary
//! extrapolation of derivatives.
//!
//! Reconstruction works in the finite-difference sense: the stencil holds
//! point values of a split flux and the result approximates the flux
//! function `h` with `h(x + dx/2) - h(x - dx/2) = dx f_x`, at `x_{j+1/2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::linalg::fornberg_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    Nonlinear,
    Ideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionConfig {
    pub order: usize,
    pub weight_mode: WeightMode,
    pub epsilon: f64,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self::weno5()
    }
}

impl ReconstructionConfig {
    pub fn weno5() -> Self {
        Self { order: 5, weight_mode: WeightMode::Nonlinear, epsilon: 1e-6 }
    }

    pub fn weno7_ideal() -> Self {
        Self { order: 7, weight_mode: WeightMode::Ideal, epsilon: 1e-6 }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.order, self.weight_mode) {
            (5, _) | (7, WeightMode::Ideal) => {}
            (7, WeightMode::Nonlinear) => {
                return Err(SolverError::Unsupported("order-7 reconstruction is only available with ideal weights".into()))
            }
            (o, _) => return Err(SolverError::Unsupported(format!("reconstruction order {o} (expected 5 or 7)"))),
        }
        if !(self.epsilon > 0.0) {
            return Err(SolverError::Config(format!("WENO epsilon must be positive, got {}", self.epsilon)));
        }
        Ok(())
    }

    /// Half-width `r` of the stencil; also the number of ghost points needed.
    #[inline]
    pub fn half_width(&self) -> usize {
        (self.order + 1) / 2
    }

    #[inline]
    pub fn stencil_len(&self) -> usize {
        self.order
    }

    /// CLI spelling: `5` or `7-ideal`.
    pub fn label(&self) -> String {
        match self.weight_mode {
            WeightMode::Nonlinear => format!("{}", self.order),
            WeightMode::Ideal => format!("{}-ideal", self.order),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let cfg = match s.trim() {
            "5" | "weno5" => Self::weno5(),
            "5-ideal" => Self { weight_mode: WeightMode::Ideal, ..Self::weno5() },
            "7-ideal" | "7" | "weno7" => Self::weno7_ideal(),
            other => return Err(SolverError::Config(format!("unknown WENO variant `{other}` (expected 5 or 7-ideal)"))),
        };
        Ok(cfg)
    }
}

const IDEAL5: [f64; 3] = [0.1, 0.6, 0.3];

/// Nonlinear WENO5 weights for the stencil `v_{j-2..j+2}`, left-biased at `x_{j+1/2}`.
pub fn weno5_weights(v: &[f64; 5], epsilon: f64) -> [f64; 3] {
    let b0 = 13.0 / 12.0 * (v[0] - 2.0 * v[1] + v[2]).powi(2) + 0.25 * (v[0] - 4.0 * v[1] + 3.0 * v[2]).powi(2);
    let b1 = 13.0 / 12.0 * (v[1] - 2.0 * v[2] + v[3]).powi(2) + 0.25 * (v[1] - v[3]).powi(2);
    let b2 = 13.0 / 12.0 * (v[2] - 2.0 * v[3] + v[4]).powi(2) + 0.25 * (3.0 * v[2] - 4.0 * v[3] + v[4]).powi(2);
    let a0 = IDEAL5[0] / (epsilon + b0).powi(2);
    let a1 = IDEAL5[1] / (epsilon + b1).powi(2);
    let a2 = IDEAL5[2] / (epsilon + b2).powi(2);
    let s = a0 + a1 + a2;
    [a0 / s, a1 / s, a2 / s]
}

#[inline]
fn weno5_candidates(v: &[f64; 5]) -> [f64; 3] {
    [
        (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0,
        (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0,
        (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0,
    ]
}

#[inline]
fn weno5_left(v: &[f64; 5], mode: WeightMode, epsilon: f64) -> f64 {
    let q = weno5_candidates(v);
    let w = match mode {
        WeightMode::Nonlinear => weno5_weights(v, epsilon),
        WeightMode::Ideal => IDEAL5,
    };
    w[0] * q[0] + w[1] * q[1] + w[2] * q[2]
}

#[inline]
fn weno7_ideal_left(v: &[f64; 7]) -> f64 {
    (-3.0 * v[0] + 25.0 * v[1] - 101.0 * v[2] + 319.0 * v[3] + 214.0 * v[4] - 38.0 * v[5] + 4.0 * v[6]) / 420.0
}

/// Left-biased value at `x_{j+1/2}` from a stencil centered on point `j`.
///
/// The stencil length must equal the configured order. No allocation; this
/// is the form used inside the flux loop.
#[inline]
pub fn reconstruct_left(stencil: &[f64], cfg: &ReconstructionConfig) -> f64 {
    match cfg.order {
        5 => {
            let v: &[f64; 5] = stencil.try_into().expect("WENO5 stencil has 5 entries");
            weno5_left(v, cfg.weight_mode, cfg.epsilon)
        }
        _ => {
            let v: &[f64; 7] = stencil.try_into().expect("WENO7 stencil has 7 entries");
            weno7_ideal_left(v)
        }
    }
}

/// Right-biased value at `x_{j-1/2}`: the mirror image of [`reconstruct_left`].
#[inline]
pub fn reconstruct_right(stencil: &[f64], cfg: &ReconstructionConfig) -> f64 {
    let mut rev = [0.0; 7];
    let n = stencil.len();
    for (i, v) in stencil.iter().enumerate() {
        rev[n - 1 - i] = *v;
    }
    reconstruct_left(&rev[..n], cfg)
}

fn check_stencil(stencil: &[f64], cfg: &ReconstructionConfig) -> Result<()> {
    cfg.validate()?;
    if stencil.len() != cfg.stencil_len() {
        return Err(SolverError::InvalidStencil(format!(
            "order {} needs {} values, got {}",
            cfg.order,
            cfg.stencil_len(),
            stencil.len()
        )));
    }
    Ok(())
}

pub fn weno_reconstruct_left(stencil: &[f64], cfg: &ReconstructionConfig) -> Result<f64> {
    check_stencil(stencil, cfg)?;
    Ok(reconstruct_left(stencil, cfg))
}

pub fn weno_reconstruct_right(stencil: &[f64], cfg: &ReconstructionConfig) -> Result<f64> {
    check_stencil(stencil, cfg)?;
    Ok(reconstruct_right(stencil, cfg))
}

/// How boundary derivatives are extrapolated from interior samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extrapolation {
    Lagrange,
    Weno,
}

impl Extrapolation {
    pub fn label(self) -> &'static str {
        match self {
            Extrapolation::Lagrange => "lagrange",
            Extrapolation::Weno => "weno",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "lagrange" => Ok(Self::Lagrange),
            "weno" => Ok(Self::Weno),
            other => Err(SolverError::Config(format!("unknown extrapolation `{other}` (expected lagrange or weno)"))),
        }
    }
}

/// Scaled node positions `(x_i - x_b)/dx` for equally spaced samples.
fn scaled_nodes(k: usize, x0: f64, x_b: f64, dx: f64) -> Vec<f64> {
    let s0 = (x0 - x_b) / dx;
    (0..k).map(|i| s0 + i as f64).collect()
}

/// Derivatives `d^k p / dx^k (x_b)`, `k = 0..K-1`, of the interpolant through
/// `values[i]` at `x0 + i dx`.
pub fn lagrange_boundary_derivatives(values: &[f64], x0: f64, x_b: f64, dx: f64) -> Vec<f64> {
    let k = values.len();
    if k == 0 {
        return Vec::new();
    }
    let nodes = scaled_nodes(k, x0, x_b, dx);
    let w = fornberg_weights(0.0, &nodes, k - 1);
    (0..k)
        .map(|d| {
            let s: f64 = w[d].iter().zip(values).map(|(wi, v)| wi * v).sum();
            s / dx.powi(d as i32)
        })
        .collect()
}

/// Coefficients of the interpolant through `(nodes[i], values[i])` in the
/// monomial basis of the scaled variable, lowest degree first.
fn monomial_coefficients(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let w = fornberg_weights(0.0, nodes, n - 1);
    let mut fact = 1.0;
    (0..n)
        .map(|d| {
            if d > 0 {
                fact *= d as f64;
            }
            w[d].iter().zip(values).map(|(wi, v)| wi * v).sum::<f64>() / fact
        })
        .collect()
}

/// `sum_{l>=1} int_lo^hi (p^{(l)}(s))^2 ds` for `p(s) = sum_d c_d s^d`.
fn derivative_energy(coeffs: &[f64], lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    let mut cur = coeffs.to_vec();
    for _ in 1..coeffs.len() {
        // differentiate
        cur = cur.iter().enumerate().skip(1).map(|(d, c)| d as f64 * c).collect();
        // square and integrate exactly
        let m = cur.len();
        let mut sq = vec![0.0; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                sq[i + j] += cur[i] * cur[j];
            }
        }
        total += sq
            .iter()
            .enumerate()
            .map(|(d, c)| c * (hi.powi(d as i32 + 1) - lo.powi(d as i32 + 1)) / (d as f64 + 1.0))
            .sum::<f64>();
    }
    total
}

/// Nonlinear weights of the WENO-type extrapolation for sub-stencils
/// `{x_0}, {x_0,x_1}, ..., {x_0..x_{K-1}}`.
///
/// Linear weights are `dx^{K-1-q}` for the narrower stencils with the widest
/// taking the remainder; indicators integrate squared derivatives over the
/// cell just outside `x_0` (in units of dx), with `beta_0 = dx^2`.
pub fn weno_extrapolation_weights(values: &[f64], x0: f64, x_b: f64, dx: f64, epsilon: f64) -> Vec<f64> {
    let k = values.len();
    let nodes = scaled_nodes(k, x0, x_b, dx);
    let mut linear = vec![0.0; k];
    for (q, d) in linear.iter_mut().enumerate().take(k.saturating_sub(1)) {
        *d = dx.powi((k - 1 - q) as i32);
    }
    if k > 0 {
        linear[k - 1] = 1.0 - linear[..k - 1].iter().sum::<f64>();
    }
    let s0 = nodes[0];
    let raw: Vec<f64> = (0..k)
        .map(|q| {
            let beta = if q == 0 {
                dx * dx
            } else {
                let c = monomial_coefficients(&nodes[..=q], &values[..=q]);
                derivative_energy(&c, s0 - 1.0, s0)
            };
            linear[q] / (epsilon + beta).powi(2)
        })
        .collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|a| a / s).collect()
}

/// WENO-type counterpart of [`lagrange_boundary_derivatives`].
pub fn weno_boundary_derivatives(values: &[f64], x0: f64, x_b: f64, dx: f64) -> Vec<f64> {
    let k = values.len();
    if k == 0 {
        return Vec::new();
    }
    let w = weno_extrapolation_weights(values, x0, x_b, dx, 1e-6);
    let mut out = vec![0.0; k];
    for (q, wq) in w.iter().enumerate() {
        let sub = lagrange_boundary_derivatives(&values[..=q], x0, x_b, dx);
        for (d, v) in sub.iter().enumerate() {
            out[d] += wq * v;
        }
    }
    out
}

/// Boundary derivatives of `values`, computed on differences from the
/// first sample so constant data extrapolate exactly.
pub fn boundary_derivatives(kind: Extrapolation, values: &[f64], x0: f64, x_b: f64, dx: f64) -> Vec<f64> {
    let Some(&base) = values.first() else {
        return Vec::new();
    };
    let shifted: Vec<f64> = values.iter().map(|v| v - base).collect();
    let mut d = match kind {
        Extrapolation::Lagrange => lagrange_boundary_derivatives(&shifted, x0, x_b, dx),
        Extrapolation::Weno => weno_boundary_derivatives(&shifted, x0, x_b, dx),
    };
    d[0] += base;
    d
}
