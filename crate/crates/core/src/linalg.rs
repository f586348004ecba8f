//! Fixed-size dense helpers for the per-point M-component states.
//!
//! States are plain `[f64; M]` arrays and matrices are row-major
//! `[[f64; M]; M]`, which keeps the interface-flux loop free of heap traffic.

use nalgebra::{DMatrix, DVector};

pub type State<const M: usize> = [f64; M];
pub type Matrix<const M: usize> = [[f64; M]; M];

#[inline]
pub fn zero<const M: usize>() -> State<M> {
    [0.0; M]
}

pub fn identity<const M: usize>() -> Matrix<M> {
    let mut m = [[0.0; M]; M];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

#[inline]
pub fn mat_vec<const M: usize>(a: &Matrix<M>, v: &State<M>) -> State<M> {
    let mut out = [0.0; M];
    for i in 0..M {
        let mut acc = 0.0;
        for k in 0..M {
            acc += a[i][k] * v[k];
        }
        out[i] = acc;
    }
    out
}

#[inline]
pub fn dot<const M: usize>(a: &State<M>, b: &State<M>) -> f64 {
    let mut acc = 0.0;
    for k in 0..M {
        acc += a[k] * b[k];
    }
    acc
}

pub fn mat_mul<const M: usize>(a: &Matrix<M>, b: &Matrix<M>) -> Matrix<M> {
    let mut out = [[0.0; M]; M];
    for i in 0..M {
        for j in 0..M {
            let mut acc = 0.0;
            for k in 0..M {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

#[inline]
pub fn add<const M: usize>(a: &State<M>, b: &State<M>) -> State<M> {
    let mut out = *a;
    for k in 0..M {
        out[k] += b[k];
    }
    out
}

#[inline]
pub fn sub<const M: usize>(a: &State<M>, b: &State<M>) -> State<M> {
    let mut out = *a;
    for k in 0..M {
        out[k] -= b[k];
    }
    out
}

#[inline]
pub fn scale<const M: usize>(s: f64, a: &State<M>) -> State<M> {
    let mut out = *a;
    for v in out.iter_mut() {
        *v *= s;
    }
    out
}

/// `y += s * x`
#[inline]
pub fn axpy<const M: usize>(y: &mut State<M>, s: f64, x: &State<M>) {
    for k in 0..M {
        y[k] += s * x[k];
    }
}

pub fn max_abs<const M: usize>(a: &State<M>) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn max_abs_matrix<const M: usize>(a: &Matrix<M>) -> f64 {
    a.iter().flat_map(|r| r.iter()).fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Solves `a x = b` by LU with partial pivoting; `None` when singular.
pub fn solve<const M: usize>(a: &Matrix<M>, b: &State<M>) -> Option<State<M>> {
    let mat = DMatrix::from_fn(M, M, |i, j| a[i][j]);
    let rhs = DVector::from_column_slice(b);
    let lu = mat.lu();
    // nalgebra only reports exact zero pivots; reject numerically singular systems too.
    let scale = max_abs_matrix(a).max(f64::MIN_POSITIVE);
    let u = lu.u();
    if (0..M).any(|i| u[(i, i)].abs() <= 1e-13 * scale) {
        return None;
    }
    let x = lu.solve(&rhs)?;
    let mut out = [0.0; M];
    out.copy_from_slice(x.as_slice());
    if out.iter().all(|v| v.is_finite()) {
        Some(out)
    } else {
        None
    }
}

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
///
/// Returns `w[k][i]` such that `sum_i w[k][i] f(nodes[i])` approximates the
/// k-th derivative of `f` at `z`, for `k = 0..=max_derivative`. The weights
/// are exact for the interpolating polynomial through all nodes.
pub fn fornberg_weights(z: f64, nodes: &[f64], max_derivative: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let m = max_derivative;
    let mut c = vec![vec![0.0; n]; m + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}
