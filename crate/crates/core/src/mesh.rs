//! Cell-centered 1D grids with ghost layers and M-component point storage.
//!
//! Point `j` sits at `a + (j + 1/2) dx`, so the physical boundaries `a` and
//! `b` fall half a cell outside the first and last interior points. Interior
//! indices are `0..n`, ghosts are `-G..-1` and `n..n+G`.

use crate::error::{Result, SolverError};
use crate::linalg::State;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    n: usize,
    ghost: usize,
    dx: f64,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n_interior: usize, n_ghost: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(SolverError::InvalidDimension(format!("need a < b, got [{a}, {b}]")));
        }
        if n_ghost < 3 {
            return Err(SolverError::InvalidDimension(format!("need at least 3 ghost points, got {n_ghost}")));
        }
        if n_interior < 2 * n_ghost {
            return Err(SolverError::InvalidDimension(format!(
                "need at least {} interior points for {n_ghost} ghosts, got {n_interior}",
                2 * n_ghost
            )));
        }
        Ok(Self { a, b, n: n_interior, ghost: n_ghost, dx: (b - a) / n_interior as f64 })
    }

    /// Number of interior points (`N + 1` in 0-based `0..=N` notation).
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ghost(&self) -> usize {
        self.ghost
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Total stored points including ghosts.
    #[inline]
    pub fn len(&self) -> usize {
        self.n + 2 * self.ghost
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Coordinate of point `j` (negative for left ghosts).
    #[inline]
    pub fn x(&self, j: isize) -> f64 {
        self.a + (j as f64 + 0.5) * self.dx
    }

    /// Storage offset of point `j`.
    #[inline]
    pub fn index(&self, j: isize) -> usize {
        (j + self.ghost as isize) as usize
    }

    pub fn interior_x(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n as isize).map(|j| self.x(j))
    }
}

pub fn build_grid(a: f64, b: f64, n_interior: usize, n_ghost: usize) -> Result<Grid1D> {
    Grid1D::new(a, b, n_interior, n_ghost)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldArray<const M: usize> {
    grid: Grid1D,
    values: Vec<State<M>>,
}

impl<const M: usize> FieldArray<M> {
    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, values: vec![[0.0; M]; grid.len()] }
    }

    pub fn from_fn(grid: Grid1D, mut f: impl FnMut(f64) -> State<M>) -> Self {
        let mut field = Self::zeros(grid);
        for j in 0..grid.n() as isize {
            let x = grid.x(j);
            *field.at_mut(j) = f(x);
        }
        field
    }

    pub fn from_interior(grid: Grid1D, interior: &[State<M>]) -> Result<Self> {
        if interior.len() != grid.n() {
            return Err(SolverError::InvalidDimension(format!(
                "expected {} interior values, got {}",
                grid.n(),
                interior.len()
            )));
        }
        let mut field = Self::zeros(grid);
        field.interior_mut().copy_from_slice(interior);
        Ok(field)
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn at(&self, j: isize) -> &State<M> {
        &self.values[self.grid.index(j)]
    }

    #[inline]
    pub fn at_mut(&mut self, j: isize) -> &mut State<M> {
        let i = self.grid.index(j);
        &mut self.values[i]
    }

    /// All stored points, ghosts included, left to right.
    #[inline]
    pub fn raw(&self) -> &[State<M>] {
        &self.values
    }

    #[inline]
    pub fn raw_mut(&mut self) -> &mut [State<M>] {
        &mut self.values
    }

    #[inline]
    pub fn interior(&self) -> &[State<M>] {
        let g = self.grid.ghost();
        &self.values[g..g + self.grid.n()]
    }

    #[inline]
    pub fn interior_mut(&mut self) -> &mut [State<M>] {
        let g = self.grid.ghost();
        let n = self.grid.n();
        &mut self.values[g..g + n]
    }

    pub fn left_ghosts(&self) -> &[State<M>] {
        &self.values[..self.grid.ghost()]
    }

    pub fn right_ghosts(&self) -> &[State<M>] {
        &self.values[self.grid.ghost() + self.grid.n()..]
    }

    pub fn all_finite(&self) -> bool {
        self.interior().iter().flatten().all(|v| v.is_finite())
    }

    /// First interior index holding a non-finite value.
    pub fn first_nonfinite(&self) -> Option<isize> {
        self.interior().iter().position(|u| u.iter().any(|v| !v.is_finite())).map(|j| j as isize)
    }
}

/// Copies interior values periodically into both ghost layers.
pub fn fill_periodic_ghosts<const M: usize>(field: &mut FieldArray<M>) {
    let n = field.grid().n() as isize;
    let g = field.grid().ghost() as isize;
    for k in 1..=g {
        *field.at_mut(-k) = *field.at(n - k);
        *field.at_mut(n - 1 + k) = *field.at(k - 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_layout() {
        let g = build_grid(0.0, 1.0, 80, 3).unwrap();
        assert_eq!(g.dx(), 1.0 / 80.0);
        assert_eq!(g.x(0), 1.0 / 160.0);
        assert!((g.x(79) - (1.0 - 1.0 / 160.0)).abs() < 1e-15);
    }

    #[test]
    fn symmetric_interval_layout() {
        let g = build_grid(-1.0, 1.0, 8, 3).unwrap();
        assert_eq!(g.dx(), 0.25);
        let g = Grid1D { a: -1.0, b: 1.0, n: 4, ghost: 3, dx: 0.5 };
        let xs: Vec<f64> = g.interior_x().collect();
        assert_eq!(xs, vec![-0.75, -0.25, 0.25, 0.75]);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(build_grid(0.0, 1.0, 4, 3).is_err());
        assert!(build_grid(1.0, 0.0, 40, 3).is_err());
        assert!(build_grid(0.0, 1.0, 40, 2).is_err());
    }

    #[test]
    fn spacing_is_uniform_without_drift() {
        let g = build_grid(-std::f64::consts::PI, std::f64::consts::PI, 1600, 4).unwrap();
        for j in -4..1603_isize {
            let d = g.x(j + 1) - g.x(j);
            assert!((d - g.dx()).abs() < 1e-14);
        }
    }

    #[test]
    fn periodic_ghosts_scalar() {
        let g = build_grid(0.0, 1.0, 6, 3).unwrap();
        let mut f = FieldArray::<1>::from_interior(g, &[[1.0], [2.0], [3.0], [4.0], [5.0], [6.0]]).unwrap();
        fill_periodic_ghosts(&mut f);
        assert_eq!(f.left_ghosts(), &[[4.0], [5.0], [6.0]]);
        assert_eq!(f.right_ghosts(), &[[1.0], [2.0], [3.0]]);
        assert_eq!(f.interior(), &[[1.0], [2.0], [3.0], [4.0], [5.0], [6.0]]);
    }

    #[test]
    fn periodic_ghosts_constant_and_multicomponent() {
        let g = build_grid(0.0, 1.0, 6, 3).unwrap();
        let mut f = FieldArray::<3>::from_fn(g, |x| [2.0, x, -x]);
        fill_periodic_ghosts(&mut f);
        let n = 6;
        for k in 1..=3isize {
            assert_eq!(f.at(-k), f.at(n - k));
            assert_eq!(f.at(n - 1 + k), f.at(k - 1));
            assert_eq!(f.at(-k)[0], 2.0);
        }
    }
}
