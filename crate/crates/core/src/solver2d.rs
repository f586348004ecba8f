//! Dimension-by-dimension extension to square 2D domains.
//!
//! The semi-discrete operator is the sum of the 1D operator applied along
//! every row (x-flux) and every column (y-flux). Boundary ghosts come from
//! the 1D procedure run on each grid line normal to an edge, with the
//! tangential flux derivative `S = B(U) U_s` added to the time derivative.
//! At `t_n` the tangential derivative of `U` is taken from the exact
//! solution; at later stages, and for mixed derivatives, it is a
//! fourth-order difference along the edge. The x-edges are filled first;
//! the y-edges then run over all columns including the x-ghost columns, so
//! the corner blocks are filled too.

use crate::boundary::{taylor, BoundaryConfig, BoundaryMethod, LineBoundary, LineInput, Side};
use crate::error::{Result, SolverError};
use crate::exec;
use crate::flux::{line_operator, max_wave_speed, Bias};
use crate::integrator::{IntegrationReport, OperatorCall, StepConfig};
use crate::linalg::{add, axpy, mat_vec, State};
use crate::mesh::{build_grid, Grid1D};
use crate::physics::{at_location, Physics, Reflected};
use crate::problems::Problem2d;
use crate::reconstruction::ReconstructionConfig;
use crate::tableau::RkTableau;

/// Square grid: the same 1D layout on both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub axis: Grid1D,
}

impl Grid2D {
    pub fn new(a: f64, b: f64, n: usize, ghost: usize) -> Result<Self> {
        Ok(Self { axis: build_grid(a, b, n, ghost)? })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.axis.n()
    }

    #[inline]
    pub fn ghost(&self) -> usize {
        self.axis.ghost()
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.axis.dx()
    }

    /// Stored points per row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.axis.len()
    }

    #[inline]
    pub fn coord(&self, i: isize) -> f64 {
        self.axis.x(i)
    }

    #[inline]
    fn index(&self, i: isize, j: isize) -> usize {
        self.axis.index(j) * self.stride() + self.axis.index(i)
    }
}

/// Point values on a [`Grid2D`], rows of constant `y` stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D<const M: usize> {
    grid: Grid2D,
    values: Vec<State<M>>,
}

impl<const M: usize> Field2D<M> {
    pub fn zeros(grid: Grid2D) -> Self {
        Self { grid, values: vec![[0.0; M]; grid.stride() * grid.stride()] }
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> State<M>) -> Self {
        let mut out = Self::zeros(grid);
        let n = grid.n() as isize;
        for j in 0..n {
            for i in 0..n {
                *out.at_mut(i, j) = f(grid.coord(i), grid.coord(j));
            }
        }
        out
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> &State<M> {
        &self.values[self.grid.index(i, j)]
    }

    #[inline]
    pub fn at_mut(&mut self, i: isize, j: isize) -> &mut State<M> {
        let k = self.grid.index(i, j);
        &mut self.values[k]
    }

    /// Row `j` including its ghosts.
    pub fn row(&self, j: isize) -> &[State<M>] {
        let start = self.grid.index(-(self.grid.ghost() as isize), j);
        &self.values[start..start + self.grid.stride()]
    }

    /// Column `i` including its ghosts.
    pub fn column(&self, i: isize) -> Vec<State<M>> {
        let g = self.grid.ghost() as isize;
        (-g..self.grid.n() as isize + g).map(|j| *self.at(i, j)).collect()
    }

    /// Interior values, row by row.
    pub fn interior(&self) -> Vec<State<M>> {
        let n = self.grid.n() as isize;
        (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).map(|(i, j)| *self.at(i, j)).collect()
    }

    pub fn first_nonfinite(&self) -> Option<(f64, f64)> {
        let n = self.grid.n() as isize;
        for j in 0..n {
            for i in 0..n {
                if self.at(i, j).iter().any(|v| !v.is_finite()) {
                    return Some((self.grid.coord(i), self.grid.coord(j)));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top];

    fn index(self) -> usize {
        self as usize
    }

    fn side(self) -> Side {
        match self {
            Edge::Left | Edge::Bottom => Side::Left,
            Edge::Right | Edge::Top => Side::Right,
        }
    }

    fn normal_is_x(self) -> bool {
        matches!(self, Edge::Left | Edge::Right)
    }
}

/// Fourth-order first derivative along a line of equally spaced values,
/// one-sided within two points of either end.
pub fn tangential_derivative<const M: usize>(w: &[State<M>], h: f64) -> Result<Vec<State<M>>> {
    let n = w.len();
    if n < 5 {
        return Err(SolverError::InvalidDimension(format!("tangential differences need 5 points, got {n}")));
    }
    let comb = |j: usize, terms: &[(usize, f64)], sign: f64| {
        let mut out = [0.0; M];
        for &(i, a) in terms {
            for c in 0..M {
                out[c] += a * (w[i][c] - w[j][c]);
            }
        }
        out.map(|v| sign * v / (12.0 * h))
    };
    Ok((0..n)
        .map(|j| match j {
            0 => comb(0, &[(1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)], 1.0),
            1 => comb(1, &[(0, -3.0), (2, 18.0), (3, -6.0), (4, 1.0)], 1.0),
            _ if j == n - 1 => comb(j, &[(j - 1, 48.0), (j - 2, -36.0), (j - 3, 16.0), (j - 4, -3.0)], -1.0),
            _ if j == n - 2 => comb(j, &[(j + 1, -3.0), (j - 1, 18.0), (j - 2, -6.0), (j - 3, 1.0)], -1.0),
            _ => comb(j, &[(j - 2, 1.0), (j - 1, -8.0), (j + 1, 8.0), (j + 2, -1.0)], 1.0),
        })
        .collect())
}

/// Tangential derivative on lines `first..first + n` from those lines
/// alone, so stencils near a corner turn one-sided instead of reading the
/// extrapolated corner ghosts. Ghost lines outside that range use the full
/// array.
fn edge_derivative<const M: usize>(w: &[State<M>], first: usize, n: usize, h: f64) -> Result<Vec<State<M>>> {
    let mut out = if first == 0 && n == w.len() { Vec::new() } else { tangential_derivative(w, h)? };
    let inner = tangential_derivative(&w[first..first + n], h)?;
    if out.is_empty() {
        return Ok(inner);
    }
    out[first..first + n].copy_from_slice(&inner);
    Ok(out)
}

/// Field on a grid sized for the reconstruction, holding the initial data.
pub fn initial_field_2d<const M: usize>(problem: &Problem2d<M>, n: usize, recon: &ReconstructionConfig) -> Result<Field2D<M>> {
    let (a, b) = problem.domain;
    let grid = Grid2D::new(a, b, n, recon.half_width().max(3))?;
    Ok(Field2D::from_fn(grid, |x, y| (problem.initial)(x, y)))
}

/// Largest wave speeds `(alpha_x, alpha_y)` over the interior.
pub fn global_alpha_2d<const M: usize>(field: &Field2D<M>, problem: &Problem2d<M>) -> Result<(f64, f64)> {
    let values = field.interior();
    let n = field.grid().n();
    let g = *field.grid();
    let locate = |k: usize| g.coord((k % n) as isize);
    let ax = max_wave_speed(problem.physics_x.as_ref(), &values, locate)?;
    let ay = max_wave_speed(problem.physics_y.as_ref(), &values, locate)?;
    if ax > 0.0 && ay > 0.0 {
        Ok((ax, ay))
    } else {
        Err(SolverError::DegenerateWaveSpeed)
    }
}

/// `-F_x - G_y` on the interior, upwind or downwind on both axes.
pub fn semidiscrete_2d<const M: usize>(
    field: &Field2D<M>,
    problem: &Problem2d<M>,
    alpha_x: f64,
    alpha_y: f64,
    cfg: &ReconstructionConfig,
    bias: Bias,
) -> Result<Field2D<M>> {
    let grid = *field.grid();
    let (n, g, dx) = (grid.n(), grid.ghost(), grid.dx());
    let first = grid.coord(-(g as isize));
    let rows = exec::try_map_range(n, |j| {
        line_operator(problem.physics_x.as_ref(), field.row(j as isize), g, dx, first, alpha_x, cfg, bias, false)
    })?;
    let cols = exec::try_map_range(n, |i| {
        line_operator(problem.physics_y.as_ref(), &field.column(i as isize), g, dx, first, alpha_y, cfg, bias, false)
    })?;
    let mut out = Field2D::zeros(grid);
    for j in 0..n {
        for i in 0..n {
            *out.at_mut(i as isize, j as isize) = add(&rows[j][i], &cols[i][j]);
        }
    }
    Ok(out)
}

/// Edge-wise boundary state of a 2D problem across the stages of a step.
#[derive(Debug, Clone)]
pub struct BoundaryState2d<const M: usize> {
    pub cfg: BoundaryConfig,
    lines: [Vec<LineBoundary<M>>; 4],
}

impl<const M: usize> BoundaryState2d<M> {
    pub fn new(cfg: BoundaryConfig) -> Self {
        Self { cfg, lines: Default::default() }
    }

    /// Fills the ghosts of all four edges for stage `stage` of the step
    /// starting at `t_n`.
    pub fn apply(
        &mut self,
        field: &mut Field2D<M>,
        problem: &Problem2d<M>,
        tableau: &RkTableau,
        stage: usize,
        t_n: f64,
        dt: f64,
    ) -> Result<()> {
        for edge in Edge::ALL {
            self.fill_edge(field, problem, tableau, edge, stage, t_n, dt)?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_edge(
        &mut self,
        field: &mut Field2D<M>,
        problem: &Problem2d<M>,
        tableau: &RkTableau,
        edge: Edge,
        stage: usize,
        t_n: f64,
        dt: f64,
    ) -> Result<()> {
        if self.cfg.method == BoundaryMethod::TanShu {
            return Err(SolverError::Unsupported("tan-shu boundary data are only implemented in 1D".into()));
        }
        let grid = *field.grid();
        let (n, g, dx) = (grid.n() as isize, grid.ghost() as isize, grid.dx());
        let k = self.cfg.taylor_depth;
        if k > grid.n() {
            return Err(SolverError::InvalidDimension(format!("Taylor depth {k} exceeds {n} interior points")));
        }
        let (normal, tangent) = if edge.normal_is_x() {
            (problem.physics_x.as_ref(), problem.physics_y.as_ref())
        } else {
            (problem.physics_y.as_ref(), problem.physics_x.as_ref())
        };
        let reflected = Reflected(normal);
        let physics: &dyn Physics<M> = match edge.side() {
            Side::Left => normal,
            Side::Right => &reflected,
        };
        let condition = problem.edges[edge.index()].as_ref();
        let (a, b) = problem.domain;
        let x_b = match edge.side() {
            Side::Left => a,
            Side::Right => b,
        };
        // Lines normal to the edge: interior rows for x-edges, every column
        // (ghost columns included) for y-edges.
        let line_ids: Vec<isize> = if edge.normal_is_x() { (0..n).collect() } else { (-g..n + g).collect() };
        let at = |line: isize, depth: isize| -> (isize, isize) {
            let normal_index = match edge.side() {
                Side::Left => depth,
                Side::Right => n - 1 - depth,
            };
            if edge.normal_is_x() {
                (normal_index, line)
            } else {
                (line, normal_index)
            }
        };
        let tangential_axis = if edge.normal_is_x() { 1 } else { 0 };
        let point = |s: f64| if edge.normal_is_x() { (x_b, s) } else { (s, x_b) };

        let lines = &mut self.lines[edge.index()];
        if stage == 0 && lines.len() != line_ids.len() {
            *lines = vec![LineBoundary::new(); line_ids.len()];
        }
        if lines.len() != line_ids.len() {
            return Err(SolverError::MissingStage { stage: 0 });
        }
        let cfg = self.cfg;
        let field_ref = &*field;
        let derivs: Vec<Vec<State<M>>> = exec::try_map_mut(lines, |l, line| {
            let id = line_ids[l];
            let samples: Vec<State<M>> = (0..k as isize)
                .map(|d| {
                    let (i, j) = at(id, d);
                    *field_ref.at(i, j)
                })
                .collect();
            let s = grid.coord(id);
            let input = LineInput { physics, condition, samples: &samples, dx, coord: s, side: edge.side() };
            let tangential = |u: &State<M>| {
                let (px, py) = point(s);
                let uy = (problem.exact_gradient)(t_n, px, py)[tangential_axis];
                mat_vec(&tangent.jacobian(u), &uy)
            };
            let out = line.compute(&input, &cfg, tableau, stage, t_n, dt, &tangential).map(|d| d.to_vec());
            out.map_err(|e| at_location(e, s))
        })?;

        // Tangential terms for later stages.
        let values: Vec<State<M>> = derivs.iter().map(|d| d[0]).collect();
        let normal_derivs: Vec<State<M>> = derivs.iter().map(|d| d[1]).collect();
        let first = if edge.normal_is_x() { 0 } else { g as usize };
        let mixed = edge_derivative(&normal_derivs, first, n as usize, dx)?;
        let along = if stage == 0 {
            line_ids
                .iter()
                .map(|&id| {
                    let (px, py) = point(grid.coord(id));
                    (problem.exact_gradient)(t_n, px, py)[tangential_axis]
                })
                .collect()
        } else {
            edge_derivative(&values, first, n as usize, dx)?
        };
        for (l, line) in lines.iter_mut().enumerate() {
            let u0 = &values[l];
            let jac = tangent.jacobian(u0);
            let s0 = mat_vec(&jac, &along[l]);
            let s1 = add(&tangent.hessian(u0, &normal_derivs[l], &along[l]), &mat_vec(&jac, &mixed[l]));
            line.set_tangential(stage, s0, s1);
        }

        for (l, &id) in line_ids.iter().enumerate() {
            for gi in 1..=g {
                let value = taylor(&derivs[l], (0.5 - gi as f64) * dx);
                let (i, j) = at(id, -gi);
                *field.at_mut(i, j) = value;
            }
        }
        Ok(())
    }
}

/// Stage-0 ghost fill of one edge from a fresh state; exposed for tests.
pub fn fill_edge_ghosts_2d<const M: usize>(
    field: &mut Field2D<M>,
    problem: &Problem2d<M>,
    edge: Edge,
    t: f64,
    cfg: &BoundaryConfig,
    tableau: &RkTableau,
) -> Result<()> {
    let mut state = BoundaryState2d::new(*cfg);
    state.fill_edge(field, problem, tableau, edge, 0, t, 1.0)
}

/// Drives the RK stages of a 2D problem; mirrors the 1D stepper.
pub struct Stepper2d<'a, const M: usize> {
    problem: &'a Problem2d<M>,
    tableau: &'a RkTableau,
    cfg: StepConfig,
    boundary: BoundaryState2d<M>,
    steps_taken: usize,
    trace: Vec<OperatorCall>,
}

impl<'a, const M: usize> Stepper2d<'a, M> {
    pub fn new(problem: &'a Problem2d<M>, tableau: &'a RkTableau, cfg: StepConfig) -> Result<Self> {
        cfg.reconstruction.validate()?;
        cfg.dt_rule.validate()?;
        if cfg.boundary.method == BoundaryMethod::TanShu {
            return Err(SolverError::Unsupported("tan-shu boundary data are only implemented in 1D".into()));
        }
        Ok(Self { problem, tableau, cfg, boundary: BoundaryState2d::new(cfg.boundary), steps_taken: 0, trace: Vec::new() })
    }

    pub fn step(&mut self, field: &Field2D<M>, t_n: f64, dt: f64, alpha: (f64, f64)) -> Result<Field2D<M>> {
        let s = self.tableau.stages;
        let recon = self.cfg.reconstruction;
        let mut stages = Vec::with_capacity(s);
        let mut u0 = field.clone();
        self.boundary.apply(&mut u0, self.problem, self.tableau, 0, t_n, dt)?;
        stages.push(u0);
        let mut cache: Vec<[Option<Field2D<M>>; 2]> = vec![[None, None]; s];
        let grid = *field.grid();
        let n = grid.n() as isize;
        for i in 1..=s {
            let mut next = Field2D::zeros(grid);
            for k in 0..i {
                let (a, b) = (self.tableau.alpha(i, k), self.tableau.beta(i, k));
                if a != 0.0 {
                    for jj in 0..n {
                        for ii in 0..n {
                            let src = *stages[k].at(ii, jj);
                            axpy(next.at_mut(ii, jj), a, &src);
                        }
                    }
                }
                if b != 0.0 {
                    let (bias, slot) = if b > 0.0 { (Bias::Upwind, 0) } else { (Bias::Downwind, 1) };
                    if cache[k][slot].is_none() {
                        cache[k][slot] = Some(semidiscrete_2d(&stages[k], self.problem, alpha.0, alpha.1, &recon, bias)?);
                    }
                    if self.cfg.trace {
                        self.trace.push(OperatorCall { step: self.steps_taken, stage: i, source: k, bias });
                    }
                    let op = cache[k][slot].as_ref().expect("cached above");
                    for jj in 0..n {
                        for ii in 0..n {
                            let src = *op.at(ii, jj);
                            axpy(next.at_mut(ii, jj), dt * b, &src);
                        }
                    }
                }
            }
            if let Some((x, _)) = next.first_nonfinite() {
                return Err(SolverError::Blowup { time: t_n + dt, x });
            }
            if i < s {
                self.boundary.apply(&mut next, self.problem, self.tableau, i, t_n, dt)?;
            }
            stages.push(next);
        }
        self.steps_taken += 1;
        Ok(stages.pop().expect("at least one stage"))
    }

    /// Integrates from `t = 0` to the configured final time with
    /// `dt = cfl dx / (alpha_x + alpha_y)` under a CFL rule.
    pub fn integrate(&mut self, field: &Field2D<M>) -> Result<(Field2D<M>, IntegrationReport)> {
        let t_final = self.cfg.t_final;
        if !(t_final > 0.0) {
            return Err(SolverError::Config(format!("final time must be positive, got {t_final}")));
        }
        let dx = field.grid().dx();
        let mut report = IntegrationReport::default();
        let mut u = field.clone();
        let mut t = 0.0;
        while t < t_final {
            let (ax, ay) = global_alpha_2d(&u, self.problem)?;
            let mut dt = self.cfg.dt_rule.dt(dx, ax + ay);
            let last = t + dt >= t_final * (1.0 - 1e-14);
            if last {
                dt = t_final - t;
            }
            u = self.step(&u, t, dt, (ax, ay))?;
            t = if last { t_final } else { t + dt };
            report.steps += 1;
            report.alphas.push(ax + ay);
            report.dts.push(dt);
        }
        let interior = u.interior();
        report.min = (0..M).map(|c| interior.iter().map(|v| v[c]).fold(f64::INFINITY, f64::min)).collect();
        report.max = (0..M).map(|c| interior.iter().map(|v| v[c]).fold(f64::NEG_INFINITY, f64::max)).collect();
        report.final_time = t;
        report.trace = std::mem::take(&mut self.trace);
        Ok((u, report))
    }
}

pub fn integrate_2d<const M: usize>(
    field: &Field2D<M>,
    problem: &Problem2d<M>,
    tableau: &RkTableau,
    cfg: &StepConfig,
) -> Result<(Field2D<M>, IntegrationReport)> {
    Stepper2d::new(problem, tableau, *cfg)?.integrate(field)
}
