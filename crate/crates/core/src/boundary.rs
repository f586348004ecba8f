//! Ghost-point construction from boundary conditions.
//!
//! At `t_n` (stage 0) outgoing characteristic variables are extrapolated
//! from the interior, the boundary state comes from a Newton solve of the
//! outgoing rows together with `B(U, t) = 0`, its first derivative from the
//! inverse Lax-Wendroff relation, and higher derivatives by extrapolation.
//! At later stages the boundary value and first derivative follow from the
//! RK stage relation applied at the boundary point itself, so the ghost data
//! are consistent with the interior stage values. Ghost values are Taylor
//! expansions of the resulting derivative stack.
//!
//! All per-side computations run in a left-boundary frame. The right side
//! is handled by mirroring `xi = a + b - x` and negating the flux.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::linalg::{add, axpy, dot, mat_vec, max_abs, solve, Matrix, State};
use crate::mesh::FieldArray;
use crate::physics::{at_location, Eigensystem, Physics, Reflected};
use crate::problems::{BoundaryCondition, Problem, Quantity};
use crate::reconstruction::{boundary_derivatives, Extrapolation};
use crate::tableau::{RkTableau, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    /// `(-1)^k` factor converting frame derivatives to physical ones.
    fn sign(self, k: usize) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right if k % 2 == 1 => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// How intermediate-stage ghost values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum BoundaryMethod {
    /// Stage data from the RK stage relation at the boundary.
    RkStage,
    /// Stage data from modified time-dependent boundary conditions
    /// (third-order schemes of Shu-Osher type only).
    TanShu,
}

impl BoundaryMethod {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryMethod::RkStage => "rk-stage",
            BoundaryMethod::TanShu => "tan-shu",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "rk-stage" => Ok(Self::RkStage),
            "tan-shu" => Ok(Self::TanShu),
            other => Err(SolverError::Config(format!("unknown boundary method `{other}` (expected rk-stage or tan-shu)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConfig {
    pub method: BoundaryMethod,
    pub extrapolation: Extrapolation,
    /// Number of derivatives `K` in the boundary stack (Taylor depth).
    pub taylor_depth: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self {
            method: BoundaryMethod::RkStage,
            extrapolation: Extrapolation::Lagrange,
            taylor_depth: 5,
            newton_tol: 1e-12,
            newton_max_iter: 50,
        }
    }
}

/// Derivative stack `d^k U/dx^k` at one boundary, `k = 0..K-1`, in the
/// physical coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDerivatives<const M: usize> {
    pub values: Vec<State<M>>,
    pub side: Side,
    pub stage_index: usize,
}

/// Extrapolated characteristic derivatives, `v[k][m]`, together with the
/// eigensystem used for the projection.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicStacks<const M: usize> {
    pub eigensystem: Eigensystem<M>,
    pub v: Vec<State<M>>,
}

/// Projects samples onto characteristic variables of `es` and extrapolates
/// each to the boundary. Samples sit at `(i + 1/2) dx` from the boundary.
pub fn characteristic_derivatives<const M: usize>(
    es: &Eigensystem<M>,
    samples: &[State<M>],
    dx: f64,
    kind: Extrapolation,
) -> CharacteristicStacks<M> {
    let k = samples.len();
    let projected: Vec<State<M>> = samples.iter().map(|u| es.project(u)).collect();
    let mut v = vec![[0.0; M]; k];
    let mut line = vec![0.0; k];
    for m in 0..M {
        for (i, p) in projected.iter().enumerate() {
            line[i] = p[m];
        }
        let d = boundary_derivatives(kind, &line, 0.5 * dx, 0.0, dx);
        for (kk, val) in d.iter().enumerate() {
            v[kk][m] = *val;
        }
    }
    CharacteristicStacks { eigensystem: *es, v }
}

/// Characteristic derivative stacks at the boundary, projected with the
/// eigensystem of the first interior sample.
pub fn outgoing_char_derivatives<const M: usize>(
    physics: &dyn Physics<M>,
    samples: &[State<M>],
    dx: f64,
    kind: Extrapolation,
) -> Result<CharacteristicStacks<M>> {
    let es = physics.eigensystem(&samples[0]).map_err(|e| at_location(e, 0.5 * dx))?;
    Ok(characteristic_derivatives(&es, samples, dx, kind))
}

/// Modes leaving the domain through a left boundary: the `M - p` smallest
/// eigenvalues.
pub fn outgoing_modes<const M: usize>(es: &Eigensystem<M>, p: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..M).collect();
    idx.sort_by(|a, b| es.values[*a].total_cmp(&es.values[*b]));
    idx.truncate(M.saturating_sub(p));
    idx
}

/// Newton solve of `l_m U = v_m` (outgoing modes) and `phi(U) = target`.
pub fn solve_boundary_state<const M: usize>(
    es: &Eigensystem<M>,
    v0: &State<M>,
    quantities: &[Quantity],
    targets: &[f64],
    cfg: &BoundaryConfig,
    side: Side,
) -> Result<State<M>> {
    let p = quantities.len();
    if p > M {
        return Err(SolverError::SingularBoundary { side: side.label(), detail: format!("{p} conditions for {M} components") });
    }
    let modes = outgoing_modes(es, p);
    let mut u = es.reconstruct(v0);
    if p == 0 {
        return Ok(u);
    }
    let scale = 1.0_f64.max(max_abs(v0)).max(targets.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    let residual = |u: &State<M>| {
        let mut r = [0.0; M];
        for (row, &m) in modes.iter().enumerate() {
            r[row] = dot(&es.left[m], u) - v0[m];
        }
        for (q, (quantity, target)) in quantities.iter().zip(targets).enumerate() {
            r[M - p + q] = quantity.value(u) - target;
        }
        r
    };
    let mut res = residual(&u);
    let mut iterations = 0;
    while max_abs(&res) > cfg.newton_tol * scale {
        if iterations == cfg.newton_max_iter || !u.iter().all(|x| x.is_finite()) {
            return Err(SolverError::NewtonDiverged { side: side.label(), iterations, residual: max_abs(&res) });
        }
        let mut jac: Matrix<M> = [[0.0; M]; M];
        for (row, &m) in modes.iter().enumerate() {
            jac[row] = es.left[m];
        }
        for (q, quantity) in quantities.iter().enumerate() {
            jac[M - p + q] = quantity.gradient(&u);
        }
        let delta = solve(&jac, &res.map(|r| -r)).ok_or_else(|| SolverError::SingularBoundary {
            side: side.label(),
            detail: format!("Newton Jacobian singular at U = {u:?}"),
        })?;
        axpy(&mut u, 1.0, &delta);
        iterations += 1;
        res = residual(&u);
        // Updates at rounding level cannot reduce the residual further.
        if max_abs(&delta) <= 4.0 * f64::EPSILON * (1.0 + max_abs(&u)) {
            break;
        }
    }
    if max_abs(&res) > 1e3 * cfg.newton_tol * scale {
        return Err(SolverError::NewtonDiverged { side: side.label(), iterations, residual: max_abs(&res) });
    }
    Ok(u)
}

/// First derivative at the boundary: outgoing rows `l_m U_x = v1_m` plus the
/// inverse Lax-Wendroff rows `phi_U A U_x = -g'(t) - phi_U S`, where `S` is
/// the tangential flux contribution to `U_t` (zero in 1D).
#[allow(clippy::too_many_arguments)]
pub fn ilw_first_derivative<const M: usize>(
    physics: &dyn Physics<M>,
    es: &Eigensystem<M>,
    u0: &State<M>,
    v1: &State<M>,
    quantities: &[Quantity],
    rates: &[f64],
    tangential: &State<M>,
    side: Side,
) -> Result<State<M>> {
    let p = quantities.len();
    let modes = outgoing_modes(es, p);
    if p == 0 {
        return Ok(es.reconstruct(v1));
    }
    let a = physics.jacobian(u0);
    let mut mat: Matrix<M> = [[0.0; M]; M];
    let mut rhs = [0.0; M];
    for (row, &m) in modes.iter().enumerate() {
        mat[row] = es.left[m];
        rhs[row] = v1[m];
    }
    for (q, (quantity, rate)) in quantities.iter().zip(rates).enumerate() {
        let grad = quantity.gradient(u0);
        let mut row = [0.0; M];
        for (j, r) in row.iter_mut().enumerate() {
            *r = (0..M).map(|i| grad[i] * a[i][j]).sum();
        }
        mat[M - p + q] = row;
        rhs[M - p + q] = -rate - dot(&grad, tangential);
    }
    solve(&mat, &rhs).ok_or_else(|| SolverError::SingularBoundary {
        side: side.label(),
        detail: format!("inverse Lax-Wendroff system singular at U = {u0:?}"),
    })
}

/// `U^{(k)} = R v^{(k)}` for `k >= 2`.
pub fn higher_derivatives_by_extrapolation<const M: usize>(stacks: &CharacteristicStacks<M>) -> Vec<State<M>> {
    stacks.v.iter().skip(2).map(|v| stacks.eigensystem.reconstruct(v)).collect()
}

/// Boundary data of one completed stage: derivative stack plus the
/// tangential terms `S0 = B(U) U_y` and `S1 = d/dx S0` (zero in 1D).
#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord<const M: usize> {
    pub derivs: Vec<State<M>>,
    pub s0: State<M>,
    pub s1: State<M>,
}

impl<const M: usize> StageRecord<M> {
    pub fn new(derivs: Vec<State<M>>) -> Self {
        Self { derivs, s0: [0.0; M], s1: [0.0; M] }
    }
}

/// Value and first derivative at stage `i` from the stage relation
/// `U^(i) = sum_k alpha_ik U^(k) - dt beta_ik (F(U^(k))_x + S^(k))`
/// and its x-derivative, with `k >= 2` entries supplied by `higher`.
pub fn stage_boundary_derivatives<const M: usize>(
    prev: &[Option<StageRecord<M>>],
    tableau: &RkTableau,
    stage_i: usize,
    dt: f64,
    physics: &dyn Physics<M>,
    higher: Vec<State<M>>,
) -> Result<Vec<State<M>>> {
    if stage_i == 0 || stage_i >= tableau.stages {
        return Err(SolverError::MissingStage { stage: stage_i });
    }
    let mut u0 = [0.0; M];
    let mut u1 = [0.0; M];
    for k in 0..stage_i {
        let rec = prev.get(k).and_then(|r| r.as_ref()).ok_or(SolverError::MissingStage { stage: k })?;
        let (a, b) = (tableau.alpha(stage_i, k), tableau.beta(stage_i, k));
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let (w0, w1) = (&rec.derivs[0], &rec.derivs[1]);
        axpy(&mut u0, a, w0);
        axpy(&mut u1, a, w1);
        if b != 0.0 {
            let jac = physics.jacobian(w0);
            let flux_x = add(&mat_vec(&jac, w1), &rec.s0);
            axpy(&mut u0, -dt * b, &flux_x);
            let w2 = rec.derivs.get(2).copied().unwrap_or([0.0; M]);
            let flux_xx = add(&add(&physics.hessian(w0, w1, w1), &mat_vec(&jac, &w2)), &rec.s1);
            axpy(&mut u1, -dt * b, &flux_xx);
        }
    }
    let mut out = Vec::with_capacity(2 + higher.len());
    out.push(u0);
    out.push(u1);
    out.extend(higher);
    Ok(out)
}

/// Modified boundary data for the intermediate stages of SSP(3,3):
/// returns `(g_i, g_i')` built from `g, g', g'', g'''` at `t_n`.
pub fn tan_shu_stage_data(stage_i: usize, dt: f64, g: [f64; 4]) -> Result<(f64, f64)> {
    match stage_i {
        1 => Ok((g[0] + dt * g[1], g[1] + dt * g[2])),
        2 => Ok((g[0] + 0.5 * dt * g[1] + 0.25 * dt * dt * g[2], g[1] + 0.5 * dt * g[2] + 0.25 * dt * dt * g[3])),
        _ => Err(SolverError::MissingStage { stage: stage_i }),
    }
}

/// True when `t` is SSP(3,3) up to rounding.
pub fn is_ssp33(t: &RkTableau) -> bool {
    let r = Scheme::Ssp33.tableau();
    t.stages == 3
        && (1..=3).all(|i| (0..i).all(|k| (t.alpha(i, k) - r.alpha(i, k)).abs() < 1e-14 && (t.beta(i, k) - r.beta(i, k)).abs() < 1e-14))
}

/// Fills the ghost layer of `side` with the Taylor polynomial of the frame
/// derivative stack `derivs`.
pub fn fill_ghosts_taylor<const M: usize>(derivs: &[State<M>], field: &mut FieldArray<M>, side: Side) {
    let grid = *field.grid();
    let n = grid.n() as isize;
    for g in 1..=grid.ghost() as isize {
        let delta = (0.5 - g as f64) * grid.dx();
        let value = taylor(derivs, delta);
        let j = match side {
            Side::Left => -g,
            Side::Right => n - 1 + g,
        };
        *field.at_mut(j) = value;
    }
}

/// `sum_k delta^k / k! d_k`.
pub fn taylor<const M: usize>(derivs: &[State<M>], delta: f64) -> State<M> {
    let mut out = [0.0; M];
    let mut coef = 1.0;
    for (k, d) in derivs.iter().enumerate() {
        if k > 0 {
            coef *= delta / k as f64;
        }
        axpy(&mut out, coef, d);
    }
    out
}

/// Inputs for one boundary line: frame physics, the boundary condition and
/// the `K` interior samples closest to the boundary in frame order.
pub struct LineInput<'a, const M: usize> {
    pub physics: &'a dyn Physics<M>,
    pub condition: Option<&'a BoundaryCondition>,
    pub samples: &'a [State<M>],
    pub dx: f64,
    /// Tangential coordinate passed to the boundary data (0 in 1D).
    pub coord: f64,
    pub side: Side,
}

impl<const M: usize> LineInput<'_, M> {
    fn rows(&self) -> usize {
        self.condition.map_or(0, |c| c.rows())
    }

    fn data(&self, t: f64, k: usize) -> Result<Vec<f64>> {
        match self.condition {
            Some(c) => c.data(t, self.coord, k),
            None => Ok(Vec::new()),
        }
    }
}

/// Stage-0 procedure with explicit targets `phi(U) = targets` and rates
/// `d/dt phi = rates`. `tangential` maps the boundary state to `S0`.
pub fn step_one<const M: usize>(
    input: &LineInput<'_, M>,
    cfg: &BoundaryConfig,
    targets: &[f64],
    rates: &[f64],
    tangential: &dyn Fn(&State<M>) -> State<M>,
) -> Result<(Eigensystem<M>, Vec<State<M>>, State<M>)> {
    let stacks = outgoing_char_derivatives(input.physics, input.samples, input.dx, cfg.extrapolation)?;
    let es = stacks.eigensystem;
    if input.rows() == 0 && cfg.extrapolation == Extrapolation::Lagrange {
        // Linear extrapolation commutes with the projection; working on U
        // directly keeps constant states exact.
        let derivs = extrapolate_components(input.samples, input.dx);
        let s0 = tangential(&derivs[0]);
        return Ok((es, derivs, s0));
    }
    let quantities: &[Quantity] = input.condition.map_or(&[], |c| &c.quantities);
    let u0 = solve_boundary_state(&es, &stacks.v[0], quantities, targets, cfg, input.side)?;
    let s0 = tangential(&u0);
    let u1 = ilw_first_derivative(input.physics, &es, &u0, &stacks.v[1], quantities, rates, &s0, input.side)?;
    let mut derivs = vec![u0, u1];
    derivs.extend(higher_derivatives_by_extrapolation(&stacks));
    Ok((es, derivs, s0))
}

/// Component-wise Lagrange extrapolation of the samples to the boundary.
pub fn extrapolate_components<const M: usize>(samples: &[State<M>], dx: f64) -> Vec<State<M>> {
    let k = samples.len();
    let mut out = vec![[0.0; M]; k];
    let mut line = vec![0.0; k];
    for m in 0..M {
        for (i, u) in samples.iter().enumerate() {
            line[i] = u[m];
        }
        let d = boundary_derivatives(Extrapolation::Lagrange, &line, 0.5 * dx, 0.0, dx);
        for (kk, val) in d.iter().enumerate() {
            out[kk][m] = *val;
        }
    }
    out
}

/// Boundary state of one side of one grid line across the stages of a step.
#[derive(Debug, Clone, Default)]
pub struct LineBoundary<const M: usize> {
    es0: Option<Eigensystem<M>>,
    records: Vec<Option<StageRecord<M>>>,
}

impl<const M: usize> LineBoundary<M> {
    pub fn new() -> Self {
        Self { es0: None, records: Vec::new() }
    }

    pub fn record(&self, stage: usize) -> Option<&StageRecord<M>> {
        self.records.get(stage).and_then(|r| r.as_ref())
    }

    /// Stores the tangential terms of a computed stage.
    pub fn set_tangential(&mut self, stage: usize, s0: State<M>, s1: State<M>) {
        if let Some(Some(r)) = self.records.get_mut(stage) {
            r.s0 = s0;
            r.s1 = s1;
        }
    }

    /// Computes and stores the derivative stack of `stage` (frame
    /// derivatives). Stage 0 starts a new step.
    #[allow(clippy::too_many_arguments)]
    pub fn compute(
        &mut self,
        input: &LineInput<'_, M>,
        cfg: &BoundaryConfig,
        tableau: &RkTableau,
        stage: usize,
        t_n: f64,
        dt: f64,
        tangential: &dyn Fn(&State<M>) -> State<M>,
    ) -> Result<&[State<M>]> {
        let k = cfg.taylor_depth;
        if input.samples.len() != k || k < 2 {
            return Err(SolverError::InvalidDimension(format!("boundary stack needs {k} >= 2 samples, got {}", input.samples.len())));
        }
        if stage == 0 {
            self.records.clear();
            self.records.resize(tableau.stages, None);
            let (es, derivs, s0) = step_one(input, cfg, &input.data(t_n, 0)?, &input.data(t_n, 1)?, tangential)?;
            self.es0 = Some(es);
            let mut rec = StageRecord::new(derivs);
            rec.s0 = s0;
            self.records[0] = Some(rec);
            return Ok(&self.records[0].as_ref().expect("just stored").derivs);
        }
        if stage >= tableau.stages || self.records.len() != tableau.stages {
            return Err(SolverError::MissingStage { stage });
        }
        if let Some(k) = (0..stage).find(|k| self.records[*k].is_none()) {
            return Err(SolverError::MissingStage { stage: k });
        }
        let derivs = if input.rows() == 0 {
            // Nothing enters: plain extrapolation of the stage values.
            step_one(input, cfg, &[], &[], tangential)?.1
        } else {
            match cfg.method {
                BoundaryMethod::RkStage => {
                    let es0 = self.es0.as_ref().ok_or(SolverError::MissingStage { stage: 0 })?;
                    let stacks = characteristic_derivatives(es0, input.samples, input.dx, cfg.extrapolation);
                    let higher = higher_derivatives_by_extrapolation(&stacks);
                    stage_boundary_derivatives(&self.records, tableau, stage, dt, input.physics, higher)?
                }
                BoundaryMethod::TanShu => {
                    if !is_ssp33(tableau) {
                        return Err(SolverError::Unsupported(format!("tan-shu boundary data require SSP(3,3), got {}", tableau.name)));
                    }
                    let g: Vec<Vec<f64>> = (0..4).map(|d| input.data(t_n, d)).collect::<Result<_>>()?;
                    let mut targets = Vec::with_capacity(input.rows());
                    let mut rates = Vec::with_capacity(input.rows());
                    for q in 0..input.rows() {
                        let (v, r) = tan_shu_stage_data(stage, dt, [g[0][q], g[1][q], g[2][q], g[3][q]])?;
                        targets.push(v);
                        rates.push(r);
                    }
                    step_one(input, cfg, &targets, &rates, tangential)?.1
                }
            }
        };
        self.records[stage] = Some(StageRecord::new(derivs));
        Ok(&self.records[stage].as_ref().expect("just stored").derivs)
    }
}

/// Boundary handling of a 1D problem: both sides across the stages of a step.
#[derive(Debug, Clone)]
pub struct BoundaryState<const M: usize> {
    pub cfg: BoundaryConfig,
    sides: [LineBoundary<M>; 2],
}

impl<const M: usize> BoundaryState<M> {
    pub fn new(cfg: BoundaryConfig) -> Self {
        Self { cfg, sides: [LineBoundary::new(), LineBoundary::new()] }
    }

    fn index(side: Side) -> usize {
        match side {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    /// Stored derivative stack of `stage` in the physical coordinate.
    pub fn derivatives(&self, side: Side, stage: usize) -> Option<BoundaryDerivatives<M>> {
        let rec = self.sides[Self::index(side)].record(stage)?;
        let values = rec.derivs.iter().enumerate().map(|(k, d)| d.map(|v| side.sign(k) * v)).collect();
        Some(BoundaryDerivatives { values, side, stage_index: stage })
    }

    /// Fills both ghost layers of `field`, which holds stage `stage` of the
    /// step starting at `t_n`.
    pub fn apply_boundary_step(
        &mut self,
        field: &mut FieldArray<M>,
        problem: &Problem<M>,
        tableau: &RkTableau,
        stage: usize,
        t_n: f64,
        dt: f64,
    ) -> Result<()> {
        let grid = *field.grid();
        let k = self.cfg.taylor_depth;
        if k > grid.n() {
            return Err(SolverError::InvalidDimension(format!("Taylor depth {k} exceeds {} interior points", grid.n())));
        }
        let reflected = Reflected(problem.physics.as_ref());
        let zero = |_: &State<M>| [0.0; M];
        for side in [Side::Left, Side::Right] {
            let (physics, condition, samples): (&dyn Physics<M>, _, Vec<State<M>>) = match side {
                Side::Left => (problem.physics.as_ref(), problem.left.as_ref(), field.interior()[..k].to_vec()),
                Side::Right => (&reflected, problem.right.as_ref(), field.interior().iter().rev().take(k).copied().collect()),
            };
            let input = LineInput { physics, condition, samples: &samples, dx: grid.dx(), coord: 0.0, side };
            let x_b = match side {
                Side::Left => grid.a,
                Side::Right => grid.b,
            };
            let derivs = self.sides[Self::index(side)]
                .compute(&input, &self.cfg, tableau, stage, t_n, dt, &zero)
                .map_err(|e| at_location(e, x_b))?
                .to_vec();
            fill_ghosts_taylor(&derivs, field, side);
        }
        Ok(())
    }
}

/// One-shot variant: builds a fresh state, runs stages `0..=stage` of the
/// boundary procedure on the supplied stage fields and returns the field of
/// the last stage with ghosts filled.
pub fn apply_boundary_step<const M: usize>(
    stage_fields: &[FieldArray<M>],
    problem: &Problem<M>,
    tableau: &RkTableau,
    cfg: &BoundaryConfig,
    t_n: f64,
    dt: f64,
) -> Result<FieldArray<M>> {
    let mut state = BoundaryState::new(*cfg);
    let mut last = None;
    for (stage, f) in stage_fields.iter().enumerate() {
        let mut f = f.clone();
        state.apply_boundary_step(&mut f, problem, tableau, stage, t_n, dt)?;
        last = Some(f);
    }
    last.ok_or(SolverError::MissingStage { stage: 0 })
}
