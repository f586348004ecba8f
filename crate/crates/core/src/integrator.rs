//! Shu-Osher Runge-Kutta time stepping with per-stage boundary fills.
//!
//! Stage `i` is `sum_k alpha_ik U^(k) + dt beta_ik Op(U^(k))` where `Op` is
//! the upwind operator `L` for `beta_ik > 0` and the downwind `L~` for
//! `beta_ik < 0`. Operators are evaluated lazily and cached per stage.

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryConfig, BoundaryState};
use crate::error::{Result, SolverError};
use crate::flux::{global_alpha, semidiscrete, Bias};
use crate::linalg::{axpy, State};
use crate::mesh::{build_grid, FieldArray};
use crate::problems::Problem;
use crate::reconstruction::ReconstructionConfig;
use crate::tableau::RkTableau;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DtRule {
    /// `dt = cfl dx / alpha`.
    Cfl(f64),
    /// `dt = c dx^p`.
    DxPower { p: f64, c: f64 },
}

impl DtRule {
    pub fn dt(&self, dx: f64, alpha: f64) -> f64 {
        match *self {
            DtRule::Cfl(cfl) => cfl * dx / alpha,
            DtRule::DxPower { p, c } => c * dx.powf(p),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            DtRule::Cfl(_) => "cfl".to_string(),
            DtRule::DxPower { p, c } => format!("{c}*dx^{p}"),
        }
    }

    pub fn cfl(&self) -> Option<f64> {
        match *self {
            DtRule::Cfl(c) => Some(c),
            DtRule::DxPower { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DtRule::Cfl(c) => c > 0.0 && c.is_finite(),
            DtRule::DxPower { p, c } => p > 0.0 && c > 0.0 && p.is_finite() && c.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(SolverError::Config(format!("invalid time-step rule {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepConfig {
    pub dt_rule: DtRule,
    pub t_final: f64,
    pub boundary: BoundaryConfig,
    pub reconstruction: ReconstructionConfig,
    /// Record which operator each stage consumed.
    pub trace: bool,
}

impl StepConfig {
    pub fn new(dt_rule: DtRule, t_final: f64, boundary: BoundaryConfig, reconstruction: ReconstructionConfig) -> Self {
        Self { dt_rule, t_final, boundary, reconstruction, trace: false }
    }
}

/// Stage `stage` consumed `Op(U^(source))` with the given bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorCall {
    pub step: usize,
    pub stage: usize,
    pub source: usize,
    pub bias: Bias,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntegrationReport {
    pub steps: usize,
    pub final_time: f64,
    /// Global wave speed used in each step.
    pub alphas: Vec<f64>,
    pub dts: Vec<f64>,
    /// Extremes of each component over all time levels.
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub trace: Vec<OperatorCall>,
}

impl IntegrationReport {
    fn track<const M: usize>(&mut self, field: &FieldArray<M>) {
        if self.min.is_empty() {
            self.min = vec![f64::INFINITY; M];
            self.max = vec![f64::NEG_INFINITY; M];
        }
        for u in field.interior() {
            for c in 0..M {
                self.min[c] = self.min[c].min(u[c]);
                self.max[c] = self.max[c].max(u[c]);
            }
        }
    }
}

/// Field on a grid sized for the reconstruction, holding the initial data.
pub fn initial_field<const M: usize>(problem: &Problem<M>, n: usize, recon: &ReconstructionConfig) -> Result<FieldArray<M>> {
    let (a, b) = problem.domain;
    let grid = build_grid(a, b, n, recon.half_width().max(3))?;
    Ok(FieldArray::from_fn(grid, |x| (problem.initial)(x)))
}

/// Exact solution sampled on the interior of `grid`.
pub fn exact_field<const M: usize>(problem: &Problem<M>, grid: crate::mesh::Grid1D, t: f64) -> Result<FieldArray<M>> {
    let values: Vec<State<M>> = grid.interior_x().map(|x| problem.exact(t, x)).collect::<Result<_>>()?;
    FieldArray::from_interior(grid, &values)
}

fn blowup_check<const M: usize>(field: &FieldArray<M>, time: f64) -> Result<()> {
    match field.first_nonfinite() {
        Some(j) => Err(SolverError::Blowup { time, x: field.grid().x(j) }),
        None => Ok(()),
    }
}

/// Advances one problem through successive RK steps, owning the boundary
/// stage data.
pub struct Stepper<'a, const M: usize> {
    problem: &'a Problem<M>,
    tableau: &'a RkTableau,
    cfg: StepConfig,
    boundary: BoundaryState<M>,
    steps_taken: usize,
    trace: Vec<OperatorCall>,
}

impl<'a, const M: usize> Stepper<'a, M> {
    pub fn new(problem: &'a Problem<M>, tableau: &'a RkTableau, cfg: StepConfig) -> Result<Self> {
        cfg.reconstruction.validate()?;
        cfg.dt_rule.validate()?;
        Ok(Self { problem, tableau, cfg, boundary: BoundaryState::new(cfg.boundary), steps_taken: 0, trace: Vec::new() })
    }

    pub fn boundary(&self) -> &BoundaryState<M> {
        &self.boundary
    }

    pub fn take_trace(&mut self) -> Vec<OperatorCall> {
        std::mem::take(&mut self.trace)
    }

    /// One step from `t_n`; `observer(stage, field)` sees every stage after
    /// its ghost fill.
    pub fn step_observed(
        &mut self,
        field: &FieldArray<M>,
        t_n: f64,
        dt: f64,
        alpha: f64,
        observer: &mut dyn FnMut(usize, &FieldArray<M>),
    ) -> Result<FieldArray<M>> {
        if !(dt > 0.0) {
            return Err(SolverError::Config(format!("time step must be positive, got {dt}")));
        }
        let s = self.tableau.stages;
        let physics = self.problem.physics.as_ref();
        let recon = self.cfg.reconstruction;
        let mut stages: Vec<FieldArray<M>> = Vec::with_capacity(s);
        let mut u0 = field.clone();
        self.boundary.apply_boundary_step(&mut u0, self.problem, self.tableau, 0, t_n, dt)?;
        observer(0, &u0);
        stages.push(u0);
        let mut cache: Vec<[Option<FieldArray<M>>; 2]> = vec![[None, None]; s];
        for i in 1..=s {
            let mut next = FieldArray::zeros(*field.grid());
            for k in 0..i {
                let (a, b) = (self.tableau.alpha(i, k), self.tableau.beta(i, k));
                if a != 0.0 {
                    for (out, src) in next.interior_mut().iter_mut().zip(stages[k].interior()) {
                        axpy(out, a, src);
                    }
                }
                if b != 0.0 {
                    let (bias, slot) = if b > 0.0 { (Bias::Upwind, 0) } else { (Bias::Downwind, 1) };
                    if cache[k][slot].is_none() {
                        cache[k][slot] = Some(semidiscrete(&stages[k], physics, alpha, &recon, bias)?);
                    }
                    if self.cfg.trace {
                        self.trace.push(OperatorCall { step: self.steps_taken, stage: i, source: k, bias });
                    }
                    let op = cache[k][slot].as_ref().expect("cached above");
                    for (out, src) in next.interior_mut().iter_mut().zip(op.interior()) {
                        axpy(out, dt * b, src);
                    }
                }
            }
            blowup_check(&next, t_n + dt)?;
            if i < s {
                self.boundary.apply_boundary_step(&mut next, self.problem, self.tableau, i, t_n, dt)?;
                observer(i, &next);
            }
            stages.push(next);
        }
        self.steps_taken += 1;
        Ok(stages.pop().expect("at least one stage"))
    }

    pub fn step(&mut self, field: &FieldArray<M>, t_n: f64, dt: f64, alpha: f64) -> Result<FieldArray<M>> {
        self.step_observed(field, t_n, dt, alpha, &mut |_, _| {})
    }

    /// Integrates from `t = 0` to `cfg.t_final`, landing exactly on it.
    pub fn integrate(&mut self, field: &FieldArray<M>) -> Result<(FieldArray<M>, IntegrationReport)> {
        let t_final = self.cfg.t_final;
        if !(t_final > 0.0) {
            return Err(SolverError::Config(format!("final time must be positive, got {t_final}")));
        }
        let physics = self.problem.physics.as_ref();
        let dx = field.grid().dx();
        let mut report = IntegrationReport::default();
        report.track(field);
        let mut u = field.clone();
        let mut t = 0.0;
        while t < t_final {
            let alpha = global_alpha(&u, physics)?;
            let mut dt = self.cfg.dt_rule.dt(dx, alpha);
            let last = t + dt >= t_final * (1.0 - 1e-14);
            if last {
                dt = t_final - t;
            }
            u = self.step(&u, t, dt, alpha)?;
            t = if last { t_final } else { t + dt };
            report.steps += 1;
            report.alphas.push(alpha);
            report.dts.push(dt);
            report.track(&u);
        }
        report.final_time = t;
        report.trace = self.take_trace();
        Ok((u, report))
    }
}

/// One RK step with a fresh boundary state and `alpha` taken from `field`.
pub fn rk_step<const M: usize>(
    field: &FieldArray<M>,
    problem: &Problem<M>,
    tableau: &RkTableau,
    t_n: f64,
    dt: f64,
    cfg: &StepConfig,
) -> Result<FieldArray<M>> {
    let alpha = global_alpha(field, problem.physics.as_ref())?;
    Stepper::new(problem, tableau, *cfg)?.step(field, t_n, dt, alpha)
}

pub fn integrate<const M: usize>(
    field: &FieldArray<M>,
    problem: &Problem<M>,
    tableau: &RkTableau,
    cfg: &StepConfig,
) -> Result<(FieldArray<M>, IntegrationReport)> {
    Stepper::new(problem, tableau, *cfg)?.integrate(field)
}
