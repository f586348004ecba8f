//! Experiment driver: single runs, refinement ladders, CFL sweeps and
//! boundary-method comparisons, with CSV reports and pinned reference
//! errors.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryConfig, BoundaryMethod};
use crate::error::{Result, SolverError};
use crate::exec;
use crate::integrator::{exact_field, initial_field, integrate, DtRule, IntegrationReport, StepConfig};
use crate::linalg::State;
use crate::mesh::FieldArray;
use crate::physics::Euler1d;
use crate::problems::{
    make_blast_wave, make_burgers, make_euler2d_vortex, make_euler_smooth, make_linear_advection, AdvectionVariant, Problem,
    ProblemKind,
};
use crate::reconstruction::{Extrapolation, ReconstructionConfig};
use crate::solver2d::{initial_field_2d, integrate_2d, Field2D};
use crate::tableau::Scheme;

/// `(L1, Linf)` of `numerical - exact`. L1 is the mean absolute error over
/// points and components, i.e. `dx / |domain| * sum_j |e_j|`.
pub fn error_norms<const M: usize>(numerical: &[State<M>], exact: &[State<M>]) -> (f64, f64) {
    if numerical.is_empty() || M == 0 {
        return (0.0, 0.0);
    }
    let mut sum = 0.0;
    let mut max = 0.0_f64;
    for (u, e) in numerical.iter().zip(exact) {
        for c in 0..M {
            let d = (u[c] - e[c]).abs();
            sum += d;
            max = max.max(d);
        }
    }
    (sum / (numerical.len() * M) as f64, max)
}

/// `ln(e_coarse / e_fine) / ln(r)`; `None` for non-positive errors or `r <= 1`.
pub fn convergence_order(e_coarse: f64, e_fine: f64, r: f64) -> Option<f64> {
    if e_coarse > 0.0 && e_fine > 0.0 && r > 1.0 && e_coarse.is_finite() && e_fine.is_finite() {
        Some((e_coarse / e_fine).ln() / r.ln())
    } else {
        None
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub scheme: String,
    pub boundary: String,
    pub weno: String,
    pub dx: f64,
    pub dt_rule: String,
    pub cfl: Option<f64>,
    pub t_final: f64,
    pub l1: Option<f64>,
    pub linf: Option<f64>,
    pub order_l1: Option<f64>,
    pub order_linf: Option<f64>,
    pub steps: usize,
    pub wall_ms: f64,
    pub blowup: bool,
}

impl RunRecord {
    /// Everything except `dx`; orders are only taken within one key.
    fn ladder_key(&self) -> (String, String, String, String, String, String, String) {
        (
            self.problem.clone(),
            self.scheme.clone(),
            self.boundary.clone(),
            self.weno.clone(),
            self.dt_rule.clone(),
            format!("{:?}", self.cfl),
            format!("{}", self.t_final),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub records: Vec<RunRecord>,
}

impl RunReport {
    pub fn new(mut records: Vec<RunRecord>) -> Self {
        records.sort_by(|a, b| a.ladder_key().cmp(&b.ladder_key()).then(b.dx.total_cmp(&a.dx)));
        let mut report = Self { records };
        report.fill_orders();
        report
    }

    /// Orders between consecutive refinements of identical configurations.
    pub fn fill_orders(&mut self) {
        for r in &mut self.records {
            r.order_l1 = None;
            r.order_linf = None;
        }
        for i in 1..self.records.len() {
            let (prev, cur) = (&self.records[i - 1], &self.records[i]);
            if prev.ladder_key() != cur.ladder_key() || !(prev.dx > cur.dx) {
                continue;
            }
            let r = prev.dx / cur.dx;
            let o1 = prev.l1.zip(cur.l1).and_then(|(c, f)| convergence_order(c, f, r));
            let oi = prev.linf.zip(cur.linf).and_then(|(c, f)| convergence_order(c, f, r));
            self.records[i].order_l1 = o1;
            self.records[i].order_linf = oi;
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r).map_err(|e| SolverError::Csv(e.to_string()))?;
        }
        if self.records.is_empty() {
            w.write_record(CSV_COLUMNS).map_err(|e| SolverError::Csv(e.to_string()))?;
        }
        w.flush().map_err(|e| SolverError::Csv(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| SolverError::Csv(e.to_string()))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let records = r.deserialize().collect::<std::result::Result<Vec<RunRecord>, _>>().map_err(|e| SolverError::Csv(e.to_string()))?;
        Ok(Self { records })
    }

    pub fn find(&self, scheme: &str, boundary: &str, dx: f64) -> Option<&RunRecord> {
        self.records.iter().find(|r| r.scheme == scheme && r.boundary == boundary && same_dx(r.dx, dx))
    }
}

pub const CSV_COLUMNS: [&str; 15] = [
    "problem", "scheme", "boundary", "weno", "dx", "dt_rule", "cfl", "t_final", "l1", "linf", "order_l1", "order_linf", "steps",
    "wall_ms", "blowup",
];

fn same_dx(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

/// Everything needed for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub problem: ProblemKind,
    pub scheme: Scheme,
    pub boundary: BoundaryMethod,
    pub weno: ReconstructionConfig,
    pub nx: usize,
    pub dt_rule: DtRule,
    pub t_final: f64,
    /// Overrides the problem's extrapolation.
    pub extrapolation: Option<Extrapolation>,
    /// Overrides the problem's (or the scheme's) Taylor depth.
    pub taylor_depth: Option<usize>,
    pub vortex_eps: f64,
}

impl RunSpec {
    pub fn new(problem: ProblemKind, scheme: Scheme) -> Self {
        Self {
            problem,
            scheme,
            boundary: BoundaryMethod::RkStage,
            weno: ReconstructionConfig::weno5(),
            nx: problem.points_for_dx(1.0 / 80.0),
            dt_rule: DtRule::Cfl(0.6),
            t_final: problem.default_t_final(),
            extrapolation: None,
            taylor_depth: None,
            vortex_eps: 1.0,
        }
    }

    pub fn with_dx(mut self, dx: f64) -> Self {
        self.nx = self.problem.points_for_dx(dx);
        self
    }

    pub fn dx(&self) -> f64 {
        let (a, b) = self.problem.domain();
        (b - a) / self.nx as f64
    }

    fn boundary_config(&self, extrapolation: Extrapolation, depth: Option<usize>) -> BoundaryConfig {
        BoundaryConfig {
            method: self.boundary,
            extrapolation: self.extrapolation.unwrap_or(extrapolation),
            taylor_depth: self.taylor_depth.or(depth).unwrap_or(self.weno.order),
            ..BoundaryConfig::default()
        }
    }

    fn step_config(&self, boundary: BoundaryConfig) -> StepConfig {
        StepConfig::new(self.dt_rule, self.t_final, boundary, self.weno)
    }

    fn blank_record(&self) -> RunRecord {
        RunRecord {
            problem: self.problem.cli_name().into(),
            scheme: self.scheme.cli_name().into(),
            boundary: self.boundary.label().into(),
            weno: self.weno.label(),
            dx: self.dx(),
            dt_rule: self.dt_rule.label(),
            cfl: self.dt_rule.cfl(),
            t_final: self.t_final,
            l1: None,
            linf: None,
            order_l1: None,
            order_linf: None,
            steps: 0,
            wall_ms: 0.0,
            blowup: false,
        }
    }
}

/// Final numerical solution of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Scalar(FieldArray<1>),
    Euler(FieldArray<3>),
    Plane(Field2D<4>),
}

impl Solution {
    /// Interior values of component `c` (row by row in 2D).
    pub fn component(&self, c: usize) -> Vec<f64> {
        match self {
            Solution::Scalar(f) => f.interior().iter().map(|u| u[c]).collect(),
            Solution::Euler(f) => f.interior().iter().map(|u| u[c]).collect(),
            Solution::Plane(f) => f.interior().iter().map(|u| u[c]).collect(),
        }
    }

    /// Interior pressures of a 1D Euler solution.
    pub fn pressure(&self) -> Option<Vec<f64>> {
        match self {
            Solution::Euler(f) => {
                let e = Euler1d::default();
                Some(f.interior().iter().map(|u| e.pressure(u)).collect())
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub solution: Option<Solution>,
    pub report: Option<IntegrationReport>,
    /// The numerical failure behind `record.blowup`.
    pub failure: Option<SolverError>,
}

fn run_1d<const M: usize>(
    spec: &RunSpec,
    problem: &Problem<M>,
    wrap: fn(FieldArray<M>) -> Solution,
) -> Result<(Option<(Solution, IntegrationReport)>, Option<(f64, f64)>, Option<SolverError>)> {
    let cfg = spec.step_config(spec.boundary_config(problem.extrapolation, problem.taylor_depth));
    let u0 = initial_field(problem, spec.nx, &spec.weno)?;
    match integrate(&u0, problem, &spec.scheme.tableau(), &cfg) {
        Ok((u, rep)) => {
            let norms = if problem.has_exact() {
                let ex = exact_field(problem, *u.grid(), rep.final_time)?;
                Some(error_norms(u.interior(), ex.interior()))
            } else {
                None
            };
            Ok((Some((wrap(u), rep)), norms, None))
        }
        Err(e) if e.is_numerical_failure() => Ok((None, None, Some(e))),
        Err(e) => Err(e),
    }
}

/// Executes one run. Numerical failures are reported through the
/// `blowup` flag; configuration errors are returned.
pub fn run(spec: &RunSpec) -> Result<RunOutcome> {
    let mut record = spec.blank_record();
    if !(spec.t_final > 0.0) {
        return Err(SolverError::Config(format!("final time must be positive, got {}", spec.t_final)));
    }
    let start = Instant::now();
    let (result, norms, failure) = match spec.problem {
        ProblemKind::AdvectSmooth | ProblemKind::AdvectStep => {
            let variant = if spec.problem == ProblemKind::AdvectSmooth { AdvectionVariant::Smooth } else { AdvectionVariant::Step };
            run_1d(spec, &make_linear_advection(variant), Solution::Scalar)?
        }
        ProblemKind::Burgers => run_1d(spec, &make_burgers(), Solution::Scalar)?,
        ProblemKind::EulerSmooth => run_1d(spec, &make_euler_smooth(), Solution::Euler)?,
        ProblemKind::Blast => run_1d(spec, &make_blast_wave(), Solution::Euler)?,
        ProblemKind::Vortex2d => {
            let problem = make_euler2d_vortex(spec.vortex_eps);
            let cfg = spec.step_config(spec.boundary_config(Extrapolation::Lagrange, None));
            let u0 = initial_field_2d(&problem, spec.nx, &spec.weno)?;
            match integrate_2d(&u0, &problem, &spec.scheme.tableau(), &cfg) {
                Ok((u, rep)) => {
                    let g = *u.grid();
                    let n = g.n() as isize;
                    let exact: Vec<State<4>> = (0..n)
                        .flat_map(|j| (0..n).map(move |i| (i, j)))
                        .map(|(i, j)| (problem.exact)(rep.final_time, g.coord(i), g.coord(j)))
                        .collect();
                    let norms = error_norms(&u.interior(), &exact);
                    (Some((Solution::Plane(u), rep)), Some(norms), None)
                }
                Err(e) if e.is_numerical_failure() => (None, None, Some(e)),
                Err(e) => return Err(e),
            }
        }
    };
    record.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    record.blowup = failure.is_some();
    if let Some((l1, linf)) = norms {
        record.l1 = Some(l1);
        record.linf = Some(linf);
    }
    let (solution, report) = match result {
        Some((s, r)) => {
            record.steps = r.steps;
            (Some(s), Some(r))
        }
        None => (None, None),
    };
    Ok(RunOutcome { record, solution, report, failure })
}

/// Runs all specs (in parallel when enabled) and assembles a sorted report.
pub fn run_many(specs: &[RunSpec]) -> Result<(RunReport, Vec<RunOutcome>)> {
    let outcomes = exec::try_map_range(specs.len(), |i| run(&specs[i]))?;
    let report = RunReport::new(outcomes.iter().map(|o| o.record.clone()).collect());
    Ok((report, outcomes))
}

/// Refinement ladder of `base` over `dx_list`.
pub fn run_convergence_study(base: &RunSpec, dx_list: &[f64]) -> Result<RunReport> {
    let specs: Vec<RunSpec> = dx_list.iter().map(|&dx| base.clone().with_dx(dx)).collect();
    Ok(run_many(&specs)?.0)
}

/// Paired rk-stage / tan-shu ladders.
pub fn run_comparison(base: &RunSpec, dx_list: &[f64]) -> Result<RunReport> {
    let mut specs = Vec::new();
    for method in [BoundaryMethod::RkStage, BoundaryMethod::TanShu] {
        for &dx in dx_list {
            specs.push(RunSpec { boundary: method, ..base.clone().with_dx(dx) });
        }
    }
    Ok(run_many(&specs)?.0)
}

pub const CFL_BASELINE: f64 = 0.3;
pub const CFL_GROWTH_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CflSweep {
    pub report: RunReport,
    /// Largest CFL whose error is within `CFL_GROWTH_FACTOR` of the
    /// baseline run, per scheme.
    pub critical: Vec<(Scheme, Option<f64>)>,
}

/// Error versus CFL for each scheme. The grid always includes the baseline.
pub fn run_cfl_sweep(base: &RunSpec, schemes: &[Scheme], cfl_grid: &[f64]) -> Result<CflSweep> {
    let mut grid: Vec<f64> = cfl_grid.to_vec();
    if !grid.iter().any(|c| (c - CFL_BASELINE).abs() < 1e-12) {
        grid.push(CFL_BASELINE);
    }
    grid.sort_by(f64::total_cmp);
    let mut specs = Vec::new();
    for &scheme in schemes {
        for &cfl in &grid {
            specs.push(RunSpec { scheme, dt_rule: DtRule::Cfl(cfl), ..base.clone() });
        }
    }
    let (report, outcomes) = run_many(&specs)?;
    let critical = schemes
        .iter()
        .map(|&s| {
            let runs: Vec<&RunRecord> = outcomes.iter().map(|o| &o.record).filter(|r| r.scheme == s.cli_name()).collect();
            (s, critical_cfl(&runs))
        })
        .collect();
    Ok(CflSweep { report, critical })
}

/// Largest CFL whose L1 error is at most `CFL_GROWTH_FACTOR` times the
/// error at `CFL_BASELINE`.
pub fn critical_cfl(runs: &[&RunRecord]) -> Option<f64> {
    let base = runs.iter().find(|r| r.cfl.is_some_and(|c| (c - CFL_BASELINE).abs() < 1e-12))?.l1?;
    runs.iter()
        .filter(|r| !r.blowup && r.l1.is_some_and(|e| e.is_finite() && e <= CFL_GROWTH_FACTOR * base))
        .filter_map(|r| r.cfl)
        .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.max(c))))
}

/// Published L1 error for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regression {
    pub group: &'static str,
    pub problem: ProblemKind,
    pub scheme: Scheme,
    pub boundary: BoundaryMethod,
    pub seventh_order: bool,
    pub dx: f64,
    pub dt_rule: DtRule,
    pub l1: f64,
}

/// Allowed ratio between observed and published errors.
pub const REGRESSION_FACTOR: f64 = 2.0;

impl Regression {
    pub fn matches(&self, r: &RunRecord) -> bool {
        let weno = if self.seventh_order { ReconstructionConfig::weno7_ideal() } else { ReconstructionConfig::weno5() };
        r.problem == self.problem.cli_name()
            && r.scheme == self.scheme.cli_name()
            && r.boundary == self.boundary.label()
            && r.weno == weno.label()
            && r.dt_rule == self.dt_rule.label()
            && r.cfl == self.dt_rule.cfl()
            && r.t_final == self.problem.default_t_final()
            && same_dx(r.dx, self.dx)
    }

    pub fn spec(&self) -> RunSpec {
        RunSpec {
            boundary: self.boundary,
            weno: if self.seventh_order { ReconstructionConfig::weno7_ideal() } else { ReconstructionConfig::weno5() },
            dt_rule: self.dt_rule,
            ..RunSpec::new(self.problem, self.scheme).with_dx(self.dx)
        }
    }
}

fn baseline_rows(
    out: &mut Vec<Regression>,
    group: &'static str,
    problem: ProblemKind,
    scheme: Scheme,
    boundary: BoundaryMethod,
    seventh_order: bool,
    dt_rule: DtRule,
    unit: f64,
    rows: &[(f64, f64)],
) {
    for &(div, l1) in rows {
        out.push(Regression { group, problem, scheme, boundary, seventh_order, dx: unit / div, dt_rule, l1 });
    }
}

/// Published L1 errors used as regression baselines. The vortex errors are
/// left out: its magnitudes track the density error alone, not the
/// component average reported here.
pub fn regressions() -> Vec<Regression> {
    use std::f64::consts::PI;
    let cfl = DtRule::Cfl(0.6);
    let pow = DtRule::DxPower { p: 7.0 / 3.0, c: 1.0 };
    let (rk, ts) = (BoundaryMethod::RkStage, BoundaryMethod::TanShu);
    let (adv, eul) = (ProblemKind::AdvectSmooth, ProblemKind::EulerSmooth);
    let mut v = Vec::new();
    let g2 = "advect-smooth WENO5";
    baseline_rows(&mut v, g2, adv, Scheme::Ssp33, rk, false, cfl, 1.0, &[(20.0, 3.45e-5), (40.0, 3.51e-6), (80.0, 4.16e-7), (160.0, 5.12e-8), (320.0, 6.39e-9)]);
    baseline_rows(&mut v, g2, adv, Scheme::Ssp33Star, rk, false, cfl, 1.0, &[(20.0, 3.83e-5), (40.0, 3.63e-6), (80.0, 4.20e-7), (160.0, 5.14e-8), (320.0, 6.39e-9)]);
    baseline_rows(&mut v, g2, adv, Scheme::Ssp54, rk, false, cfl, 1.0, &[(20.0, 1.02e-5), (40.0, 3.23e-7), (80.0, 1.02e-8), (160.0, 3.28e-10), (320.0, 1.09e-11)]);
    baseline_rows(&mut v, g2, adv, Scheme::Ssp54Star, rk, false, cfl, 1.0, &[(20.0, 1.12e-5), (40.0, 3.56e-7), (80.0, 1.13e-8), (160.0, 3.64e-10), (320.0, 1.21e-11)]);
    let g3 = "advect-smooth WENO7";
    baseline_rows(&mut v, g3, adv, Scheme::Ssp33, rk, true, pow, 1.0, &[(10.0, 1.10e-5), (20.0, 9.33e-8), (40.0, 9.54e-10), (80.0, 7.67e-12)]);
    baseline_rows(&mut v, g3, adv, Scheme::Ssp33, ts, true, pow, 1.0, &[(10.0, 1.17e-5), (20.0, 9.53e-8), (40.0, 7.64e-10), (80.0, 7.81e-12)]);
    let g4 = "euler-smooth WENO5";
    baseline_rows(&mut v, g4, eul, Scheme::Ssp33, rk, false, cfl, PI, &[(20.0, 5.56e-6), (40.0, 1.89e-7), (80.0, 8.85e-9), (160.0, 6.42e-10), (320.0, 6.57e-11), (640.0, 7.75e-12)]);
    baseline_rows(&mut v, g4, eul, Scheme::Ssp33Star, rk, false, cfl, PI, &[(20.0, 8.33e-6), (40.0, 2.75e-7), (80.0, 1.15e-8), (160.0, 7.26e-10), (320.0, 6.82e-11), (640.0, 7.82e-12)]);
    baseline_rows(&mut v, g4, eul, Scheme::Ssp54, rk, false, cfl, PI, &[(20.0, 5.33e-6), (40.0, 1.59e-7), (80.0, 5.00e-9), (160.0, 1.56e-10), (320.0, 5.01e-12)]);
    baseline_rows(&mut v, g4, eul, Scheme::Ssp54Star, rk, false, cfl, PI, &[(20.0, 7.02e-6), (40.0, 2.11e-7), (80.0, 6.61e-9), (160.0, 2.07e-10), (320.0, 6.33e-12)]);
    let g5 = "euler-smooth WENO7";
    baseline_rows(&mut v, g5, eul, Scheme::Ssp33, rk, true, pow, PI, &[(10.0, 5.09e-6), (20.0, 4.36e-8), (40.0, 3.34e-10), (80.0, 3.54e-12)]);
    baseline_rows(&mut v, g5, eul, Scheme::Ssp33, ts, true, pow, PI, &[(10.0, 1.41e-5), (20.0, 2.16e-7), (40.0, 4.06e-9), (80.0, 7.62e-11)]);
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionCheck {
    pub regression: Regression,
    pub observed: Option<f64>,
    pub passed: bool,
}

/// Compares every record that matches a published configuration.
pub fn check_regressions(report: &RunReport) -> Vec<RegressionCheck> {
    let baselines = regressions();
    let mut out = Vec::new();
    for r in &report.records {
        for reg in baselines.iter().filter(|g| g.matches(r)) {
            let passed = r.l1.is_some_and(|e| e <= REGRESSION_FACTOR * reg.l1 && e >= reg.l1 / REGRESSION_FACTOR);
            out.push(RegressionCheck { regression: *reg, observed: r.l1, passed });
        }
    }
    out
}

/// Flat `key = value` configuration; `#` starts a comment. Keys are the
/// command-line flag names without dashes.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| SolverError::Config(format!("line {}: expected key = value, got `{line}`", no + 1)))?;
        let key = k.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(SolverError::Config(format!("line {}: empty key", no + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}
