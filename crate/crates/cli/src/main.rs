use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ilwrk::boundary::BoundaryMethod;
use ilwrk::harness::{
    check_regressions, parse_config, run_cfl_sweep, run_comparison, run_convergence_study, run_many, RunReport, RunSpec,
};
use ilwrk::integrator::DtRule;
use ilwrk::problems::ProblemKind;
use ilwrk::reconstruction::{Extrapolation, ReconstructionConfig};
use ilwrk::tableau::Scheme;

#[derive(Parser)]
#[command(name = "ilwrk", version, about = "WENO + inverse Lax-Wendroff boundary experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single run (or one run per listed --nx).
    Run(Opts),
    /// Refinement ladder over the --nx list, with orders.
    Converge(Opts),
    /// L1 error against CFL for each listed scheme; reports critical CFLs.
    CflSweep(Opts),
    /// rk-stage and tan-shu ladders side by side.
    Compare(Opts),
}

#[derive(Args, Clone, Default)]
struct Opts {
    #[arg(long)]
    problem: Option<String>,
    /// Scheme name; a comma-separated list for cfl-sweep.
    #[arg(long)]
    scheme: Option<String>,
    /// rk-stage or tan-shu.
    #[arg(long)]
    boundary: Option<String>,
    /// 5 or 7-ideal.
    #[arg(long)]
    weno: Option<String>,
    /// Interior points per axis; comma-separated for ladders.
    #[arg(long)]
    nx: Option<String>,
    /// CFL number; comma-separated for cfl-sweep.
    #[arg(long)]
    cfl: Option<String>,
    /// dt = C dx^P instead of a CFL rule.
    #[arg(long, num_args = 2, value_names = ["P", "C"])]
    dt_power: Option<Vec<f64>>,
    #[arg(long)]
    tfinal: Option<f64>,
    /// lagrange or weno.
    #[arg(long)]
    extrapolation: Option<String>,
    #[arg(long)]
    taylor_depth: Option<usize>,
    /// CSV destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// key = value file with the flag names as keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Command-line values with the configuration file underneath.
struct Settings {
    opts: Opts,
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(opts: Opts) -> Result<Self> {
        let file = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        if let Some(bad) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            bail!("unknown configuration key `{bad}`");
        }
        Ok(Self { opts, file })
    }

    fn get(&self, key: &str, cli: Option<String>) -> Option<String> {
        cli.or_else(|| self.file.get(key).cloned())
    }

    fn list<T: std::str::FromStr>(&self, key: &str, cli: Option<String>) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key, cli) {
            None => Ok(None),
            Some(s) => s
                .split(',')
                .map(|p| p.trim().parse::<T>().map_err(|e| anyhow!("bad --{key} value `{p}`: {e}")))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    fn problem(&self) -> Result<ProblemKind> {
        let s = self.get("problem", self.opts.problem.clone()).ok_or_else(|| anyhow!("--problem is required"))?;
        Ok(s.parse()?)
    }

    fn schemes(&self) -> Result<Vec<Scheme>> {
        Ok(self.list::<Scheme>("scheme", self.opts.scheme.clone())?.unwrap_or_else(|| vec![Scheme::Ssp33]))
    }

    fn dt_rule(&self, cfl: f64) -> Result<DtRule> {
        let power = match &self.opts.dt_power {
            Some(v) => Some((v[0], v[1])),
            None => match self.file.get("dt-power") {
                Some(s) => {
                    let parts: Vec<f64> = s.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>()?;
                    match parts.as_slice() {
                        [p, c] => Some((*p, *c)),
                        _ => bail!("dt-power expects two numbers, got `{s}`"),
                    }
                }
                None => None,
            },
        };
        Ok(match power {
            Some((p, c)) => DtRule::DxPower { p, c },
            None => DtRule::Cfl(cfl),
        })
    }

    /// Base spec for the first listed scheme, nx and CFL.
    fn base(&self) -> Result<RunSpec> {
        let problem = self.problem()?;
        let mut spec = RunSpec::new(problem, self.schemes()?[0]);
        if let Some(b) = self.get("boundary", self.opts.boundary.clone()) {
            spec.boundary = BoundaryMethod::parse(&b)?;
        }
        if let Some(w) = self.get("weno", self.opts.weno.clone()) {
            spec.weno = ReconstructionConfig::parse(&w)?;
        }
        if let Some(e) = self.get("extrapolation", self.opts.extrapolation.clone()) {
            spec.extrapolation = Some(Extrapolation::parse(&e)?);
        }
        if let Some(k) = self.get("taylor-depth", self.opts.taylor_depth.map(|k| k.to_string())) {
            spec.taylor_depth = Some(k.parse()?);
        }
        if let Some(t) = self.get("tfinal", self.opts.tfinal.map(|t| t.to_string())) {
            spec.t_final = t.parse()?;
        }
        let cfl = self.cfls()?.map_or(0.6, |c| c[0]);
        spec.dt_rule = self.dt_rule(cfl)?;
        if let Some(nx) = self.nx_list()? {
            spec.nx = nx[0];
        }
        Ok(spec)
    }

    fn nx_list(&self) -> Result<Option<Vec<usize>>> {
        self.list("nx", self.opts.nx.clone())
    }

    fn cfls(&self) -> Result<Option<Vec<f64>>> {
        self.list("cfl", self.opts.cfl.clone())
    }

    fn ladder_dx(&self, base: &RunSpec) -> Result<Vec<f64>> {
        let (a, b) = base.problem.domain();
        let nx = self.nx_list()?.unwrap_or_else(|| {
            let n0 = base.problem.points_for_dx(if base.problem == ProblemKind::EulerSmooth { std::f64::consts::PI / 20.0 } else { (b - a) / 40.0 });
            (0..4).map(|k| n0 << k).collect()
        });
        Ok(nx.iter().map(|&n| (b - a) / n as f64).collect())
    }
}

const KNOWN_KEYS: [&str; 11] =
    ["problem", "scheme", "boundary", "weno", "nx", "cfl", "dt-power", "tfinal", "extrapolation", "taylor-depth", "out"];

fn emit(report: &RunReport, settings: &Settings) -> Result<()> {
    let out = settings.get("out", settings.opts.out.as_ref().map(|p| p.display().to_string()));
    match out {
        Some(path) => report.write_csv(File::create(&path).with_context(|| format!("creating {path}"))?)?,
        None => report.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

/// Prints regression checks; true when all matched ones pass.
fn regressions_pass(report: &RunReport) -> bool {
    let checks = check_regressions(report);
    let mut err = io::stderr().lock();
    for c in &checks {
        let _ = writeln!(
            err,
            "[{}] {} {} {} dx={:.6}: L1 {} vs published {:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.regression.group,
            c.regression.scheme.cli_name(),
            c.regression.boundary.label(),
            c.regression.dx,
            c.observed.map_or("blowup".to_string(), |e| format!("{e:.3e}")),
            c.regression.l1
        );
    }
    checks.iter().all(|c| c.passed)
}

fn execute(command: Command) -> Result<bool> {
    let (opts, kind) = match command {
        Command::Run(o) => (o, 0),
        Command::Converge(o) => (o, 1),
        Command::CflSweep(o) => (o, 2),
        Command::Compare(o) => (o, 3),
    };
    let settings = Settings::load(opts)?;
    let base = settings.base()?;
    let report = match kind {
        0 => {
            let nx = settings.nx_list()?.unwrap_or_else(|| vec![base.nx]);
            let specs: Vec<RunSpec> = nx.iter().map(|&n| RunSpec { nx: n, ..base.clone() }).collect();
            run_many(&specs)?.0
        }
        1 => run_convergence_study(&base, &settings.ladder_dx(&base)?)?,
        2 => {
            let grid = settings.cfls()?.unwrap_or_else(|| (1..=14).map(|k| 0.1 * k as f64).collect());
            let sweep = run_cfl_sweep(&base, &settings.schemes()?, &grid)?;
            for (s, c) in &sweep.critical {
                eprintln!("critical CFL {}: {}", s.cli_name(), c.map_or("none".into(), |c| format!("{c:.3}")));
            }
            sweep.report
        }
        _ => run_comparison(&base, &settings.ladder_dx(&base)?)?,
    };
    emit(&report, &settings)?;
    Ok(regressions_pass(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
