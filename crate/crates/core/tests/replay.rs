use ilwrk::boundary::BoundaryMethod;
use ilwrk::harness::{run, run_comparison, RunReport, RunSpec, Solution};
use ilwrk::problems::ProblemKind;
use ilwrk::tableau::Scheme;

fn bits(s: &Solution, components: usize) -> Vec<u64> {
    (0..components).flat_map(|c| s.component(c)).map(f64::to_bits).collect()
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    for (kind, m) in [(ProblemKind::EulerSmooth, 3), (ProblemKind::Vortex2d, 4)] {
        let spec = RunSpec { nx: 24, t_final: 0.2, ..RunSpec::new(kind, Scheme::Ssp54Star) };
        let a = run(&spec).unwrap();
        let b = run(&spec).unwrap();
        assert_eq!(bits(a.solution.as_ref().unwrap(), m), bits(b.solution.as_ref().unwrap(), m));
        assert_eq!(a.record.l1.map(f64::to_bits), b.record.l1.map(f64::to_bits));
    }
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_results() {
    let spec = RunSpec { nx: 24, t_final: 0.2, ..RunSpec::new(ProblemKind::Vortex2d, Scheme::Ssp33Star) };
    let on = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run(&spec).unwrap().solution.unwrap())
    };
    assert_eq!(bits(&on(1), 4), bits(&on(3), 4));
}

#[test]
fn report_round_trips_through_csv() {
    let base = RunSpec { t_final: 0.1, ..RunSpec::new(ProblemKind::AdvectSmooth, Scheme::Ssp33) };
    let report = run_comparison(&base, &[1.0 / 20.0, 1.0 / 40.0]).unwrap();
    assert_eq!(report.records.len(), 4);
    let text = report.to_csv_string().unwrap();
    let back = RunReport::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back, report);
    let fine = back.find(Scheme::Ssp33.cli_name(), BoundaryMethod::TanShu.label(), 1.0 / 40.0).unwrap();
    assert!(fine.order_l1.is_some());
}

#[test]
fn failed_runs_are_flagged_not_returned_as_errors() {
    // Far beyond any stable CFL.
    let spec = RunSpec {
        dt_rule: ilwrk::integrator::DtRule::Cfl(8.0),
        ..RunSpec::new(ProblemKind::EulerSmooth, Scheme::Ssp33)
    };
    let out = run(&spec).unwrap();
    assert!(out.record.blowup);
    assert!(out.solution.is_none() && out.failure.is_some());
}
