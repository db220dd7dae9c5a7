use cdt_topo::bench::{problem_cantilever, problem_mbb};
use cdt_topo::{run_simp, run_simp_with, SIMPConfig};

#[test]
fn every_iterate_meets_the_volume() {
    let p = problem_mbb(30, 10, 0.5).unwrap();
    let mut volumes = Vec::new();
    let r = run_simp_with(&p, &SIMPConfig::default(), |h| volumes.push(h.volume)).unwrap();
    for v in &volumes {
        assert!((v - 150.0).abs() <= 1e-9 * 150.0, "{v}");
    }
    assert!(r.final_rho.as_slice().iter().all(|&x| x > 0.0 && x <= 1.0));
    assert!(r.history.last().unwrap().grayness > 0.0);
}

#[test]
fn filter_removes_checkerboards() {
    let p = problem_cantilever(40, 20, 0.5).unwrap();
    let filtered = run_simp(&p, &SIMPConfig::default()).unwrap();
    let raw = run_simp(&p, &SIMPConfig { rmin: 0.0, ..Default::default() }).unwrap();
    let cb = |r: &cdt_topo::RunResult| cdt_topo::bench::checkerboard_metric(&p.mesh, r.final_rho.as_slice());
    assert!(cb(&filtered) <= cb(&raw));
}
