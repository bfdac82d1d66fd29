mod common;

use bse_lanczos::matgen::{gen_pentadiag, gen_random_definite, PentadiagSpec};
use bse_lanczos::oracle::{self, C64};
use bse_lanczos::*;
use common::*;

/// Decoupled 2×2 blocks: `λ_i = √(r_i² − c_i²)`.
fn diagonal_op(r: &[f64], c: &[f64]) -> BseOperator<f64> {
    let n = r.len();
    let rt: Vec<_> = (0..n).map(|i| (i, i, C64::new(r[i], 0.0))).collect();
    let ct: Vec<_> = (0..n).map(|i| (i, i, C64::new(c[i], 0.0))).collect();
    BseOperator::new(
        Block::Sparse(CsrBlock::from_triplets(n, &rt).unwrap()),
        Block::Sparse(CsrBlock::from_triplets(n, &ct).unwrap()),
    )
    .unwrap()
}

#[test]
fn invariant_start_vector_recovers_through_breakdown() {
    let r = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let c = [0.5, 0.3, 0.2, 0.1, 0.4, 0.6];
    let op = diagonal_op(&r, &c);
    let mut exact: Vec<f64> = r.iter().zip(&c).map(|(a, b)| (a * a - b * b).sqrt()).collect();
    exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut e1 = vec![C64::new(0.0, 0.0); 6];
    e1[0] = C64::new(1.0, 0.0);
    let mut cfg = SolverConfig::with_nev(4);
    cfg.init = InitialVector::User(e1);
    for (kind, res) in run_all(&op, &cfg) {
        assert_eq!(res.status, Status::Converged, "{}", kind.name());
        for (l, e) in res.values.iter().zip(&exact) {
            assert!((l - e).abs() <= 1e-12 * e, "{}: {l} vs {e}", kind.name());
        }
        assert!(res.max_relative_residual(&op) <= 1e-12);
    }
}

#[test]
fn restart_cap_returns_partial_results() {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(400)).unwrap();
    let mut cfg = SolverConfig::with_nev(40);
    cfg.ncv = Some(30);
    cfg.max_restarts = 2;
    for kind in SolverKind::ALL {
        let res = solve(&op, kind, &cfg).unwrap();
        assert_eq!(res.status, Status::NotConverged);
        assert_eq!(res.restarts, 2);
        assert_eq!(res.pairs(), 20);
        assert!(res.nconv < 20);
        assert_eq!(res.progress.len(), 2);
    }
}

#[test]
fn progress_is_recorded_per_restart() {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(300)).unwrap();
    let res = solve(&op, SolverKind::Shao, &SolverConfig::with_nev(10)).unwrap();
    assert_eq!(res.progress.len(), res.restarts);
    for (i, p) in res.progress.iter().enumerate() {
        assert_eq!(p.restart, i + 1);
        assert!(p.defect_after_extend.is_none());
    }
    assert_eq!(res.progress.last().unwrap().nconv, res.nconv);
}

#[test]
fn same_seed_same_result() {
    let op: BseOperator<f64> = gen_random_definite(30, 2, 0.7).unwrap();
    let cfg = SolverConfig::with_nev(6);
    for kind in SolverKind::ALL {
        let a = solve(&op, kind, &cfg).unwrap();
        let b = solve(&op, kind, &cfg).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.restarts, b.restarts);
    }
}

#[test]
fn absolute_criterion_is_accepted() {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(200)).unwrap();
    let mut cfg = SolverConfig::with_nev(8);
    cfg.criterion = Criterion::Absolute;
    for (kind, res) in run_all(&op, &cfg) {
        assert!(res.b.iter().all(|b| b.abs() < 1e-8), "{}", kind.name());
    }
}

#[test]
fn single_precision_run() {
    let op64: BseOperator<f64> = gen_random_definite(32, 4, 0.7).unwrap();
    let reference = oracle::decompose(&op64).unwrap().positive_values();
    let op = op64.cast::<f32>();
    let mut cfg = SolverConfig::with_nev(8);
    cfg.tol = 1e-5;
    for kind in SolverKind::ALL {
        let res = solve(&op, kind, &cfg).unwrap();
        assert_eq!(res.status, Status::Converged);
        for (l, e) in res.values.iter().zip(&reference) {
            assert!(((*l as f64) - e).abs() <= 1e-4 * e, "{}: {l} vs {e}", kind.name());
        }
        assert!(res.max_relative_residual(&op) <= 1e-4);
    }
}

#[test]
fn bad_configurations_are_rejected() {
    let op: BseOperator<f64> = gen_random_definite(10, 1, 0.5).unwrap();
    let mut cfg = SolverConfig::with_nev(3);
    assert!(matches!(solve(&op, SolverKind::Shao, &cfg), Err(BseError::InvalidConfig(_))));
    cfg.nev = 4;
    cfg.ncv = Some(11);
    assert!(matches!(solve(&op, SolverKind::Gruning, &cfg), Err(BseError::InvalidConfig(_))));
    cfg.ncv = None;
    cfg.init = InitialVector::User(vec![C64::new(1.0, 0.0); 3]);
    assert!(solve(&op, SolverKind::Projected, &cfg).is_err());
}

#[test]
fn indefinite_instance_is_reported() {
    let op: BseOperator<f64> = matgen::gen_random_bse(24, 6, 4.0).unwrap();
    for kind in SolverKind::ALL {
        match solve(&op, kind, &SolverConfig::with_nev(4)) {
            Err(BseError::IndefiniteProblem(_)) => {}
            other => panic!("{}: {:?}", kind.name(), other.map(|r| r.values)),
        }
    }
}
