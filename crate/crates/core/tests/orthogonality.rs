use bse_lanczos::matgen::{gen_pentadiag, gen_random_definite, PentadiagSpec};
use bse_lanczos::scalar::{dotc, norm2};
use bse_lanczos::*;

#[test]
fn defect_stays_small_through_restarts() {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(1000)).unwrap();
    let mut cfg = SolverConfig::with_nev(60);
    cfg.ncv = Some(60);
    cfg.track_orthogonality = true;
    cfg.max_restarts = 25;
    for kind in SolverKind::ALL {
        let res = solve(&op, kind, &cfg).unwrap();
        assert!(res.restarts >= 20, "{}: {} restarts", kind.name(), res.restarts);
        for p in &res.progress {
            let e = p.defect_after_extend.unwrap();
            assert!(e <= 1e-11, "{} restart {}: {e:e}", kind.name(), p.restart);
            if let Some(r) = p.defect_after_restart {
                assert!(r <= 1e-11, "{} restart {}: {r:e}", kind.name(), p.restart);
            }
        }
    }
}

/// Shao's three-term recurrence with no reorthogonalization at all.
fn plain_shao_defect(op: &BseOperator<f64>, steps: usize) -> f64 {
    let n = op.n();
    let u0: Vec<_> = (0..n).map(|i| Cplx::new(1.0 + (i % 7) as f64, (i % 3) as f64)).collect();
    let v0 = op.apply_plus(&u0).unwrap();
    let b0 = dotc(&u0, &v0).re.sqrt();
    let mut u = vec![u0.iter().map(|z| z / b0).collect::<Vec<_>>()];
    let mut v = vec![v0.iter().map(|z| z / b0).collect::<Vec<_>>()];
    let mut beta_prev = 0.0;
    for j in 0..steps {
        let x = op.apply_minus(&v[j]).unwrap();
        let alpha = dotc(&v[j], &x).re;
        let mut w: Vec<_> = x.iter().zip(&u[j]).map(|(a, b)| a - b * alpha).collect();
        if j > 0 {
            for (wi, ui) in w.iter_mut().zip(&u[j - 1]) {
                *wi -= ui * beta_prev;
            }
        }
        let pw = op.apply_plus(&w).unwrap();
        let beta = dotc(&w, &pw).re.sqrt();
        assert!(beta > 0.0 && norm2(&w) > 0.0);
        u.push(w.iter().map(|z| z / beta).collect());
        v.push(pw.iter().map(|z| z / beta).collect());
        beta_prev = beta;
    }
    let (ub, vb) = (ColumnBasis::from_columns(n, &u), ColumnBasis::from_columns(n, &v));
    PairedBasis::uv(ub, vb).orthogonality_defect()
}

#[test]
fn skipping_reorthogonalization_loses_orthogonality() {
    // extreme eigenvalues converge within a few dozen steps here, which is
    // what drives the loss
    let op: BseOperator<f64> = gen_random_definite(200, 21, 0.9).unwrap();
    let defect = plain_shao_defect(&op, 120);
    assert!(defect > 1e-6, "{defect:e}");
}
