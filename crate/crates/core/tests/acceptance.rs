//! Acceptance suite: one PASS/FAIL line per primary criterion.
//!
//! Runs as a plain binary (`harness = false`). The n = 50000 pentadiagonal
//! job is skipped unless `--ignored`/`--include-ignored` is passed or
//! `BSE_ACCEPTANCE_LARGE=1` is set.

mod common;

use std::time::{Duration, Instant};

use bse_lanczos::linalg::{cholesky_relation_check, Order};
use bse_lanczos::matgen::{gen_pentadiag, gen_random_definite, PentadiagSpec};
use bse_lanczos::oracle::{self, C64};
use bse_lanczos::solver::{start_solver, GruningSolver, Lanczos, ProjectedSolver, ShaoSolver};
use bse_lanczos::*;
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const PENTADIAG_LAMBDA1: f64 = 2.1503397672;
const REFERENCE_RESTARTS: usize = 152;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: String) -> Self {
        Self { pass, summary, details: Vec::new() }
    }
}

fn pentadiag_small() -> Outcome {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(5000)).unwrap();
    let mut cfg = SolverConfig::with_nev(100);
    cfg.ncv = Some(100);
    cfg.tol = 1e-8;
    let mut pass = true;
    let mut details = Vec::new();
    for kind in SolverKind::ALL {
        let t = Instant::now();
        let res = solve(&op, kind, &cfg);
        let dt = t.elapsed();
        let res = match res {
            Ok(r) => r,
            Err(e) => {
                pass = false;
                details.push(format!("{}: error {e}", kind.name()));
                continue;
            }
        };
        let l1 = res.values[0];
        let dev = (l1 - PENTADIAG_LAMBDA1).abs() / PENTADIAG_LAMBDA1;
        let resid = res.max_relative_residual(&op);
        let bi = res.biorthogonality();
        let bi_tol = if kind == SolverKind::Gruning { 1e-8 } else { 1e-9 };
        let ok_a = dev <= 1e-8;
        let ok_b = resid <= 1e-8 && res.pairs() == 50;
        let ok_c = bi <= bi_tol;
        let ok_d = (REFERENCE_RESTARTS / 2..=REFERENCE_RESTARTS * 2).contains(&res.restarts);
        let ok_e = dt < Duration::from_secs(300);
        let ok = ok_a && ok_b && ok_c && ok_d && ok_e && res.status == Status::Converged;
        pass &= ok;
        details.push(format!(
            "{:<12} lambda1={l1:.10} (dev {dev:.1e}) max_rel_res={resid:.2e} biorth={bi:.2e} restarts={} time={:.1}s status={:?}{}",
            kind.name(),
            res.restarts,
            dt.as_secs_f64(),
            res.status,
            if ok { "" } else { "  <-- out of bounds" }
        ));
    }
    Outcome {
        pass,
        summary: "pentadiag n=5000 nev=100 ncv=100 tol=1e-8: lambda1, residual, bi-orthogonality, restarts in [76, 304], time < 300 s".into(),
        details,
    }
}

fn oracle_equivalence() -> Outcome {
    let sizes = [4usize, 8, 16, 32];
    let mut worst_val = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..20u64 {
        let n = sizes[i as usize % 4];
        let seed = 100 + i;
        let op: BseOperator<f64> = gen_random_definite(n, seed, 0.8).unwrap();
        let reference = oracle::decompose(&op).unwrap().positive_values();
        let h = oracle::assemble_h(&op).unwrap();
        let hn = spectral_norm(&h);
        let half = n / 2;
        let mut cfg = SolverConfig::with_nev((half + half % 2).max(2));
        cfg.tol = 1e-12;
        for kind in SolverKind::ALL {
            let res = match solve(&op, kind, &cfg) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{} n={n} seed={seed}: {e}", kind.name()));
                    continue;
                }
            };
            for (j, l) in res.values.iter().enumerate() {
                worst_val = worst_val.max((l - reference[j]).abs() / reference[j]);
            }
            let (rx, ry) = dense_residuals(&h, &res);
            worst_res = worst_res.max(rx.max(ry) / hn);
        }
    }
    let pass = failures.is_empty() && worst_val <= 1e-10 && worst_res <= 1e-10;
    let mut o = Outcome::new(
        pass,
        format!(
            "oracle equivalence, 20 random instances n in {{4,8,16,32}}: max rel eigenvalue dev {worst_val:.2e} (<= 1e-10), max residual/||H|| {worst_res:.2e} (<= 1e-10)"
        ),
    );
    o.details = failures;
    o
}

fn analytic_scalar() -> Outcome {
    let cases = [
        (2.0, C64::new(0.2, 0.0)),
        (1.0, C64::new(0.0, 0.5)),
        (3.0, C64::new(-1.0, 2.0)),
        (1e-3, C64::new(2e-4, -3e-4)),
        (5.0, C64::new(0.0, 0.0)),
    ];
    let mut worst = 0.0f64;
    let mut worst_vec = 0.0f64;
    let mut details = Vec::new();
    for (r, c) in cases {
        let op = scalar_op(r, c);
        let lam = (r * r - c.norm_sqr()).sqrt();
        for kind in SolverKind::ALL {
            match solve(&op, kind, &SolverConfig::with_nev(2)) {
                Ok(res) => {
                    worst = worst.max((res.values[0] - lam).abs() / lam);
                    let x = res.right_vector(0);
                    // exact eigenvector: (r − λ) x1 + c x2 = 0, compared after aligning the phase
                    let mut xe = [c, C64::new(lam - r, 0.0)];
                    if c.norm() == 0.0 {
                        xe = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
                    }
                    let ne = (xe[0].norm_sqr() + xe[1].norm_sqr()).sqrt();
                    let ip = xe[0].conj() * x[0] + xe[1].conj() * x[1];
                    let ph = ip / ip.norm();
                    let dist = (xe[0] / ne * ph - x[0]).norm().max((xe[1] / ne * ph - x[1]).norm());
                    worst_vec = worst_vec.max(dist);
                }
                Err(e) => details.push(format!("{} r={r} c={c}: {e}", kind.name())),
            }
        }
    }
    let mut rejected = true;
    for (r, c) in [(0.1, C64::new(0.2, 0.0)), (1.0, C64::new(0.0, -1.5))] {
        for kind in SolverKind::ALL {
            if !matches!(solve(&scalar_op(r, c), kind, &SolverConfig::with_nev(2)), Err(BseError::IndefiniteProblem(_))) {
                rejected = false;
                details.push(format!("{} r={r} c={c}: not rejected as indefinite", kind.name()));
            }
        }
    }
    let pass = details.is_empty() && worst <= 1e-14 && worst_vec <= 1e-14 && rejected;
    let mut o = Outcome::new(
        pass,
        format!(
            "1x1 analytic suite: max rel eigenvalue error {worst:.2e} (<= 1e-14), max eigenvector entry error {worst_vec:.2e} (<= 1e-14), r < |c| raises IndefiniteProblem: {rejected}"
        ),
    );
    o.details = details;
    o
}

fn method_equivalence() -> Outcome {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(200)).unwrap();
    let k = 15;
    let cfg = SolverConfig::default();
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let mut s: ShaoSolver<f64> = start_solver(&op, &cfg, k, &mut rng).unwrap();
    let mut g: GruningSolver<f64> = start_solver(&op, &cfg, k, &mut rng).unwrap();
    let mut p: ProjectedSolver<f64> = start_solver(&op, &cfg, k, &mut rng).unwrap();
    s.extend_plain(&op, k).unwrap();
    g.extend_plain(&op, k).unwrap();
    p.extend_plain(&op, k).unwrap();
    let rs = s.ritz(Order::SmallestFirst).unwrap().values;
    let rg = g.ritz(Order::SmallestFirst).unwrap().values;
    let rp = p.ritz(Order::SmallestFirst).unwrap().values;
    let dev = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs() / x).fold(0.0, f64::max);
    let ritz_dev = dev(&rs, &rg).max(dev(&rs, &rp)).max(dev(&rg, &rp));
    let t = s.tridiag();
    let tn = t.to_mat().max_abs();
    let chol = cholesky_relation_check(&t, &g.bidiag()) / tn;
    let pt = p.tridiag();
    let coef = dev(&t.diag, &pt.diag).max(dev(&t.offdiag, &pt.offdiag));
    Outcome::new(
        ritz_dev <= 1e-10 && chol <= 1e-12 && coef <= 1e-12,
        format!(
            "method equivalence, pentadiag n=200 k=15 shared start: Ritz dev {ritz_dev:.2e} (<= 1e-10), ||T-LL^T||/||T|| {chol:.2e} (<= 1e-12), alpha/beta dev {coef:.2e} (<= 1e-12)"
        ),
    )
}

fn residual_fidelity() -> Outcome {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(1000)).unwrap();
    let cfg = SolverConfig::with_nev(20);
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut details = Vec::new();
    for kind in SolverKind::ALL {
        let res = match solve(&op, kind, &cfg) {
            Ok(r) => r,
            Err(e) => {
                details.push(format!("{}: {e}", kind.name()));
                continue;
            }
        };
        let est = res.residual_estimates();
        for i in 0..res.nconv.min(res.pairs()) {
            let x = res.raw_right(i);
            let hx = norm(&op.apply_h(&x).unwrap());
            let actual = kernel_residual(&op, res.values[i], &x);
            worst = worst.max((est[i] - actual).abs() / hx);
            checked += 1;
        }
    }
    let mut o = Outcome::new(
        details.is_empty() && checked > 0 && worst <= 1e-8,
        format!("residual estimate fidelity, pentadiag n=1000, {checked} converged pairs: max |rho*b - ||Hx-lx|| | / ||Hx|| = {worst:.2e} (<= 1e-8)"),
    );
    o.details = details;
    o
}

fn orthogonality() -> Outcome {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(1000)).unwrap();
    let mut cfg = SolverConfig::with_nev(60);
    cfg.ncv = Some(60);
    cfg.track_orthogonality = true;
    cfg.max_restarts = 25;
    let mut worst = 0.0f64;
    let mut min_restarts = usize::MAX;
    let mut details = Vec::new();
    for kind in SolverKind::ALL {
        match solve(&op, kind, &cfg) {
            Ok(res) => {
                min_restarts = min_restarts.min(res.restarts);
                for p in &res.progress {
                    worst = worst.max(p.defect_after_extend.unwrap_or(f64::NAN));
                    if let Some(d) = p.defect_after_restart {
                        worst = worst.max(d);
                    }
                }
            }
            Err(e) => details.push(format!("{}: {e}", kind.name())),
        }
    }
    let mut o = Outcome::new(
        details.is_empty() && worst <= 1e-11 && min_restarts >= 20,
        format!("orthogonality, pentadiag n=1000 k=60: max defect {worst:.2e} (<= 1e-11) over >= {min_restarts} restarts (>= 20)"),
    );
    o.details = details;
    o
}

fn pairing() -> Outcome {
    let mut worst_vec = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut exact_values = true;
    let mut ops: Vec<BseOperator<f64>> = vec![
        gen_random_definite(16, 1, 0.8).unwrap(),
        gen_random_definite(32, 2, 0.9).unwrap(),
    ];
    ops.push(gen_pentadiag(&PentadiagSpec::with_n(300)).unwrap());
    for op in &ops {
        for (_, res) in run_all(op, &SolverConfig::with_nev(8)) {
            let p = res.pairs();
            let vals = res.eigenvalues();
            for i in 0..p {
                exact_values &= vals[p + i] == -vals[i];
                let x = res.right_vector(i);
                let xm = res.right_vector(p + i);
                let sc = swap_conj(&x);
                worst_vec = worst_vec.max(max_col_diff(&sc, &xm));
                let r_plus = kernel_residual(op, vals[i], &x);
                let r_minus = kernel_residual(op, -vals[i], &sc);
                worst_res = worst_res.max((r_plus - r_minus).abs() / vals[i]);
            }
        }
    }
    Outcome::new(
        exact_values && worst_vec <= 1e-12 && worst_res <= 1e-12,
        format!(
            "pairing, 3 instances x 3 solvers: values exactly +/-: {exact_values}, -lambda vector vs swap-conjugate {worst_vec:.2e} (<= 1e-12), residual mismatch {worst_res:.2e}"
        ),
    )
}

fn pentadiag_large() -> Outcome {
    let op: BseOperator<f64> = gen_pentadiag(&PentadiagSpec::with_n(50_000)).unwrap();
    let mut cfg = SolverConfig::with_nev(100);
    cfg.ncv = Some(100);
    let mut pass = true;
    let mut details = Vec::new();
    for kind in SolverKind::ALL {
        let t = Instant::now();
        match solve(&op, kind, &cfg) {
            Ok(res) => {
                let resid = res.max_relative_residual(&op);
                pass &= res.status == Status::Converged && resid <= 1e-8;
                details.push(format!(
                    "{:<12} lambda1={:.10} max_rel_res={resid:.2e} restarts={} time={:.1}s",
                    kind.name(),
                    res.values[0],
                    res.restarts,
                    t.elapsed().as_secs_f64()
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("{}: {e}", kind.name()));
            }
        }
    }
    let mut o = Outcome::new(pass, "pentadiag n=50000 nev=100 ncv=100: converged with max relative residual <= 1e-8".into());
    o.details = details;
    o
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let large = args.iter().any(|a| a == "--ignored" || a == "--include-ignored")
        || std::env::var("BSE_ACCEPTANCE_LARGE").is_ok_and(|v| v == "1");

    let mut criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("analytic-1x1", analytic_scalar),
        ("oracle-equivalence", oracle_equivalence),
        ("method-equivalence", method_equivalence),
        ("residual-fidelity", residual_fidelity),
        ("orthogonality", orthogonality),
        ("pairing", pairing),
        ("pentadiag-small", pentadiag_small),
    ];
    if large {
        criteria.push(("pentadiag-large", pentadiag_large));
    }

    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{name}] {} ({:.1}s)", o.summary, t.elapsed().as_secs_f64());
        for d in &o.details {
            println!("       {d}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    if !large {
        println!("SKIP [pentadiag-large] pass --ignored or set BSE_ACCEPTANCE_LARGE=1 to run");
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
