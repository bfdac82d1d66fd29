mod common;

use bse_lanczos::matgen::gen_random_definite;
use bse_lanczos::oracle::{self, Definiteness, C64};
use bse_lanczos::*;
use common::*;

fn instances() -> Vec<(usize, u64)> {
    let sizes = [4, 8, 16, 32];
    (0..20u64).map(|i| (sizes[i as usize % 4], 100 + i)).collect()
}

fn nev_for(n: usize) -> usize {
    let half = n / 2;
    (half + half % 2).max(2)
}

#[test]
fn solvers_match_dense_eig() {
    for (n, seed) in instances() {
        let op: BseOperator<f64> = gen_random_definite(n, seed, 0.8).unwrap();
        let dec = oracle::decompose(&op).unwrap();
        assert_eq!(dec.definiteness, Definiteness::Definite);
        let h = oracle::assemble_h(&op).unwrap();
        let hn = spectral_norm(&h);
        let reference = dec.positive_values();
        let mut cfg = SolverConfig::with_nev(nev_for(n));
        cfg.tol = 1e-12;
        for (kind, res) in run_all(&op, &cfg) {
            assert_eq!(res.status, Status::Converged, "{} n={n} seed={seed}", kind.name());
            let m = oracle::match_values(&reference, &res.values, 1e-10)
                .unwrap_or_else(|e| panic!("{} n={n} seed={seed}: {e}", kind.name()));
            // the wanted end: the smallest positive values, in order
            for (ci, ri, _) in m {
                assert_eq!(ci, ri, "{} n={n} seed={seed}", kind.name());
            }
            let (rx, ry) = dense_residuals(&h, &res);
            assert!(rx <= 1e-10 * hn && ry <= 1e-10 * hn, "{} n={n}: {rx:e} {ry:e}", kind.name());
        }
    }
}

#[test]
fn largest_end_matches_dense_eig() {
    let op: BseOperator<f64> = gen_random_definite(24, 5, 0.6).unwrap();
    let mut reference = oracle::decompose(&op).unwrap().positive_values();
    reference.reverse();
    let mut cfg = SolverConfig::with_nev(6);
    cfg.tol = 1e-12;
    cfg.which = Which::Largest;
    for (kind, res) in run_all(&op, &cfg) {
        for (i, l) in res.values.iter().enumerate() {
            assert!((l - reference[i]).abs() <= 1e-10 * reference[i], "{}", kind.name());
        }
    }
}

#[test]
fn oracle_pairs_follow_block_pattern() {
    for (n, seed) in [(8usize, 1u64), (16, 2)] {
        let op: BseOperator<f64> = gen_random_definite(n, seed, 0.9).unwrap();
        let h = oracle::assemble_h(&op).unwrap();
        let hn = spectral_norm(&h);
        let (vals, vecs) = oracle::dense_eig(&h).unwrap();
        for (k, lam) in vals.iter().enumerate() {
            assert!(lam.im.abs() <= 1e-10 * hn);
            assert!(vals.iter().any(|m| (m + lam).norm() <= 1e-10), "no partner for {lam}");
            let x: Vec<C64> = vecs.column(k).iter().copied().collect();
            let xm = swap_conj(&x);
            assert!(oracle::residual(&h, -lam.conj(), &xm) <= 1e-9 * hn);
        }
    }
}

#[test]
fn indefinite_instance_has_complex_eigenvalues() {
    let op: BseOperator<f64> = matgen::gen_random_bse(8, 3, 3.0).unwrap();
    let h = oracle::assemble_h(&op).unwrap();
    let (vals, _) = oracle::dense_eig(&h).unwrap();
    let hn = spectral_norm(&h);
    assert!(vals.iter().any(|z| z.im.abs() > 1e-6 * hn || z.re.abs() < 1e-8 * hn));
    assert_eq!(oracle::definiteness_check(&op).unwrap(), Definiteness::Indefinite);
}
