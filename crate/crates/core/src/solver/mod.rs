//! Thick-restart driver shared by the three structured recurrences.
//!
//! A run alternates between extending a Lanczos decomposition to `k` column
//! pairs and compressing it to the `r` wanted Ritz directions. Convergence is
//! checked in order on the coupling vector `b`, and the final Ritz directions
//! are turned into eigentriplets `(±λ, x, y)` with the block pattern
//!
//! ```text
//!   +λ:  x = [x1; x2],    y = [x1; -x2]
//!   -λ:  x = [x̄2; x̄1],    y = [-x̄2; x̄1]
//! ```

pub mod gruning;
pub mod projected;
pub mod shao;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::basis::{ColumnBasis, PairedBasis};
use crate::error::{BseError, Result};
use crate::linalg::{dense_sym_eig, tridiag_eig, Mat, Order, SpectralFactor, SymTridiag};
use crate::operator::BseOperator;
use crate::scalar::{conj_vec, dotc, norm2, Cplx, Real};

pub use gruning::GruningSolver;
pub use projected::ProjectedSolver;
pub use shao::ShaoSolver;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Smallest,
    Largest,
}

impl Which {
    pub fn order(self) -> Order {
        match self {
            Which::Smallest => Order::SmallestFirst,
            Which::Largest => Order::LargestFirst,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// `|b_i| < tol·λ_i`
    Relative,
    /// `|b_i| < tol`
    Absolute,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialVector {
    /// Entries with real and imaginary parts uniform in `[-1, 1)` from
    /// ChaCha20 seeded with the given value.
    Seeded(u64),
    User(Vec<Cplx<f64>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Shao,
    Gruning,
    Projected,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Shao, SolverKind::Gruning, SolverKind::Projected];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Shao => "shao",
            SolverKind::Gruning => "gruning",
            SolverKind::Projected => "projectedbse",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    NotConverged,
    BreakdownExhausted,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_MAX_RESTARTS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Total eigenvalue count, `nev/2` positive ones and their negatives.
    pub nev: usize,
    /// Basis size `k` in column pairs; `None` picks `min(n, max(nev, nev/2 + 15))`.
    pub ncv: Option<usize>,
    /// Restart size `r`. `None` keeps `nconv + (k − nconv)/2` columns, which
    /// is `k/2` before anything converges. An explicit `r` is a floor that
    /// never drops below `nconv + 1`.
    pub restart_size: Option<usize>,
    pub tol: f64,
    pub criterion: Criterion,
    pub which: Which,
    pub max_restarts: usize,
    pub init: InitialVector,
    /// Seed for the start vector (when `init` is seeded) and for breakdown
    /// replacement vectors.
    pub seed: u64,
    /// Record the orthogonality defect after every extension and restart.
    pub track_orthogonality: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            nev: 2,
            ncv: None,
            restart_size: None,
            tol: 1e-8,
            criterion: Criterion::Relative,
            which: Which::Smallest,
            max_restarts: DEFAULT_MAX_RESTARTS,
            init: InitialVector::Seeded(DEFAULT_SEED),
            seed: DEFAULT_SEED,
            track_orthogonality: false,
        }
    }
}

impl SolverConfig {
    pub fn with_nev(nev: usize) -> Self {
        Self {
            nev,
            ..Self::default()
        }
    }

    /// Basis size `k` and restart size `r` for a problem of block size `n`.
    pub fn resolve(&self, n: usize) -> Result<(usize, usize)> {
        if n == 0 {
            return Err(BseError::InvalidConfig("empty problem".into()));
        }
        if self.nev < 2 || self.nev % 2 != 0 {
            return Err(BseError::InvalidConfig(format!(
                "nev must be even and at least 2, got {}",
                self.nev
            )));
        }
        if !(self.tol > 0.0) {
            return Err(BseError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        let half = self.nev / 2;
        let k = self.ncv.unwrap_or_else(|| n.min(self.nev.max(half + 15)));
        if k > n {
            return Err(BseError::InvalidConfig(format!("ncv = {k} exceeds n = {n}")));
        }
        if half > k {
            return Err(BseError::InvalidConfig(format!(
                "nev/2 = {half} exceeds ncv = {k}"
            )));
        }
        let r = match self.restart_size {
            Some(r) if r >= k && k > 1 => {
                return Err(BseError::InvalidConfig(format!(
                    "restart size {r} must be below ncv = {k}"
                )))
            }
            Some(r) => r.min(k.saturating_sub(1)),
            None => k / 2,
        };
        Ok((k, r))
    }
}

/// Per-restart trace.
#[derive(Clone, Debug)]
pub struct ProgressRecord<T> {
    pub restart: usize,
    pub nconv: usize,
    /// `|b_i|` for the first few wanted Ritz values.
    pub b_head: Vec<T>,
    pub defect_after_extend: Option<T>,
    pub defect_after_restart: Option<T>,
}

/// Ritz data of the current decomposition, wanted end first.
#[derive(Clone, Debug)]
pub struct Ritz<T> {
    /// Positive Ritz values `λ_i`.
    pub values: Vec<T>,
    /// Couplings with `‖H x̃_i − λ_i x̃_i‖ = ρ|b_i|` for the raw `x̃_i`.
    pub b: Vec<T>,
    pub factor: SpectralFactor<T>,
}

/// What a thick-restart recurrence has to provide to the driver.
pub trait Lanczos<T: Real>: Sized {
    const KIND: SolverKind;

    /// Normalize a start vector. `Ok(None)` when it is (numerically) in the
    /// null direction and must be replaced.
    fn start(op: &BseOperator<T>, v0: &[Cplx<T>], kmax: usize) -> Result<Option<Self>>;

    /// Number of completed column pairs.
    fn size(&self) -> usize;

    /// Whether the trailing residual vector is present (it is dropped after
    /// a breakdown on the last step).
    fn has_next(&self) -> bool;

    /// One Lanczos step. On breakdown the step is completed with a zero
    /// coupling and no next vector; `inject` must then supply one.
    fn step(&mut self, op: &BseOperator<T>) -> Result<StepOutcome>;

    /// Orthogonalize `fresh` against the basis and append it as the next
    /// vector. `false` if it vanished in the process.
    fn inject(&mut self, op: &BseOperator<T>, fresh: Vec<Cplx<T>>) -> Result<bool>;

    fn ritz(&self, order: Order) -> Result<Ritz<T>>;

    /// Keep the first `keep` Ritz directions plus the residual vector.
    fn compress(&mut self, ritz: &Ritz<T>, keep: usize);

    /// Raw `X̃₁, X̃₂` columns for the first `count` Ritz directions.
    fn extract(&self, ritz: &Ritz<T>, count: usize) -> (ColumnBasis<T>, ColumnBasis<T>);

    fn rho(&self) -> T;

    fn basis(&self) -> &PairedBasis<T>;

    fn orthogonality_defect(&self) -> T {
        self.basis().orthogonality_defect()
    }

    /// Run steps until `k` pairs are complete, replacing the vector after a
    /// breakdown. Returns `true` when breakdowns are exhausted.
    fn extend(
        &mut self,
        op: &BseOperator<T>,
        k: usize,
        rng: &mut ChaCha20Rng,
        consecutive: &mut usize,
    ) -> Result<bool> {
        while self.size() < k {
            match self.step(op)? {
                StepOutcome::Ok => *consecutive = 0,
                StepOutcome::Breakdown => {
                    if self.size() == k {
                        // invariant subspace of full size: every coupling is zero
                        break;
                    }
                    loop {
                        *consecutive += 1;
                        if *consecutive >= MAX_CONSECUTIVE_BREAKDOWNS {
                            return Ok(true);
                        }
                        let fresh = random_vector(rng, op.n());
                        if self.inject(op, fresh)? {
                            break;
                        }
                    }
                }
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Ok,
    Breakdown,
}

pub const MAX_CONSECUTIVE_BREAKDOWNS: usize = 3;

pub fn random_vector<T: Real>(rng: &mut ChaCha20Rng, n: usize) -> Vec<Cplx<T>> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            Cplx::new(T::lit(re), T::lit(im))
        })
        .collect()
}

pub(crate) fn breakdown_floor<T: Real>() -> T {
    T::epsilon().powf(T::lit(0.75))
}

/// Classify a kernel radicand `Re(x^H K x)`.
pub(crate) fn classify_radicand<T: Real>(
    rad: T,
    xnorm: T,
    knorm: T,
    what: &str,
) -> Result<Option<T>> {
    let scale = xnorm * knorm;
    if rad < -T::epsilon().sqrt() * scale {
        return Err(BseError::IndefiniteProblem(format!(
            "{what}: radicand {:e} is negative (scale {:e})",
            rad.to_f64_lossy(),
            scale.to_f64_lossy()
        )));
    }
    if rad <= T::lit(100.0) * T::epsilon() * scale {
        return Ok(None);
    }
    Ok(Some(rad.sqrt()))
}

/// Square roots of the eigenvalues of a projected `T`, rejecting clearly
/// negative ones.
pub(crate) fn ritz_from_eigs<T: Real>(d: &[T], tnorm: T) -> Result<Vec<T>> {
    let floor = -T::epsilon().sqrt() * tnorm;
    d.iter()
        .map(|&x| {
            if x < floor {
                Err(BseError::IndefiniteProblem(format!(
                    "projected matrix has negative eigenvalue {:e}",
                    x.to_f64_lossy()
                )))
            } else {
                Ok(x.max(T::zero()).sqrt())
            }
        })
        .collect()
}

/// Storage of a projected matrix after `r` locked Ritz directions:
/// `diag` over all columns, the coupling `spike` in row `r` (columns `..r`),
/// and `off[i]` coupling `i` and `i + 1` for `i ≥ r`. The last `off` entry
/// couples the final column to the residual vector.
#[derive(Clone, Debug, Default)]
pub struct Arrow<T> {
    pub r: usize,
    pub diag: Vec<T>,
    pub spike: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> Arrow<T> {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Residual coupling of the last column (zero before any step).
    pub fn last_off(&self) -> T {
        self.off.last().copied().unwrap_or(T::zero())
    }

    /// Symmetric matrix with `off` on both sides of the diagonal.
    pub fn to_symmetric(&self) -> Mat<T> {
        let s = self.size();
        let mut m = Mat::zeros(s, s);
        for (i, &d) in self.diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        if self.r < s {
            for (i, &b) in self.spike.iter().enumerate() {
                m[(self.r, i)] = b;
                m[(i, self.r)] = b;
            }
        }
        for i in self.r..s.saturating_sub(1) {
            m[(i, i + 1)] = self.off[i];
            m[(i + 1, i)] = self.off[i];
        }
        m
    }

    /// Lower triangular matrix with `off` below the diagonal.
    pub fn to_lower(&self) -> Mat<T> {
        let s = self.size();
        let mut m = Mat::zeros(s, s);
        for (i, &d) in self.diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        if self.r < s {
            for (i, &b) in self.spike.iter().enumerate() {
                m[(self.r, i)] = b;
            }
        }
        for i in self.r..s.saturating_sub(1) {
            m[(i + 1, i)] = self.off[i];
        }
        m
    }

    /// Replace by the compressed form: `diag` and `spike` of length `keep`,
    /// no tail yet.
    pub fn compress(&mut self, diag: &[T], spike: &[T]) {
        let keep = diag.len();
        self.r = keep;
        self.diag = diag.to_vec();
        self.spike = spike.to_vec();
        self.off = vec![T::zero(); keep];
    }

    /// Eigen-decomposition for the symmetric variants; `b_i = β·Q(last, i)`
    /// with `β` the residual coupling.
    pub(crate) fn sym_ritz(&self, residual_coupling: T, order: Order) -> Result<Ritz<T>> {
        let s = self.size();
        let factor = if self.r == 0 {
            tridiag_eig(
                &SymTridiag::new(self.diag.clone(), self.off[..s.saturating_sub(1)].to_vec()),
                order,
            )?
        } else {
            dense_sym_eig(&self.to_symmetric(), order)?
        };
        let tnorm = self.to_symmetric().max_abs();
        let values = ritz_from_eigs(&factor.values, tnorm)?;
        let b = (0..s)
            .map(|i| residual_coupling * factor.vectors[(s - 1, i)])
            .collect();
        Ok(Ritz { values, b, factor })
    }
}

/// Count of leading converged Ritz values; stops at the first failure.
pub fn count_converged<T: Real>(values: &[T], b: &[T], tol: T, criterion: Criterion) -> usize {
    values
        .iter()
        .zip(b)
        .take_while(|(&l, &bi)| match criterion {
            Criterion::Relative => bi.abs() < tol * l,
            Criterion::Absolute => bi.abs() < tol,
        })
        .count()
}

/// Converged (or best available) eigentriplets of one run.
#[derive(Clone, Debug)]
pub struct EigResult<T> {
    pub kind: SolverKind,
    /// Positive eigenvalues, wanted end first.
    pub values: Vec<T>,
    /// Raw `X̃₁`, `X̃₂` columns, one per entry of `values`.
    pub x1: ColumnBasis<T>,
    pub x2: ColumnBasis<T>,
    pub b: Vec<T>,
    pub rho: T,
    pub status: Status,
    /// Outer iterations (projected problems solved).
    pub restarts: usize,
    pub nconv: usize,
    pub progress: Vec<ProgressRecord<T>>,
}

impl<T: Real> EigResult<T> {
    /// Number of positive eigenvalues returned.
    pub fn pairs(&self) -> usize {
        self.values.len()
    }

    /// `ρ|b_i|`, the residual norm of the raw vector `[x̃₁; x̃₂]`.
    pub fn residual_estimates(&self) -> Vec<T> {
        self.b.iter().map(|&bi| self.rho * bi.abs()).collect()
    }

    /// `ρ|b_i| / (λ_i ‖x̃_i‖)`.
    pub fn relative_residual_estimates(&self) -> Vec<T> {
        (0..self.pairs())
            .map(|i| {
                let nx = self.raw_norm(i);
                self.rho * self.b[i].abs() / (self.values[i] * nx)
            })
            .collect()
    }

    fn raw_norm(&self, i: usize) -> T {
        norm2(self.x1.col(i)).hypot(norm2(self.x2.col(i)))
    }

    /// `[λ₁, …, λ_p, −λ₁, …, −λ_p]`.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.values
            .iter()
            .copied()
            .chain(self.values.iter().map(|&l| -l))
            .collect()
    }

    /// Unnormalized right eigenvector `[x̃₁; x̃₂]` of `+λ_i`.
    pub fn raw_right(&self, i: usize) -> Vec<Cplx<T>> {
        let mut x = self.x1.col(i).to_vec();
        x.extend_from_slice(self.x2.col(i));
        x
    }

    /// Unit right eigenvector for entry `i` of [`Self::eigenvalues`].
    pub fn right_vector(&self, i: usize) -> Vec<Cplx<T>> {
        let p = self.pairs();
        let (j, neg) = if i < p { (i, false) } else { (i - p, true) };
        let s = T::one() / self.raw_norm(j);
        let (a, b) = (self.x1.col(j), self.x2.col(j));
        let mut x: Vec<Cplx<T>> = if neg {
            conj_vec(b).into_iter().chain(conj_vec(a)).collect()
        } else {
            a.iter().chain(b.iter()).copied().collect()
        };
        x.iter_mut().for_each(|z| *z = *z * s);
        x
    }

    /// Unit left eigenvector for entry `i` of [`Self::eigenvalues`]:
    /// `y^H H = λ y^H`.
    pub fn left_vector(&self, i: usize) -> Vec<Cplx<T>> {
        let p = self.pairs();
        let n = self.x1.n();
        let mut y = self.right_vector(i);
        // +λ: [x1; -x2] ; -λ: [-x̄2; x̄1]
        let range = if i < p { n..2 * n } else { 0..n };
        for z in &mut y[range] {
            *z = -*z;
        }
        y
    }

    /// `(‖Hx − λx‖, ‖H^*y − λy‖) / |λ|` for every returned eigenpair, in the
    /// order of [`Self::eigenvalues`].
    pub fn true_residuals(&self, op: &BseOperator<T>) -> Vec<(T, T)> {
        let lams = self.eigenvalues();
        lams.iter()
            .enumerate()
            .map(|(i, &l)| {
                let x = self.right_vector(i);
                let y = self.left_vector(i);
                let hx = op.apply_h(&x).expect("dimension");
                let hy = op.apply_h_adjoint(&y).expect("dimension");
                let rx: Vec<Cplx<T>> = hx.iter().zip(&x).map(|(a, b)| *a - *b * l).collect();
                let ry: Vec<Cplx<T>> = hy.iter().zip(&y).map(|(a, b)| *a - *b * l).collect();
                (norm2(&rx) / l.abs(), norm2(&ry) / l.abs())
            })
            .collect()
    }

    pub fn max_relative_residual(&self, op: &BseOperator<T>) -> T {
        self.true_residuals(op)
            .into_iter()
            .fold(T::zero(), |m, (a, b)| m.max(a).max(b))
    }

    /// `‖Y^H X − diag(y_i^H x_i)‖_max` over all returned eigenpairs.
    pub fn biorthogonality(&self) -> T {
        let m = 2 * self.pairs();
        let xs: Vec<_> = (0..m).map(|i| self.right_vector(i)).collect();
        let ys: Vec<_> = (0..m).map(|i| self.left_vector(i)).collect();
        let mut worst = T::zero();
        for (i, y) in ys.iter().enumerate() {
            for (j, x) in xs.iter().enumerate() {
                if i != j {
                    worst = worst.max(dotc(y, x).norm());
                }
            }
        }
        worst
    }
}

/// Run one of the structured solvers.
pub fn solve<T: Real>(
    op: &BseOperator<T>,
    kind: SolverKind,
    cfg: &SolverConfig,
) -> Result<EigResult<T>> {
    match kind {
        SolverKind::Shao => run::<T, ShaoSolver<T>>(op, cfg),
        SolverKind::Gruning => run::<T, GruningSolver<T>>(op, cfg),
        SolverKind::Projected => run::<T, ProjectedSolver<T>>(op, cfg),
    }
}

pub(crate) fn start_vector<T: Real>(
    init: &InitialVector,
    n: usize,
) -> Result<Vec<Cplx<T>>> {
    match init {
        InitialVector::Seeded(seed) => {
            let mut rng = ChaCha20Rng::seed_from_u64(*seed);
            Ok(random_vector(&mut rng, n))
        }
        InitialVector::User(v) => {
            if v.len() != n {
                return Err(BseError::DimensionMismatch(format!(
                    "initial vector has length {}, expected {n}",
                    v.len()
                )));
            }
            Ok(v.iter()
                .map(|z| Cplx::new(T::lit(z.re), T::lit(z.im)))
                .collect())
        }
    }
}

/// Build a started solver, regenerating the start vector after breakdowns.
pub fn start_solver<T: Real, S: Lanczos<T>>(
    op: &BseOperator<T>,
    cfg: &SolverConfig,
    k: usize,
    rng: &mut ChaCha20Rng,
) -> Result<S> {
    let mut v0 = start_vector(&cfg.init, op.n())?;
    for _ in 0..MAX_CONSECUTIVE_BREAKDOWNS {
        if let Some(s) = S::start(op, &v0, k)? {
            return Ok(s);
        }
        v0 = random_vector(rng, op.n());
    }
    Err(BseError::InvalidInput(
        "start vector breaks down repeatedly; the operator may be zero".into(),
    ))
}

/// Columns kept at a restart. Without an explicit restart size the locked
/// pairs stay and half of the unconverged part is kept on top of them.
pub fn restart_keep(k: usize, r: usize, explicit: bool, nconv: usize) -> usize {
    let keep = if explicit {
        r.max(nconv + 1)
    } else {
        nconv + (k.saturating_sub(nconv) / 2).max(1)
    };
    keep.min(k - 1)
}

fn run<T: Real, S: Lanczos<T>>(op: &BseOperator<T>, cfg: &SolverConfig) -> Result<EigResult<T>> {
    let (k, r_default) = cfg.resolve(op.n())?;
    let half = cfg.nev / 2;
    let tol = T::lit(cfg.tol);
    let order = cfg.which.order();
    // breakdown replacements draw from a stream separate from the start vector
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut state: S = start_solver(op, cfg, k, &mut rng)?;
    let mut consecutive = 0;
    let mut progress = Vec::new();
    let mut restarts = 0;

    loop {
        let exhausted = state.extend(op, k, &mut rng, &mut consecutive)?;
        let defect_after_extend = cfg.track_orthogonality.then(|| state.orthogonality_defect());
        let ritz = state.ritz(order)?;
        restarts += 1;
        let nconv = count_converged(&ritz.values, &ritz.b, tol, cfg.criterion);
        progress.push(ProgressRecord {
            restart: restarts,
            nconv,
            b_head: ritz.b.iter().take(half.min(4)).map(|x| x.abs()).collect(),
            defect_after_extend,
            defect_after_restart: None,
        });

        let status = if exhausted {
            Some(Status::BreakdownExhausted)
        } else if nconv >= half {
            Some(Status::Converged)
        } else if restarts >= cfg.max_restarts {
            Some(Status::NotConverged)
        } else {
            None
        };
        if let Some(status) = status {
            let count = half.min(ritz.values.len());
            let (x1, x2) = state.extract(&ritz, count);
            return Ok(EigResult {
                kind: S::KIND,
                values: ritz.values[..count].to_vec(),
                x1,
                x2,
                b: ritz.b[..count].to_vec(),
                rho: state.rho(),
                status,
                restarts,
                nconv,
                progress,
            });
        }

        let keep = restart_keep(k, r_default, cfg.restart_size.is_some(), nconv);
        state.compress(&ritz, keep);
        if cfg.track_orthogonality {
            if let Some(p) = progress.last_mut() {
                p.defect_after_restart = Some(state.orthogonality_defect());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn in_order_convergence_count() {
        let l = [1.0, 1.0, 1.0];
        assert_eq!(count_converged(&l, &[1e-12, 1.0, 1e-12], 1e-8, Criterion::Relative), 1);
        assert_eq!(count_converged(&l, &[0.0, 0.0, 0.0], 1e-8, Criterion::Relative), 3);
        assert_eq!(count_converged(&[10.0], &[5e-8], 1e-8, Criterion::Relative), 1);
        assert_eq!(count_converged(&[10.0], &[5e-8], 1e-8, Criterion::Absolute), 0);
    }

    #[test]
    fn config_resolution() {
        let cfg = SolverConfig::with_nev(100);
        assert_eq!(cfg.resolve(5000).unwrap(), (100, 50));
        assert_eq!(SolverConfig::with_nev(2).resolve(1).unwrap(), (1, 0));
        assert_eq!(SolverConfig::with_nev(4).resolve(100).unwrap(), (17, 8));
        assert!(SolverConfig::with_nev(3).resolve(10).is_err());
        assert!(SolverConfig::with_nev(0).resolve(10).is_err());
        let mut c = SolverConfig::with_nev(4);
        c.ncv = Some(11);
        assert!(c.resolve(10).is_err());
        c.ncv = Some(10);
        c.restart_size = Some(10);
        assert!(c.resolve(10).is_err());
        c.restart_size = Some(3);
        assert_eq!(c.resolve(10).unwrap(), (10, 3));
        c.tol = 0.0;
        assert!(c.resolve(10).is_err());
    }

    #[test]
    fn keep_rule() {
        assert_eq!(restart_keep(100, 50, false, 0), 50);
        assert_eq!(restart_keep(100, 50, false, 40), 70);
        assert_eq!(restart_keep(100, 50, false, 99), 99);
        assert_eq!(restart_keep(100, 10, true, 0), 10);
        assert_eq!(restart_keep(100, 10, true, 30), 31);
        assert_eq!(restart_keep(10, 9, true, 9), 9);
    }

    #[test]
    fn seeded_start_is_reproducible() {
        let a: Vec<Cplx<f64>> = start_vector(&InitialVector::Seeded(7), 5).unwrap();
        let b: Vec<Cplx<f64>> = start_vector(&InitialVector::Seeded(7), 5).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|z| z.re.abs() <= 1.0 && z.im.abs() <= 1.0));
    }
}
