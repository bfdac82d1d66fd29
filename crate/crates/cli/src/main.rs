//! `bse`: generate Bethe–Salpeter test instances, solve them with the
//! structured Lanczos solvers or the dense reference, and compare solvers.
//!
//! Exit codes: 0 converged / ok, 1 internal error, 2 usage or configuration
//! error, 3 not converged within `--max-restarts`, 4 indefinite problem,
//! 5 breakdown replacements exhausted, 6 file I/O or parse error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bse_lanczos::matgen::{gen_pentadiag, gen_random_definite, PentadiagSpec};
use bse_lanczos::mmio::{read_blocks, write_blocks};
use bse_lanczos::oracle::{self, Definiteness, C64};
use bse_lanczos::scalar::Real;
use bse_lanczos::{
    solve, BseError, BseOperator, Criterion, EigResult, SolverConfig, SolverKind, Status, Which,
};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

const SCHEMA_VERSION: u32 = 1;
const CHECK_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "bse", version, about = "Structure-preserving Lanczos eigensolvers for Bethe-Salpeter matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write a report.
    Solve(SolveArgs),
    /// Run several solvers on the same instance and tabulate them.
    Compare(CompareArgs),
    /// Write a generated instance as a pair of Matrix Market files.
    Generate(GenerateArgs),
    /// Validate an instance, test definiteness and compare the solvers with the dense reference.
    Check(CheckArgs),
}

#[derive(Args, Clone)]
#[command(group(ArgGroup::new("instance").required(true).args(["pentadiag", "random", "matrix_r"])))]
struct InstanceArgs {
    /// Pentadiagonal test matrix of block size N.
    #[arg(long, value_name = "N")]
    pentadiag: Option<usize>,
    /// Seeded random definite instance of block size N.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    /// Matrix Market file holding R (requires --matrix-c).
    #[arg(long, value_name = "PATH", requires = "matrix_c")]
    matrix_r: Option<PathBuf>,
    /// Matrix Market file holding C (requires --matrix-r).
    #[arg(long, value_name = "PATH", requires = "matrix_r")]
    matrix_c: Option<PathBuf>,
    /// Coupling strength of --random instances, in (0, 1).
    #[arg(long, default_value_t = 0.8)]
    margin: f64,
    /// Seed for --random instances and for the start vector.
    #[arg(long, default_value_t = bse_lanczos::solver::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Shao,
    Gruning,
    Projectedbse,
    Dense,
}

impl SolverArg {
    fn kind(self) -> Option<SolverKind> {
        match self {
            Self::Shao => Some(SolverKind::Shao),
            Self::Gruning => Some(SolverKind::Gruning),
            Self::Projectedbse => Some(SolverKind::Projected),
            Self::Dense => None,
        }
    }

    fn name(self) -> &'static str {
        self.kind().map_or("dense", SolverKind::name)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Smallest,
    Largest,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Rel,
    Abs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Precision {
    Double,
    Single,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Number of eigenvalues (even): nev/2 positive ones and their negatives.
    #[arg(long, default_value_t = 2)]
    nev: usize,
    /// Basis size k; default min(n, max(nev, nev/2 + 15)).
    #[arg(long)]
    ncv: Option<usize>,
    /// Columns kept at a restart; default keeps the converged ones plus half the rest.
    #[arg(long)]
    restart_size: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = WhichArg::Smallest)]
    which: WhichArg,
    #[arg(long, value_enum, default_value_t = CriterionArg::Rel)]
    criterion: CriterionArg,
    #[arg(long, default_value_t = bse_lanczos::solver::DEFAULT_MAX_RESTARTS)]
    max_restarts: usize,
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    precision: Precision,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = SolverArg::Shao)]
    solver: SolverArg,
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    params: SolverArgs,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Write the right eigenvectors as a 2n x nev Matrix Market array.
    #[arg(long, value_name = "PATH")]
    vectors: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated solver list.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [SolverArg::Shao, SolverArg::Gruning, SolverArg::Projectedbse])]
    solvers: Vec<SolverArg>,
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    params: SolverArgs,
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_name = "PATH")]
    out_r: PathBuf,
    #[arg(long, value_name = "PATH")]
    out_c: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    instance: InstanceArgs,
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }
}

fn config_flag(msg: &str) -> &'static str {
    [
        ("restart size", "--restart-size"),
        ("ncv", "--ncv"),
        ("nev", "--nev"),
        ("tol", "--tol"),
    ]
    .iter()
    .find(|(k, _)| msg.contains(k))
    .map_or("solver flags", |(_, f)| f)
}

impl From<BseError> for Failure {
    fn from(e: BseError) -> Self {
        let code = match &e {
            BseError::IndefiniteProblem(_) => 4,
            BseError::Io { .. } | BseError::Parse { .. } | BseError::SymmetryViolation { .. } => 6,
            BseError::InvalidConfig(_)
            | BseError::InvalidInput(_)
            | BseError::DimensionMismatch(_)
            | BseError::SizeGuard { .. } => 2,
            BseError::NonConvergence { .. } => 1,
        };
        let msg = match &e {
            BseError::InvalidConfig(m) => format!("{}: {e}", config_flag(m)),
            _ => e.to_string(),
        };
        Self { code, msg }
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Converged => 0,
        Status::NotConverged => 3,
        Status::BreakdownExhausted => 5,
    }
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Converged => "converged",
        Status::NotConverged => "not_converged",
        Status::BreakdownExhausted => "breakdown_exhausted",
    }
}

fn load(inst: &InstanceArgs) -> Result<(String, BseOperator<f64>), Failure> {
    if let Some(n) = inst.pentadiag {
        let op = gen_pentadiag(&PentadiagSpec::with_n(n)).map_err(|e| Failure::usage(format!("--pentadiag: {e}")))?;
        return Ok((format!("pentadiag {n}"), op));
    }
    if let Some(n) = inst.random {
        let op = gen_random_definite(n, inst.seed, inst.margin)
            .map_err(|e| Failure::usage(format!("--random/--margin: {e}")))?;
        return Ok((format!("random {n} seed {} margin {}", inst.seed, inst.margin), op));
    }
    let (r, c) = (inst.matrix_r.as_ref().unwrap(), inst.matrix_c.as_ref().unwrap());
    let op = read_blocks(r, c)?;
    Ok((format!("files {} {}", r.display(), c.display()), op))
}

fn config(p: &SolverArgs, seed: u64) -> SolverConfig {
    let mut cfg = SolverConfig::with_nev(p.nev);
    cfg.ncv = p.ncv;
    cfg.restart_size = p.restart_size;
    cfg.tol = p.tol;
    cfg.which = match p.which {
        WhichArg::Smallest => Which::Smallest,
        WhichArg::Largest => Which::Largest,
    };
    cfg.criterion = match p.criterion {
        CriterionArg::Rel => Criterion::Relative,
        CriterionArg::Abs => Criterion::Absolute,
    };
    cfg.max_restarts = p.max_restarts;
    cfg.init = bse_lanczos::InitialVector::Seeded(seed);
    cfg.seed = seed;
    cfg
}

/// One eigentriplet record, in `f64` whatever the working precision.
struct Pair {
    lambda: f64,
    b: Option<f64>,
    right: f64,
    left: f64,
    x: Vec<C64>,
}

struct Run {
    solver: SolverArg,
    status: Status,
    restarts: usize,
    nconv: usize,
    seconds: f64,
    biorth: f64,
    pairs: Vec<Pair>,
    first: Option<f64>,
}

impl Run {
    fn max_residual(&self) -> f64 {
        self.pairs.iter().fold(0.0, |m, p| m.max(p.right).max(p.left))
    }

    fn positive_values(&self) -> Vec<f64> {
        self.pairs.iter().filter(|p| p.lambda > 0.0).map(|p| p.lambda).collect()
    }
}

fn c64<T: Real>(z: num_complex::Complex<T>) -> C64 {
    C64::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

fn structured_run<T: Real>(op: &BseOperator<T>, kind: SolverKind, solver: SolverArg, cfg: &SolverConfig) -> Result<Run, Failure> {
    let t = Instant::now();
    let res: EigResult<T> = solve(op, kind, cfg)?;
    let seconds = t.elapsed().as_secs_f64();
    let lams = res.eigenvalues();
    let resid = res.true_residuals(op);
    let p = res.pairs();
    let mut pairs: Vec<Pair> = lams
        .iter()
        .enumerate()
        .map(|(i, l)| Pair {
            lambda: l.to_f64_lossy(),
            b: Some(res.b[i % p].abs().to_f64_lossy()),
            right: resid[i].0.to_f64_lossy(),
            left: resid[i].1.to_f64_lossy(),
            x: res.right_vector(i).into_iter().map(c64).collect(),
        })
        .collect();
    sort_pairs(&mut pairs);
    Ok(Run {
        solver,
        status: res.status,
        restarts: res.restarts,
        nconv: res.nconv,
        seconds,
        biorth: res.biorthogonality().to_f64_lossy(),
        first: res.values.first().map(|v| v.to_f64_lossy()),
        pairs,
    })
}

fn dense_run(op: &BseOperator<f64>) -> Result<Run, Failure> {
    let n = op.n();
    let t = Instant::now();
    let h = oracle::assemble_h(op)?;
    let (vals, vecs) = oracle::dense_eig(&h)?;
    let seconds = t.elapsed().as_secs_f64();
    let ha = h.adjoint();
    let mut pairs: Vec<Pair> = vals
        .iter()
        .enumerate()
        .map(|(k, lam)| {
            let x: Vec<C64> = vecs.column(k).iter().copied().collect();
            // y = S x with S = diag(I, −I) is a left eigenvector of a BSE matrix
            let y: Vec<C64> = x.iter().enumerate().map(|(i, z)| if i < n { *z } else { -z }).collect();
            let ny = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let y: Vec<C64> = y.iter().map(|z| z / ny).collect();
            let l = lam.norm().max(f64::MIN_POSITIVE);
            Pair {
                lambda: lam.re,
                b: None,
                right: oracle::residual(&h, *lam, &x) / l,
                left: oracle::residual(&ha, lam.conj(), &y) / l,
                x,
            }
        })
        .collect();
    sort_pairs(&mut pairs);
    let ys: Vec<Vec<C64>> = pairs
        .iter()
        .map(|p| {
            let y: Vec<C64> = p.x.iter().enumerate().map(|(i, z)| if i < n { *z } else { -z }).collect();
            let ny = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            y.into_iter().map(|z| z / ny).collect()
        })
        .collect();
    let mut biorth = 0.0f64;
    for (i, y) in ys.iter().enumerate() {
        for (j, p) in pairs.iter().enumerate() {
            if i != j {
                let ip: C64 = y.iter().zip(&p.x).map(|(a, b)| a.conj() * b).sum();
                biorth = biorth.max(ip.norm());
            }
        }
    }
    let first = pairs.iter().find(|p| p.lambda > 0.0).map(|p| p.lambda);
    Ok(Run {
        solver: SolverArg::Dense,
        status: Status::Converged,
        restarts: 0,
        nconv: vals.len(),
        seconds,
        biorth,
        pairs,
        first,
    })
}

/// Positive values first, then negative, each by ascending `|λ|`.
fn sort_pairs(pairs: &mut [Pair]) {
    pairs.sort_by(|a, b| {
        (a.lambda < 0.0)
            .cmp(&(b.lambda < 0.0))
            .then(a.lambda.abs().partial_cmp(&b.lambda.abs()).unwrap_or(std::cmp::Ordering::Equal))
    });
}

fn run_one(op: &BseOperator<f64>, solver: SolverArg, p: &SolverArgs, seed: u64) -> Result<Run, Failure> {
    let cfg = config(p, seed);
    match (solver.kind(), p.precision) {
        (None, Precision::Double) => dense_run(op),
        (None, Precision::Single) => Err(Failure::usage("--precision single is not available with --solver dense")),
        (Some(kind), Precision::Double) => structured_run(op, kind, solver, &cfg),
        (Some(kind), Precision::Single) => structured_run(&op.cast::<f32>(), kind, solver, &cfg),
    }
}

fn precision_name(p: Precision) -> &'static str {
    match p {
        Precision::Double => "double",
        Precision::Single => "single",
    }
}

fn solve_report(desc: &str, n: usize, args: &SolveArgs, run: &Run) -> String {
    let p = &args.params;
    let mut s = String::new();
    let opt = |v: Option<usize>| v.map_or("auto".to_string(), |x| x.to_string());
    let _ = writeln!(s, "schema_version = {SCHEMA_VERSION}");
    let _ = writeln!(s, "command = solve");
    let _ = writeln!(s, "solver = {}", run.solver.name());
    let _ = writeln!(s, "instance = {desc}");
    let _ = writeln!(s, "n = {n}");
    let _ = writeln!(s, "nev = {}", p.nev);
    let _ = writeln!(s, "ncv = {}", opt(p.ncv));
    let _ = writeln!(s, "restart_size = {}", opt(p.restart_size));
    let _ = writeln!(s, "tol = {:e}", p.tol);
    let _ = writeln!(s, "which = {}", if matches!(p.which, WhichArg::Smallest) { "smallest" } else { "largest" });
    let _ = writeln!(s, "criterion = {}", if matches!(p.criterion, CriterionArg::Rel) { "rel" } else { "abs" });
    let _ = writeln!(s, "max_restarts = {}", p.max_restarts);
    let _ = writeln!(s, "seed = {}", args.instance.seed);
    let _ = writeln!(s, "precision = {}", precision_name(p.precision));
    let _ = writeln!(s, "status = {}", status_name(run.status));
    let _ = writeln!(s, "restarts = {}", run.restarts);
    let _ = writeln!(s, "nconv = {}", run.nconv);
    let _ = writeln!(s, "time_seconds = {:.6}", run.seconds);
    if let Some(f) = run.first {
        let _ = writeln!(s, "first_eigenvalue = {f:.16e}");
    }
    let _ = writeln!(s, "max_relative_residual = {:.6e}", run.max_residual());
    let _ = writeln!(s, "biorthogonality = {:.6e}", run.biorth);
    let _ = writeln!(s, "pairs = {}", run.pairs.len());
    let _ = writeln!(s, "# index lambda abs_b right_relative_residual left_relative_residual");
    for (i, pr) in run.pairs.iter().enumerate() {
        let b = pr.b.map_or("-".to_string(), |b| format!("{b:.6e}"));
        let _ = writeln!(s, "pair {i} {:.16e} {b} {:.6e} {:.6e}", pr.lambda, pr.right, pr.left);
    }
    s
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: 6,
            msg: format!("--report {}: {e}", p.display()),
        }),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn write_vectors(path: &Path, pairs: &[Pair]) -> Result<(), Failure> {
    let rows = pairs.first().map_or(0, |p| p.x.len());
    let mut s = String::new();
    let _ = writeln!(s, "%%MatrixMarket matrix array complex general");
    let _ = writeln!(s, "% right eigenvectors, one column per pair in report order");
    let _ = writeln!(s, "{rows} {}", pairs.len());
    for p in pairs {
        for z in &p.x {
            let _ = writeln!(s, "{:?} {:?}", z.re, z.im);
        }
    }
    fs::write(path, s).map_err(|e| Failure {
        code: 6,
        msg: format!("--vectors {}: {e}", path.display()),
    })
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Failure> {
    let (desc, op) = load(&args.instance)?;
    let run = run_one(&op, args.solver, &args.params, args.instance.seed)?;
    emit(&solve_report(&desc, op.n(), &args, &run), args.report.as_deref())?;
    if let Some(v) = &args.vectors {
        write_vectors(v, &run.pairs)?;
    }
    Ok(status_code(run.status))
}

fn cmd_compare(args: CompareArgs) -> Result<u8, Failure> {
    let (desc, op) = load(&args.instance)?;
    let mut runs = Vec::new();
    for &s in &args.solvers {
        runs.push(run_one(&op, s, &args.params, args.instance.seed)?);
    }
    let mut s = String::new();
    let _ = writeln!(s, "schema_version = {SCHEMA_VERSION}");
    let _ = writeln!(s, "command = compare");
    let _ = writeln!(s, "instance = {desc}");
    let _ = writeln!(s, "n = {}", op.n());
    let _ = writeln!(s, "nev = {}", args.params.nev);
    let _ = writeln!(s, "tol = {:e}", args.params.tol);
    let _ = writeln!(s, "# solver restarts time_seconds max_relative_residual biorthogonality status");
    for r in &runs {
        let _ = writeln!(
            s,
            "run {} {} {:.6} {:.6e} {:.6e} {}",
            r.solver.name(),
            r.restarts,
            r.seconds,
            r.max_residual(),
            r.biorth,
            status_name(r.status)
        );
    }
    let _ = writeln!(s, "# solver_a solver_b max_relative_eigenvalue_deviation");
    let half = args.params.nev / 2;
    for (i, a) in runs.iter().enumerate() {
        for b in &runs[i + 1..] {
            let (va, vb) = (a.positive_values(), b.positive_values());
            let dev = va
                .iter()
                .zip(&vb)
                .take(half)
                .map(|(x, y)| (x - y).abs() / x.abs())
                .fold(0.0, f64::max);
            let _ = writeln!(s, "deviation {} {} {dev:.6e}", a.solver.name(), b.solver.name());
        }
    }
    emit(&s, args.report.as_deref())?;
    Ok(runs.iter().map(|r| status_code(r.status)).max().unwrap_or(0))
}

fn cmd_generate(args: GenerateArgs) -> Result<u8, Failure> {
    if args.instance.matrix_r.is_some() {
        return Err(Failure::usage("generate needs --pentadiag or --random"));
    }
    let (desc, op) = load(&args.instance)?;
    write_blocks(&op, &args.out_r, &args.out_c)?;
    println!("wrote {desc} to {} and {}", args.out_r.display(), args.out_c.display());
    Ok(0)
}

fn cmd_check(args: CheckArgs) -> Result<u8, Failure> {
    let (desc, op) = load(&args.instance)?;
    let verdict = oracle::definiteness_check(&op)?;
    println!("schema_version = {SCHEMA_VERSION}");
    println!("command = check");
    println!("instance = {desc}");
    println!("n = {}", op.n());
    println!("norm_bound = {:.6e}", op.norm_bound());
    let name = match verdict {
        Definiteness::Definite => "definite",
        Definiteness::Indefinite => "indefinite",
        Definiteness::Borderline => "borderline",
    };
    println!("definiteness = {name}");
    if verdict != Definiteness::Definite {
        return Ok(4);
    }
    let reference = oracle::decompose(&op)?.positive_values();
    let nev = 2 * op.n().min(3);
    let mut cfg = SolverConfig::with_nev(nev);
    cfg.tol = 1e-10;
    let mut worst = 0.0f64;
    for kind in SolverKind::ALL {
        let res = solve(&op, kind, &cfg)?;
        let dev = res
            .values
            .iter()
            .zip(&reference)
            .map(|(l, e)| (l - e).abs() / e)
            .fold(0.0, f64::max);
        println!("oracle_deviation_{} = {dev:.6e}", kind.name());
        worst = worst.max(dev);
    }
    let ok = worst <= CHECK_TOL;
    println!("oracle_agreement = {}", if ok { "pass" } else { "fail" });
    Ok(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Check(a) => cmd_check(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("bse: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
