//! Structure-preserving thick-restart Lanczos eigensolvers for definite
//! Bethe–Salpeter matrices
//!
//! ```text
//!     H = [  R   C ]      R = R^*,  C = C^T
//!         [ -C̄  -R̄ ]
//! ```
//!
//! `H` is never formed. Every solver works with two `n`-vector kernels,
//! `R u + C ū` and `R v - C v̄`, and with a pair of `n × m` bases that encode
//! the `2n × 2m` structured Krylov basis. Three equivalent recurrences are
//! provided:
//!
//! - [`solver::shao`]: `U/V` bases and a real symmetric projected matrix `T`.
//! - [`solver::gruning`]: `M/N` bases plus primed companions and a lower
//!   triangular projected factor `L` (restarted through its SVD).
//! - [`solver::projected`]: `W/Z` bases, where the projected problem itself
//!   has Bethe–Salpeter structure.
//!
//! All three compute the `nev/2` positive eigenvalues at the wanted end of the
//! spectrum (smallest or largest magnitude) and return the full set of
//! `±λ` eigentriplets, with left eigenvectors rebuilt from the right ones.
//!
//! [`oracle`] is an unstructured dense reference, [`matgen`] builds test
//! instances and [`mmio`] reads and writes the `R` and `C` blocks.

pub mod basis;
pub mod error;
pub mod linalg;
pub mod matgen;
pub mod mmio;
pub mod operator;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use basis::{ColumnBasis, Flavor, PairedBasis};
pub use error::{BseError, Result};
pub use operator::{Block, BseOperator, CsrBlock, DenseBlock};
pub use scalar::{Cplx, Real};
pub use solver::{
    solve, Criterion, EigResult, InitialVector, SolverConfig, SolverKind, Status, Which,
};
