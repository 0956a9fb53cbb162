//! Sparse orthogonal factorization of the Fourier transform on the Johnson
//! graph `J(n, k)`, from the delta basis of functions on `k`-subsets to the
//! Gelfand-Tsetlin basis.
//!
//! A [`TransformPlan`] stores `n - 1` block-diagonal orthogonal factors with
//! blocks of size at most two. Applying them costs at most
//! `2 (n - 1) C(n, k)` counted operations. The [`oracle`] module rebuilds
//! everything densely for cross-checking.

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod factorization;
pub mod formats;
pub mod oracle;
pub mod plan_io;
pub mod spectral;
pub mod transform;

pub use combinatorics::{
    binomial, enumerate_labels, enumerate_words, rs_labels, tableau_contents, BasisLabel, StandardTableau,
    TwoRowDiagram, WordLabel,
};
pub use error::{Error, Result};
pub use factorization::{build_plan, build_plan_with_budget, Block, PlanBudget, SparseOrthFactor, TransformPlan};
pub use oracle::{verify_plan, VerificationReport};
pub use plan_io::{load_plan, read_plan, save_plan, write_plan};
pub use spectral::{project, weights, SpectralReport};
pub use transform::{forward, inverse, FunctionVector, GtCoefficients, OpCounter};
