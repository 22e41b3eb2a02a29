//! Accelerated proximal gradient solvers for composite convex objectives,
//! built around a scalar scaling line search that rescales each iterate
//! along its own ray before the momentum update.
//!
//! The crate ships:
//!
//! * a solver engine with three update rules (classical FISTA momentum and
//!   two scaled variants) over user-supplied problem callbacks;
//! * problem adapters for LASSO, group LASSO, and trace-norm multitask
//!   regression, each with a closed-form scaling search;
//! * a kernel SVM dual solver using exact line search and alternating
//!   box/hyperplane projections;
//! * proximal operators and the dense linear algebra they need (power
//!   iteration, one-sided Jacobi SVD), with no external numeric
//!   dependencies;
//! * seeded data generation and trace serialization for reproducible
//!   benchmarks;
//! * an audit module that numerically re-checks the solver's guarantees
//!   over recorded traces;
//! * the `rapid` CLI wrapping all of the above.

pub mod audit;
pub mod cli;
pub mod data_io;
pub mod error;
pub mod linalg;
pub mod problems;
pub mod prox;
pub mod solver;
pub mod svm;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, DenseVector};
pub use solver::{ProblemSpec, Rule, SolveResult, SolverConfig};
