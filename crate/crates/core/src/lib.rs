//! Fermat factorization laboratory.
//!
//! Two searches for `n = p·q`:
//!
//! * the **c-method**, classic Fermat: step `Xc = ceil(sqrt(n)) + c` until
//!   `Xc² - n` is a perfect square;
//! * the **alpha-method**: write that square as `(c + alpha)²`, so that
//!   `c = (alpha² - P0) / (2(X0 - alpha))`, and step through the `alpha`
//!   values allowed by a parity and last-digit sieve until `X0 - alpha`
//!   divides `n`.
//!
//! [`region`] predicts which of the two needs fewer candidate tests for a
//! given factorization, and [`harness`] generates semiprimes and measures
//! both.

pub mod context;
pub mod error;
pub mod harness;
pub mod numeric;
pub mod region;
pub mod sieve;
pub mod solvers;

pub use context::{BoundMode, FactorPair, FermatContext};
pub use error::{Error, Result};
pub use numeric::{ceil_sqrt, is_perfect_square, isqrt, round_div, ExactRational, Natural, Rounding};
pub use region::{
    boundary_exact, boundary_paper, classify, derivative_ratio, effectiveness_report, RegionReport,
};
pub use sieve::{build_profile, candidate_count, iter_candidates, Direction, Parity, SieveProfile};
pub use solvers::{alpha_method_solve, c_method_solve, Method, SearchBudget, SolveError, SolveResult};
