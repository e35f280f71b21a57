//! Instrumented searches: the classic c-method and the sieved alpha-method.
//!
//! Both count the candidates they test. When every intermediate fits in a
//! `u128` the scan runs on machine integers; otherwise it falls back to
//! `BigUint`. The two paths make identical decisions.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::context::{FactorPair, FermatContext};
use crate::error::Error;
use crate::numeric::{is_perfect_square, is_perfect_square_u128, Natural};
use crate::sieve::{step_table, Direction, SieveProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "c-method")]
    CMethod,
    #[serde(rename = "alpha-method")]
    AlphaMethod,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::CMethod => "c-method",
            Method::AlphaMethod => "alpha-method",
        })
    }
}

/// Upper bound on the number of candidates a solver may test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    max_iterations: u64,
}

impl SearchBudget {
    pub const DEFAULT_MAX: u64 = 100_000_000;

    pub fn new(max_iterations: u64) -> Result<Self, Error> {
        if max_iterations == 0 {
            return Err(Error::InvalidArgument("budget must be at least 1".into()));
        }
        Ok(SearchBudget { max_iterations })
    }

    pub fn max_iterations(&self) -> u64 {
        self.max_iterations
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_iterations: Self::DEFAULT_MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub method: Method,
    pub factors: FactorPair,
    /// Candidates tested, including the successful one.
    pub iterations: u64,
    pub terminal_c: Natural,
    pub terminal_alpha: Natural,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("budget exhausted after {iterations} candidates (last tested {last_tested})")]
    BudgetExhausted { last_tested: Natural, iterations: u64 },
    #[error("only the trivial factorization n = n * 1 was found (c = {c}); n is likely prime")]
    TrivialOnly { c: Natural, iterations: u64 },
    #[error("no non-trivial hit in the scanned range ({iterations} candidates)")]
    RangeExhausted { iterations: u64 },
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl SolveError {
    /// Candidates tested before giving up, if the search ran at all.
    pub fn iterations(&self) -> Option<u64> {
        match self {
            SolveError::BudgetExhausted { iterations, .. }
            | SolveError::TrivialOnly { iterations, .. }
            | SolveError::RangeExhausted { iterations } => Some(*iterations),
            SolveError::Invalid(_) => None,
        }
    }

    /// Short machine-readable tag.
    pub fn status(&self) -> &'static str {
        match self {
            SolveError::BudgetExhausted { .. } => "budget_exhausted",
            SolveError::TrivialOnly { .. } => "trivial_only",
            SolveError::RangeExhausted { .. } => "range_exhausted",
            SolveError::Invalid(_) => "invalid",
        }
    }
}

fn success(ctx: &FermatContext, method: Method, c: BigUint, alpha: BigUint, iterations: u64) -> SolveResult {
    let factors = FactorPair::from_witness(ctx, c, alpha);
    SolveResult {
        method,
        terminal_c: factors.c.clone(),
        terminal_alpha: factors.alpha.clone(),
        factors,
        iterations,
    }
}

/// Classic Fermat search: `c = c_start, c_start + 1, ...` until
/// `Pc = c² + 2·X0·c + P0` is a perfect square with a non-trivial split.
///
/// Successive squares give increasingly unbalanced splits, so the first
/// square whose split is `n · 1` ends the search with
/// [`SolveError::TrivialOnly`].
pub fn c_method_solve(
    ctx: &FermatContext,
    c_start: &BigUint,
    budget: SearchBudget,
) -> Result<SolveResult, SolveError> {
    if **ctx.n() < BigUint::from(9u32) {
        return Err(Error::InvalidArgument("the c-method needs n >= 9".into()).into());
    }
    match narrow_c_limits(ctx, c_start, budget) {
        Some((x0, c0, n)) => c_scan_narrow(ctx, x0, c0, n, budget),
        None => c_scan_wide(ctx, c_start, budget),
    }
}

fn narrow_c_limits(ctx: &FermatContext, c_start: &BigUint, budget: SearchBudget) -> Option<(u128, u128, u128)> {
    let x0 = ctx.x0().to_u128()?;
    let c0 = c_start.to_u128()?;
    let last = x0.checked_add(c0)?.checked_add(budget.max_iterations as u128)?;
    (last < 1 << 64).then_some((x0, c0, ctx.n().to_u128()?))
}

pub(crate) fn c_scan_narrow(
    ctx: &FermatContext,
    x0: u128,
    c_start: u128,
    n: u128,
    budget: SearchBudget,
) -> Result<SolveResult, SolveError> {
    let mut xc = x0 + c_start;
    let mut pc = xc * xc - n;
    for i in 1..=budget.max_iterations {
        if let Some(root) = is_perfect_square_u128(pc) {
            let c = xc - x0;
            if xc - root > 1 {
                let alpha = root - c;
                return Ok(success(ctx, Method::CMethod, c.into(), alpha.into(), i));
            }
            return Err(SolveError::TrivialOnly {
                c: c.into(),
                iterations: i,
            });
        }
        if i == budget.max_iterations {
            return Err(SolveError::BudgetExhausted {
                last_tested: (xc - x0).into(),
                iterations: i,
            });
        }
        pc += 2 * xc + 1;
        xc += 1;
    }
    unreachable!("budget is at least one")
}

pub(crate) fn c_scan_wide(
    ctx: &FermatContext,
    c_start: &BigUint,
    budget: SearchBudget,
) -> Result<SolveResult, SolveError> {
    let x0 = ctx.x0().as_biguint();
    let mut c = c_start.clone();
    let mut xc = x0 + &c;
    let mut pc = ctx.compute_pc(&c).into_inner();
    for i in 1..=budget.max_iterations {
        if let Some(root) = is_perfect_square(&pc) {
            if &xc - &root > BigUint::from(1u32) {
                let alpha = root - &c;
                return Ok(success(ctx, Method::CMethod, c, alpha, i));
            }
            return Err(SolveError::TrivialOnly {
                c: c.into(),
                iterations: i,
            });
        }
        if i == budget.max_iterations {
            return Err(SolveError::BudgetExhausted {
                last_tested: c.into(),
                iterations: i,
            });
        }
        pc += (&xc << 1u32) + 1u32;
        xc += 1u32;
        c += 1u32;
    }
    unreachable!("budget is at least one")
}

/// Sieved alpha search from `alpha_start` in `direction`.
///
/// Ascending scans `[alpha_start, X0)`, descending scans
/// `[ceil(sqrt(P0)), alpha_start]`. Each admissible alpha is accepted when
/// `X0 - alpha` is a non-trivial divisor of `n`, which is exactly when the
/// quotient `(alpha² - P0) / (2(X0 - alpha))` is a nonnegative integer.
pub fn alpha_method_solve(
    ctx: &FermatContext,
    profile: &SieveProfile,
    alpha_start: &BigUint,
    direction: Direction,
    budget: SearchBudget,
) -> Result<SolveResult, SolveError> {
    if !ctx.contains_alpha(alpha_start) {
        let (lo, hi) = ctx.alpha_range();
        return Err(Error::AlphaOutOfRange {
            alpha: alpha_start.to_string(),
            min: lo.to_string(),
            max_exclusive: hi.to_string(),
        }
        .into());
    }
    let narrow = (ctx.n().to_u128(), alpha_start.to_u128(), ctx.x0().to_u128(), ctx.alpha_min().to_u128());
    match narrow {
        (Some(n), Some(start), Some(x0), Some(lo)) => {
            alpha_scan_narrow(ctx, profile, n, x0, lo, start, direction, budget)
        }
        _ => alpha_scan_wide(ctx, profile, alpha_start, direction, budget),
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn alpha_scan_narrow(
    ctx: &FermatContext,
    profile: &SieveProfile,
    n: u128,
    x0: u128,
    alpha_min: u128,
    start: u128,
    direction: Direction,
    budget: SearchBudget,
) -> Result<SolveResult, SolveError> {
    let steps = step_table(profile.allowed_digits, direction);
    let admits = |a: u128| profile.allowed_digits.contains((a % 10) as u8);
    // Inclusive scan bounds.
    let (first, last) = match direction {
        Direction::Ascending => (start, x0 - 1),
        Direction::Descending => (start, alpha_min),
    };
    let mut alpha = first;
    if !admits(alpha) {
        match next_alpha(alpha, steps, direction, last) {
            Some(a) => alpha = a,
            None => return Err(SolveError::RangeExhausted { iterations: 0 }),
        }
    }
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        let q = x0 - alpha;
        if q > 1 && n % q == 0 {
            let c = (n / q - x0 - alpha) / 2;
            return Ok(success(ctx, Method::AlphaMethod, c.into(), alpha.into(), iterations));
        }
        let Some(next) = next_alpha(alpha, steps, direction, last) else {
            return Err(SolveError::RangeExhausted { iterations });
        };
        if iterations == budget.max_iterations {
            return Err(SolveError::BudgetExhausted {
                last_tested: alpha.into(),
                iterations,
            });
        }
        alpha = next;
    }
}

fn next_alpha(alpha: u128, steps: [u8; 10], direction: Direction, last: u128) -> Option<u128> {
    let step = steps[(alpha % 10) as usize] as u128;
    if step == 0 {
        return None;
    }
    match direction {
        Direction::Ascending => alpha.checked_add(step).filter(|a| *a <= last),
        Direction::Descending => alpha.checked_sub(step).filter(|a| *a >= last),
    }
}

pub(crate) fn alpha_scan_wide(
    ctx: &FermatContext,
    profile: &SieveProfile,
    alpha_start: &BigUint,
    direction: Direction,
    budget: SearchBudget,
) -> Result<SolveResult, SolveError> {
    let (lo, hi) = ctx.alpha_range();
    let candidates = match direction {
        Direction::Ascending => profile.candidates(ctx, alpha_start, &hi, direction)?,
        Direction::Descending => profile.candidates(ctx, &lo, &(alpha_start + 1u32), direction)?,
    };
    let n = ctx.n().as_biguint();
    let x0 = ctx.x0().as_biguint();
    let one = BigUint::from(1u32);
    let mut candidates = candidates.peekable();
    let mut iterations = 0u64;
    while let Some(alpha) = candidates.next() {
        iterations += 1;
        let q = x0 - &alpha;
        if q > one {
            let (p, rem) = n.div_rem(&q);
            if rem.is_zero() {
                let c = (p - x0 - &alpha) >> 1u32;
                return Ok(success(ctx, Method::AlphaMethod, c, alpha, iterations));
            }
        }
        if iterations == budget.max_iterations && candidates.peek().is_some() {
            return Err(SolveError::BudgetExhausted {
                last_tested: alpha.into(),
                iterations,
            });
        }
    }
    Err(SolveError::RangeExhausted { iterations })
}
