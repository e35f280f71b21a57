//! Where each method needs fewer candidate tests.
//!
//! One c-step advances `c` by 1 while one sieved alpha-step advances `alpha`
//! by 10/4 on average, so the alpha-method pulls ahead once
//! `f'(alpha) = dc/dalpha >= 2/5`. That holds for
//! `alpha >= X0 - sqrt(5n/9) ≈ 0.255·X0`.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::context::{BoundMode, FermatContext};
use crate::error::{Error, Result};
use crate::numeric::{isqrt, round_div, ExactRational, Natural, Rounding};
use crate::solvers::Method;

/// `f'(alpha) = (-alpha² + 2·X0·alpha - P0) / (2 (X0 - alpha)²)`.
pub fn derivative_ratio(ctx: &FermatContext, alpha: &BigUint) -> Result<ExactRational> {
    if alpha >= ctx.x0().as_biguint() {
        return Err(Error::AlphaAtPole(ctx.x0().to_string()));
    }
    let gap = BigInt::from(ctx.x0().as_biguint() - alpha);
    ExactRational::new(ctx.derivative_numerator(alpha), (&gap * &gap) << 1u32)
}

fn two_fifths() -> ExactRational {
    ExactRational::new(2.into(), 5.into()).expect("nonzero")
}

fn reaches_crossover(ctx: &FermatContext, alpha: &BigUint) -> bool {
    derivative_ratio(ctx, alpha).is_ok_and(|r| r >= two_fifths())
}

/// `round-half-up(255·X0 / 1000)`: the decimal 0.255 boundary, rounded the
/// way the published example rounds it.
pub fn boundary_paper(ctx: &FermatContext) -> Natural {
    round_div(&(ctx.x0().as_biguint() * 255u32), &BigUint::from(1000u32), Rounding::HalfUp)
        .expect("nonzero divisor")
        .into()
}

/// Smallest `alpha >= 0` with `f'(alpha) >= 2/5`.
pub fn boundary_exact(ctx: &FermatContext) -> Natural {
    let x0 = ctx.x0().as_biguint();
    // f' >= 2/5  <=>  9 (X0 - alpha)² <= 5n, so the seed is off by at most one.
    let root = isqrt(&((ctx.n().as_biguint() * 5u32) / 9u32));
    let mut alpha = if &root < x0 { x0 - root } else { BigUint::zero() };
    while !reaches_crossover(ctx, &alpha) {
        alpha += 1u32;
    }
    while !alpha.is_zero() && reaches_crossover(ctx, &(&alpha - 1u32)) {
        alpha -= 1u32;
    }
    alpha.into()
}

pub fn boundary(ctx: &FermatContext, mode: BoundMode) -> Natural {
    match mode {
        BoundMode::Paper => boundary_paper(ctx),
        BoundMode::Exact => boundary_exact(ctx),
    }
}

/// Which method is predicted to need fewer candidate tests when the true
/// `alpha` is as given.
pub fn classify(ctx: &FermatContext, alpha: &BigUint, mode: BoundMode) -> Result<Method> {
    if !ctx.contains_alpha(alpha) {
        let (lo, hi) = ctx.alpha_range();
        return Err(Error::AlphaOutOfRange {
            alpha: alpha.to_string(),
            min: lo.to_string(),
            max_exclusive: hi.to_string(),
        });
    }
    Ok(if *alpha >= *boundary(ctx, mode) {
        Method::AlphaMethod
    } else {
        Method::CMethod
    })
}

/// Comparative report for a known factorization. Integers serialize as
/// decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub boundary_paper: Natural,
    pub boundary_exact: Natural,
    pub alpha_cap_paper: Natural,
    pub true_c: Natural,
    pub true_alpha: Natural,
    /// Alpha-method iterations counted upward from `boundary_paper`, 0 below it.
    pub z: Natural,
    /// `floor(2z/5)`.
    pub sieved_iterations: Natural,
    /// `true_c - sieved_iterations`.
    #[serde(serialize_with = "serialize_display")]
    pub delta: BigInt,
    pub predicted_better: Method,
}

fn serialize_display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Builds the report for `n = p·q` with `p >= q`. `mode` picks the boundary
/// that decides `predicted_better`.
pub fn effectiveness_report(
    ctx: &FermatContext,
    p: &BigUint,
    q: &BigUint,
    mode: BoundMode,
) -> Result<RegionReport> {
    if p * q != **ctx.n() {
        return Err(Error::InvalidArgument(format!("{p} * {q} != {}", ctx.n())));
    }
    if p < q {
        return Err(Error::InvalidArgument("expected p >= q".into()));
    }
    let x0 = ctx.x0().as_biguint();
    // (p + q)/2 >= sqrt(n) and is an integer, hence >= X0; q <= sqrt(n) <= X0.
    let true_c = ((p + q) >> 1u32) - x0;
    let true_alpha = x0 - q;
    let bp = boundary_paper(ctx);
    let z = if true_alpha >= *bp {
        &true_alpha - &*bp
    } else {
        BigUint::zero()
    };
    let sieved = round_div(&(&z << 1u32), &BigUint::from(5u32), Rounding::Floor)?;
    let delta = BigInt::from(true_c.clone()) - BigInt::from(sieved.clone());
    let predicted_better = classify(ctx, &true_alpha, mode)?;
    Ok(RegionReport {
        boundary_paper: bp,
        boundary_exact: boundary_exact(ctx),
        alpha_cap_paper: ctx
            .balanced_alpha_max(BoundMode::Paper)
            .expect("paper cap always exists"),
        true_c: true_c.into(),
        true_alpha: true_alpha.into(),
        z: z.into(),
        sieved_iterations: sieved.into(),
        delta,
        predicted_better,
    })
}

/// `|boundary_paper - boundary_exact| / X0` as a float, for diagnostics.
pub fn boundary_gap(ctx: &FermatContext) -> f64 {
    let a = boundary_paper(ctx).to_bigint();
    let b = boundary_exact(ctx).to_bigint();
    let gap = ExactRational::new((a - b).magnitude().clone().into(), ctx.x0().to_bigint())
        .expect("X0 > 0");
    gap.to_f64().unwrap_or(f64::INFINITY)
}
