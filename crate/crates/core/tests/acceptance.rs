//! Acceptance suite. Each test prints one `criterion N ... PASS|FAIL` line.
//!
//! Run with `cargo test -p fermat-lab --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use fermat_lab::harness::{gen_semiprime, measure, verify_example, BenchmarkSpec, RunStatus, Semiprime};
use fermat_lab::{
    alpha_method_solve, boundary_paper, c_method_solve, candidate_count, Direction, ExactRational,
    FermatContext, SearchBudget, SieveProfile,
};

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "criterion {id} {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn ratio(n: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n))
}

fn to_u64(v: &BigUint) -> u64 {
    v.to_u64().expect("fits in u64")
}

/// Smallest prime factor by plain trial division.
fn smallest_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn corpus(bits: std::ops::RangeInclusive<u32>, count: usize, lo: i64, hi: i64, seed: u64) -> Vec<Semiprime> {
    let sizes: Vec<u32> = bits.collect();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let spec = BenchmarkSpec {
                bits: sizes[i % sizes.len()],
                count: 1,
                ratio_min: ratio(lo),
                ratio_max: ratio(hi),
                seed,
                budget: SearchBudget::default(),
            };
            gen_semiprime(&spec, &mut spec.record_rng(i)).expect("generation")
        })
        .collect()
}

fn balanced_corpus() -> Vec<Semiprime> {
    corpus(24..=40, 300, 1, 2, 0x5eed_0006)
}

fn odd_coprime_to_ten(n: u64) -> bool {
    n % 2 == 1 && n % 5 != 0
}

#[test]
fn criterion_1_worked_example() {
    let t = Instant::now();
    let rep = verify_example();
    let elapsed = t.elapsed();
    let matched = rep.checks.iter().filter(|c| c.passed()).count();
    let boundary = rep.checks.iter().find(|c| c.name == "0.255X0").unwrap();
    let delta = rep.checks.iter().find(|c| c.name == "c - 0.4z").unwrap();
    let ok = rep.passed()
        && rep.checks.len() == 8
        && boundary.actual == "1268818297305227106356971012171159349956"
        && delta.actual == "219312713260290089447787339028285406053"
        && elapsed < Duration::from_secs(1);
    report(1, "worked example", ok, format!("{matched}/8 values, {elapsed:?}"));
    assert!(ok, "{rep}");
}

#[test]
fn criterion_2_oracle_equivalence() {
    let t = Instant::now();
    let sps = corpus(16..=48, 500, 1, 8, 0x5eed_0002);
    let failures: Vec<String> = sps
        .par_iter()
        .filter_map(|sp| {
            let n = to_u64(&sp.n);
            let q = smallest_factor(n);
            let p = n / q;
            if (p, q) != (to_u64(&sp.p), to_u64(&sp.q)) || smallest_factor(p) != p || gcd(n, 10) != 1 {
                return Some(format!("n={n}: oracle disagrees with generator"));
            }
            let ctx = FermatContext::new(sp.n.clone()).unwrap();
            let x0 = to_u64(ctx.x0());
            let budget = SearchBudget::default();
            let cr = match c_method_solve(&ctx, &BigUint::zero(), budget) {
                Ok(r) => r,
                Err(e) => return Some(format!("n={n}: c-method {e}")),
            };
            if (cr.factors.p.to_u64(), cr.factors.q.to_u64()) != (Some(p), Some(q)) {
                return Some(format!("n={n}: c-method factors"));
            }
            if cr.terminal_c.to_u64() != Some((p + q) / 2 - x0) {
                return Some(format!("n={n}: terminal_c {}", cr.terminal_c));
            }
            let profile = SieveProfile::build(&ctx).unwrap();
            let ar = match alpha_method_solve(&ctx, &profile, ctx.alpha_min(), Direction::Ascending, budget) {
                Ok(r) => r,
                Err(e) => return Some(format!("n={n}: alpha-method {e}")),
            };
            if (ar.factors.p.to_u64(), ar.factors.q.to_u64()) != (Some(p), Some(q)) {
                return Some(format!("n={n}: alpha-method factors"));
            }
            if ar.terminal_alpha.to_u64() != Some(x0 - q) {
                return Some(format!("n={n}: terminal_alpha {}", ar.terminal_alpha));
            }
            None
        })
        .collect();
    let elapsed = t.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(
        2,
        "oracle equivalence",
        ok,
        format!("{} semiprimes, {} failures, {elapsed:?}", sps.len(), failures.len()),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_3_divisibility_equivalence() {
    let mut pairs = 0u64;
    let mut exceptions = Vec::new();
    for n in 9u64..10_000 {
        if !odd_coprime_to_ten(n) || smallest_factor(n) == n {
            continue;
        }
        let ctx = FermatContext::new(n).unwrap();
        let (lo, hi) = ctx.alpha_range();
        let (lo, x0) = (to_u64(&lo), to_u64(&hi));
        for alpha in lo..x0 {
            pairs += 1;
            let integral = ctx.alpha_to_c(&BigUint::from(alpha)).unwrap().is_some();
            let divides = n % (x0 - alpha) == 0;
            if integral != divides {
                exceptions.push((n, alpha));
            }
        }
    }
    let ok = exceptions.is_empty();
    report(
        3,
        "divisibility equivalence",
        ok,
        format!("{pairs} (n, alpha) pairs, {} exceptions", exceptions.len()),
    );
    assert!(ok, "{exceptions:?}");
}

#[test]
fn criterion_4_sieve_soundness_and_density() {
    let mut sps = corpus(16..=48, 500, 1, 8, 0x5eed_0002);
    sps.extend(balanced_corpus());
    let mut missed = Vec::new();
    let mut worst_density = 0f64;
    for sp in &sps {
        let ctx = FermatContext::new(sp.n.clone()).unwrap();
        let profile = SieveProfile::build(&ctx).unwrap();
        let alpha = ctx.x0().as_biguint() - &sp.q;
        // walk the real stream across a window around the true alpha
        let lo = ctx.alpha_min().as_biguint();
        let from = if alpha >= lo + 25u32 { &alpha - 25u32 } else { lo.clone() };
        let to = (&alpha + 25u32).min(ctx.x0().as_biguint().clone());
        let seen = profile
            .candidates(&ctx, &from, &to, Direction::Ascending)
            .unwrap()
            .any(|a| a == alpha);
        if !seen {
            missed.push(sp.n.to_string());
        }
        // density over the whole range, by residue filter
        let (lo, x0) = (to_u64(ctx.alpha_min()), to_u64(ctx.x0()));
        if x0 - lo >= 1_000 {
            let kept = (lo..x0).filter(|&a| profile.admits(&BigUint::from(a))).count();
            let density = kept as f64 / (x0 - lo) as f64;
            worst_density = worst_density.max((density - 0.4).abs());
        }
    }

    let mut max_count_gap = ExactRational::zero();
    let (mut kept_total, mut range_total) = (0u64, 0u64);
    for n in 9u64..10_000 {
        if !odd_coprime_to_ten(n) {
            continue;
        }
        let ctx = FermatContext::new(n).unwrap();
        let profile = SieveProfile::build(&ctx).unwrap();
        let (lo, x0) = ctx.alpha_range();
        let enumerated = profile
            .candidates(&ctx, &lo, &x0, Direction::Ascending)
            .unwrap()
            .count() as u64;
        kept_total += enumerated;
        range_total += to_u64(&x0) - to_u64(&lo);
        let gap = &candidate_count(&ctx) - &ExactRational::from_integer(BigInt::from(enumerated));
        let gap = if gap.is_negative() { -gap } else { gap };
        if gap > max_count_gap {
            max_count_gap = gap;
        }
    }
    let sweep_density = kept_total as f64 / range_total as f64;
    worst_density = worst_density.max((sweep_density - 0.4).abs());

    let ok = missed.is_empty() && worst_density <= 0.02 && max_count_gap <= ratio(4);
    report(
        4,
        "sieve soundness and density",
        ok,
        format!(
            "{} corpus alphas, {} missed, max |density - 0.4| = {worst_density:.4}, max count gap = {max_count_gap}",
            sps.len(),
            missed.len()
        ),
    );
    assert!(ok, "missed: {missed:?}");
}

/// `(num, den)` of the quotient form, computed in machine integers.
fn c_fraction(n: u64, alpha: u64) -> (i128, i128) {
    let x0 = (n as f64).sqrt() as i128;
    let x0 = (x0 - 2..x0 + 3).find(|x| x * x >= n as i128).unwrap();
    let p0 = x0 * x0 - n as i128;
    let a = alpha as i128;
    (a * a - p0, 2 * (x0 - a))
}

fn same_fraction(r: &ExactRational, (num, den): (i128, i128)) -> bool {
    r.numer() * BigInt::from(den) == r.denom() * BigInt::from(num)
}

#[test]
fn criterion_5_monotonicity_and_form_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut contexts: Vec<u64> = (0..100).map(|_| rng.gen_range(9u64..1 << 24) | 1).collect();
    contexts.extend((9u64..10_000).step_by(2));

    let mut violations = Vec::new();
    for &n in &contexts {
        let ctx = FermatContext::new(n).unwrap();
        let (lo, x0) = (to_u64(ctx.alpha_min()), to_u64(ctx.x0()));
        let mut prev: Option<ExactRational> = None;
        for alpha in lo..x0 {
            let a = BigUint::from(alpha);
            let c = ctx.c_rational(&a).unwrap();
            if prev.as_ref().is_some_and(|p| *p >= c) {
                violations.push(format!("n={n} alpha={alpha}: not increasing"));
            }
            if !ctx.p0().is_zero() && ctx.derivative_numerator(&a) <= BigInt::zero() {
                violations.push(format!("n={n} alpha={alpha}: derivative numerator <= 0"));
            }
            prev = Some(c);
        }
    }

    let mut form_pairs = 0;
    while form_pairs < 1000 {
        let n = rng.gen_range(9u64..1 << 40) | 1;
        let ctx = FermatContext::new(n).unwrap();
        let (lo, x0) = (to_u64(ctx.alpha_min()), to_u64(ctx.x0()));
        if lo >= x0 {
            continue;
        }
        let alpha = rng.gen_range(lo..x0);
        let (_, rho_c) = ctx.rho_form(&BigUint::from(alpha)).unwrap();
        let direct = ctx.c_rational(&BigUint::from(alpha)).unwrap();
        let oracle = c_fraction(n, alpha);
        if rho_c != direct || !same_fraction(&rho_c, oracle) {
            violations.push(format!("n={n} alpha={alpha}: forms disagree"));
        }
        form_pairs += 1;
    }

    let ok = violations.is_empty();
    report(
        5,
        "monotonicity and positivity",
        ok,
        format!(
            "{} contexts, {form_pairs} form checks, {} violations",
            contexts.len(),
            violations.len()
        ),
    );
    assert!(ok, "{:?}", &violations[..violations.len().min(20)]);
}

#[test]
fn criterion_6_crossover_prediction() {
    let t = Instant::now();
    let sps = balanced_corpus();
    let records: Vec<_> = sps
        .par_iter()
        .map(|sp| measure(sp, SearchBudget::default()).unwrap())
        .collect();
    let elapsed = t.elapsed();
    let correct = records.iter().filter(|r| r.prediction_correct).count();
    let above = records
        .iter()
        .filter(|r| r.true_alpha.as_biguint() >= r.boundary_paper.as_biguint())
        .count();
    let solved = records.iter().all(|r| r.c_status == RunStatus::Ok);
    let share = correct as f64 / records.len() as f64;
    let ok = share >= 0.95 && solved && elapsed < Duration::from_secs(300);
    report(
        6,
        "crossover prediction",
        ok,
        format!(
            "{correct}/{} correct ({:.1}%), {above} above the boundary, {elapsed:?}",
            records.len(),
            share * 100.0
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_7_balanced_range_bounds() {
    let sps = balanced_corpus();
    let mut exceptions = Vec::new();
    for sp in &sps {
        let n = to_u64(&sp.n);
        let (p, q) = (to_u64(&sp.p), to_u64(&sp.q));
        let ctx = FermatContext::new(n).unwrap();
        let x0 = to_u64(ctx.x0());
        let c = (p + q) / 2 - x0;
        let alpha = x0 - q;

        // 9 Pc < Xc², with Pc = (c + alpha)²
        let xc = (x0 + c) as u128;
        let pc = ((c + alpha) as u128).pow(2);
        let balanced = 9 * pc < xc * xc && ctx.is_balanced_at(&BigUint::from(c));
        let c_cap = (61 * x0 + 500) / 1000 + 1;
        let alpha_cap = 3 * x0 / 10;
        let lib_cap = ctx
            .balanced_alpha_max(fermat_lab::BoundMode::Paper)
            .and_then(|v| v.to_u64());
        if !balanced || c >= c_cap || alpha >= alpha_cap || lib_cap != Some(alpha_cap) {
            exceptions.push(format!("n={n} c={c} alpha={alpha} X0={x0}"));
        }
        debug_assert!(to_u64(&boundary_paper(&ctx)) < x0);
    }
    let ok = exceptions.is_empty();
    report(
        7,
        "balanced-range bounds",
        ok,
        format!("{} semiprimes, {} exceptions", sps.len(), exceptions.len()),
    );
    assert!(ok, "{exceptions:?}");
}
