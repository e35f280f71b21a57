//! Semiprime generation and the two-method benchmark.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::prime::next_prime;
use crate::context::{BoundMode, FermatContext};
use crate::error::{Error, Result};
use crate::numeric::{ceil_sqrt, isqrt, ExactRational, Natural};
use crate::region::{boundary_paper, classify};
use crate::sieve::{Direction, SieveProfile};
use crate::solvers::{alpha_method_solve, c_method_solve, Method, SearchBudget, SolveError, SolveResult};

const MAX_ATTEMPTS: usize = 10_000;

/// Parameters of a benchmark batch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkSpec {
    /// Bit length of every generated `n`.
    pub bits: u32,
    pub count: usize,
    /// Inclusive lower bound on `p/q`.
    pub ratio_min: ExactRational,
    /// Exclusive upper bound on `p/q`.
    pub ratio_max: ExactRational,
    pub seed: u64,
    pub budget: SearchBudget,
}

impl BenchmarkSpec {
    pub const MIN_BITS: u32 = 16;
    pub const MAX_BITS: u32 = 96;

    pub fn validate(&self) -> Result<()> {
        let one = ExactRational::from_integer(BigInt::one());
        if !(Self::MIN_BITS..=Self::MAX_BITS).contains(&self.bits) {
            return Err(Error::InvalidArgument(format!(
                "bits must be in {}..={}",
                Self::MIN_BITS,
                Self::MAX_BITS
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidArgument("count must be at least 1".into()));
        }
        if self.ratio_min < one || self.ratio_min >= self.ratio_max {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= ratio_min < ratio_max, got {} and {}",
                self.ratio_min, self.ratio_max
            )));
        }
        Ok(())
    }

    /// The generator for record `index`: one ChaCha8 stream per record, so
    /// records are independent of evaluation order.
    pub fn record_rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semiprime {
    pub n: BigUint,
    pub p: BigUint,
    pub q: BigUint,
}

fn div_ceil(a: &BigUint, b: &BigUint) -> BigUint {
    a.div_ceil(b)
}

fn to_biguint(r: &BigInt) -> BigUint {
    r.to_biguint().expect("nonnegative")
}

/// Draws primes `q < p` with `ratio_min <= p/q < ratio_max`, `n = p·q` of
/// exactly `spec.bits` bits, and `gcd(n, 10) = 1`.
pub fn gen_semiprime<R: Rng + ?Sized>(spec: &BenchmarkSpec, rng: &mut R) -> Result<Semiprime> {
    spec.validate()?;
    let (a, b) = (to_biguint(spec.ratio_min.numer()), to_biguint(spec.ratio_min.denom()));
    let (c, d) = (to_biguint(spec.ratio_max.numer()), to_biguint(spec.ratio_max.denom()));
    let n_lo = BigUint::one() << (spec.bits - 1);
    let n_hi = (BigUint::one() << spec.bits) - 1u32;

    // n = r·q² with r in [a/b, c/d) and n in [n_lo, n_hi].
    let q_lo = ceil_sqrt(&div_ceil(&(&n_lo * &d), &c)).max(BigUint::from(7u32));
    let q_hi = isqrt(&(&n_hi * &b / &a));
    if q_lo > q_hi {
        return Err(Error::Generation(format!(
            "no {}-bit semiprime has a ratio in [{}, {})",
            spec.bits, spec.ratio_min, spec.ratio_max
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let q = next_prime(&rng.gen_biguint_range(&q_lo, &(&q_hi + 1u32)), rng);
        if q > q_hi {
            continue;
        }
        let p_lo = div_ceil(&(&q * &a), &b)
            .max(&q + 1u32)
            .max(div_ceil(&n_lo, &q));
        let p_end = div_ceil(&(&q * &c), &d).min(&n_hi / &q + 1u32);
        if p_lo >= p_end {
            continue;
        }
        let p = next_prime(&rng.gen_biguint_range(&p_lo, &p_end), rng);
        if p >= p_end {
            continue;
        }
        let n = &p * &q;
        debug_assert_eq!(n.bits(), spec.bits as u64);
        debug_assert!(&p * &b >= &a * &q && &p * &d < &c * &q);
        if (&n % 10u32).gcd(&BigUint::from(10u32)) != BigUint::one() {
            continue;
        }
        return Ok(Semiprime { n, p, q });
    }
    Err(Error::Generation(format!(
        "gave up after {MAX_ATTEMPTS} attempts for {} bits, ratio [{}, {})",
        spec.bits, spec.ratio_min, spec.ratio_max
    )))
}

/// Per-method outcome in a benchmark record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    /// Factors found but they disagree with the generator's ground truth.
    Mismatch,
    BudgetExhausted,
    RangeExhausted,
    TrivialOnly,
    Invalid,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Mismatch => "mismatch",
            RunStatus::BudgetExhausted => "budget_exhausted",
            RunStatus::RangeExhausted => "range_exhausted",
            RunStatus::TrivialOnly => "trivial_only",
            RunStatus::Invalid => "invalid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkRecord {
    pub n: Natural,
    pub p: Natural,
    pub q: Natural,
    pub bits: u64,
    pub ratio: ExactRational,
    pub true_c: Natural,
    pub true_alpha: Natural,
    pub c_iterations: u64,
    pub alpha_iterations: u64,
    pub boundary_paper: Natural,
    pub predicted_better: Method,
    pub prediction_correct: bool,
    pub c_status: RunStatus,
    pub alpha_status: RunStatus,
    pub c_time: Duration,
    pub alpha_time: Duration,
}

fn outcome(res: &Result<SolveResult, SolveError>, sp: &Semiprime) -> (RunStatus, u64) {
    match res {
        Ok(r) => {
            let ok = *r.factors.p == sp.p && *r.factors.q == sp.q;
            (if ok { RunStatus::Ok } else { RunStatus::Mismatch }, r.iterations)
        }
        Err(e) => {
            let status = match e {
                SolveError::BudgetExhausted { .. } => RunStatus::BudgetExhausted,
                SolveError::RangeExhausted { .. } => RunStatus::RangeExhausted,
                SolveError::TrivialOnly { .. } => RunStatus::TrivialOnly,
                SolveError::Invalid(_) => RunStatus::Invalid,
            };
            (status, e.iterations().unwrap_or(0))
        }
    }
}

/// Runs both solvers on one known semiprime.
///
/// The c-method starts at `c = 0`; the alpha-method ascends from
/// `max(ceil(sqrt(P0)), boundary_paper)`.
pub fn measure(sp: &Semiprime, budget: SearchBudget) -> Result<BenchmarkRecord> {
    let ctx = FermatContext::new(sp.n.clone())?;
    let x0 = ctx.x0().as_biguint();
    let true_c = ((&sp.p + &sp.q) >> 1u32) - x0;
    let true_alpha = x0 - &sp.q;
    let bp = boundary_paper(&ctx);
    let predicted = classify(&ctx, &true_alpha, BoundMode::Paper)?;

    let t = Instant::now();
    let c_res = c_method_solve(&ctx, &BigUint::default(), budget);
    let c_time = t.elapsed();

    let profile = SieveProfile::build(&ctx)?;
    let start = ctx.alpha_min().as_biguint().max(bp.as_biguint()).clone();
    let t = Instant::now();
    let a_res = alpha_method_solve(&ctx, &profile, &start, Direction::Ascending, budget);
    let alpha_time = t.elapsed();

    let (c_status, c_iterations) = outcome(&c_res, sp);
    let (alpha_status, alpha_iterations) = outcome(&a_res, sp);
    let prediction_correct = match predicted {
        Method::AlphaMethod => {
            alpha_status == RunStatus::Ok
                && (c_status != RunStatus::Ok || alpha_iterations <= c_iterations)
        }
        Method::CMethod => {
            c_status == RunStatus::Ok
                && (alpha_status != RunStatus::Ok || c_iterations <= alpha_iterations)
        }
    };
    Ok(BenchmarkRecord {
        bits: sp.n.bits(),
        ratio: ExactRational::new(sp.p.clone().into(), sp.q.clone().into())?,
        n: sp.n.clone().into(),
        p: sp.p.clone().into(),
        q: sp.q.clone().into(),
        true_c: true_c.into(),
        true_alpha: true_alpha.into(),
        c_iterations,
        alpha_iterations,
        boundary_paper: bp,
        predicted_better: predicted,
        prediction_correct,
        c_status,
        alpha_status,
        c_time,
        alpha_time,
    })
}

/// Generates `spec.count` semiprimes and measures both methods on each.
/// Records are computed in parallel and returned in index order.
pub fn run_bench(spec: &BenchmarkSpec) -> Result<Vec<BenchmarkRecord>> {
    spec.validate()?;
    (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let sp = gen_semiprime(spec, &mut spec.record_rng(i))?;
            measure(&sp, spec.budget)
        })
        .collect()
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: &'a Natural,
    p: &'a Natural,
    q: &'a Natural,
    bits: u64,
    ratio_num: String,
    ratio_den: String,
    true_c: &'a Natural,
    true_alpha: &'a Natural,
    c_iters: u64,
    alpha_iters: u64,
    boundary_paper: &'a Natural,
    predicted_better: Method,
    prediction_correct: bool,
    c_status: &'static str,
    alpha_status: &'static str,
    c_nanos: u128,
    alpha_nanos: u128,
}

impl<'a> From<&'a BenchmarkRecord> for CsvRow<'a> {
    fn from(r: &'a BenchmarkRecord) -> Self {
        CsvRow {
            n: &r.n,
            p: &r.p,
            q: &r.q,
            bits: r.bits,
            ratio_num: r.ratio.numer().to_string(),
            ratio_den: r.ratio.denom().to_string(),
            true_c: &r.true_c,
            true_alpha: &r.true_alpha,
            c_iters: r.c_iterations,
            alpha_iters: r.alpha_iterations,
            boundary_paper: &r.boundary_paper,
            predicted_better: r.predicted_better,
            prediction_correct: r.prediction_correct,
            c_status: r.c_status.as_str(),
            alpha_status: r.alpha_status.as_str(),
            c_nanos: r.c_time.as_nanos(),
            alpha_nanos: r.alpha_time.as_nanos(),
        }
    }
}

/// Writes a `# ...` provenance line followed by the CSV table.
pub fn write_csv<W: Write>(spec: &BenchmarkSpec, records: &[BenchmarkRecord], mut out: W) -> Result<()> {
    writeln!(
        out,
        "# fermat-lab bench rng=chacha8 seed={} bits={} count={} ratio_min={} ratio_max={} max_iter={}",
        spec.seed,
        spec.bits,
        spec.count,
        spec.ratio_min,
        spec.ratio_max,
        spec.budget.max_iterations()
    )?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Fraction of records whose prediction held.
pub fn prediction_accuracy(records: &[BenchmarkRecord]) -> f64 {
    if records.is_empty() {
        return f64::NAN;
    }
    let hits = records.iter().filter(|r| r.prediction_correct).count();
    hits.to_f64().unwrap() / records.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(bits: u32, count: usize, rmin: &str, rmax: &str, seed: u64) -> BenchmarkSpec {
        BenchmarkSpec {
            bits,
            count,
            ratio_min: rmin.parse().unwrap(),
            ratio_max: rmax.parse().unwrap(),
            seed,
            budget: SearchBudget::default(),
        }
    }

    fn is_prime_td(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn spec_validation() {
        assert!(spec(16, 1, "1", "2", 0).validate().is_ok());
        assert!(spec(15, 1, "1", "2", 0).validate().is_err());
        assert!(spec(97, 1, "1", "2", 0).validate().is_err());
        assert!(spec(16, 0, "1", "2", 0).validate().is_err());
        assert!(spec(16, 1, "1/2", "2", 0).validate().is_err());
        assert!(spec(16, 1, "2", "2", 0).validate().is_err());
    }

    #[test]
    fn balanced_16_bit_semiprimes() {
        let s = spec(16, 1, "1", "2", 7);
        for i in 0..200 {
            let sp = gen_semiprime(&s, &mut s.record_rng(i)).unwrap();
            let (p, q) = (sp.p.to_u64().unwrap(), sp.q.to_u64().unwrap());
            assert!(is_prime_td(p) && is_prime_td(q));
            assert!(q < p && p < 2 * q);
            assert_eq!(sp.n.bits(), 16);
            assert!(sp.n.to_u64().unwrap() % 2 == 1 && sp.n.to_u64().unwrap() % 5 != 0);
            let ctx = FermatContext::new(sp.n.clone()).unwrap();
            let true_c = (sp.p.clone() + &sp.q) / 2u32 - ctx.x0().as_biguint();
            assert!(ctx.is_balanced_at(&true_c));
        }
    }

    #[test]
    fn ratio_band_is_respected() {
        let s = spec(24, 1, "3", "4", 3);
        for i in 0..100 {
            let sp = gen_semiprime(&s, &mut s.record_rng(i)).unwrap();
            assert!(&sp.q * 3u32 <= sp.p && sp.p < &sp.q * 4u32);
            assert_eq!(sp.n.bits(), 24);
        }
    }

    #[test]
    fn impossible_band_is_reported() {
        // 16-bit n with p/q >= 2^12 would need q < 8.
        let s = spec(16, 1, "4096", "8192", 0);
        assert!(matches!(gen_semiprime(&s, &mut s.record_rng(0)), Err(Error::Generation(_))));
    }

    #[test]
    fn generation_is_deterministic() {
        let s = spec(40, 1, "1", "8", 99);
        let a = gen_semiprime(&s, &mut s.record_rng(5)).unwrap();
        let b = gen_semiprime(&s, &mut s.record_rng(5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_semiprime(&s, &mut s.record_rng(6)).unwrap());
    }

    #[test]
    fn bench_records_are_correct() {
        let s = spec(20, 50, "1", "2", 11);
        let records = run_bench(&s).unwrap();
        assert_eq!(records.len(), 50);
        for r in &records {
            assert_eq!(r.p.as_biguint() * r.q.as_biguint(), *r.n);
            assert_eq!(r.c_status, RunStatus::Ok);
            assert_eq!(BigUint::from(r.c_iterations), &*r.true_c + 1u32);
            if r.true_alpha >= r.boundary_paper {
                assert_eq!(r.alpha_status, RunStatus::Ok);
            }
        }
    }

    #[test]
    fn csv_is_reproducible_apart_from_timings() {
        let s = spec(24, 8, "1", "3", 5);
        let render = || {
            let mut recs = run_bench(&s).unwrap();
            for r in &mut recs {
                r.c_time = Duration::ZERO;
                r.alpha_time = Duration::ZERO;
            }
            let mut buf = Vec::new();
            write_csv(&s, &recs, &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        let mut lines = a.lines();
        assert!(lines.next().unwrap().starts_with("# fermat-lab bench rng=chacha8 seed=5 "));
        assert_eq!(
            lines.next().unwrap(),
            "n,p,q,bits,ratio_num,ratio_den,true_c,true_alpha,c_iters,alpha_iters,boundary_paper,\
             predicted_better,prediction_correct,c_status,alpha_status,c_nanos,alpha_nanos"
        );
        assert_eq!(lines.count(), 8);
    }

    #[test]
    fn budget_exhaustion_is_recorded() {
        let mut s = spec(32, 3, "4", "8", 2);
        s.budget = SearchBudget::new(5).unwrap();
        for r in run_bench(&s).unwrap() {
            assert_eq!(r.c_status, RunStatus::BudgetExhausted);
            assert_eq!(r.c_iterations, 5);
        }
    }
}
