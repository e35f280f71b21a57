//! Fermat search context and the algebra that links the classic `c`
//! parameterization to the `alpha` parameterization.
//!
//! For odd `n` let `X0 = ceil(sqrt(n))` and `P0 = X0² - n`. Stepping
//! `Xc = X0 + c` gives `Pc = Xc² - n = c² + 2·X0·c + P0`; whenever `Pc` is a
//! square `(c + alpha)²` the modulus splits as
//! `n = (X0 - alpha) · (X0 + 2c + alpha)`. Solving for `c` gives
//!
//! ```text
//! c = (alpha² - P0) / (2 (X0 - alpha))        ceil(sqrt(P0)) <= alpha < X0
//! ```
//!
//! and `c` is a nonnegative integer exactly when `X0 - alpha` divides `n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{ceil_sqrt, is_perfect_square, isqrt, ExactRational, Natural};

/// Precomputed constants for one target modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatContext {
    n: Natural,
    x0: Natural,
    p0: Natural,
    k: ExactRational,
    alpha_min: Natural,
}

impl FermatContext {
    /// Builds the context for an odd modulus `n >= 3`.
    ///
    /// Perfect squares are accepted and yield `P0 = 0`.
    pub fn new(n: impl Into<Natural>) -> Result<Self> {
        let n: Natural = n.into();
        if *n < BigUint::from(3u32) {
            return Err(Error::InvalidArgument(format!("modulus {n} is below 3")));
        }
        if n.is_even() {
            return Err(Error::EvenModulus);
        }
        let x0 = ceil_sqrt(&n);
        let p0 = &x0 * &x0 - &*n;
        let x0_sq = &x0 * &x0;
        let k = ExactRational::new(BigInt::from(p0.clone()), BigInt::from(x0_sq))
            .expect("X0 > 0");
        let alpha_min = ceil_sqrt(&p0);
        Ok(FermatContext {
            n,
            x0: x0.into(),
            p0: p0.into(),
            k,
            alpha_min: alpha_min.into(),
        })
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    pub fn x0(&self) -> &Natural {
        &self.x0
    }

    pub fn p0(&self) -> &Natural {
        &self.p0
    }

    /// `P0 / X0²`, always in `[0, 2/X0)`.
    pub fn k(&self) -> &ExactRational {
        &self.k
    }

    /// `Pc = c² + 2·X0·c + P0`, equivalently `(X0 + c)² - n`.
    pub fn compute_pc(&self, c: &BigUint) -> Natural {
        (c * c + ((&*self.x0 * c) << 1u32) + &*self.p0).into()
    }

    /// The admissible half-open alpha interval `[ceil(sqrt(P0)), X0)`.
    pub fn alpha_range(&self) -> (Natural, Natural) {
        (self.alpha_min.clone(), self.x0.clone())
    }

    pub fn alpha_min(&self) -> &Natural {
        &self.alpha_min
    }

    pub fn contains_alpha(&self, alpha: &BigUint) -> bool {
        alpha >= &*self.alpha_min && alpha < &*self.x0
    }

    fn check_alpha(&self, alpha: &BigUint) -> Result<()> {
        if self.contains_alpha(alpha) {
            Ok(())
        } else {
            Err(Error::AlphaOutOfRange {
                alpha: alpha.to_string(),
                min: self.alpha_min.to_string(),
                max_exclusive: self.x0.to_string(),
            })
        }
    }

    /// `c = (alpha² - P0) / (2 (X0 - alpha))` when that quotient is an
    /// integer, `None` when it is not.
    pub fn alpha_to_c(&self, alpha: &BigUint) -> Result<Option<Natural>> {
        self.check_alpha(alpha)?;
        let num = alpha * alpha - &*self.p0;
        let den = (&*self.x0 - alpha) << 1u32;
        let (c, rem) = num.div_rem(&den);
        Ok(rem.is_zero().then(|| c.into()))
    }

    /// `alpha = sqrt(Pc) - c` when `Pc` is a perfect square.
    pub fn c_to_alpha(&self, c: &BigUint) -> Option<Natural> {
        let root = is_perfect_square(&self.compute_pc(c))?;
        (root >= *c).then(|| (root - c).into())
    }

    /// Turns a consistent `(c, alpha)` witness into the factor pair
    /// `q = X0 - alpha`, `p = X0 + 2c + alpha`.
    pub fn recover_factors(&self, c: &BigUint, alpha: &BigUint) -> Result<FactorPair> {
        let invalid = || Error::InvalidWitness {
            c: c.to_string(),
            alpha: alpha.to_string(),
        };
        match self.alpha_to_c(alpha) {
            Ok(Some(expected)) if *expected == *c => {}
            _ => return Err(invalid()),
        }
        Ok(FactorPair::from_witness(self, c.clone(), alpha.clone()))
    }

    /// Numerator of `f'(alpha)`: `-alpha² + 2·X0·alpha - P0`. Its sign is the
    /// sign of the derivative.
    pub fn derivative_numerator(&self, alpha: &BigUint) -> BigInt {
        let a = BigInt::from(alpha.clone());
        let x0 = self.x0.to_bigint();
        -(&a * &a) + ((x0 * &a) << 1u32) - self.p0.to_bigint()
    }

    /// Normalized form: `rho = alpha / X0` and
    /// `c = (X0/2) · ((1 - k)/(1 - rho) - (1 + rho))`.
    pub fn rho_form(&self, alpha: &BigUint) -> Result<(ExactRational, ExactRational)> {
        if alpha >= &*self.x0 {
            return Err(Error::AlphaAtPole(self.x0.to_string()));
        }
        let x0 = self.x0.to_bigint();
        let one = ExactRational::from_integer(BigInt::one());
        let rho = ExactRational::new(BigInt::from(alpha.clone()), x0.clone())?;
        let half_x0 = ExactRational::new(x0, BigInt::from(2))?;
        let c = &half_x0
            * &(&(&(&one - &self.k) / &(&one - &rho)) - &(&one + &rho));
        Ok((rho, c))
    }

    /// `c` as an exact rational straight from the quotient form. Defined for
    /// every `alpha < X0`, including values where it is negative.
    pub fn c_rational(&self, alpha: &BigUint) -> Result<ExactRational> {
        if alpha >= &*self.x0 {
            return Err(Error::AlphaAtPole(self.x0.to_string()));
        }
        let a = BigInt::from(alpha.clone());
        let num = &a * &a - self.p0.to_bigint();
        let den = BigInt::from(&*self.x0 - alpha) << 1u32;
        ExactRational::new(num, den)
    }

    /// Balanced-prime test `9·Pc < Xc²` (equivalent to `q < p < 2q`).
    pub fn is_balanced_at(&self, c: &BigUint) -> bool {
        let xc = &*self.x0 + c;
        BigUint::from(9u32) * &*self.compute_pc(c) < &xc * &xc
    }

    /// Largest `c >= 0` that still satisfies [`Self::is_balanced_at`], or
    /// `None` if even `c = 0` fails.
    pub fn balanced_c_max(&self) -> Option<Natural> {
        if !self.is_balanced_at(&BigUint::zero()) {
            return None;
        }
        // The predicate is `8·Xc² < 9n`, so isqrt(9n/8) - X0 lands within one
        // step of the answer; walk it the rest of the way.
        let root = isqrt(&((&*self.n * 9u32) >> 3u32));
        let mut c = if root > *self.x0 {
            root - &*self.x0
        } else {
            BigUint::zero()
        };
        while !c.is_zero() && !self.is_balanced_at(&c) {
            c -= 1u32;
        }
        while self.is_balanced_at(&(&c + 1u32)) {
            c += 1u32;
        }
        Some(c.into())
    }

    /// Upper end of the balanced alpha range.
    ///
    /// `Paper` returns the approximate bound `floor(3·X0/10)` (the quadratic
    /// derivation actually gives about `0.299·X0`; the rounded 0.3 is kept).
    /// `Exact` returns the largest admissible alpha whose rational `c`
    /// satisfies `9·Pc < Xc²`, or `None` when no admissible alpha does.
    pub fn balanced_alpha_max(&self, mode: BoundMode) -> Option<Natural> {
        match mode {
            BoundMode::Paper => Some(((&*self.x0 * 3u32) / 10u32).into()),
            BoundMode::Exact => {
                let lo = self.alpha_min.as_biguint().clone();
                if !self.balanced_at_alpha(&lo) {
                    return None;
                }
                // f(alpha) is increasing and the predicate is monotone in c,
                // so the admissible set is a prefix of the range.
                let (mut good, mut bad) = (lo, self.x0.as_biguint().clone());
                while &bad - &good > BigUint::one() {
                    let mid = (&good + &bad) >> 1u32;
                    if self.balanced_at_alpha(&mid) {
                        good = mid;
                    } else {
                        bad = mid;
                    }
                }
                Some(good.into())
            }
        }
    }

    fn balanced_at_alpha(&self, alpha: &BigUint) -> bool {
        let c = self.c_rational(alpha).expect("alpha below X0");
        let x0 = ExactRational::from_natural(&self.x0);
        let two = ExactRational::from_integer(BigInt::from(2));
        let nine = ExactRational::from_integer(BigInt::from(9));
        let pc = &(&(&c * &c) + &(&(&two * &x0) * &c)) + &ExactRational::from_natural(&self.p0);
        let xc = &x0 + &c;
        &nine * &pc < &xc * &xc
    }
}

/// Whether a bound uses the decimal approximations or the exact predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    Paper,
    Exact,
}

impl std::str::FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(BoundMode::Paper),
            "exact" => Ok(BoundMode::Exact),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// A factorization `n = p·q` together with the `(c, alpha)` witness that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorPair {
    pub p: Natural,
    pub q: Natural,
    pub c: Natural,
    pub alpha: Natural,
}

impl FactorPair {
    /// Caller guarantees `(c, alpha)` is a witness for `ctx`.
    pub(crate) fn from_witness(ctx: &FermatContext, c: BigUint, alpha: BigUint) -> Self {
        let q = &*ctx.x0 - &alpha;
        let p = &*ctx.x0 + (&c << 1u32) + &alpha;
        debug_assert_eq!(&p * &q, *ctx.n);
        FactorPair {
            p: p.into(),
            q: q.into(),
            c: c.into(),
            alpha: alpha.into(),
        }
    }
}
