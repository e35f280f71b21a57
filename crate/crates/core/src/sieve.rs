//! Candidate filtering for the alpha search.
//!
//! For odd `n`, `alpha` must have the parity of `P0` (so that `X0 - alpha`
//! is odd), and since the smaller factor `q = X0 - alpha` can only end in
//! 1, 3, 7 or 9 when `gcd(n, 10) = 1`, at most four last digits of `alpha`
//! survive.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::context::FermatContext;
use crate::error::{Error, Result};
use crate::numeric::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(v: &BigUint) -> Self {
        if v.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asc" | "ascending" => Ok(Direction::Ascending),
            "desc" | "descending" => Ok(Direction::Descending),
            _ => Err(Error::Parse(format!("unknown direction {s:?}"))),
        }
    }
}

/// Set of decimal digits, bit `d` set when digit `d` is allowed.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct DigitSet(u16);

impl DigitSet {
    pub fn contains(self, d: u8) -> bool {
        d < 10 && self.0 & (1 << d) != 0
    }

    pub fn insert(&mut self, d: u8) {
        assert!(d < 10);
        self.0 |= 1 << d;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0..10).filter(move |&d| self.contains(d))
    }
}

impl fmt::Debug for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for DigitSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Parity and admissible last digits of alpha for one modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SieveProfile {
    pub alpha_parity: Parity,
    pub allowed_digits: DigitSet,
}

impl SieveProfile {
    pub const MODULUS: u32 = 10;

    pub fn build(ctx: &FermatContext) -> Result<Self> {
        let n_mod10 = (ctx.n().as_biguint() % 10u32).to_u8().unwrap();
        if n_mod10 % 2 == 0 || n_mod10 == 5 {
            return Err(Error::TriviallyFactorable(ctx.n().to_string()));
        }
        const UNITS: [u8; 4] = [1, 3, 7, 9];
        let x0_mod10 = (ctx.x0().as_biguint() % 10u32).to_u8().unwrap();
        let mut allowed_digits = DigitSet::default();
        for dq in UNITS {
            let feasible = UNITS.iter().any(|dp| (dq * dp) % 10 == n_mod10);
            if feasible {
                allowed_digits.insert((x0_mod10 + 10 - dq) % 10);
            }
        }
        let alpha_parity = Parity::of(ctx.p0());
        debug_assert!(allowed_digits.len() <= 4);
        debug_assert!(allowed_digits
            .iter()
            .all(|d| (d % 2 == 1) == (alpha_parity == Parity::Odd)
                && (x0_mod10 + 10 - d) % 10 != 5));
        Ok(SieveProfile {
            alpha_parity,
            allowed_digits,
        })
    }

    pub fn admits(&self, alpha: &BigUint) -> bool {
        let d = (alpha % 10u32).to_u8().unwrap();
        self.allowed_digits.contains(d)
    }

    /// Lazily yields the admissible alphas of `[from, to_exclusive)`.
    pub fn candidates(
        &self,
        ctx: &FermatContext,
        from: &BigUint,
        to_exclusive: &BigUint,
        direction: Direction,
    ) -> Result<Candidates> {
        let (lo, hi) = ctx.alpha_range();
        if from > to_exclusive || from < &*lo || to_exclusive > &*hi {
            return Err(Error::AlphaOutOfRange {
                alpha: format!("[{from}, {to_exclusive})"),
                min: lo.to_string(),
                max_exclusive: hi.to_string(),
            });
        }
        Ok(Candidates::new(
            self.allowed_digits,
            from.clone(),
            to_exclusive.clone(),
            direction,
        ))
    }
}

/// Estimated number of sieved candidates over the whole range:
/// `2·(X0 - 1 - ceil(sqrt(P0)))/5`. A density estimate, not an exact count.
pub fn candidate_count(ctx: &FermatContext) -> ExactRational {
    let x0 = ctx.x0().to_bigint();
    let lo = ctx.alpha_min().to_bigint();
    ExactRational::new((x0 - 1 - lo) * 2, 5.into()).expect("nonzero denominator")
}

/// For each last digit, the distance to the next allowed digit in the given
/// direction (0 when no digit is allowed).
pub(crate) fn step_table(digits: DigitSet, direction: Direction) -> [u8; 10] {
    let mut steps = [0u8; 10];
    for (d, step) in steps.iter_mut().enumerate() {
        *step = (1..=10u8)
            .find(|k| {
                let nd = match direction {
                    Direction::Ascending => (d as u8 + k) % 10,
                    Direction::Descending => (d as u8 + 10 - k % 10) % 10,
                };
                digits.contains(nd)
            })
            .unwrap_or(0);
    }
    steps
}

/// Streaming candidate sequence, see [`SieveProfile::candidates`].
#[derive(Clone, Debug)]
pub struct Candidates {
    // Distance to the next allowed digit, indexed by the current last digit.
    steps: [u8; 10],
    next: Option<BigUint>,
    digit: u8,
    // Inclusive far end of the traversal.
    stop: BigUint,
    direction: Direction,
}

impl Candidates {
    fn new(digits: DigitSet, from: BigUint, to_exclusive: BigUint, direction: Direction) -> Self {
        let steps = step_table(digits, direction);
        let empty = Candidates {
            steps,
            next: None,
            digit: 0,
            stop: BigUint::default(),
            direction,
        };
        if digits.is_empty() || from >= to_exclusive {
            return empty;
        }
        let (start, stop) = match direction {
            Direction::Ascending => (from, to_exclusive - 1u32),
            Direction::Descending => (to_exclusive - 1u32, from),
        };
        let digit = (&start % 10u32).to_u8().unwrap();
        let mut it = Candidates {
            next: Some(start),
            digit,
            stop,
            ..empty
        };
        if !digits.contains(digit) {
            it.advance();
        }
        it
    }

    fn advance(&mut self) {
        let Some(cur) = self.next.take() else { return };
        let step = self.steps[self.digit as usize];
        let moved = match self.direction {
            Direction::Ascending => {
                let v = cur + step;
                (v <= self.stop).then_some(v)
            }
            Direction::Descending => {
                (cur >= &self.stop + step).then(|| cur - step)
            }
        };
        self.digit = match self.direction {
            Direction::Ascending => (self.digit + step) % 10,
            Direction::Descending => (self.digit + 10 - step % 10) % 10,
        };
        self.next = moved;
    }
}

impl Iterator for Candidates {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let cur = self.next.clone()?;
        self.advance();
        Some(cur)
    }
}

/// Free-function form of [`SieveProfile::build`].
pub fn build_profile(ctx: &FermatContext) -> Result<SieveProfile> {
    SieveProfile::build(ctx)
}

/// Free-function form of [`SieveProfile::candidates`].
pub fn iter_candidates(
    ctx: &FermatContext,
    profile: &SieveProfile,
    from: &BigUint,
    to_exclusive: &BigUint,
    direction: Direction,
) -> Result<Candidates> {
    profile.candidates(ctx, from, to_exclusive, direction)
}
