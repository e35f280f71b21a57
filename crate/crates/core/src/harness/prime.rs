//! Miller-Rabin primality and random prime generation.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Deterministic for every n < 2^64.
const BASES_U64: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub const RANDOM_ROUNDS: usize = 40;

/// Strong probable-prime test to base `a`, with `n - 1 = d · 2^s`.
fn is_strong_probable_prime(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Miller-Rabin. Deterministic below 2^64; above that, [`RANDOM_ROUNDS`]
/// rounds with bases drawn from `rng`.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if *n == BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    if n.to_u64().is_some() {
        return BASES_U64
            .iter()
            .all(|&a| is_strong_probable_prime(n, &d, s, &BigUint::from(a)));
    }
    let two = BigUint::from(2u32);
    (0..RANDOM_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        is_strong_probable_prime(n, &d, s, &a)
    })
}

/// Smallest probable prime `>= from`.
pub fn next_prime<R: Rng + ?Sized>(from: &BigUint, rng: &mut R) -> BigUint {
    if from <= &BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    let mut c = from.clone();
    if c.is_even() {
        c += 1u32;
    }
    while !is_probable_prime(&c, rng) {
        c += 2u32;
    }
    c
}

/// Uniformly random prime with exactly `bits` bits.
pub fn gen_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<BigUint> {
    if bits < 8 {
        return Err(Error::InvalidArgument(format!("prime size {bits} bits is below 8")));
    }
    loop {
        let mut c = rng.gen_biguint(bits);
        c.set_bit(bits - 1, true);
        c.set_bit(0, true);
        if is_probable_prime(&c, rng) {
            return Ok(c);
        }
    }
}
