//! Lower bounds computable from a truth table alone.
//!
//! All thresholds of the form `s * log2(s) >= e` are decided exactly as
//! `s^s >= 2^e` on big integers.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::table::TruthTable;

/// Largest `n` for [`counting_existence_bound`]; the answer no longer fits
/// in a `u64` beyond this.
pub const MAX_COUNTING_N: usize = 64;

/// Exponents above this are decided in floating point (see
/// [`least_s_with_slog_at_least`]).
const EXACT_EXPONENT_LIMIT: u64 = 1 << 20;

/// `(injective for Alice, injective for Bob)`: all rows distinct, all
/// columns distinct.
pub fn injectivity(table: &TruthTable) -> Result<(bool, bool)> {
    if !table.is_total() {
        return Err(Error::PartialTable);
    }
    let size = table.size();
    let words = size.div_ceil(64);
    // rows[x] and cols[y] as packed bit strings
    let mut rows = vec![vec![0u64; words]; size];
    let mut cols = vec![vec![0u64; words]; size];
    for (x, y, v) in table.defined_cells() {
        if v {
            rows[x][y / 64] |= 1 << (y % 64);
            cols[y][x / 64] |= 1 << (x % 64);
        }
    }
    let distinct = |mut lines: Vec<Vec<u64>>| {
        lines.sort_unstable();
        lines.windows(2).all(|w| w[0] != w[1])
    };
    Ok((distinct(rows), distinct(cols)))
}

/// `s^s >= 2^e`, with `0^0 = 1`.
fn pow_self_at_least(s: u64, e: u64) -> bool {
    if s <= 1 {
        return e == 0;
    }
    if e <= EXACT_EXPONENT_LIMIT {
        let lhs = BigUint::from(s).pow(s as u32);
        let rhs = BigUint::one() << e as usize;
        return lhs >= rhs;
    }
    // s * log2(s) is irrational unless s is a power of two, in which case the
    // product is an exact integer in f64 for the ranges reachable here.
    if s.is_power_of_two() {
        return (s as u128) * (s.trailing_zeros() as u128) >= e as u128;
    }
    (s as f64) * (s as f64).log2() >= e as f64
}

/// Least `s >= 1` with `s * log2(s) >= e`.
pub fn least_s_with_slog_at_least(e: u64) -> u64 {
    if e == 0 {
        return 1;
    }
    let mut hi = 2u64;
    while !pow_self_at_least(hi, e) {
        hi *= 2;
    }
    let mut lo = hi / 2; // fails (or is 1, which fails for e >= 1)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pow_self_at_least(mid, e) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Injective for Bob: distinct columns need `2^n` distinct Bob wirings on
/// `s` endpoints, so `s log2 s >= n`. Injective for Alice only: her side
/// also holds the tap, so `(s + 1) log2 (s + 1) >= n`. Otherwise 1.
pub fn injectivity_lower_bound(table: &TruthTable) -> Result<u64> {
    let (alice, bob) = injectivity(table)?;
    let n = table.n() as u64;
    Ok(if bob {
        least_s_with_slog_at_least(n)
    } else if alice {
        (least_s_with_slog_at_least(n) - 1).max(1)
    } else {
        1
    })
}

/// Least `s` with `(s + 1) log2(s + 1) >= 2^(n-1)`: below this many pipes,
/// not every function on `n`-bit inputs has a strategy.
pub fn counting_existence_bound(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_COUNTING_N {
        return Err(Error::InvalidArgument(format!(
            "counting bound supports 1 <= n <= {MAX_COUNTING_N}, got {n}"
        )));
    }
    Ok(least_s_with_slog_at_least(1u64 << (n - 1)) - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: usize,
    pub injective_for_alice: bool,
    pub injective_for_bob: bool,
    pub injectivity_bound: u64,
    pub counting_bound: u64,
}

impl BoundsReport {
    pub fn compute(table: &TruthTable) -> Result<Self> {
        let (alice, bob) = injectivity(table)?;
        Ok(BoundsReport {
            n: table.n(),
            injective_for_alice: alice,
            injective_for_bob: bob,
            injectivity_bound: injectivity_lower_bound(table)?,
            counting_bound: counting_existence_bound(table.n().max(1))?,
        })
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "injective_for_alice: {}", self.injective_for_alice)?;
        writeln!(f, "injective_for_bob: {}", self.injective_for_bob)?;
        writeln!(f, "injectivity_bound: {}", self.injectivity_bound)?;
        writeln!(f, "counting_bound_n: {}", self.counting_bound)
    }
}
