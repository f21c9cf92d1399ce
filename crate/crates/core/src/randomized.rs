//! Strategies with shared randomness: one deterministic strategy per seed
//! `r ∈ {0,1}^ρ`, all over the same pipes. Error probabilities are exact
//! rationals over the uniform seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, ParseError, Result};
use crate::strategy::{check_n, parse_body, Strategy};
use crate::table::TruthTable;
use crate::text::{parse_header, Lines};

/// Largest seed length that [`exact_error`], [`majority_error`] and
/// [`derandomize`] will enumerate.
pub const MAX_SEED_BITS: u32 = 20;

/// Hard limit for the file format; `2^30` bodies cannot be stored anyway.
const FORMAT_SEED_BITS: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedStrategy {
    seed_bits: u32,
    /// Indexed by seed; all share `n` and the pipe count.
    seeds: Vec<Strategy>,
}

impl RandomizedStrategy {
    pub fn new(seed_bits: u32, seeds: Vec<Strategy>) -> Result<Self> {
        if u64::from(seed_bits) > FORMAT_SEED_BITS {
            return Err(Error::InvalidArgument(format!("seed length {seed_bits} is too large")));
        }
        if seeds.len() != 1usize << seed_bits {
            return Err(Error::DimensionMismatch(format!(
                "{} strategies for {} seeds",
                seeds.len(),
                1usize << seed_bits
            )));
        }
        let (n, s) = (seeds[0].n(), seeds[0].pipes());
        if let Some((r, bad)) = seeds
            .iter()
            .enumerate()
            .find(|(_, st)| st.n() != n || st.pipes() != s)
        {
            return Err(Error::DimensionMismatch(format!(
                "seed {r} has n={} s={}, seed 0 has n={n} s={s}",
                bad.n(),
                bad.pipes()
            )));
        }
        Ok(RandomizedStrategy { seed_bits, seeds })
    }

    pub fn from_fn(seed_bits: u32, mut seed: impl FnMut(usize) -> Strategy) -> Result<Self> {
        if u64::from(seed_bits) > FORMAT_SEED_BITS {
            return Err(Error::InvalidArgument(format!("seed length {seed_bits} is too large")));
        }
        RandomizedStrategy::new(seed_bits, (0..1usize << seed_bits).map(&mut seed).collect())
    }

    /// The strategy that ignores its seed.
    pub fn lift(strategy: &Strategy, seed_bits: u32) -> Result<Self> {
        RandomizedStrategy::from_fn(seed_bits, |_| strategy.clone())
    }

    pub fn n(&self) -> usize {
        self.seeds[0].n()
    }

    pub fn pipes(&self) -> usize {
        self.seeds[0].pipes()
    }

    pub fn seed_bits(&self) -> u32 {
        self.seed_bits
    }

    pub fn seed(&self, r: usize) -> &Strategy {
        &self.seeds[r]
    }

    pub fn seeds(&self) -> &[Strategy] {
        &self.seeds
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(input);
        let header = parse_header(&mut lines, "ghr", &["n", "s", "rho"])?;
        let (n, s, rho) = (header[0] as usize, header[1] as usize, header[2]);
        check_n(n)?;
        if rho > FORMAT_SEED_BITS {
            return Err(ParseError::new(1, 1, format!("rho={rho} is too large")));
        }
        let mut seeds = Vec::with_capacity(1 << rho);
        for _ in 0..1usize << rho {
            seeds.push(parse_body(&mut lines, n, s)?);
        }
        lines.finish()?;
        RandomizedStrategy::new(rho as u32, seeds).map_err(|e| ParseError::new(1, 1, e.to_string()))
    }

    pub fn to_ghr(&self) -> String {
        let mut out = format!("ghr 1 {} {} {}\n", self.n(), self.pipes(), self.seed_bits);
        for (r, st) in self.seeds.iter().enumerate() {
            if r > 0 {
                out.push('\n');
            }
            st.write_body(&mut out);
        }
        out
    }
}

/// Exact per-cell error probabilities over the uniform seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorProfile {
    n: usize,
    /// Row-major; `None` on undefined cells.
    cells: Vec<Option<BigRational>>,
    worst_case: BigRational,
    worst_cell: Option<(usize, usize)>,
}

impl ErrorProfile {
    fn from_cells(n: usize, cells: Vec<Option<BigRational>>) -> Self {
        let size = 1usize << n;
        let mut worst_case = BigRational::zero();
        let mut worst_cell = None;
        for (i, p) in cells.iter().enumerate() {
            if let Some(p) = p {
                if worst_cell.is_none() || *p > worst_case {
                    worst_case = p.clone();
                    worst_cell = Some((i / size, i % size));
                }
            }
        }
        ErrorProfile {
            n,
            cells,
            worst_case,
            worst_cell,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&BigRational> {
        self.cells[(x << self.n) | y].as_ref()
    }

    /// Maximum over defined cells; 0 when no cell is defined.
    pub fn worst_case(&self) -> &BigRational {
        &self.worst_case
    }

    /// First defined cell (row-major) attaining the worst case.
    pub fn worst_cell(&self) -> Option<(usize, usize)> {
        self.worst_cell
    }

    pub fn defined(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        let size = 1usize << self.n;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(i, p)| p.as_ref().map(|p| (i / size, i % size, p)))
    }
}

fn check_enumerable(rs: &RandomizedStrategy, table: &TruthTable, cap: u32) -> Result<()> {
    if rs.seed_bits > cap {
        return Err(Error::SeedSpaceTooLarge {
            rho: rs.seed_bits,
            cap,
        });
    }
    if rs.n() != table.n() {
        return Err(Error::DimensionMismatch(format!(
            "strategy has n={}, table has n={}",
            rs.n(),
            table.n()
        )));
    }
    Ok(())
}

/// Number of seeds that answer each cell wrongly, row-major.
fn wrong_counts(rs: &RandomizedStrategy, table: &TruthTable) -> Vec<u64> {
    let size = table.size();
    let defined: Vec<(usize, usize, bool)> = table.defined_cells().collect();
    rs.seeds
        .par_iter()
        .fold(
            || vec![0u64; size * size],
            |mut acc, st| {
                for &(x, y, want) in &defined {
                    if st.exit_side(x, y).bit() != want {
                        acc[x * size + y] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; size * size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(u, v)| *u += v);
                a
            },
        )
}

pub fn exact_error(rs: &RandomizedStrategy, table: &TruthTable) -> Result<ErrorProfile> {
    exact_error_capped(rs, table, MAX_SEED_BITS)
}

/// [`exact_error`] with an explicit seed-length cap.
pub fn exact_error_capped(
    rs: &RandomizedStrategy,
    table: &TruthTable,
    cap: u32,
) -> Result<ErrorProfile> {
    check_enumerable(rs, table, cap)?;
    let counts = wrong_counts(rs, table);
    let denom = BigInt::one() << rs.seed_bits as usize;
    let cells = counts
        .into_iter()
        .zip(table.cells())
        .map(|(c, want)| want.map(|_| BigRational::new(BigInt::from(c), denom.clone())))
        .collect();
    Ok(ErrorProfile::from_cells(table.n(), cells))
}

/// Error of the majority of `k` independent runs, each wrong with
/// probability `p`: `Σ_{j > k/2} C(k, j) p^j (1 - p)^(k - j)`.
pub fn binomial_majority_tail(p: &BigRational, k: u64) -> BigRational {
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    let mut binom = BigInt::one(); // C(k, j)
    for j in 0..=k {
        if j > 0 {
            binom = binom * BigInt::from(k - j + 1) / BigInt::from(j);
        }
        if 2 * j > k {
            total += BigRational::from_integer(binom.clone())
                * num_traits::pow(p.clone(), j as usize)
                * num_traits::pow(q.clone(), (k - j) as usize);
        }
    }
    total
}

/// Per-cell error of the `k`-fold majority vote over independent seeds.
pub fn majority_error(rs: &RandomizedStrategy, table: &TruthTable, k: u64) -> Result<ErrorProfile> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("majority needs an odd k, got {k}")));
    }
    let single = exact_error(rs, table)?;
    let cells = single
        .cells
        .iter()
        .map(|p| p.as_ref().map(|p| binomial_majority_tail(p, k)))
        .collect();
    Ok(ErrorProfile::from_cells(single.n, cells))
}

/// `e^(-2 δ² k)`: bound on the `k`-fold majority error when each run errs
/// with probability at most `1/2 - δ`.
pub fn hoeffding_bound(delta: f64, k: u64) -> f64 {
    (-2.0 * delta * delta * k as f64).exp()
}

/// `e^(-ζ² p k / 2)` with the largest `ζ` keeping `(1 - ζ) p k ≥ k/2`,
/// namely `ζ = 1 - 1/(2p)`, where `p > 1/2` is the success probability.
pub fn chernoff_bound(p_success: f64, k: u64) -> f64 {
    let zeta = 1.0 - 1.0 / (2.0 * p_success);
    (-zeta * zeta / 2.0 * p_success * k as f64).exp()
}

/// `2^(-2n-1)`: below this worst-case error some single seed is correct on
/// every input, by a union bound over the `2^(2n)` cells.
pub fn union_bound_threshold(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << (2 * n + 1))
}

/// Smallest seed whose strategy is correct on every defined cell.
pub fn derandomize(rs: &RandomizedStrategy, table: &TruthTable) -> Result<Option<usize>> {
    check_enumerable(rs, table, MAX_SEED_BITS)?;
    let defined: Vec<(usize, usize, bool)> = table.defined_cells().collect();
    Ok((0..rs.seeds.len()).into_par_iter().find_first(|&r| {
        let st = &rs.seeds[r];
        defined.iter().all(|&(x, y, want)| st.exit_side(x, y).bit() == want)
    }))
}
