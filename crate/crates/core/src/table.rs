//! Truth tables of two-party functions `f(x, y)` and the GHF text format.
//!
//! Rows are indexed by Alice's input `x`, columns by Bob's input `y`; a bit
//! string is read as a big-endian integer, so `x = 10` is row 2.

use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};
use crate::text::{parse_header, Lines};

/// Largest input length a table may have (the grid has `4^n` cells).
pub const MAX_TABLE_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    cells: Vec<Option<bool>>,
}

impl TruthTable {
    /// Builds a table from a function of the two input indices.
    ///
    /// Panics if `n` exceeds [`MAX_TABLE_N`].
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Option<bool>) -> Self {
        assert!(n <= MAX_TABLE_N, "table input length {n} is too large");
        let size = 1usize << n;
        let mut cells = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                cells.push(f(x, y));
            }
        }
        TruthTable { n, cells }
    }

    pub fn total_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        Self::from_fn(n, |x, y| Some(f(x, y)))
    }

    pub fn from_cells(n: usize, cells: Vec<Option<bool>>) -> Result<Self> {
        if n > MAX_TABLE_N {
            return Err(Error::InvalidArgument(format!(
                "table input length {n} exceeds {MAX_TABLE_N}"
            )));
        }
        let size = 1usize << n;
        if cells.len() != size * size {
            return Err(Error::DimensionMismatch(format!(
                "expected {} cells for n={n}, got {}",
                size * size,
                cells.len()
            )));
        }
        Ok(TruthTable { n, cells })
    }

    pub fn constant(n: usize, value: bool) -> Self {
        Self::total_fn(n, |_, _| value)
    }

    /// Parity of all `2n` input bits.
    pub fn xor(n: usize) -> Self {
        Self::total_fn(n, |x, y| (x ^ y).count_ones() % 2 == 1)
    }

    pub fn eq(n: usize) -> Self {
        Self::total_fn(n, |x, y| x == y)
    }

    /// Bitwise inner product modulo 2.
    pub fn ip(n: usize) -> Self {
        Self::total_fn(n, |x, y| (x & y).count_ones() % 2 == 1)
    }

    /// One iff at least `ceil(n/2)` positions have `x_i = y_i = 1`.
    pub fn maj(n: usize) -> Self {
        let threshold = n.div_ceil(2) as u32;
        Self::total_fn(n, |x, y| (x & y).count_ones() >= threshold)
    }

    /// The `index`-th of the `2^(4^n)` total tables: bit `x * 2^n + y` of
    /// `index` is `f(x, y)`.
    pub fn nth_total(n: usize, index: u64) -> Self {
        let size = 1usize << n;
        assert!(size * size <= 64, "nth_total supports n <= 3");
        Self::total_fn(n, |x, y| (index >> (x * size + y)) & 1 == 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows (and columns): `2^n`.
    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, x: usize, y: usize) -> Option<bool> {
        self.cells[x * self.size() + y]
    }

    pub fn set(&mut self, x: usize, y: usize, value: Option<bool>) {
        let size = self.size();
        self.cells[x * size + y] = value;
    }

    pub fn is_total(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    pub fn cells(&self) -> &[Option<bool>] {
        &self.cells
    }

    pub fn row(&self, x: usize) -> &[Option<bool>] {
        let size = self.size();
        &self.cells[x * size..(x + 1) * size]
    }

    pub fn column(&self, y: usize) -> Vec<Option<bool>> {
        (0..self.size()).map(|x| self.get(x, y)).collect()
    }

    /// Flips every defined cell.
    pub fn complement(&self) -> Self {
        TruthTable {
            n: self.n,
            cells: self.cells.iter().map(|c| c.map(|v| !v)).collect(),
        }
    }

    /// Iterates over `(x, y, value)` for every defined cell in row-major order.
    pub fn defined_cells(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        let size = self.size();
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(i, c)| c.map(|v| (i / size, i % size, v)))
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(input);
        let header = parse_header(&mut lines, "ghf", &["n"])?;
        let n = header[0] as usize;
        if n > MAX_TABLE_N {
            return Err(ParseError::new(
                1,
                1,
                format!("n={n} exceeds the supported maximum {MAX_TABLE_N}"),
            ));
        }
        let size = 1usize << n;
        let mut cells = Vec::with_capacity(size * size);
        for _ in 0..size {
            let line = lines.next_line("table row")?;
            let row = line.text.trim_end();
            let mut count = 0;
            for (col, ch) in row.chars().enumerate() {
                cells.push(match ch {
                    '0' => Some(false),
                    '1' => Some(true),
                    '*' => None,
                    other => {
                        return Err(line.error(col + 1, format!("expected 0, 1 or *, found {other:?}")))
                    }
                });
                count += 1;
            }
            if count != size {
                return Err(line.error(
                    count.min(size) + 1,
                    format!("expected {size} cells, found {count}"),
                ));
            }
        }
        lines.finish()?;
        Ok(TruthTable { n, cells })
    }

    pub fn to_ghf(&self) -> String {
        let mut out = format!("ghf 1 {}\n", self.n);
        for x in 0..self.size() {
            for cell in self.row(x) {
                out.push(match cell {
                    Some(false) => '0',
                    Some(true) => '1',
                    None => '*',
                });
            }
            out.push('\n');
        }
        out
    }
}

/// Parses a bit string such as `0110` into its big-endian integer value.
pub fn parse_input(bits: &str) -> Result<(usize, usize)> {
    if bits.len() > 63 {
        return Err(Error::InvalidArgument(format!("bit string {bits:?} is too long")));
    }
    let mut value = 0usize;
    for (i, ch) in bits.chars().enumerate() {
        value = match ch {
            '0' => value << 1,
            '1' => (value << 1) | 1,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "bad character {other:?} at position {} of input {bits:?}",
                    i + 1
                )))
            }
        };
    }
    Ok((bits.len(), value))
}

/// Formats `value` as an `n`-bit big-endian bit string.
pub fn format_input(value: usize, n: usize) -> String {
    let mut s = String::with_capacity(n);
    for i in (0..n).rev() {
        let _ = write!(s, "{}", (value >> i) & 1);
    }
    s
}
