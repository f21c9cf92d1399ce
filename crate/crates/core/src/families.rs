//! Explicit garden-hose constructions for named function families.
//!
//! Pipe ids are 1-based and the tap is endpoint 0. Input bit `i` (1-based) is
//! the `i`-th most significant bit of the input index.

use crate::error::{Error, Result};
use crate::protocol::{sender, transcripts, ProtocolTree};
use crate::strategy::Strategy;
use crate::table::TruthTable;
use crate::wiring::{Side, Wiring, TAP};

/// Which construction to run, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Xor(usize),
    Eq(usize),
    Ip(usize),
    Maj(usize),
    Generic(TruthTable),
    FromProtocol(ProtocolTree),
}

impl FamilySpec {
    pub fn build(&self) -> Result<Strategy> {
        match self {
            FamilySpec::Xor(n) => build_xor(*n),
            FamilySpec::Eq(n) => build_eq(*n),
            FamilySpec::Ip(n) => build_ip(*n),
            FamilySpec::Maj(n) => build_maj(*n),
            FamilySpec::Generic(table) => build_generic(table),
            FamilySpec::FromProtocol(tree) => build_from_protocol(tree),
        }
    }

    /// The function the construction computes.
    pub fn table(&self) -> TruthTable {
        match self {
            FamilySpec::Xor(n) => TruthTable::xor(*n),
            FamilySpec::Eq(n) => TruthTable::eq(*n),
            FamilySpec::Ip(n) => TruthTable::ip(*n),
            FamilySpec::Maj(n) => TruthTable::maj(*n),
            FamilySpec::Generic(table) => table.clone(),
            FamilySpec::FromProtocol(tree) => tree.table(),
        }
    }
}

fn bit(input: usize, n: usize, i: usize) -> usize {
    (input >> (n - i)) & 1
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > crate::table::MAX_TABLE_N {
        return Err(Error::InvalidArgument(format!(
            "input length must be in 1..={}, got {n}",
            crate::table::MAX_TABLE_N
        )));
    }
    Ok(())
}

/// Parity of all `2n` bits on three pipes.
///
/// Each player first folds their own bits into one parity bit; the rest is
/// the single-bit gadget: Alice sends the tap into pipe `1 + a`, Bob joins
/// pipe `1 + b` to the return pipe 3, which Alice leaves open.
pub fn build_xor(n: usize) -> Result<Strategy> {
    check_n(n)?;
    let parity = |v: usize| (v.count_ones() % 2) as usize;
    Strategy::from_fns(
        n,
        3,
        |x| Wiring::new(Side::Alice, 3, &[(TAP, 1 + parity(x))]),
        |y| Wiring::new(Side::Bob, 3, &[(1 + parity(y), 3)]),
    )
}

/// Equality on `3n + 1` pipes.
///
/// Pipes `t_1..t_{n+1}` carry the water to Bob and pairs `c_i[0], c_i[1]`
/// carry it back. Bob joins `t_i` to `c_i[y_i]`; Alice joins `c_i[x_i]` to
/// `t_{i+1}` and leaves `c_i[1 - x_i]` open, so the first mismatching bit
/// drops the water on her side and `t_{n+1}` ends open at Bob's.
pub fn build_eq(n: usize) -> Result<Strategy> {
    check_n(n)?;
    let s = 3 * n + 1;
    let t = |i: usize| i;
    let c = |i: usize, b: usize| n + 1 + 2 * (i - 1) + b + 1;
    Strategy::from_fns(
        n,
        s,
        |x| {
            let mut w = Wiring::empty(Side::Alice, s);
            w.connect(TAP, t(1))?;
            for i in 1..=n {
                w.connect(c(i, bit(x, n, i)), t(i + 1))?;
            }
            Ok(w)
        },
        |y| {
            let mut w = Wiring::empty(Side::Bob, s);
            for i in 1..=n {
                w.connect(t(i), c(i, bit(y, n, i)))?;
            }
            Ok(w)
        },
    )
}

/// Routes the water through per-position blocks that hold a counter state.
///
/// Alice keeps one open end per state (the tap is state 0). For every `i`
/// with `x_i = 1` she plugs each live end into pipe `forward(i, c)`, and the
/// ends of `back(i, c)` become the new live ends. Bob wires block `i`
/// according to `y_i`, moving the state from `forward(i, c)` to
/// `back(i, c')` or leaving `forward(i, c)` open to finish on his side.
fn counter_strategy(
    n: usize,
    states: usize,
    s: usize,
    forward: impl Fn(usize, usize) -> usize + Copy,
    back: impl Fn(usize, usize) -> usize + Copy,
    bob_step: impl Fn(usize, usize) -> Option<usize> + Copy,
    alice_final: impl Fn(&mut Wiring, &[Option<usize>]) -> Result<()> + Copy,
) -> Result<Strategy> {
    Strategy::from_fns(
        n,
        s,
        |x| {
            let mut w = Wiring::empty(Side::Alice, s);
            let mut ends: Vec<Option<usize>> = vec![None; states];
            ends[0] = Some(TAP);
            for i in (1..=n).filter(|&i| bit(x, n, i) == 1) {
                for (c, end) in ends.iter_mut().enumerate() {
                    if let Some(e) = *end {
                        w.connect(e, forward(i, c))?;
                    }
                    *end = Some(back(i, c));
                }
            }
            alice_final(&mut w, &ends)?;
            Ok(w)
        },
        |y| {
            let mut w = Wiring::empty(Side::Bob, s);
            for i in 1..=n {
                for c in 0..states {
                    if let Some(next) = bob_step(bit(y, n, i), c) {
                        w.connect(forward(i, c), back(i, next))?;
                    }
                }
            }
            Ok(w)
        },
    )
}

/// Inner product modulo 2 on `4n + 1` pipes: a two-state counter flipped by
/// Bob on every block where `x_i = 1`, with parity 1 sent out through the
/// final pipe `4n + 1`, which Bob leaves open.
pub fn build_ip(n: usize) -> Result<Strategy> {
    check_n(n)?;
    let s = 4 * n + 1;
    let forward = |i: usize, c: usize| 4 * (i - 1) + c + 1;
    let back = |i: usize, c: usize| 4 * (i - 1) + 2 + c + 1;
    counter_strategy(
        n,
        2,
        s,
        forward,
        back,
        |y_bit, c| Some(c ^ y_bit),
        |w, ends| match ends[1] {
            Some(e) => w.connect(e, s),
            None => Ok(()),
        },
    )
}

/// Majority on `2 * ceil(n/2) * n <= (n + 2)^2` pipes: the counter tracks the
/// number of common ones below the threshold `t = ceil(n/2)`. Bob leaves the
/// state `t - 1` pipe open when `y_i = 1`, so reaching the threshold exits on
/// his side; counts that never reach it end open on Alice's side.
pub fn build_maj(n: usize) -> Result<Strategy> {
    check_n(n)?;
    let t = n.div_ceil(2);
    let s = 2 * t * n;
    let forward = move |i: usize, c: usize| 2 * t * (i - 1) + c + 1;
    let back = move |i: usize, c: usize| 2 * t * (i - 1) + t + c + 1;
    counter_strategy(
        n,
        t,
        s,
        forward,
        back,
        move |y_bit, c| (c + y_bit < t).then_some(c + y_bit),
        |_, _| Ok(()),
    )
}

/// The `2^n + 1` pipe strategy for any total table.
///
/// Alice plugs the tap into pipe `x + 1`. For each `y`, Bob pairs up the
/// pipes of the rows where `f(·, y) = 0` in ascending order and sends a
/// leftover to the reserve pipe `2^n + 1`.
pub fn build_generic(table: &TruthTable) -> Result<Strategy> {
    if !table.is_total() {
        return Err(Error::PartialTable);
    }
    let n = table.n();
    let size = table.size();
    let s = size + 1;
    Strategy::from_fns(
        n,
        s,
        |x| Wiring::new(Side::Alice, s, &[(TAP, x + 1)]),
        |y| {
            let zeros: Vec<usize> = (0..size).filter(|&a| table.get(a, y) == Some(false)).collect();
            let mut w = Wiring::empty(Side::Bob, s);
            for pair in zeros.chunks(2) {
                match pair {
                    [a, b] => w.connect(a + 1, b + 1)?,
                    [a] => w.connect(a + 1, s)?,
                    _ => unreachable!(),
                }
            }
            Ok(w)
        },
    )
}

/// Pipe id of a non-empty transcript: by length, then lexicographically.
pub fn transcript_pipe(v: &str) -> usize {
    let value = v.bytes().fold(0usize, |acc, b| (acc << 1) | (b == b'1') as usize);
    (1usize << v.len()) - 1 + value
}

/// Strategy from a protocol tree on `2^(D+1) - 1` pipes, where `D` is the
/// (even) depth; odd depths get one padding round first.
///
/// Pipes carry transcript labels. The sender at each internal node joins the
/// pipe of the transcript so far to the pipe of its extension. Alice joins
/// the leaves that agree with her own moves and output 1 in pairs, with the
/// reserve pipe taking a leftover; leaves with output 0 stay open.
pub fn build_from_protocol(tree: &ProtocolTree) -> Result<Strategy> {
    let tree = tree.with_even_depth();
    let depth = tree.depth();
    let n = tree.n();
    let s = (1usize << (depth + 1)) - 1;
    let reserve = s;
    let end = |v: &str| if v.is_empty() { TAP } else { transcript_pipe(v) };
    let extend = |v: &str, b: bool| format!("{v}{}", if b { '1' } else { '0' });
    Strategy::from_fns(
        n,
        s,
        |x| {
            let mut w = Wiring::empty(Side::Alice, s);
            for len in (0..depth).filter(|&l| sender(l) == Side::Alice) {
                for v in transcripts(len) {
                    w.connect(end(&v), transcript_pipe(&extend(&v, tree.message(&v, x))))?;
                }
            }
            let ones: Vec<String> = transcripts(depth)
                .filter(|v| tree.consistent_with_alice(v, x) && tree.leaf_value(v, x))
                .collect();
            for pair in ones.chunks(2) {
                match pair {
                    [a, b] => w.connect(end(a), end(b))?,
                    [a] => w.connect(end(a), reserve)?,
                    _ => unreachable!(),
                }
            }
            Ok(w)
        },
        |y| {
            let mut w = Wiring::empty(Side::Bob, s);
            for len in (0..depth).filter(|&l| sender(l) == Side::Bob) {
                for v in transcripts(len) {
                    w.connect(end(&v), transcript_pipe(&extend(&v, tree.message(&v, y))))?;
                }
            }
            Ok(w)
        },
    )
}
