//! Reversible machines used as compiler fixtures.
//!
//! Every machine here satisfies a local reversibility rule: all rules
//! entering a non-halting state share one pair of head moves, and among
//! them the pair (input symbol read, symbol written) is unique. A
//! configuration's predecessor is then determined by the configuration
//! itself. Rules entering the halting states are exempt, since halting
//! configurations have no successor.

use super::machine::{Move, Rule, Symbol, TuringMachine};

const SYMBOLS: [Symbol; 3] = Symbol::ALL;
const BITS: [bool; 2] = [false, true];

#[allow(clippy::too_many_arguments)]
fn add(m: &mut TuringMachine, q: usize, a: bool, b: Symbol, next: usize, write: Symbol, di: Move, dw: Move) {
    m.add_rule(
        q,
        a,
        b,
        Rule {
            next,
            write,
            input_move: di,
            work_move: dw,
        },
    )
    .expect("fixture rules are well formed");
}

/// Accepts iff the `2n` input bits have odd parity, i.e. computes
/// `XOR_n`. One work cell holds the running parity (`_` for 0, `1` for 1).
///
/// States `0..2n` read positions `1..=2n`; `2n` accepts, `2n + 1` rejects.
pub fn parity_machine(n: usize) -> TuringMachine {
    assert!(n >= 1);
    let (acc, rej) = (2 * n, 2 * n + 1);
    let mut m = TuringMachine::new(2 * n + 2, 1, 0, acc, rej).expect("valid header");
    // Reading a 1 swaps `_` and `1`; `0` is left alone so the map stays a
    // bijection on all three symbols.
    let flip = |b: Symbol| match b {
        Symbol::Blank => Symbol::One,
        Symbol::One => Symbol::Blank,
        Symbol::Zero => Symbol::Zero,
    };
    for q in 0..2 * n - 1 {
        for a in BITS {
            for b in SYMBOLS {
                let write = if a { flip(b) } else { b };
                add(&mut m, q, a, b, q + 1, write, Move::Right, Move::Stay);
            }
        }
    }
    let last = 2 * n - 1;
    for a in BITS {
        for b in SYMBOLS {
            let odd = matches!((a, b), (true, Symbol::Blank) | (false, Symbol::One));
            add(&mut m, last, a, b, if odd { acc } else { rej }, b, Move::Stay, Move::Stay);
        }
    }
    m
}

/// Accepts iff `x = y`, i.e. computes `EQ_n`.
///
/// For each `i` the machine reads `x_i`, walks `n` cells right to `y_i`,
/// rejects on a mismatch and otherwise increments an `m`-bit counter with
/// `m = max(1, ceil(log2 n))`, then walks back to `x_{i+1}`. The counter
/// starts at `2^m - n` and the machine accepts when it overflows, which
/// happens on the `n`-th match. The blank tape encodes the start value:
/// cell `j` holds bit `j` of the counter XOR bit `j` of `2^m - n`, with `_`
/// for 0 and `1` for 1.
pub fn eq_machine(n: usize) -> TuringMachine {
    assert!(n >= 1);
    let m_bits = (usize::BITS - (n - 1).leading_zeros()).max(1) as usize;
    let c0 = (1usize << m_bits) - n;
    let rd = 0;
    let walk = |b: bool, k: usize| 1 + (b as usize) * n + (k - 1); // k in 1..=n
    let inc = |j: usize| 1 + 2 * n + j; // j in 0..m
    let ret = |j: usize| 1 + 2 * n + m_bits + j; // j in 0..m-1
    let bk = |t: usize| if t == 0 { rd } else { 2 * n + 2 * m_bits + t }; // t in 1..n
    let acc = 2 * n + 2 * m_bits + n;
    let rej = acc + 1;
    let mut m = TuringMachine::new(rej + 1, m_bits, rd, acc, rej).expect("valid header");

    let symbol = |j: usize, bit: bool| {
        if bit ^ ((c0 >> j) & 1 == 1) {
            Symbol::One
        } else {
            Symbol::Blank
        }
    };
    let after_increment = if n >= 2 { bk(n - 1) } else { rd };

    for a in BITS {
        for b in SYMBOLS {
            add(&mut m, rd, a, b, walk(a, 1), b, Move::Right, Move::Stay);
            for bit in BITS {
                for k in 1..n {
                    add(&mut m, walk(bit, k), a, b, walk(bit, k + 1), b, Move::Right, Move::Stay);
                }
                let next = if a == bit { inc(0) } else { rej };
                add(&mut m, walk(bit, n), a, b, next, b, Move::Stay, Move::Stay);
            }
            for t in 1..n {
                add(&mut m, bk(t), a, b, bk(t - 1), b, Move::Left, Move::Stay);
            }
        }
        for j in 0..m_bits {
            // carry: a 1 becomes 0 and the carry moves up
            let one = symbol(j, true);
            if j + 1 == m_bits {
                add(&mut m, inc(j), a, one, acc, one, Move::Stay, Move::Stay);
            } else {
                add(&mut m, inc(j), a, one, inc(j + 1), symbol(j, false), Move::Stay, Move::Right);
            }
            // a 0 becomes 1; then return to cell 0
            let zero = symbol(j, false);
            if j == 0 {
                add(&mut m, inc(0), a, zero, after_increment, one, Move::Stay, Move::Stay);
            } else {
                add(&mut m, inc(j), a, zero, ret(j - 1), one, Move::Stay, Move::Left);
            }
        }
        for j in 0..m_bits.saturating_sub(1) {
            let zero = symbol(j, false);
            if j == 0 {
                add(&mut m, ret(0), a, zero, after_increment, zero, Move::Stay, Move::Stay);
            } else {
                add(&mut m, ret(j), a, zero, ret(j - 1), zero, Move::Stay, Move::Left);
            }
        }
    }
    m
}

/// Two states that both step right into the same third state: their
/// successors coincide, so the machine is not reversible. Input length 1.
pub fn irreversible_machine() -> TuringMachine {
    let (s, t, merge, acc, rej) = (0, 1, 2, 3, 4);
    let mut m = TuringMachine::new(5, 1, s, acc, rej).expect("valid header");
    for a in BITS {
        for b in SYMBOLS {
            add(&mut m, s, a, b, merge, b, Move::Right, Move::Stay);
            add(&mut m, t, a, b, merge, b, Move::Right, Move::Stay);
            add(&mut m, merge, a, b, acc, b, Move::Stay, Move::Stay);
        }
    }
    m
}
