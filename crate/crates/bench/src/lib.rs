//! Fixtures shared by the criterion benches.

use gardenhose::families::{build_eq, build_ip, build_xor};
use gardenhose::{Strategy, TruthTable};

/// XOR, EQ and IP strategies on `n`-bit inputs.
pub fn family_suite(n: usize) -> Vec<(&'static str, Strategy)> {
    vec![
        ("xor", build_xor(n).expect("n in range")),
        ("eq", build_eq(n).expect("n in range")),
        ("ip", build_ip(n).expect("n in range")),
    ]
}

/// Two-bit tables spread over the index space, with the named families first.
pub fn two_bit_tables(count: u64) -> Vec<TruthTable> {
    let mut tables = vec![TruthTable::xor(2), TruthTable::eq(2), TruthTable::ip(2)];
    // 40503 is odd, so the stride visits distinct indices mod 2^16
    tables.extend((0..count).map(|i| TruthTable::nth_total(2, (i * 40503) % (1 << 16))));
    tables
}
