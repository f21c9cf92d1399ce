//! One-way communication from a garden-hose strategy: Alice sends her wiring
//! as a fixed-width partner table and Bob finishes the evaluation locally.

use crate::error::{Error, Result};
use crate::strategy::{evaluate_wirings, Strategy};
use crate::wiring::{Side, Wiring};

/// Bits per endpoint field: enough for partners `0..=s` plus the "none"
/// marker `s + 1`.
pub fn field_width(pipes: usize) -> usize {
    let values = pipes + 2;
    (usize::BITS - (values - 1).leading_zeros()) as usize
}

/// Total message length for `pipes` pipes: `(s + 1) * ceil(log2(s + 2))`.
pub fn message_len(pipes: usize) -> usize {
    (pipes + 1) * field_width(pipes)
}

pub fn encode_wiring(wiring: &Wiring) -> Vec<bool> {
    let s = wiring.pipes();
    let width = field_width(s);
    let mut bits = Vec::with_capacity(message_len(s));
    for p in wiring.partners() {
        let value = p.unwrap_or(s + 1);
        bits.extend((0..width).rev().map(|i| (value >> i) & 1 == 1));
    }
    bits
}

/// Inverse of [`encode_wiring`] for an Alice wiring on `pipes` pipes.
pub fn decode_alice_message(bits: &[bool], pipes: usize) -> Result<Wiring> {
    let width = field_width(pipes);
    if bits.len() != message_len(pipes) {
        return Err(Error::MalformedMessage(format!(
            "expected {} bits for {pipes} pipes, got {}",
            message_len(pipes),
            bits.len()
        )));
    }
    let partners: Vec<usize> = bits
        .chunks(width)
        .map(|chunk| chunk.iter().fold(0, |acc, &b| (acc << 1) | b as usize))
        .collect();
    let mut wiring = Wiring::empty(Side::Alice, pipes);
    for (a, &b) in partners.iter().enumerate() {
        if b == pipes + 1 {
            continue;
        }
        if b > pipes + 1 {
            return Err(Error::MalformedMessage(format!(
                "endpoint {a} has out-of-range partner value {b}"
            )));
        }
        if partners[b] != a {
            return Err(Error::MalformedMessage(format!(
                "partner table is not symmetric at endpoints {a} and {b}"
            )));
        }
        if a < b {
            wiring
                .connect(a, b)
                .map_err(|e| Error::MalformedMessage(e.to_string()))?;
        } else if a == b {
            return Err(Error::MalformedMessage(format!("endpoint {a} is its own partner")));
        }
    }
    Ok(wiring)
}

pub fn alice_message(strategy: &Strategy, x: usize) -> Vec<bool> {
    encode_wiring(strategy.alice(x))
}

/// Bob's output bit given Alice's message and his own wiring.
pub fn bob_decide(message: &[bool], bob: &Wiring) -> Result<bool> {
    let alice = decode_alice_message(message, bob.pipes())?;
    Ok(evaluate_wirings(&alice, bob).exit.bit())
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn bits_from_str(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::MalformedMessage(format!("bad message character {other:?}"))),
        })
        .collect()
}
