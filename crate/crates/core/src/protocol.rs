//! Deterministic two-party protocol trees in which Alice and Bob alternate
//! sending one bit, Alice first. Transcripts are strings over `0`/`1`.

use std::collections::BTreeMap;

use crate::error::{Error, ParseError, Result};
use crate::table::TruthTable;
use crate::text::{parse_bits, parse_header, Lines};
use crate::wiring::Side;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolTree {
    n: usize,
    depth: usize,
    /// Sender's bit per private input, for every transcript shorter than `depth`.
    nodes: BTreeMap<String, Vec<bool>>,
    /// Output per Alice input, for every transcript of length `depth`.
    leaves: BTreeMap<String, Vec<bool>>,
}

/// Who sends after a transcript of the given length.
pub fn sender(len: usize) -> Side {
    if len.is_multiple_of(2) {
        Side::Alice
    } else {
        Side::Bob
    }
}

/// All `0`/`1` strings of length `len` in lexicographic order.
pub fn transcripts(len: usize) -> impl Iterator<Item = String> {
    (0..1usize << len).map(move |v| crate::table::format_input(v, len))
}

impl ProtocolTree {
    pub fn new(
        n: usize,
        depth: usize,
        nodes: BTreeMap<String, Vec<bool>>,
        leaves: BTreeMap<String, Vec<bool>>,
    ) -> Result<Self> {
        if depth > 20 {
            return Err(Error::InconsistentTree(format!("depth {depth} is too large")));
        }
        let size = 1usize << n;
        for len in 0..depth {
            for v in transcripts(len) {
                match nodes.get(&v) {
                    None => {
                        return Err(Error::InconsistentTree(format!(
                            "missing internal node {}",
                            display(&v)
                        )))
                    }
                    Some(bits) if bits.len() != size => {
                        return Err(Error::InconsistentTree(format!(
                            "node {} has {} entries, expected {size}",
                            display(&v),
                            bits.len()
                        )))
                    }
                    _ => {}
                }
            }
        }
        for v in transcripts(depth) {
            match leaves.get(&v) {
                None => {
                    return Err(Error::InconsistentTree(format!("missing leaf {}", display(&v))))
                }
                Some(bits) if bits.len() != size => {
                    return Err(Error::InconsistentTree(format!(
                        "leaf {} has {} entries, expected {size}",
                        display(&v),
                        bits.len()
                    )))
                }
                _ => {}
            }
        }
        let expected_nodes = (1usize << depth) - 1;
        if nodes.len() != expected_nodes || leaves.len() != 1 << depth {
            return Err(Error::InconsistentTree(
                "tree has nodes outside the complete binary tree of its depth".into(),
            ));
        }
        Ok(ProtocolTree {
            n,
            depth,
            nodes,
            leaves,
        })
    }

    /// Tabulates `send(transcript, input)` for every internal node and
    /// `leaf(transcript, x)` for every leaf.
    pub fn from_fns(
        n: usize,
        depth: usize,
        mut send: impl FnMut(&str, usize) -> bool,
        mut leaf: impl FnMut(&str, usize) -> bool,
    ) -> Result<Self> {
        let size = 1usize << n;
        let mut nodes = BTreeMap::new();
        for len in 0..depth {
            for v in transcripts(len) {
                let bits = (0..size).map(|i| send(&v, i)).collect();
                nodes.insert(v, bits);
            }
        }
        let mut leaves = BTreeMap::new();
        for v in transcripts(depth) {
            let bits = (0..size).map(|x| leaf(&v, x)).collect();
            leaves.insert(v, bits);
        }
        ProtocolTree::new(n, depth, nodes, leaves)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Bit sent after transcript `v` by the player whose input is `input`.
    pub fn message(&self, v: &str, input: usize) -> bool {
        self.nodes[v][input]
    }

    pub fn leaf_value(&self, v: &str, x: usize) -> bool {
        self.leaves[v][x]
    }

    pub fn transcript(&self, x: usize, y: usize) -> String {
        let mut v = String::with_capacity(self.depth);
        while v.len() < self.depth {
            let input = match sender(v.len()) {
                Side::Alice => x,
                Side::Bob => y,
            };
            v.push(if self.message(&v, input) { '1' } else { '0' });
        }
        v
    }

    pub fn evaluate(&self, x: usize, y: usize) -> bool {
        self.leaf_value(&self.transcript(x, y), x)
    }

    pub fn table(&self) -> TruthTable {
        TruthTable::total_fn(self.n, |x, y| self.evaluate(x, y))
    }

    /// Whether every Alice move along `v` agrees with input `x`.
    pub fn consistent_with_alice(&self, v: &str, x: usize) -> bool {
        (0..v.len())
            .filter(|&k| sender(k) == Side::Alice)
            .all(|k| self.message(&v[..k], x) == (v.as_bytes()[k] == b'1'))
    }

    /// Same function with even depth: an odd-depth tree gets a final Bob
    /// round in which Bob always sends 0; both children keep the old leaf value.
    pub fn with_even_depth(&self) -> ProtocolTree {
        if self.depth.is_multiple_of(2) {
            return self.clone();
        }
        let size = 1usize << self.n;
        let mut nodes = self.nodes.clone();
        let mut leaves = BTreeMap::new();
        for (v, values) in &self.leaves {
            nodes.insert(v.clone(), vec![false; size]);
            leaves.insert(format!("{v}0"), values.clone());
            leaves.insert(format!("{v}1"), values.clone());
        }
        ProtocolTree {
            n: self.n,
            depth: self.depth + 1,
            nodes,
            leaves,
        }
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(input).without_comments();
        let header = parse_header(&mut lines, "ghp", &["n", "D"])?;
        let (n, depth) = (header[0] as usize, header[1] as usize);
        crate::strategy::check_n(n)?;
        let size = 1usize << n;
        let mut nodes = BTreeMap::new();
        let mut leaves = BTreeMap::new();
        while let Some(line) = lines.peek() {
            lines.next_line("node")?;
            if line.is_blank() {
                continue;
            }
            let tokens = line.tokens();
            let (is_leaf, rest) = if tokens[0].text == "leaf" {
                (true, &tokens[1..])
            } else {
                (false, &tokens[..])
            };
            let [label, bits] = rest else {
                return Err(line.error(1, "expected `<transcript> <bits>` or `leaf <transcript> <bits>`"));
            };
            let v = if label.text == "-" { "" } else { label.text };
            if let Some(pos) = v.find(|c| c != '0' && c != '1') {
                return Err(crate::error::ParseError::new(
                    label.line,
                    label.column + pos,
                    "transcripts use only 0 and 1 (`-` for the empty one)",
                ));
            }
            let expected = if is_leaf { v.len() == depth } else { v.len() < depth };
            if !expected {
                return Err(label.error(format!(
                    "transcript length {} does not fit a {} of a depth-{depth} tree",
                    v.len(),
                    if is_leaf { "leaf" } else { "internal node" }
                )));
            }
            let values = parse_bits(bits, size)?;
            let map = if is_leaf { &mut leaves } else { &mut nodes };
            if map.insert(v.to_string(), values).is_some() {
                return Err(label.error("duplicate transcript"));
            }
        }
        ProtocolTree::new(n, depth, nodes, leaves)
            .map_err(|e| ParseError::new(1, 1, e.to_string()))
    }

    pub fn to_ghp(&self) -> String {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        let mut out = format!("ghp 1 {} {}\n", self.n, self.depth);
        for len in 0..self.depth {
            for v in transcripts(len) {
                out.push_str(&format!("{} {}\n", display(&v), bits(&self.nodes[&v])));
            }
        }
        for v in transcripts(self.depth) {
            out.push_str(&format!("leaf {} {}\n", display(&v), bits(&self.leaves[&v])));
        }
        out
    }
}

fn display(v: &str) -> &str {
    if v.is_empty() {
        "-"
    } else {
        v
    }
}
