//! Garden-hose strategies, the water-flow evaluator and the GHS text format.

use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::table::TruthTable;
use crate::text::{parse_header, Lines, Token};
use crate::wiring::{Side, Wiring, TAP};

/// Deterministic game: one Alice wiring per `x`, one Bob wiring per `y`,
/// all over the same `s` pipes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    n: usize,
    pipes: usize,
    alice: Vec<Wiring>,
    bob: Vec<Wiring>,
}

/// A vertex of the game graph: an endpoint id on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub side: Side,
    pub id: usize,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side, self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub exit: Side,
    /// Visited endpoints from the tap onwards; empty when the tap is unwired.
    pub path: Vec<Endpoint>,
    /// Number of connection (hose) edges traversed.
    pub hops: usize,
}

impl EvalResult {
    /// Pipe ids traversed, in order.
    pub fn pipes(&self) -> Vec<usize> {
        self.path
            .windows(2)
            .filter(|w| w[0].id == w[1].id && w[0].side != w[1].side)
            .map(|w| w[0].id)
            .collect()
    }
}

/// Outcome of a single move of the water.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowStep {
    /// The water took the connection `from -> to` on `side` and then crossed
    /// pipe `to` to the other side.
    Hop { side: Side, from: usize, to: usize },
    Exit(Side),
}

/// The evaluator as a step function. Besides the two borrowed wirings its
/// entire state is the current endpoint and the side it is on.
#[derive(Debug, Clone)]
pub struct Flow<'a> {
    alice: &'a Wiring,
    bob: &'a Wiring,
    at: usize,
    side: Side,
}

impl<'a> Flow<'a> {
    pub fn new(alice: &'a Wiring, bob: &'a Wiring) -> Self {
        debug_assert_eq!(alice.pipes(), bob.pipes());
        Flow {
            alice,
            bob,
            at: TAP,
            side: Side::Alice,
        }
    }

    pub fn position(&self) -> Endpoint {
        Endpoint {
            side: self.side,
            id: self.at,
        }
    }

    pub fn step(&mut self) -> FlowStep {
        let wiring = match self.side {
            Side::Alice => self.alice,
            Side::Bob => self.bob,
        };
        match wiring.partner(self.at) {
            None => FlowStep::Exit(self.side),
            Some(to) => {
                let step = FlowStep::Hop {
                    side: self.side,
                    from: self.at,
                    to,
                };
                self.at = to;
                self.side = self.side.other();
                step
            }
        }
    }

    /// Runs to the exit and returns the side.
    pub fn run(mut self) -> Side {
        // A valid pair of wirings yields a simple path, so this always ends;
        // the bound only guards against inconsistent pipe counts.
        for _ in 0..=self.alice.pipes() + 1 {
            if let FlowStep::Exit(side) = self.step() {
                return side;
            }
        }
        unreachable!("water path longer than the pipe count")
    }
}

/// Evaluates a pair of wirings directly.
pub fn evaluate_wirings(alice: &Wiring, bob: &Wiring) -> EvalResult {
    let mut flow = Flow::new(alice, bob);
    let mut path = Vec::new();
    let mut hops = 0;
    loop {
        match flow.step() {
            FlowStep::Exit(exit) => return EvalResult { exit, path, hops },
            FlowStep::Hop { side, from, to } => {
                if path.is_empty() {
                    path.push(Endpoint { side, id: from });
                }
                path.push(Endpoint { side, id: to });
                path.push(Endpoint {
                    side: side.other(),
                    id: to,
                });
                hops += 1;
                assert!(hops <= alice.pipes(), "water path longer than the pipe count");
            }
        }
    }
}

/// Result of checking a strategy against a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Counterexample {
        x: usize,
        y: usize,
        got: Side,
        want: Side,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl Strategy {
    pub fn new(n: usize, pipes: usize, alice: Vec<Wiring>, bob: Vec<Wiring>) -> Result<Self> {
        let size = 1usize << n;
        if alice.len() != size || bob.len() != size {
            return Err(Error::DimensionMismatch(format!(
                "expected {size} wirings per side for n={n}, got {} for alice and {} for bob",
                alice.len(),
                bob.len()
            )));
        }
        for (side, list) in [(Side::Alice, &alice), (Side::Bob, &bob)] {
            for (input, w) in list.iter().enumerate() {
                if w.side() != side || w.pipes() != pipes {
                    return Err(Error::DimensionMismatch(format!(
                        "{side} wiring for input {input} is a {} wiring on {} pipes, expected {side} on {pipes}",
                        w.side(),
                        w.pipes()
                    )));
                }
            }
        }
        Ok(Strategy {
            n,
            pipes,
            alice,
            bob,
        })
    }

    /// Builds a strategy from per-input constructors; any invalid wiring is
    /// reported with the side and input that produced it.
    pub fn from_fns(
        n: usize,
        pipes: usize,
        mut alice: impl FnMut(usize) -> Result<Wiring>,
        mut bob: impl FnMut(usize) -> Result<Wiring>,
    ) -> Result<Self> {
        let size = 1usize << n;
        let wrap = |side: Side, input: usize| {
            move |e: Error| Error::InvalidWiring {
                side,
                input,
                source: Box::new(e),
            }
        };
        let a = (0..size)
            .map(|x| alice(x).map_err(wrap(Side::Alice, x)))
            .collect::<Result<Vec<_>>>()?;
        let b = (0..size)
            .map(|y| bob(y).map_err(wrap(Side::Bob, y)))
            .collect::<Result<Vec<_>>>()?;
        Strategy::new(n, pipes, a, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pipes(&self) -> usize {
        self.pipes
    }

    pub fn alice(&self, x: usize) -> &Wiring {
        &self.alice[x]
    }

    pub fn bob(&self, y: usize) -> &Wiring {
        &self.bob[y]
    }

    pub fn evaluate(&self, x: usize, y: usize) -> EvalResult {
        evaluate_wirings(&self.alice[x], &self.bob[y])
    }

    /// Exit side only, without recording the path.
    pub fn exit_side(&self, x: usize, y: usize) -> Side {
        Flow::new(&self.alice[x], &self.bob[y]).run()
    }

    /// Checks every defined cell; reports the first failing `(x, y)` in
    /// row-major order.
    pub fn verify(&self, table: &TruthTable) -> Result<Verdict> {
        if table.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "strategy has n={} but table has n={}",
                self.n,
                table.n()
            )));
        }
        for (x, y, value) in table.defined_cells() {
            let got = self.exit_side(x, y);
            let want = Side::from_bit(value);
            if got != want {
                return Ok(Verdict::Counterexample { x, y, got, want });
            }
        }
        Ok(Verdict::Ok)
    }

    /// The table this strategy computes.
    pub fn table(&self) -> TruthTable {
        TruthTable::total_fn(self.n, |x, y| self.exit_side(x, y).bit())
    }

    /// Applies the same pipe permutation to both players.
    pub fn relabel(&self, perm: &[usize]) -> Strategy {
        Strategy {
            n: self.n,
            pipes: self.pipes,
            alice: self.alice.iter().map(|w| w.relabel(perm)).collect(),
            bob: self.bob.iter().map(|w| w.relabel(perm)).collect(),
        }
    }

    /// Adds `extra` unused pipes.
    pub fn padded(&self, extra: usize) -> Strategy {
        Strategy {
            n: self.n,
            pipes: self.pipes + extra,
            alice: self.alice.iter().map(|w| w.padded(extra)).collect(),
            bob: self.bob.iter().map(|w| w.padded(extra)).collect(),
        }
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(input);
        let header = parse_header(&mut lines, "ghs", &["n", "s"])?;
        let (n, s) = (header[0] as usize, header[1] as usize);
        check_n(n)?;
        let strategy = parse_body(&mut lines, n, s)?;
        lines.finish()?;
        Ok(strategy)
    }

    pub fn to_ghs(&self) -> String {
        let mut out = format!("ghs 1 {} {}\n", self.n, self.pipes);
        self.write_body(&mut out);
        out
    }

    pub(crate) fn write_body(&self, out: &mut String) {
        out.push_str("alice\n");
        for w in &self.alice {
            match w.partner(TAP) {
                Some(p) => out.push_str(&p.to_string()),
                None => out.push('-'),
            }
            for (a, b) in w.pairs().into_iter().filter(|&(a, _)| a != TAP) {
                out.push_str(&format!(" {a}-{b}"));
            }
            out.push('\n');
        }
        out.push_str("bob\n");
        for w in &self.bob {
            let pairs: Vec<String> = w.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
            out.push_str(&pairs.join(" "));
            out.push('\n');
        }
    }
}

pub(crate) fn check_n(n: usize) -> Result<(), ParseError> {
    if n > crate::table::MAX_TABLE_N {
        return Err(ParseError::new(1, 1, format!("n={n} is too large")));
    }
    Ok(())
}

/// Parses the `alice` and `bob` sections of a GHS body.
pub(crate) fn parse_body(lines: &mut Lines<'_>, n: usize, s: usize) -> Result<Strategy, ParseError> {
    let size = 1usize << n;
    lines.skip_blank();
    section(lines, "alice")?;
    let mut alice = Vec::with_capacity(size);
    for _ in 0..size {
        let line = lines.next_line("alice wiring line")?;
        let tokens = line.tokens();
        let first = tokens
            .first()
            .ok_or_else(|| line.error(1, "expected tap partner (`-` or a pipe id)"))?;
        let mut pairs = Vec::new();
        if first.text != "-" {
            pairs.push((*first, TAP, first.parse::<usize>("tap partner")?));
        }
        for tok in &tokens[1..] {
            let (a, b) = parse_pair(tok)?;
            pairs.push((*tok, a, b));
        }
        alice.push(build_wiring(Side::Alice, s, &pairs)?);
    }
    section(lines, "bob")?;
    let mut bob = Vec::with_capacity(size);
    for _ in 0..size {
        let line = lines.next_line("bob wiring line")?;
        let mut pairs = Vec::new();
        for tok in line.tokens() {
            let (a, b) = parse_pair(&tok)?;
            pairs.push((tok, a, b));
        }
        bob.push(build_wiring(Side::Bob, s, &pairs)?);
    }
    Strategy::new(n, s, alice, bob).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

fn section(lines: &mut Lines<'_>, name: &str) -> Result<(), ParseError> {
    let line = lines.next_line(&format!("`{name}` section"))?;
    let tokens = line.tokens();
    match tokens.as_slice() {
        [tok] => tok.expect(name),
        [] => Err(line.error(1, format!("expected `{name}`"))),
        [_, extra, ..] => Err(extra.error(format!("unexpected token after `{name}`"))),
    }
}

fn parse_pair(tok: &Token<'_>) -> Result<(usize, usize), ParseError> {
    let (a, b) = tok
        .text
        .split_once('-')
        .ok_or_else(|| tok.error(format!("expected a pair `a-b`, found {:?}", tok.text)))?;
    let a = a
        .parse()
        .map_err(|_| tok.error(format!("bad endpoint in pair {:?}", tok.text)))?;
    let b = b
        .parse()
        .map_err(|_| tok.error(format!("bad endpoint in pair {:?}", tok.text)))?;
    Ok((a, b))
}

fn build_wiring(
    side: Side,
    s: usize,
    pairs: &[(Token<'_>, usize, usize)],
) -> Result<Wiring, ParseError> {
    let mut w = Wiring::empty(side, s);
    for (tok, a, b) in pairs {
        w.connect(*a, *b).map_err(|e| tok.error(e.to_string()))?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three pipes: Alice routes the tap to pipe `x + 1`, Bob sends pipe
    /// `y + 1` back through pipe 3, which Alice leaves open.
    fn xor1() -> Strategy {
        Strategy::from_fns(
            1,
            3,
            |x| Wiring::new(Side::Alice, 3, &[(0, x + 1)]),
            |y| Wiring::new(Side::Bob, 3, &[(y + 1, 3)]),
        )
        .unwrap()
    }

    #[test]
    fn xor_gadget_exits() {
        let s = xor1();
        assert_eq!(s.evaluate(0, 0).exit, Side::Alice);
        let r = s.evaluate(1, 0);
        assert_eq!(r.exit, Side::Bob);
        assert_eq!(r.hops, 1);
        assert_eq!(r.pipes(), vec![2]);
        let r = s.evaluate(0, 0);
        assert_eq!(r.hops, 2);
        assert_eq!(r.pipes(), vec![1, 3]);
        assert_eq!(r.path.len(), 5);
    }

    #[test]
    fn unwired_tap_stays_with_alice() {
        let s = Strategy::from_fns(
            1,
            2,
            |_| Ok(Wiring::empty(Side::Alice, 2)),
            |_| Wiring::new(Side::Bob, 2, &[(1, 2)]),
        )
        .unwrap();
        let r = s.evaluate(1, 1);
        assert_eq!(r.exit, Side::Alice);
        assert!(r.path.is_empty());
        assert_eq!(r.hops, 0);
    }

    #[test]
    fn verify_reports_first_counterexample() {
        let s = xor1();
        assert_eq!(s.verify(&TruthTable::xor(1)).unwrap(), Verdict::Ok);
        let and = TruthTable::total_fn(1, |x, y| x & y == 1);
        assert_eq!(
            s.verify(&and).unwrap(),
            Verdict::Counterexample {
                x: 0,
                y: 1,
                got: Side::Bob,
                want: Side::Alice
            }
        );
    }

    #[test]
    fn verify_skips_undefined_and_checks_n() {
        let empty = Strategy::from_fns(
            2,
            1,
            |_| Ok(Wiring::empty(Side::Alice, 1)),
            |_| Ok(Wiring::empty(Side::Bob, 1)),
        )
        .unwrap();
        assert!(empty.verify(&TruthTable::constant(2, false)).unwrap().is_ok());
        let undefined = TruthTable::from_fn(2, |_, _| None);
        assert!(empty.verify(&undefined).unwrap().is_ok());
        assert!(matches!(
            empty.verify(&TruthTable::constant(1, false)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn ghs_round_trip() {
        let s = xor1();
        let text = s.to_ghs();
        assert_eq!(text, "ghs 1 1 3\nalice\n1\n2\nbob\n1-3\n2-3\n");
        assert_eq!(Strategy::parse(&text).unwrap(), s);
    }

    #[test]
    fn ghs_errors_point_at_token() {
        let err = Strategy::parse("ghs 1 1 3\nalice\n1 1-2\n2\nbob\n1-3\n2-3\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 3));
        let err = Strategy::parse("ghs 1 1 3\nalice\n1\n2\nbob\n1-3\n2-x\n").unwrap_err();
        assert_eq!((err.line, err.column), (7, 1));
        let err = Strategy::parse("ghs 1 1 3\nalice\n1\nbob\n").unwrap_err();
        assert_eq!(err.line, 4);
    }
}
