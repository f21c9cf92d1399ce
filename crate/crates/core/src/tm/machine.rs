use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::text::{parse_header, Lines, Token};

/// Work-tape symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Blank,
    Zero,
    One,
}

impl Symbol {
    /// Canonical enumeration order, also the base-3 digit order of tapes.
    pub const ALL: [Symbol; 3] = [Symbol::Blank, Symbol::Zero, Symbol::One];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Blank => '_',
            Symbol::Zero => '0',
            Symbol::One => '1',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '_' => Some(Symbol::Blank),
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn delta(self) -> isize {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Stay => 'S',
            Move::Right => 'R',
        }
    }

    fn from_str(s: &str) -> Option<Move> {
        match s {
            "L" => Some(Move::Left),
            "S" => Some(Move::Stay),
            "R" => Some(Move::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub next: usize,
    pub write: Symbol,
    pub input_move: Move,
    pub work_move: Move,
}

/// A deterministic machine with a read-only binary input tape of length
/// `2n` (positions `1..=n` hold `x`, `n+1..=2n` hold `y`) and a work tape of
/// `w` cells, initially blank.
///
/// A missing rule halts with reject, as does any move off either tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    states: usize,
    work_len: usize,
    start: usize,
    accept: usize,
    reject: usize,
    /// Indexed by `(state * 2 + input) * 3 + symbol`.
    rules: Vec<Option<Rule>>,
}

fn rule_index(state: usize, input: bool, symbol: Symbol) -> usize {
    (state * 2 + input as usize) * 3 + symbol.index()
}

/// Total configuration: state, input-head position (1-based), work-head
/// position (0-based) and work-tape contents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub input_pos: usize,
    pub head: usize,
    pub tape: Vec<Symbol>,
}

/// Outcome of a single step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Accept,
    Reject,
    Moved(Configuration),
}

impl TuringMachine {
    pub fn new(states: usize, work_len: usize, start: usize, accept: usize, reject: usize) -> Result<Self> {
        if states == 0 || work_len == 0 {
            return Err(Error::InvalidArgument(
                "a machine needs at least one state and one work cell".into(),
            ));
        }
        for (what, q) in [("start", start), ("accept", accept), ("reject", reject)] {
            if q >= states {
                return Err(Error::InvalidArgument(format!(
                    "{what} state {q} is not below the state count {states}"
                )));
            }
        }
        if accept == reject {
            return Err(Error::InvalidArgument("accept and reject states coincide".into()));
        }
        Ok(TuringMachine {
            states,
            work_len,
            start,
            accept,
            reject,
            rules: vec![None; states * 6],
        })
    }

    /// Adds a rule; fails on halting states and on a second rule for the same
    /// `(state, input, symbol)`.
    pub fn add_rule(&mut self, state: usize, input: bool, symbol: Symbol, rule: Rule) -> Result<()> {
        if state >= self.states || rule.next >= self.states {
            return Err(Error::InvalidArgument(format!(
                "rule {state} -> {} mentions a state outside 0..{}",
                rule.next, self.states
            )));
        }
        if self.is_halting(state) {
            return Err(Error::InvalidArgument(format!("halting state {state} has a rule")));
        }
        let slot = &mut self.rules[rule_index(state, input, symbol)];
        if slot.is_some() {
            return Err(Error::InvalidArgument(format!(
                "second rule for state {state}, input {}, symbol {}",
                input as u8,
                symbol.as_char()
            )));
        }
        *slot = Some(rule);
        Ok(())
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn work_len(&self) -> usize {
        self.work_len
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accept(&self) -> usize {
        self.accept
    }

    pub fn reject(&self) -> usize {
        self.reject
    }

    pub fn is_halting(&self, state: usize) -> bool {
        state == self.accept || state == self.reject
    }

    pub fn rule(&self, state: usize, input: bool, symbol: Symbol) -> Option<Rule> {
        self.rules[rule_index(state, input, symbol)]
    }

    /// All rules as `(state, input, symbol, rule)` in index order.
    pub fn rules(&self) -> impl Iterator<Item = (usize, bool, Symbol, Rule)> + '_ {
        self.rules.iter().enumerate().filter_map(|(i, r)| {
            r.map(|r| (i / 6, (i / 3) % 2 == 1, Symbol::ALL[i % 3], r))
        })
    }

    pub fn start_configuration(&self) -> Configuration {
        Configuration {
            state: self.start,
            input_pos: 1,
            head: 0,
            tape: vec![Symbol::Blank; self.work_len],
        }
    }

    /// One step with `input` the bit under the input head; `input_len` is
    /// `2n`.
    pub fn step(&self, config: &Configuration, input: bool, input_len: usize) -> Step {
        if config.state == self.accept {
            return Step::Accept;
        }
        if config.state == self.reject {
            return Step::Reject;
        }
        let Some(rule) = self.rule(config.state, input, config.tape[config.head]) else {
            return Step::Reject;
        };
        let input_pos = config.input_pos as isize + rule.input_move.delta();
        let head = config.head as isize + rule.work_move.delta();
        if input_pos < 1 || input_pos > input_len as isize || head < 0 || head >= self.work_len as isize {
            return Step::Reject;
        }
        let mut tape = config.tape.clone();
        tape[config.head] = rule.write;
        Step::Moved(Configuration {
            state: rule.next,
            input_pos: input_pos as usize,
            head: head as usize,
            tape,
        })
    }

    /// Number of configurations with the input head on one of `positions`
    /// cells, saturating.
    pub fn configuration_count(&self, positions: usize) -> u64 {
        let tapes = 3u64.checked_pow(self.work_len as u32).unwrap_or(u64::MAX);
        (self.states as u64)
            .saturating_mul(positions as u64)
            .saturating_mul(self.work_len as u64)
            .saturating_mul(tapes)
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(input).without_comments();
        let header = parse_header(&mut lines, "ghtm", &["states", "w"])?;
        let (states, work_len) = (header[0] as usize, header[1] as usize);
        if states == 0 || work_len == 0 {
            return Err(ParseError::new(1, 1, "states and w must be positive"));
        }
        if work_len > 40 {
            return Err(ParseError::new(1, 1, format!("w={work_len} is too large")));
        }
        let mut named = [None; 3];
        for (i, key) in ["start", "accept", "reject"].iter().enumerate() {
            lines.skip_blank();
            let line = lines.next_line(&format!("`{key}` line"))?;
            let tokens = line.tokens();
            match tokens.as_slice() {
                [k, q] => {
                    k.expect(key)?;
                    named[i] = Some((state_id(q, states)?, *q));
                }
                [] => return Err(line.error(1, format!("expected `{key} <state>`"))),
                [_] => return Err(line.error(line.text.len() + 1, "missing state")),
                [_, _, extra, ..] => return Err(extra.error("unexpected token")),
            }
        }
        let [Some((start, _)), Some((accept, _)), Some((reject, reject_tok))] = named else {
            unreachable!("all three lines were parsed")
        };
        let mut machine = TuringMachine::new(states, work_len, start, accept, reject)
            .map_err(|e| reject_tok.error(e.to_string()))?;
        while let Some(line) = lines.peek() {
            lines.next_line("rule")?;
            if line.is_blank() {
                continue;
            }
            let tokens = line.tokens();
            let [q, a, b, arrow, next, write, di, dw] = tokens.as_slice() else {
                return Err(line.error(1, "expected `q a b -> q' b' di dw`"));
            };
            arrow.expect("->")?;
            let q = state_id(q, states)?;
            let input = match a.text {
                "0" => false,
                "1" => true,
                _ => return Err(a.error("input symbol must be 0 or 1")),
            };
            let read = symbol(b)?;
            let rule = Rule {
                next: state_id(next, states)?,
                write: symbol(write)?,
                input_move: movement(di)?,
                work_move: movement(dw)?,
            };
            machine
                .add_rule(q, input, read, rule)
                .map_err(|e| line.error(1, e.to_string()))?;
        }
        Ok(machine)
    }

    pub fn to_ghtm(&self) -> String {
        let mut out = format!(
            "ghtm 1 {} {}\nstart {}\naccept {}\nreject {}\n",
            self.states, self.work_len, self.start, self.accept, self.reject
        );
        for (q, a, b, r) in self.rules() {
            out.push_str(&format!(
                "{q} {} {} -> {} {} {} {}\n",
                a as u8,
                b.as_char(),
                r.next,
                r.write.as_char(),
                r.input_move.as_char(),
                r.work_move.as_char()
            ));
        }
        out
    }
}

fn state_id(tok: &Token<'_>, states: usize) -> Result<usize, ParseError> {
    let q: usize = tok.parse("state")?;
    if q >= states {
        return Err(tok.error(format!("state {q} is not below the state count {states}")));
    }
    Ok(q)
}

fn symbol(tok: &Token<'_>) -> Result<Symbol, ParseError> {
    let mut chars = tok.text.chars();
    match (chars.next().and_then(Symbol::from_char), chars.next()) {
        (Some(s), None) => Ok(s),
        _ => Err(tok.error("work symbol must be 0, 1 or _")),
    }
}

fn movement(tok: &Token<'_>) -> Result<Move, ParseError> {
    Move::from_str(tok.text).ok_or_else(|| tok.error("move must be L, R or S"))
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}@{} h{} ", self.state, self.input_pos, self.head)?;
        self.tape.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

/// Input bit at 1-based position `pos` of the tape `x y`.
pub(crate) fn input_bit(n: usize, x: usize, y: usize, pos: usize) -> bool {
    if pos <= n {
        (x >> (n - pos)) & 1 == 1
    } else {
        (y >> (2 * n - pos)) & 1 == 1
    }
}

/// Runs the machine on `(x, y)` and reports acceptance.
pub fn simulate_tm(machine: &TuringMachine, n: usize, x: usize, y: usize) -> Result<bool> {
    simulate_tm_trace(machine, n, x, y).map(|t| t.accepted)
}

/// A full run, with the configuration after every boundary crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub accepted: bool,
    pub steps: u64,
    pub crossings: Vec<Configuration>,
}

/// Like [`simulate_tm`], also recording each configuration entered by
/// moving the input head between positions `n` and `n + 1`.
pub fn simulate_tm_trace(machine: &TuringMachine, n: usize, x: usize, y: usize) -> Result<RunTrace> {
    if n == 0 {
        return Err(Error::InvalidArgument("input length n must be positive".into()));
    }
    let cap = machine.configuration_count(2 * n);
    let mut config = machine.start_configuration();
    let mut crossings = Vec::new();
    let mut steps = 0u64;
    loop {
        let input = input_bit(n, x, y, config.input_pos);
        match machine.step(&config, input, 2 * n) {
            Step::Accept | Step::Reject => {
                return Ok(RunTrace {
                    accepted: config.state == machine.accept,
                    steps,
                    crossings,
                })
            }
            Step::Moved(next) => {
                let (a, b) = (config.input_pos, next.input_pos);
                if a.min(b) == n && a.max(b) == n + 1 {
                    crossings.push(next.clone());
                }
                config = next;
            }
        }
        steps += 1;
        if steps > cap {
            return Err(Error::NonterminatingRun { cap });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOPER: &str = "\
ghtm 1 3 1
# state 0 bounces forever
start 0
accept 1
reject 2
0 0 _ -> 0 _ S S
";

    #[test]
    fn ghtm_round_trip() {
        let m = TuringMachine::parse(LOOPER).unwrap();
        assert_eq!(m.rule(0, false, Symbol::Blank).unwrap().next, 0);
        assert_eq!(TuringMachine::parse(&m.to_ghtm()).unwrap(), m);
    }

    #[test]
    fn looping_machine_hits_the_cap() {
        let m = TuringMachine::parse(LOOPER).unwrap();
        assert_eq!(
            simulate_tm(&m, 1, 0, 0),
            Err(Error::NonterminatingRun { cap: 3 * 2 * 3 })
        );
        // missing rule for input 1 rejects
        assert_eq!(simulate_tm(&m, 1, 1, 0), Ok(false));
    }

    #[test]
    fn parse_errors_locate_tokens() {
        let err = TuringMachine::parse("ghtm 1 3 1\nstart 0\naccept 1\nreject 2\n0 0 x -> 1 _ S S\n")
            .unwrap_err();
        assert_eq!((err.line, err.column), (5, 5));
        let err = TuringMachine::parse("ghtm 1 3 1\nstart 0\naccept 1\nreject 2\n0 0 _ -> 1 _ S Q\n")
            .unwrap_err();
        assert_eq!((err.line, err.column), (5, 16));
        let err = TuringMachine::parse("ghtm 1 3 1\nstart 0\naccept 1\nreject 2\n0 0 _ -> 7 _ S S\n")
            .unwrap_err();
        assert_eq!((err.line, err.column), (5, 10));
        let err = TuringMachine::parse(
            "ghtm 1 3 1\nstart 0\naccept 1\nreject 2\n0 0 _ -> 1 _ S S\n0 0 _ -> 2 _ S S\n",
        )
        .unwrap_err();
        assert_eq!(err.line, 6);
        let err = TuringMachine::parse("ghtm 1 3 1\nstart 0\naccept 1\nreject 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 8));
    }

    #[test]
    fn off_tape_moves_reject() {
        let mut m = TuringMachine::new(3, 1, 0, 1, 2).unwrap();
        let left = Rule {
            next: 1,
            write: Symbol::Blank,
            input_move: Move::Left,
            work_move: Move::Stay,
        };
        m.add_rule(0, false, Symbol::Blank, left).unwrap();
        m.add_rule(0, true, Symbol::Blank, Rule { input_move: Move::Stay, work_move: Move::Right, ..left })
            .unwrap();
        assert_eq!(simulate_tm(&m, 1, 0, 0), Ok(false));
        assert_eq!(simulate_tm(&m, 1, 1, 0), Ok(false));
    }
}
