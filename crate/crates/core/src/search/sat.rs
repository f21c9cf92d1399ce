use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::strategy::Strategy;
use crate::table::TruthTable;
use crate::text::{parse_header, Lines, Token};
use crate::wiring::{Side, Wiring, TAP};

/// What a CNF variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarMeaning {
    /// Alice joins endpoints `u < v` on input `x`.
    Alice { x: usize, u: usize, v: usize },
    /// Bob joins endpoints `u < v` on input `y`.
    Bob { y: usize, u: usize, v: usize },
    /// On `(x, y)` the water is at Alice's endpoint `e` after `t` round trips.
    AliceAt { x: usize, y: usize, t: usize, e: usize },
    /// On `(x, y)` the water is at Bob's endpoint `p` in round trip `t`.
    BobAt { x: usize, y: usize, t: usize, p: usize },
}

impl fmt::Display for VarMeaning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarMeaning::Alice { x, u, v } => write!(f, "alice {x} {u} {v}"),
            VarMeaning::Bob { y, u, v } => write!(f, "bob {y} {u} {v}"),
            VarMeaning::AliceAt { x, y, t, e } => write!(f, "alice-at {x} {y} {t} {e}"),
            VarMeaning::BobAt { x, y, t, p } => write!(f, "bob-at {x} {y} {t} {p}"),
        }
    }
}

/// Meanings of variables `1..=len`, with the game dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    pub n: usize,
    pub pipes: usize,
    /// `meanings[i]` describes variable `i + 1`.
    pub meanings: Vec<VarMeaning>,
}

impl VarMap {
    pub fn len(&self) -> usize {
        self.meanings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meanings.is_empty()
    }

    pub fn meaning(&self, var: usize) -> Option<VarMeaning> {
        var.checked_sub(1).and_then(|i| self.meanings.get(i)).copied()
    }

    /// Sidecar text: `varmap 1 <n> <s>`, then `<varid> <kind> <indices>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("varmap 1 {} {}\n", self.n, self.pipes);
        for (i, m) in self.meanings.iter().enumerate() {
            out.push_str(&format!("{} {m}\n", i + 1));
        }
        out
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(input);
        let header = parse_header(&mut lines, "varmap", &["n", "s"])?;
        let (n, pipes) = (header[0] as usize, header[1] as usize);
        crate::strategy::check_n(n)?;
        let mut meanings = Vec::new();
        while let Some(line) = lines.peek() {
            lines.next_line("variable")?;
            if line.is_blank() {
                continue;
            }
            let tokens = line.tokens();
            let id: usize = tokens[0].parse("variable id")?;
            if id != meanings.len() + 1 {
                return Err(tokens[0].error(format!("expected variable {}", meanings.len() + 1)));
            }
            meanings.push(parse_meaning(&tokens[1..], line.number, line.text.len() + 1, n, pipes)?);
        }
        Ok(VarMap { n, pipes, meanings })
    }
}

fn parse_meaning(
    tokens: &[Token<'_>],
    line: usize,
    end: usize,
    n: usize,
    pipes: usize,
) -> Result<VarMeaning, ParseError> {
    let kind = tokens
        .first()
        .ok_or_else(|| ParseError::new(line, end, "missing variable kind"))?;
    let arity = match kind.text {
        "alice" | "bob" => 3,
        "alice-at" | "bob-at" => 4,
        _ => return Err(kind.error("kind must be alice, bob, alice-at or bob-at")),
    };
    if tokens.len() != arity + 1 {
        let at = tokens.get(arity + 1).map_or(end, |t| t.column);
        return Err(ParseError::new(line, at, format!("`{}` takes {arity} indices", kind.text)));
    }
    let mut idx = Vec::with_capacity(arity);
    for tok in &tokens[1..] {
        idx.push(tok.parse::<usize>("index")?);
    }
    let size = 1usize << n;
    let input_ok = |i: usize| idx[i] < size;
    let ok = match kind.text {
        "alice" => input_ok(0) && idx[1] < idx[2] && idx[2] <= pipes,
        "bob" => input_ok(0) && 1 <= idx[1] && idx[1] < idx[2] && idx[2] <= pipes,
        "alice-at" => input_ok(0) && input_ok(1) && idx[3] <= pipes,
        _ => input_ok(0) && input_ok(1) && 1 <= idx[3] && idx[3] <= pipes,
    };
    if !ok {
        return Err(kind.error("indices out of range for the header's n and s"));
    }
    Ok(match kind.text {
        "alice" => VarMeaning::Alice { x: idx[0], u: idx[1], v: idx[2] },
        "bob" => VarMeaning::Bob { y: idx[0], u: idx[1], v: idx[2] },
        "alice-at" => VarMeaning::AliceAt { x: idx[0], y: idx[1], t: idx[2], e: idx[3] },
        _ => VarMeaning::BobAt { x: idx[0], y: idx[1], t: idx[2], p: idx[3] },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CNFInstance {
    pub varmap: VarMap,
    /// Nonzero literals; `v` and `-v` for variable `v`.
    pub clauses: Vec<Vec<i32>>,
}

impl CNFInstance {
    pub fn num_vars(&self) -> usize {
        self.varmap.len()
    }

    /// DIMACS text with one `c var <id> <meaning>` comment per variable.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("c garden-hose n {} s {}\n", self.varmap.n, self.varmap.pipes);
        for (i, m) in self.varmap.meanings.iter().enumerate() {
            out.push_str(&format!("c var {} {m}\n", i + 1));
        }
        out.push_str(&format!("p cnf {} {}\n", self.num_vars(), self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// Reads DIMACS written by [`CNFInstance::to_dimacs`]; the variable
    /// meanings come from the comments.
    pub fn parse_dimacs(input: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(input);
        let mut dims = None;
        let mut meanings = Vec::new();
        let mut header = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        while let Some(line) = lines.peek() {
            lines.next_line("clause")?;
            let tokens = line.tokens();
            match tokens.first().map(|t| t.text) {
                None => continue,
                Some("c") => match tokens.get(1).map(|t| t.text) {
                    Some("garden-hose") => {
                        let [_, _, kn, n, ks, s] = tokens.as_slice() else {
                            return Err(line.error(1, "expected `c garden-hose n <n> s <s>`"));
                        };
                        kn.expect("n")?;
                        ks.expect("s")?;
                        let n: usize = n.parse("n")?;
                        crate::strategy::check_n(n)?;
                        dims = Some((n, s.parse::<usize>("s")?));
                    }
                    Some("var") => {
                        let (n, s) = dims.ok_or_else(|| line.error(1, "`c var` before `c garden-hose`"))?;
                        let id: usize = tokens
                            .get(2)
                            .ok_or_else(|| line.error(line.text.len() + 1, "missing variable id"))?
                            .parse("variable id")?;
                        if id != meanings.len() + 1 {
                            return Err(tokens[2].error(format!("expected variable {}", meanings.len() + 1)));
                        }
                        meanings.push(parse_meaning(&tokens[3..], line.number, line.text.len() + 1, n, s)?);
                    }
                    _ => {}
                },
                Some("p") => {
                    let [_, cnf, vars, count] = tokens.as_slice() else {
                        return Err(line.error(1, "expected `p cnf <vars> <clauses>`"));
                    };
                    cnf.expect("cnf")?;
                    header = Some((vars.parse::<usize>("variable count")?, count.parse::<usize>("clause count")?, *vars));
                }
                Some(_) => {
                    let (vars, _, _) = header.ok_or_else(|| line.error(1, "clause before `p cnf` header"))?;
                    for tok in &tokens {
                        let lit: i32 = tok.parse("literal")?;
                        if lit == 0 {
                            clauses.push(std::mem::take(&mut current));
                        } else if lit.unsigned_abs() as usize > vars {
                            return Err(tok.error(format!("literal {lit} exceeds the {vars} declared variables")));
                        } else {
                            current.push(lit);
                        }
                    }
                }
            }
        }
        let (vars, count, vars_tok) = header.ok_or_else(|| ParseError::new(1, 1, "missing `p cnf` header"))?;
        if !current.is_empty() {
            return Err(ParseError::new(lines_end(input), 1, "last clause is not terminated by 0"));
        }
        if clauses.len() != count {
            return Err(ParseError::new(
                lines_end(input),
                1,
                format!("header declares {count} clauses, found {}", clauses.len()),
            ));
        }
        let (n, pipes) = dims.ok_or_else(|| ParseError::new(1, 1, "missing `c garden-hose` comment"))?;
        if meanings.len() != vars {
            return Err(vars_tok.error(format!("{vars} variables declared, {} described", meanings.len())));
        }
        Ok(CNFInstance {
            varmap: VarMap { n, pipes, meanings },
            clauses,
        })
    }

    /// Index of the first clause falsified by `assignment` (indexed by
    /// variable, entry 0 unused), or `None` if all are satisfied.
    pub fn first_violated(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|clause| {
            !clause
                .iter()
                .any(|&lit| assignment[lit.unsigned_abs() as usize] == (lit > 0))
        })
    }

    pub fn check_model(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars() + 1 && self.first_violated(assignment).is_none()
    }
}

fn lines_end(input: &str) -> usize {
    input.lines().count() + 1
}

/// Allocates variable ids in a fixed order.
struct Builder {
    ids: HashMap<VarMeaning, i32>,
    meanings: Vec<VarMeaning>,
    clauses: Vec<Vec<i32>>,
}

impl Builder {
    fn var(&mut self, m: VarMeaning) -> i32 {
        if let Some(&id) = self.ids.get(&m) {
            return id;
        }
        self.meanings.push(m);
        let id = self.meanings.len() as i32;
        self.ids.insert(m, id);
        id
    }
}

/// Endpoints of one side.
fn endpoints(side: Side, pipes: usize) -> std::ops::RangeInclusive<usize> {
    match side {
        Side::Alice => 0..=pipes,
        Side::Bob => 1..=pipes,
    }
}

fn pair_var(side: Side, input: usize, a: usize, b: usize) -> VarMeaning {
    let (u, v) = (a.min(b), a.max(b));
    match side {
        Side::Alice => VarMeaning::Alice { x: input, u, v },
        Side::Bob => VarMeaning::Bob { y: input, u, v },
    }
}

/// Last round trip index with flow variables.
fn horizon(pipes: usize) -> usize {
    pipes + 1
}

/// CNF satisfiable iff some strategy on `pipes` pipes agrees with every
/// defined cell of `table`.
///
/// Flow variables only ever need to be true along the actual path: they are
/// forced forward from the tap, and a cell demanding exit on Bob's side
/// forbids the water resting at an unwired Alice endpoint (and vice versa).
/// The water alternates sides and never reuses a pipe, so it reaches at most
/// `pipes / 2 + 1` Alice endpoints and the horizon `pipes + 1` suffices.
pub fn encode_sat(table: &TruthTable, pipes: usize) -> CNFInstance {
    let size = table.size();
    let mut b = Builder {
        ids: HashMap::new(),
        meanings: Vec::new(),
        clauses: Vec::new(),
    };
    for side in [Side::Alice, Side::Bob] {
        for input in 0..size {
            let ends: Vec<usize> = endpoints(side, pipes).collect();
            for (i, &u) in ends.iter().enumerate() {
                for &v in &ends[i + 1..] {
                    b.var(pair_var(side, input, u, v));
                }
            }
        }
    }
    for side in [Side::Alice, Side::Bob] {
        for input in 0..size {
            for u in endpoints(side, pipes) {
                let others: Vec<i32> = endpoints(side, pipes)
                    .filter(|&v| v != u)
                    .map(|v| b.var(pair_var(side, input, u, v)))
                    .collect();
                for i in 0..others.len() {
                    for j in i + 1..others.len() {
                        // each unordered pair of pairs is emitted from its shared endpoint
                        b.clauses.push(vec![-others[i], -others[j]]);
                    }
                }
            }
        }
    }
    for (x, y, want) in table.defined_cells() {
        let at_alice = |b: &mut Builder, t, e| b.var(VarMeaning::AliceAt { x, y, t, e });
        let at_bob = |b: &mut Builder, t, p| b.var(VarMeaning::BobAt { x, y, t, p });
        let start = at_alice(&mut b, 0, TAP);
        b.clauses.push(vec![start]);
        for t in 0..=horizon(pipes) {
            for e in endpoints(Side::Alice, pipes) {
                let here = at_alice(&mut b, t, e);
                let mut wired = Vec::new();
                for p in endpoints(Side::Alice, pipes).filter(|&p| p != e && p != TAP) {
                    let pair = b.var(pair_var(Side::Alice, x, e, p));
                    let there = at_bob(&mut b, t, p);
                    b.clauses.push(vec![-here, -pair, there]);
                    wired.push(pair);
                }
                if e != TAP {
                    // the tap's partner counts as wired; the water never arrives there
                    let pair = b.var(pair_var(Side::Alice, x, TAP, e));
                    wired.push(pair);
                }
                if want {
                    let mut clause = vec![-here];
                    clause.extend(&wired);
                    b.clauses.push(clause);
                }
            }
            for p in endpoints(Side::Bob, pipes) {
                let here = at_bob(&mut b, t, p);
                let mut wired = Vec::new();
                for q in endpoints(Side::Bob, pipes).filter(|&q| q != p) {
                    let pair = b.var(pair_var(Side::Bob, y, p, q));
                    if t < horizon(pipes) {
                        let there = at_alice(&mut b, t + 1, q);
                        b.clauses.push(vec![-here, -pair, there]);
                    }
                    wired.push(pair);
                }
                if !want {
                    let mut clause = vec![-here];
                    clause.extend(&wired);
                    b.clauses.push(clause);
                }
            }
        }
    }
    CNFInstance {
        varmap: VarMap {
            n: table.n(),
            pipes,
            meanings: b.meanings,
        },
        clauses: b.clauses,
    }
}

/// Reads a solver model: whitespace-separated literals, optionally on
/// `v`-prefixed lines, with `c` and `s` lines skipped and `0` ignored.
pub fn parse_model(input: &str) -> Result<Vec<i32>, ParseError> {
    let mut lits = Vec::new();
    let mut lines = Lines::new(input);
    while let Some(line) = lines.peek() {
        lines.next_line("literal")?;
        let tokens = line.tokens();
        let rest = match tokens.first().map(|t| t.text) {
            None | Some("c") => continue,
            Some("s") => {
                if tokens.get(1).is_some_and(|t| t.text.starts_with("UNSAT")) {
                    return Err(tokens[1].error("the solver reported the instance unsatisfiable"));
                }
                continue;
            }
            Some("v") => &tokens[1..],
            Some(_) => &tokens[..],
        };
        for tok in rest {
            let lit: i32 = tok.parse("literal")?;
            if lit != 0 {
                lits.push(lit);
            }
        }
    }
    Ok(lits)
}

/// Builds the strategy named by the true wiring variables of `model`.
/// Variables the model omits count as false.
pub fn decode_sat(model: &[i32], varmap: &VarMap) -> Result<Strategy> {
    let size = 1usize << varmap.n;
    let mut alice = vec![Wiring::empty(Side::Alice, varmap.pipes); size];
    let mut bob = vec![Wiring::empty(Side::Bob, varmap.pipes); size];
    for &lit in model.iter().filter(|&&l| l > 0) {
        let meaning = varmap.meaning(lit as usize).ok_or_else(|| {
            Error::InvalidArgument(format!("model variable {lit} is not in the variable map"))
        })?;
        let (wiring, input, u, v) = match meaning {
            VarMeaning::Alice { x, u, v } => (&mut alice[x], x, u, v),
            VarMeaning::Bob { y, u, v } => (&mut bob[y], y, u, v),
            _ => continue,
        };
        wiring.connect(u, v).map_err(|e| {
            Error::ModelViolatesMatching(format!("{} wiring for input {input}: {e}", wiring.side()))
        })?;
    }
    Strategy::new(varmap.n, varmap.pipes, alice, bob)
}

/// The assignment (indexed by variable, entry 0 unused) that sets wiring
/// variables from `strategy` and flow variables along the actual paths.
pub fn witness_assignment(cnf: &CNFInstance, strategy: &Strategy) -> Vec<bool> {
    let mut assignment = vec![false; cnf.num_vars() + 1];
    let index: HashMap<VarMeaning, usize> = cnf
        .varmap
        .meanings
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, i + 1))
        .collect();
    let mut set = |m: VarMeaning| {
        if let Some(&i) = index.get(&m) {
            assignment[i] = true;
        }
    };
    let size = 1usize << cnf.varmap.n;
    for input in 0..size {
        for (u, v) in strategy.alice(input).pairs() {
            set(VarMeaning::Alice { x: input, u, v });
        }
        for (u, v) in strategy.bob(input).pairs() {
            set(VarMeaning::Bob { y: input, u, v });
        }
    }
    for x in 0..size {
        for y in 0..size {
            set(VarMeaning::AliceAt { x, y, t: 0, e: TAP });
            // path: A0, then per hop the departure and arrival endpoints;
            // arrivals sit at even positions and a round trip spans four
            let path = strategy.evaluate(x, y).path;
            for (k, e) in path.iter().enumerate().skip(2).step_by(2) {
                let t = k / 4;
                match e.side {
                    Side::Alice => set(VarMeaning::AliceAt { x, y, t, e: e.id }),
                    Side::Bob => set(VarMeaning::BobAt { x, y, t, p: e.id }),
                }
            }
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_xor;

    #[test]
    fn xor_witness_satisfies_its_cnf() {
        let cnf = encode_sat(&TruthTable::xor(1), 3);
        let assignment = witness_assignment(&cnf, &build_xor(1).unwrap());
        assert_eq!(cnf.first_violated(&assignment), None);
        let model: Vec<i32> = (1..assignment.len())
            .map(|v| if assignment[v] { v as i32 } else { -(v as i32) })
            .collect();
        let decoded = decode_sat(&model, &cnf.varmap).unwrap();
        assert_eq!(decoded.table(), TruthTable::xor(1));
    }

    #[test]
    fn wrong_strategy_violates_cnf() {
        let cnf = encode_sat(&TruthTable::xor(1).complement(), 3);
        let assignment = witness_assignment(&cnf, &build_xor(1).unwrap());
        assert!(cnf.first_violated(&assignment).is_some());
    }

    #[test]
    fn undefined_table_accepts_empty_wiring() {
        let table = TruthTable::from_fn(1, |_, _| None);
        let cnf = encode_sat(&table, 2);
        let empty = vec![false; cnf.num_vars() + 1];
        assert!(cnf.check_model(&empty));
    }

    #[test]
    fn dimacs_and_varmap_round_trip() {
        let cnf = encode_sat(&TruthTable::xor(1), 2);
        let text = cnf.to_dimacs();
        assert!(text.contains("c var 1 alice 0 0 1\n"));
        assert_eq!(CNFInstance::parse_dimacs(&text).unwrap(), cnf);
        assert_eq!(VarMap::parse(&cnf.varmap.to_text()).unwrap(), cnf.varmap);
    }

    #[test]
    fn model_parsing() {
        let lits = parse_model("c comment\ns SATISFIABLE\nv 1 -2 3\nv -4 0\n").unwrap();
        assert_eq!(lits, vec![1, -2, 3, -4]);
        assert_eq!(parse_model("1 2 -3 0").unwrap(), vec![1, 2, -3]);
        assert!(parse_model("s UNSATISFIABLE\n").is_err());
        let err = parse_model("v 1 x 3\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
    }

    #[test]
    fn double_pairing_is_rejected() {
        let cnf = encode_sat(&TruthTable::xor(1), 3);
        let id = |m: VarMeaning| cnf.varmap.meanings.iter().position(|&k| k == m).unwrap() as i32 + 1;
        let model = [id(VarMeaning::Bob { y: 0, u: 1, v: 2 }), id(VarMeaning::Bob { y: 0, u: 1, v: 3 })];
        assert!(matches!(
            decode_sat(&model, &cnf.varmap),
            Err(Error::ModelViolatesMatching(_))
        ));
    }
}
