//! Reference implementations that share no code with the library beyond
//! its data types. Each is deliberately naive.
#![allow(dead_code)]

use gardenhose::tm::{Symbol, TuringMachine};
use gardenhose::{Side, Strategy, TruthTable, Wiring};

/// Partner arrays of every matching on `points`, by trying every
/// involution-shaped map; `None` marks an open point.
pub fn matchings(points: &[usize], size: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = Vec::new();
    let choices = points.len() + 1;
    let total = choices.pow(points.len() as u32);
    'map: for code in 0..total {
        let mut partner = vec![None; size];
        let mut c = code;
        for &p in points {
            let k = c % choices;
            c /= choices;
            partner[p] = if k == 0 { None } else { Some(points[k - 1]) };
        }
        for &p in points {
            match partner[p] {
                Some(q) if q == p || partner[q] != Some(p) => continue 'map,
                _ => {}
            }
        }
        out.push(partner);
    }
    out
}

/// Exit side of the water: walk partner arrays directly.
pub fn walk(alice: &[Option<usize>], bob: &[Option<usize>]) -> Side {
    let (mut side, mut at) = (Side::Alice, 0usize);
    for _ in 0..2 * alice.len() + 2 {
        let next = match side {
            Side::Alice => alice[at],
            Side::Bob => bob[at],
        };
        match next {
            None => return side,
            Some(p) => {
                at = p;
                side = match side {
                    Side::Alice => Side::Bob,
                    Side::Bob => Side::Alice,
                };
            }
        }
    }
    panic!("water did not exit");
}

pub fn walk_strategy(st: &Strategy, x: usize, y: usize) -> Side {
    walk(st.alice(x).partners(), st.bob(y).partners())
}

/// Whether some strategy on `pipes` pipes matches every defined cell.
/// Tries every assignment of wirings to Alice's inputs and, for each, checks
/// Bob's inputs independently.
pub fn naive_exists(table: &TruthTable, pipes: usize) -> bool {
    let size = table.size();
    let alice_points: Vec<usize> = (0..=pipes).collect();
    let bob_points: Vec<usize> = (1..=pipes).collect();
    let alice = matchings(&alice_points, pipes + 1);
    let bob = matchings(&bob_points, pipes + 1);
    let mut choice = vec![0usize; size];
    loop {
        let ok = (0..size).all(|y| {
            bob.iter().any(|b| {
                (0..size).all(|x| match table.get(x, y) {
                    None => true,
                    Some(v) => (walk(&alice[choice[x]], b) == Side::Bob) == v,
                })
            })
        });
        if ok {
            return true;
        }
        // odometer over Alice's choices
        let mut i = 0;
        loop {
            if i == size {
                return false;
            }
            choice[i] += 1;
            if choice[i] < alice.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Least pipe count in `1..=s_max` admitting a strategy.
pub fn naive_gh(table: &TruthTable, s_max: usize) -> Option<usize> {
    (1..=s_max).find(|&s| naive_exists(table, s))
}

/// Plain DPLL with unit propagation; returns a model indexed by variable.
pub fn dpll(num_vars: usize, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
    fn solve(clauses: &[Vec<i32>], assign: &mut Vec<Option<bool>>) -> bool {
        loop {
            let mut unit = None;
            for c in clauses {
                let mut open = None;
                let mut open_count = 0;
                let mut sat = false;
                for &l in c {
                    match assign[l.unsigned_abs() as usize] {
                        Some(v) if v == (l > 0) => {
                            sat = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            open_count += 1;
                            open = Some(l);
                        }
                    }
                }
                if sat {
                    continue;
                }
                match open_count {
                    0 => return false,
                    1 => {
                        unit = open;
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(l) => assign[l.unsigned_abs() as usize] = Some(l > 0),
                None => break,
            }
        }
        let Some(v) = (1..assign.len()).find(|&v| assign[v].is_none()) else {
            return true;
        };
        for value in [false, true] {
            let mut trial = assign.clone();
            trial[v] = Some(value);
            if solve(clauses, &mut trial) {
                *assign = trial;
                return true;
            }
        }
        false
    }
    let mut assign = vec![None; num_vars + 1];
    solve(clauses, &mut assign).then(|| assign.iter().map(|v| v.unwrap_or(false)).collect())
}

/// Checks reversibility by brute force: over every input pair, every
/// non-halting total configuration has at most one predecessor.
pub fn is_reversible(m: &TuringMachine, n: usize) -> bool {
    use std::collections::HashMap;
    let w = m.work_len();
    let tapes = 3usize.pow(w as u32);
    for x in 0..1usize << n {
        for y in 0..1usize << n {
            let bit = |pos: usize| {
                if pos <= n {
                    (x >> (n - pos)) & 1 == 1
                } else {
                    (y >> (2 * n - pos)) & 1 == 1
                }
            };
            let mut seen: HashMap<(usize, usize, usize, Vec<Symbol>), usize> = HashMap::new();
            for q in (0..m.states()).filter(|&q| !m.is_halting(q)) {
                for pos in 1..=2 * n {
                    for head in 0..w {
                        for code in 0..tapes {
                            let mut tape = Vec::with_capacity(w);
                            let mut c = code;
                            for _ in 0..w {
                                tape.push(Symbol::ALL[c % 3]);
                                c /= 3;
                            }
                            let Some(r) = m.rule(q, bit(pos), tape[head]) else { continue };
                            if m.is_halting(r.next) {
                                continue;
                            }
                            let npos = pos as isize + r.input_move.delta();
                            let nhead = head as isize + r.work_move.delta();
                            if npos < 1 || npos > 2 * n as isize || nhead < 0 || nhead >= w as isize {
                                continue;
                            }
                            tape[head] = r.write;
                            let key = (r.next, npos as usize, nhead as usize, tape);
                            *seen.entry(key).or_default() += 1;
                        }
                    }
                }
            }
            if seen.values().any(|&c| c > 1) {
                return false;
            }
        }
    }
    true
}

/// Random wiring on `pipes` pipes from a shuffled endpoint list.
pub fn random_wiring(rng: &mut impl rand::Rng, side: Side, pipes: usize) -> Wiring {
    use rand::seq::SliceRandom;
    let mut points: Vec<usize> = match side {
        Side::Alice => (0..=pipes).collect(),
        Side::Bob => (1..=pipes).collect(),
    };
    points.shuffle(rng);
    let pairs_wanted = rng.gen_range(0..=points.len() / 2);
    let pairs: Vec<(usize, usize)> = points.chunks(2).take(pairs_wanted).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect();
    Wiring::new(side, pipes, &pairs).unwrap()
}

pub fn random_strategy(rng: &mut impl rand::Rng, n: usize, pipes: usize) -> Strategy {
    let size = 1 << n;
    let alice = (0..size).map(|_| random_wiring(rng, Side::Alice, pipes)).collect();
    let bob = (0..size).map(|_| random_wiring(rng, Side::Bob, pipes)).collect();
    Strategy::new(n, pipes, alice, bob).unwrap()
}
