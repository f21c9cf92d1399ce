use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::bounds::injectivity_lower_bound;
use crate::error::{Error, Result};
use crate::strategy::{evaluate_wirings, Strategy};
use crate::table::TruthTable;
use crate::wiring::{Side, Wiring, TAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest input length searched.
    pub max_n: usize,
    /// Largest pipe count tried.
    pub s_max: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_n: 2, s_max: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The least pipe count with a strategy, and the first strategy found.
    Exact { s_min: usize, witness: Strategy },
    /// No strategy with at most `s_max` pipes; `s_min` lies in `lower..=upper`.
    Bracket { lower: usize, upper: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Alice wirings tried, counted as a sequential search would.
    pub nodes_explored: u64,
    /// First-input Alice wirings skipped as relabelings of canonical ones.
    pub symmetry_pruned: u64,
}

impl SearchReport {
    pub fn s_min(&self) -> Option<usize> {
        match self.outcome {
            SearchOutcome::Exact { s_min, .. } => Some(s_min),
            SearchOutcome::Bracket { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Strategy> {
        match &self.outcome {
            SearchOutcome::Exact { witness, .. } => Some(witness),
            SearchOutcome::Bracket { .. } => None,
        }
    }
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            SearchOutcome::Exact { s_min, .. } => {
                writeln!(f, "status: exact")?;
                writeln!(f, "s_min: {s_min}")?;
            }
            SearchOutcome::Bracket { lower, upper } => {
                writeln!(f, "status: bracket")?;
                writeln!(f, "s_min_lower: {lower}")?;
                writeln!(f, "s_min_upper: {upper}")?;
            }
        }
        writeln!(f, "nodes_explored: {}", self.nodes_explored)?;
        writeln!(f, "symmetry_pruned: {}", self.symmetry_pruned)
    }
}

/// Number of partial matchings on `k` points: `T(k) = T(k-1) + (k-1) T(k-2)`.
pub fn matching_count(k: usize) -> u128 {
    let (mut prev, mut cur) = (1u128, 1u128); // T(-1) unused, T(0) = 1
    for m in 1..=k {
        let next = cur + (m as u128 - 1) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All wirings of `side` on `pipes` pipes. The order is fixed: the lowest
/// endpoint is first left open, then paired with each higher endpoint in
/// turn. Index 0 is the empty wiring.
pub fn all_wirings(side: Side, pipes: usize) -> Vec<Wiring> {
    let endpoints: Vec<usize> = match side {
        Side::Alice => (0..=pipes).collect(),
        Side::Bob => (1..=pipes).collect(),
    };
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    let mut used = vec![false; pipes + 1];
    extend_matchings(&endpoints, &mut used, &mut pairs, &mut |pairs| {
        out.push(Wiring::new(side, pipes, pairs).expect("generated pairs form a matching"));
    });
    out
}

fn extend_matchings(
    endpoints: &[usize],
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    emit: &mut impl FnMut(&[(usize, usize)]),
) {
    let Some(pos) = endpoints.iter().position(|&e| !used[e]) else {
        emit(pairs);
        return;
    };
    let u = endpoints[pos];
    used[u] = true;
    extend_matchings(endpoints, used, pairs, emit);
    for &v in &endpoints[pos + 1..] {
        if !used[v] {
            used[v] = true;
            pairs.push((u, v));
            extend_matchings(endpoints, used, pairs, emit);
            pairs.pop();
            used[v] = false;
        }
    }
    used[u] = false;
}

/// One Alice wiring per relabeling class: the tap on pipe 1 or open,
/// followed by `k` pairs on the next consecutive pipes.
fn canonical_alice(pipes: usize) -> Vec<Wiring> {
    let mut out = Vec::new();
    for tap_wired in [false, true] {
        if tap_wired && pipes == 0 {
            continue;
        }
        let first = if tap_wired { 2 } else { 1 };
        let free = pipes + 1 - first;
        for k in 0..=free / 2 {
            let mut pairs: Vec<(usize, usize)> = (0..k).map(|i| (first + 2 * i, first + 2 * i + 1)).collect();
            if tap_wired {
                pairs.push((TAP, 1));
            }
            out.push(Wiring::new(Side::Alice, pipes, &pairs).expect("canonical pairs form a matching"));
        }
    }
    out
}

/// Exhaustive search at one pipe count.
struct Level<'a> {
    table: &'a TruthTable,
    alice: Vec<Wiring>,
    canonical: Vec<usize>,
    bob: Vec<Wiring>,
    /// `fits[a][v]`: Bob wirings for which Alice wiring `a` exits on side `v`.
    fits: Vec<[FixedBitSet; 2]>,
}

impl<'a> Level<'a> {
    fn new(table: &'a TruthTable, pipes: usize) -> Self {
        let alice = all_wirings(Side::Alice, pipes);
        let bob = all_wirings(Side::Bob, pipes);
        let canonical_set = canonical_alice(pipes);
        let canonical = alice
            .iter()
            .enumerate()
            .filter(|(_, w)| canonical_set.contains(w))
            .map(|(i, _)| i)
            .collect();
        let fits = alice
            .par_iter()
            .map(|a| {
                let mut sets = [FixedBitSet::with_capacity(bob.len()), FixedBitSet::with_capacity(bob.len())];
                for (j, b) in bob.iter().enumerate() {
                    sets[evaluate_wirings(a, b).exit.bit() as usize].insert(j);
                }
                sets
            })
            .collect();
        Level {
            table,
            alice,
            canonical,
            bob,
            fits,
        }
    }

    /// Restricts Bob's candidates by choosing Alice wiring `a` on input `x`;
    /// `None` if some input of Bob is left without candidates.
    fn restrict(&self, cands: &[FixedBitSet], x: usize, a: usize) -> Option<Vec<FixedBitSet>> {
        let mut next = cands.to_vec();
        for (y, set) in next.iter_mut().enumerate() {
            if let Some(v) = self.table.get(x, y) {
                set.intersect_with(&self.fits[a][v as usize]);
                if set.is_clear() {
                    return None;
                }
            }
        }
        Some(next)
    }

    fn choices(&self, x: usize) -> Box<dyn Iterator<Item = usize> + '_> {
        if x == 0 {
            Box::new(self.canonical.iter().copied())
        } else {
            Box::new(0..self.alice.len())
        }
    }

    /// Depth-first extension of `chosen` to all inputs.
    fn dfs(&self, cands: &[FixedBitSet], chosen: &mut Vec<usize>, nodes: &mut u64) -> Option<Vec<FixedBitSet>> {
        let x = chosen.len();
        if x == self.table.size() {
            return Some(cands.to_vec());
        }
        for a in self.choices(x) {
            *nodes += 1;
            let Some(next) = self.restrict(cands, x, a) else { continue };
            chosen.push(a);
            if let Some(found) = self.dfs(&next, chosen, nodes) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    /// Runs the subtree below a fixed prefix; returns the witness if any and
    /// the nodes explored, including the prefix itself.
    fn run_task(&self, prefix: &[usize]) -> (Option<Strategy>, u64) {
        let size = self.table.size();
        let mut nodes = 0u64;
        let mut cands = vec![self.full_set(); size];
        for (x, &a) in prefix.iter().enumerate() {
            nodes += 1;
            match self.restrict(&cands, x, a) {
                Some(next) => cands = next,
                None => return (None, nodes),
            }
        }
        let mut chosen = prefix.to_vec();
        let found = self.dfs(&cands, &mut chosen, &mut nodes);
        (found.map(|bob_sets| self.witness(&chosen, &bob_sets)), nodes)
    }

    fn full_set(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.bob.len());
        all.insert_range(..);
        all
    }

    fn witness(&self, chosen: &[usize], bob_sets: &[FixedBitSet]) -> Strategy {
        let pipes = self.bob[0].pipes();
        let alice = chosen.iter().map(|&a| self.alice[a].clone()).collect();
        let bob = bob_sets
            .iter()
            .map(|set| self.bob[set.ones().next().expect("nonempty candidate set")].clone())
            .collect();
        Strategy::new(self.table.n(), pipes, alice, bob).expect("dimensions match")
    }

    /// Top-level tasks: the first input's canonical wiring, and when there
    /// is a second input, each of its wirings.
    fn tasks(&self) -> Vec<Vec<usize>> {
        let mut tasks = Vec::new();
        for &a0 in &self.canonical {
            if self.table.size() == 1 {
                tasks.push(vec![a0]);
            } else {
                tasks.extend((0..self.alice.len()).map(|a1| vec![a0, a1]));
            }
        }
        tasks
    }
}

/// Searches pipe counts `1, ..., s_max` in order; games have at least one
/// pipe, so the constant-0 function gets `s_min = 1` with the tap left open.
/// Runs on the current rayon pool; the outcome and the counters do not
/// depend on its size.
pub fn brute_force_gh(table: &TruthTable, config: &SearchConfig) -> Result<SearchReport> {
    if table.n() > config.max_n {
        return Err(Error::CapExceeded(format!(
            "n={} is above the search limit max_n={}",
            table.n(),
            config.max_n
        )));
    }
    let mut nodes_explored = 0u64;
    let mut symmetry_pruned = 0u64;
    for pipes in 1..=config.s_max {
        let level = Level::new(table, pipes);
        symmetry_pruned += (level.alice.len() - level.canonical.len()) as u64;
        let tasks = level.tasks();
        // Chunks run in parallel; only tasks up to the first success count,
        // so the counters match a sequential run.
        let chunk = (rayon::current_num_threads() * 4).max(1);
        for batch in tasks.chunks(chunk) {
            let results: Vec<(Option<Strategy>, u64)> =
                batch.par_iter().map(|prefix| level.run_task(prefix)).collect();
            for (found, nodes) in results {
                nodes_explored += nodes;
                if let Some(witness) = found {
                    return Ok(SearchReport {
                        outcome: SearchOutcome::Exact { s_min: pipes, witness },
                        nodes_explored,
                        symmetry_pruned,
                    });
                }
            }
        }
    }
    let lower = config.s_max + 1;
    let lower = match injectivity_lower_bound(table) {
        Ok(b) => lower.max(b as usize),
        Err(_) => lower,
    };
    Ok(SearchReport {
        outcome: SearchOutcome::Bracket {
            lower,
            upper: table.size() + 1,
        },
        nodes_explored,
        symmetry_pruned,
    })
}
