use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::machine::{input_bit, Configuration, Step, Symbol, TuringMachine};
use crate::error::{Error, Result};
use crate::strategy::{EvalResult, Strategy};
use crate::wiring::{Side, Wiring, TAP};

/// Default cap on the number of pipes a layout may use.
pub const MAX_LAYOUT_PIPES: u128 = 1 << 22;

/// A configuration with the input head at the boundary: position `n` for
/// [`Side::Alice`] (the set `C_A`), `n + 1` for [`Side::Bob`] (`C_B`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundaryConfiguration {
    pub side: Side,
    pub state: usize,
    pub head: usize,
    pub tape: Vec<Symbol>,
}

impl BoundaryConfiguration {
    /// Canonical label, e.g. `A:q3:h0:_1`.
    pub fn label(&self) -> String {
        let side = match self.side {
            Side::Alice => 'A',
            Side::Bob => 'B',
        };
        let tape: String = self.tape.iter().map(|s| s.as_char()).collect();
        format!("{side}:q{}:h{}:{tape}", self.state, self.head)
    }

    /// The total configuration with the input head placed at the boundary.
    pub fn configuration(&self, n: usize) -> Configuration {
        Configuration {
            state: self.state,
            input_pos: match self.side {
                Side::Alice => n,
                Side::Bob => n + 1,
            },
            head: self.head,
            tape: self.tape.clone(),
        }
    }

    fn from_configuration(config: &Configuration, n: usize) -> Self {
        BoundaryConfiguration {
            side: if config.input_pos <= n { Side::Alice } else { Side::Bob },
            state: config.state,
            head: config.head,
            tape: config.tape.clone(),
        }
    }
}

/// What a pipe stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipeLabel {
    Boundary(BoundaryConfiguration),
    Accept(usize),
    Reject(usize),
}

impl PipeLabel {
    pub fn text(&self) -> String {
        match self {
            PipeLabel::Boundary(c) => c.label(),
            PipeLabel::Accept(k) => format!("ACCEPT:{k}"),
            PipeLabel::Reject(k) => format!("REJECT:{k}"),
        }
    }
}

/// Pipe numbering for a machine and input length. Pipes `1..` hold, in
/// order: `C_A`, `C_B`, `|C_A|` ACCEPT pipes, `|C_B|` REJECT pipes. Within
/// `C_A` and `C_B` configurations are ordered by state, then work head, then
/// tape read as a base-3 number (most significant cell first, `_ < 0 < 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledLayout {
    n: usize,
    states: usize,
    work_len: usize,
    /// `|C_A| = |C_B| = states * w * 3^w`.
    side_len: usize,
}

impl CompiledLayout {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `|C_A|`, which always equals `|C_B|`.
    pub fn boundary_len(&self) -> usize {
        self.side_len
    }

    /// `2(|C_A| + |C_B|)`.
    pub fn pipes(&self) -> usize {
        4 * self.side_len
    }

    fn side_offset(&self, side: Side) -> usize {
        match side {
            Side::Alice => 0,
            Side::Bob => self.side_len,
        }
    }

    pub fn boundary_pipe(&self, config: &BoundaryConfiguration) -> usize {
        let tape = config
            .tape
            .iter()
            .fold(0, |acc, s| acc * 3 + s.index());
        let index = (config.state * self.work_len + config.head) * 3usize.pow(self.work_len as u32) + tape;
        self.side_offset(config.side) + index + 1
    }

    pub fn accept_pipe(&self, k: usize) -> usize {
        2 * self.side_len + k + 1
    }

    pub fn reject_pipe(&self, k: usize) -> usize {
        3 * self.side_len + k + 1
    }

    /// Boundary configurations of one side in pipe order.
    pub fn boundary(&self, side: Side) -> impl Iterator<Item = BoundaryConfiguration> + '_ {
        (0..self.side_len).map(move |i| self.decode(side, i))
    }

    fn decode(&self, side: Side, index: usize) -> BoundaryConfiguration {
        let tapes = 3usize.pow(self.work_len as u32);
        let mut code = index % tapes;
        let mut tape = vec![Symbol::Blank; self.work_len];
        for cell in tape.iter_mut().rev() {
            *cell = Symbol::ALL[code % 3];
            code /= 3;
        }
        let rest = index / tapes;
        BoundaryConfiguration {
            side,
            state: rest / self.work_len,
            head: rest % self.work_len,
            tape,
        }
    }

    pub fn label(&self, pipe: usize) -> Option<PipeLabel> {
        if pipe == 0 || pipe > self.pipes() {
            return None;
        }
        let i = pipe - 1;
        let m = self.side_len;
        Some(match i / m {
            0 => PipeLabel::Boundary(self.decode(Side::Alice, i)),
            1 => PipeLabel::Boundary(self.decode(Side::Bob, i - m)),
            2 => PipeLabel::Accept(i - 2 * m),
            _ => PipeLabel::Reject(i - 3 * m),
        })
    }

    /// Labels of the pipes the water passes through, in order.
    pub fn water_labels(&self, result: &EvalResult) -> Vec<PipeLabel> {
        result
            .pipes()
            .into_iter()
            .map(|p| self.label(p).expect("pipe within layout"))
            .collect()
    }
}

pub fn enumerate_boundary(machine: &TuringMachine, n: usize) -> Result<CompiledLayout> {
    enumerate_boundary_capped(machine, n, MAX_LAYOUT_PIPES)
}

/// [`enumerate_boundary`] with an explicit pipe cap.
pub fn enumerate_boundary_capped(machine: &TuringMachine, n: usize, cap: u128) -> Result<CompiledLayout> {
    if n == 0 {
        return Err(Error::InvalidArgument("input length n must be positive".into()));
    }
    let tapes = 3u128.checked_pow(machine.work_len() as u32).unwrap_or(u128::MAX);
    let side_len = (machine.states() as u128)
        .saturating_mul(machine.work_len() as u128)
        .saturating_mul(tapes);
    let needed = side_len.saturating_mul(4);
    if needed > cap {
        return Err(Error::LayoutTooLarge { needed, cap });
    }
    Ok(CompiledLayout {
        n,
        states: machine.states(),
        work_len: machine.work_len(),
        side_len: side_len as usize,
    })
}

/// Where a run confined to one half of the input tape ends.
#[derive(Debug, Clone, PartialEq, Eq)]
enum HalfRun {
    Accept,
    Reject,
    Cross(Configuration),
    Cycle,
}

struct Half<'a> {
    machine: &'a TuringMachine,
    n: usize,
    side: Side,
    /// `x` for Alice, `y` for Bob.
    input: usize,
    /// Configurations with the input head on this half.
    cap: u64,
}

impl Half<'_> {
    fn bit(&self, pos: usize) -> bool {
        match self.side {
            Side::Alice => input_bit(self.n, self.input, 0, pos),
            Side::Bob => input_bit(self.n, 0, self.input, pos),
        }
    }

    fn crosses(&self, pos: usize) -> bool {
        match self.side {
            Side::Alice => pos == self.n + 1,
            Side::Bob => pos == self.n,
        }
    }

    /// Runs from `start` until halting or leaving this half; `visited`
    /// collects every configuration passed through, the start included.
    fn run(&self, start: Configuration, mut visited: Option<&mut HashSet<Configuration>>) -> (HalfRun, u64) {
        let mut config = start;
        let mut steps = 0u64;
        loop {
            if let Some(v) = visited.as_deref_mut() {
                v.insert(config.clone());
            }
            match self.machine.step(&config, self.bit(config.input_pos), 2 * self.n) {
                Step::Accept => return (HalfRun::Accept, steps),
                Step::Reject => return (HalfRun::Reject, steps),
                Step::Moved(next) => {
                    steps += 1;
                    if self.crosses(next.input_pos) {
                        return (HalfRun::Cross(next), steps);
                    }
                    if steps > self.cap {
                        return (HalfRun::Cycle, steps);
                    }
                    config = next;
                }
            }
        }
    }
}

/// One local run: the endpoint it starts from and its start configuration.
struct Source {
    endpoint: usize,
    start: Configuration,
}

fn side_wiring(
    machine: &TuringMachine,
    layout: &CompiledLayout,
    side: Side,
    input: usize,
) -> Result<Wiring> {
    let n = layout.n;
    let half = Half {
        machine,
        n,
        side,
        input,
        cap: machine.configuration_count(n),
    };
    let mut sources = Vec::with_capacity(layout.side_len + 1);
    if side == Side::Alice {
        sources.push(Source {
            endpoint: TAP,
            start: machine.start_configuration(),
        });
    }
    for c in layout.boundary(side) {
        sources.push(Source {
            endpoint: layout.boundary_pipe(&c),
            start: c.configuration(n),
        });
    }

    let mut wiring = Wiring::empty(side, layout.pipes());
    let mut connect = |a: usize, b: usize| {
        wiring
            .connect(a, b)
            .map_err(|e| Error::ReversibilityViolation(e.to_string()))
    };
    // crossing target pipe -> (source index, steps)
    let mut crossings: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    let mut halting_pipes = 0;
    for (i, src) in sources.iter().enumerate() {
        let (outcome, steps) = half.run(src.start.clone(), None);
        match (outcome, side) {
            (HalfRun::Cross(d), _) => {
                let target = layout.boundary_pipe(&BoundaryConfiguration::from_configuration(&d, n));
                crossings.entry(target).or_default().push((i, steps));
            }
            (HalfRun::Accept, Side::Alice) | (HalfRun::Reject, Side::Bob) => {
                if halting_pipes == layout.side_len {
                    return Err(Error::AcceptPoolExhausted {
                        pool: layout.side_len,
                        input,
                    });
                }
                let pipe = match side {
                    Side::Alice => layout.accept_pipe(halting_pipes),
                    Side::Bob => layout.reject_pipe(halting_pipes),
                };
                halting_pipes += 1;
                connect(src.endpoint, pipe)?;
            }
            (HalfRun::Accept | HalfRun::Reject, _) => {}
            (HalfRun::Cycle, _) if src.endpoint == TAP => {
                return Err(Error::NonterminatingRun { cap: half.cap });
            }
            // a cycling run never starts from a configuration the real run reaches
            (HalfRun::Cycle, _) => {}
        }
    }

    for (target, mut group) in crossings {
        // In a reversible machine runs merging at `target` form a chain:
        // every start lies on the longest run. The real run enters at most
        // one of them, and it is the tap whenever the tap is present, since
        // a halting run never returns to its start configuration.
        group.sort_by_key(|&(i, steps)| (std::cmp::Reverse(steps), i));
        if group.len() > 1 {
            let mut visited = HashSet::new();
            half.run(sources[group[0].0].start.clone(), Some(&mut visited));
            if let Some(&(bad, _)) = group[1..].iter().find(|(i, _)| !visited.contains(&sources[*i].start)) {
                let name = |i: usize| match sources[i].endpoint {
                    TAP => "the start configuration".to_string(),
                    p => layout.label(p).expect("boundary pipe").text(),
                };
                return Err(Error::ReversibilityViolation(format!(
                    "runs from {} and {} on {} input {input} both reach {}",
                    name(group[0].0),
                    name(bad),
                    side.name(),
                    layout.label(target).expect("boundary pipe").text()
                )));
            }
        }
        let winner = group
            .iter()
            .find(|&&(i, _)| sources[i].endpoint == TAP)
            .unwrap_or(&group[0]);
        connect(sources[winner.0].endpoint, target)?;
    }
    Ok(wiring)
}

/// Compiles `machine` on inputs of length `n` into a strategy whose water
/// leaves on Bob's side exactly when the machine accepts.
pub fn compile(machine: &TuringMachine, n: usize) -> Result<Strategy> {
    let layout = enumerate_boundary(machine, n)?;
    compile_with_layout(machine, &layout)
}

pub fn compile_with_layout(machine: &TuringMachine, layout: &CompiledLayout) -> Result<Strategy> {
    crate::families::check_n(layout.n)?;
    let size = 1usize << layout.n;
    let build = |side: Side| -> Result<Vec<Wiring>> {
        // Collected in input order so the reported error does not depend on scheduling.
        let results: Vec<Result<Wiring>> = (0..size)
            .into_par_iter()
            .map(|input| side_wiring(machine, layout, side, input))
            .collect();
        results.into_iter().collect()
    };
    let alice = build(Side::Alice)?;
    let bob = build(Side::Bob)?;
    Strategy::new(layout.n, layout.pipes(), alice, bob)
}

/// Boundary configurations of the full run, in the order the real machine
/// crosses them.
pub fn boundary_trace(machine: &TuringMachine, n: usize, x: usize, y: usize) -> Result<Vec<BoundaryConfiguration>> {
    let trace = super::machine::simulate_tm_trace(machine, n, x, y)?;
    Ok(trace
        .crossings
        .iter()
        .map(|c| BoundaryConfiguration::from_configuration(c, n))
        .collect())
}
