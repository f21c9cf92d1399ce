//! Compilation of reversible, space-bounded Turing machines into
//! garden-hose strategies.
//!
//! The input tape holds `x` on positions `1..=n` and `y` on `n+1..=2n`.
//! Each boundary configuration (input head at `n` or `n + 1`) labels a
//! pipe. Alice simulates the machine on her half from every boundary
//! configuration on her side and from the start configuration, and joins
//! each source to the pipe of the configuration in which the head next
//! crosses over; Bob does the same on his half. Accepting runs are routed
//! to Bob's side, rejecting runs to Alice's.
//!
//! Boundary configurations are enumerated syntactically, reachable or not,
//! so the layout depends only on the machine and `n`. Two sources reaching
//! the same target are resolved only when one run passes through the
//! other's start; any other merge is a [`ReversibilityViolation`].
//!
//! [`ReversibilityViolation`]: crate::Error::ReversibilityViolation

mod compile;
pub mod library;
mod machine;

pub use compile::{
    boundary_trace, compile, compile_with_layout, enumerate_boundary, enumerate_boundary_capped,
    BoundaryConfiguration, CompiledLayout, PipeLabel, MAX_LAYOUT_PIPES,
};
pub use machine::{
    simulate_tm, simulate_tm_trace, Configuration, Move, Rule, RunTrace, Step, Symbol, TuringMachine,
};
