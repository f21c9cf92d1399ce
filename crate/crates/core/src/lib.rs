//! Garden-hose games.
//!
//! Alice and Bob share `s` pipes. On inputs `x` and `y` each player locally
//! joins pipe ends in pairs, and Alice plugs a water tap into one pipe. The
//! water follows the unique maximal path from the tap; a game computes `f`
//! when the water leaves on Bob's side exactly when `f(x, y) = 1`.
//!
//! The crate provides the model ([`Wiring`], [`Strategy`], [`Flow`]),
//! constructions for named functions ([`families`]), a compiler from
//! reversible Turing machines ([`tm`]), exact search and CNF export
//! ([`search`]), randomized strategies ([`randomized`]) and lower bounds
//! ([`bounds`]).

pub mod bounds;
pub mod error;
pub mod families;
pub mod message;
pub mod protocol;
pub mod randomized;
pub mod search;
pub mod strategy;
pub mod table;
pub mod tm;
mod text;
pub mod wiring;

pub use bounds::BoundsReport;
pub use error::{Error, ParseError, Result};
pub use families::FamilySpec;
pub use protocol::ProtocolTree;
pub use randomized::{ErrorProfile, RandomizedStrategy};
pub use search::{brute_force_gh, CNFInstance, SearchConfig, SearchOutcome, SearchReport};
pub use strategy::{evaluate_wirings, Endpoint, EvalResult, Flow, FlowStep, Strategy, Verdict};
pub use table::TruthTable;
pub use tm::TuringMachine;
pub use wiring::{validate_wiring, Side, Wiring, TAP};
