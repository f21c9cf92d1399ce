//! Exact garden-hose complexity of small functions, and CNF export for
//! external SAT solvers.
//!
//! [`brute_force_gh`] tries pipe counts in increasing order. For each count
//! it enumerates Alice's wirings input by input while keeping, for every
//! input of Bob, the set of his wirings still consistent with the table.
//! Since relabeling pipes preserves every game, Alice's wiring on her first
//! input is restricted to one representative per relabeling class.

mod brute;
mod sat;

pub use brute::{all_wirings, brute_force_gh, matching_count, SearchConfig, SearchOutcome, SearchReport};
pub use sat::{
    decode_sat, encode_sat, parse_model, witness_assignment, CNFInstance, VarMap, VarMeaning,
};
