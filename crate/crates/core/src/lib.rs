//! Bifix-free regular languages: automata, closure properties, transition
//! semigroups, atoms and the witness families that reach the known bounds.

pub mod atoms;
pub mod automata;
pub mod error;
pub mod experiments;
pub mod format;
pub mod freeness;
pub mod ops;
pub mod report;
pub mod semigroup;
pub mod witnesses;

pub use automata::{minimize, state_complexity, Dfa, Limits, Nfa, State};
pub use error::{Error, Result};
pub use format::{export_dot, parse_dfa, serialize_dfa};
