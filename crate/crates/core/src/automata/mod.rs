//! Multi-track base-`k` automata and automata with output.

mod dfa;
mod dfao;
mod format;
mod linear;
mod minimize;

use thiserror::Error;

pub use dfa::{BoolOp, MultiTrackDfa};
pub use dfao::Dfao;
pub use format::{dfa_from_text, dfa_to_dot, dfa_to_text, dfao_from_text, dfao_to_dot, dfao_to_text};
pub use linear::{atom_automaton, linear_automaton, Atom, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("automata in base {0} and base {1} cannot be combined")]
    BaseMismatch(u32, u32),
    #[error("resource ceiling exceeded: {states} states (limit {limit})")]
    ResourceExceeded { states: usize, limit: usize },
    #[error("no track named {0:?}")]
    UnknownTrack(String),
    #[error("morphism is not uniform")]
    NotUniform,
    #[error("a {width}-uniform morphism does not generate a base-{base} automatic word")]
    WidthMismatch { width: usize, base: u32 },
    #[error("letter {0} has no image")]
    MissingImage(u32),
    #[error("no built-in word named {0:?}")]
    UnknownBuiltin(String),
    #[error("unsupported relation: {0}")]
    Unsupported(String),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}
