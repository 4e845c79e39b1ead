//! A Walnut-style first-order language over automatic words: parsing,
//! compilation to automata, and script sessions.

mod ast;
mod compile;
mod parse;
mod session;

use thiserror::Error;

use crate::automata::AutomataError;
use crate::morphism::MorphismError;

pub use ast::{CmpOp, Command, Connective, Formula, Predicate, Quantifier, Script, Term};
pub use compile::{Compiler, StatsEntry, StatsLog};
pub use parse::{parse_predicate, parse_script};
pub use session::{decide, EvalResult, Session, DEFAULT_STATE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown word {0:?}")]
    UnknownWord(String),
    #[error("unknown morphism {0:?}")]
    UnknownMorphism(String),
    #[error("name {0:?} is already defined")]
    NameCollision(String),
    #[error("@{letter} is not a letter of {word}")]
    LetterOutOfRange { word: String, letter: u32 },
    #[error("type error: {0}")]
    TypeMismatch(String),
    #[error("a verdict needs a sentence, but ({}) are free", .0.join(","))]
    FreeVariables(Vec<String>),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

impl LogicError {
    pub fn is_resource_exceeded(&self) -> bool {
        matches!(self, LogicError::Automata(AutomataError::ResourceExceeded { .. }))
    }
}
