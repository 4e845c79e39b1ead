//! Repetitions in partial words, and a small first-order decision procedure
//! for automatic sequences in the style of Walnut.

pub mod automata;
pub mod logic;
pub mod morphism;
pub mod search;
pub mod theorems;
pub mod word;
