//! Linear factors and partial derivatives for LTL, with the alternating
//! automata and semantic tableaux built from them.

pub mod automaton;
pub mod crosscheck;
pub mod derivatives;
pub mod factors;
pub mod gen;
pub mod semantics;
pub mod syntax;
pub mod tableau;

pub use syntax::{parse, print, to_pnf, FormalConjunction, Formula, ParseError, Pnf};
