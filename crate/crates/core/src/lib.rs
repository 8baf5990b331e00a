//! Terms, algebras and checkers for common meadows: arithmetic where
//! division is total and `1/0` is an absorptive error value `bot`.

pub mod algebra;
pub mod flatten;
pub mod homs;
pub mod laws;
pub mod proofkernel;
pub mod term;
