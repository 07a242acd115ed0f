//! Simulation of the quantum n-switch: a control register in superposition
//! over orderings of `n` blackbox unitaries, and the permutation-phase
//! discrimination task it solves with one query per unitary.

pub mod algebra;
pub mod circuit;
pub mod cli;
pub mod construct;
pub mod error;
pub mod periodic;
pub mod perm;
pub mod router;
pub mod switch;

pub use error::{Error, Result};
