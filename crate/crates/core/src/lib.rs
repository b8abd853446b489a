//! Two-input ternary logic classification and its realisation in simulated
//! NMR experiments.
//!
//! - [`ternary`]: truth tables over `{-1, 0, 1}` and their dense indices.
//! - [`npn`]: the 432-element relabelling group, its 84 orbits and the
//!   binary special case.
//! - [`pc`]: parameter-centric signatures built from distinct-output counts.
//! - [`spin`]: a vector-model pulse sequence simulator.
//! - [`gate_search`]: logic tables read off simulated experiments and
//!   exhaustive parameter searches.
//! - [`complex_logic`]: magnitude and phase logic on complex numbers.
//! - [`cli`]: the `nmr-logic` command line.

pub mod cli;
pub mod complex_logic;
pub mod error;
pub mod format;
pub mod gate_search;
pub mod npn;
pub mod pc;
pub mod spin;
pub mod ternary;

pub use error::{Error, Result};
pub use ternary::{FunctionIndex, TernaryFunction, Trit};
