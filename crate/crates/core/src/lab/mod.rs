//! Experiments built on the rest of the crate: θ-sweeps, slope fits, CSV
//! tables, a limit-set renderer, comparison-inequality checks, the
//! acceptance suite and the command-line front end.

pub mod acceptance;
pub mod cli;
pub mod comparison;
pub mod render;
pub mod sweep;
pub mod table;
