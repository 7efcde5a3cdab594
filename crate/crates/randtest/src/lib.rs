//! File formats, the simulation harness and the command line for
//! studentized randomization tests.

pub mod cli;
pub mod config;
pub mod harness;
pub mod io;
