//! Library side of the command-line front end: configuration, trajectory
//! serialization, plotting and the self-check suite. The binary in
//! `main.rs` is a thin dispatcher over these pieces.

pub mod checks;
pub mod config;
pub mod output;
pub mod svg;
