//! Instance generators, adversaries and the experiment runner.

pub mod fixtures;
pub mod generate;
pub mod suite;
