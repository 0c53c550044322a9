//! Query minimization for hypergraph orientation and sorting under
//! explorable uncertainty, with untrusted weight predictions.

pub mod bench;
pub mod errors;
pub mod learn;
pub mod model;
pub mod orient;
pub mod sorting;
pub mod structure;
pub mod vcover;
