//! Topological zeta functions of plane curve singularities with respect to
//! differential forms, computed exactly from embedded resolution graphs.

pub mod calculus;
pub mod exact;
pub mod explore;
pub mod family;
pub mod fixtures;
pub mod graph;
pub mod monodromy;
pub mod resolve;
pub mod verify;
pub mod zeta;
