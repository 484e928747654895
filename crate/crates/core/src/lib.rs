pub mod clutching;
pub mod coset_poset;
pub mod error;
pub mod group;
pub mod group_ring;
pub mod lattice;
pub mod simplicial;
pub mod spec;
pub mod torus;
pub mod verify;

pub use error::{Budget, Error, Result};
