//! Enumeration of virtual functions and virtual components of real
//! parabolic singularities.

pub mod enumerate;
pub mod error;
pub mod flip;
pub mod lattice;
pub mod query;
pub mod seeds;
pub mod state;

pub use enumerate::{explore, virtual_components, FormalGraph, VirtualComponent};
pub use error::{EnumerateError, FlipError, LatticeError, QueryError, SeedError, StateError};
pub use flip::{apply_flip, available_flips, candidate_flips, successors, Direction, Flip, Side, Variant};
pub use lattice::{IntersectionMatrix, RealString, Sign};
pub use query::{filter_vf, hi_candidates, Condition, Predicate};
pub use state::{Class, Marker, MorseDatum, Parity, StateKey, VirtualFunction};
