//! Exact computations with clipped self-dual cones: lattices and finite
//! groups, polyhedral and symmetric cones, Jordan algebras, root clipping,
//! chamber reduction and descent to invariants.

// index loops read more naturally in the matrix code
#![allow(clippy::needless_range_loop)]

pub mod chamber;
pub mod clipping;
pub mod corpus;
pub mod descent;
pub mod error;
pub mod instance;
pub mod intmat;
pub mod jordan;
pub mod lattice;
pub mod linalg;
pub mod polycone;
pub mod sample;
pub mod scalar;
pub mod symcone;

pub use error::{Error, Result};
