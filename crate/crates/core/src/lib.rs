//! Birkhoff-James and approximate orthogonality in finite-dimensional normed
//! spaces, the facet-cone structure of polyhedral unit balls, and checks for
//! linear operators that preserve approximate orthogonality.

pub mod cones;
pub mod experiments;
pub mod error;
pub mod geom;
pub mod io;
pub mod hyperspace;
pub mod linprog;
pub mod operators;
pub mod orthogonality;
pub mod render;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
