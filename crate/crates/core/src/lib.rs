//! Exact combinatorial models of D-modules on hyperplane arrangements.

pub mod arrangement;
pub mod cli;
pub mod dmod;
pub mod error;
pub mod exactlin;
pub mod quiver;
pub mod specialize;
pub mod verma;
pub mod weights;

pub use error::{Error, Result};
