//! Hermite spectral solver for the Boltzmann equation with a quadratic
//! collision model on low-degree moments and BGK-type damping above it.

pub mod basis;
pub mod cli;
pub mod boundary;
pub mod coeffs;
pub mod collision;
pub mod error;
pub mod frames;
pub mod kernels;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
