#![allow(clippy::needless_range_loop)]

//! Numerics for weakly geometric p-rough paths with 2 < p < 3.
//!
//! The crate covers the truncated degree-2 tensor algebra, grid-sampled
//! rough paths with p-variation metrics, a tangent-space representation
//! [Z, φ] with its metric, a dyadic area extension for parametric families
//! together with measure integrals, and an Euler scheme for flow equations
//! on rough-path space with local and global drivers. A CLI (`roughflow`)
//! fronts the file formats and experiment drivers.

pub mod cli;
pub mod config;
pub mod error;
pub mod tensor;
pub mod variation;
pub mod roughpath;
pub mod extension;
pub mod flow;
pub mod io;
pub mod tangent;

pub use error::{Error, Result};
