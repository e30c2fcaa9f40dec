//! Exact computations on the Cox category of a semiprojective toric variety.
//!
//! Everything is done with arbitrary-precision integers and rationals.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod cli;
pub mod cohomology;
pub mod coxcat;
pub mod divisor;
pub mod error;
pub mod exactlin;
pub mod fan;
pub mod gkz;
pub mod io;
pub mod model;
pub mod monads;
pub mod plot;
pub mod report;
pub mod theta;

pub use error::{Error, Result};
pub use exactlin::{Int, Rat};
pub use model::ToricModel;
