//! Verlinde rings, the shifted affine Weyl action and the chain complex of
//! anti-invariants that computes them.
//!
//! The crate is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod affine;
pub mod chain;
pub mod combinatorics;
mod error;
pub mod formal;
pub mod fusion;
pub mod root_data;
pub mod snf;
mod weight;

pub use error::{Error, Result};
pub use root_data::{LieType, RootSystem, Series};
pub use weight::{Weight, WeightMap, WeightMultiset};
