//! File formats and command-line front end for `fusioncat-core`.
//!
//! * [`fcat`]: FCAT v1 categories (labels, fusion rules, twists, dimensions).
//! * [`lattice_text`]: Gram matrices and named cosets.
//! * [`output`]: matrix, grid, float and q-series renderings.
//! * [`cli`]: the `fusioncat` binary.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod fcat;
pub mod lattice_text;
pub mod output;

pub use fusioncat_core as core;
