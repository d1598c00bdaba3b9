//! Exact modular-data toolkit for fusion categories.
//!
//! Cyclotomic numbers, fusion rings, S/T matrices, integral lattices and
//! truncated q-series, plus builders for the two catalog categories
//! (`U`, the 20-object category of the Z3 permutation orbifold of the
//! rank-one lattice VOA with `<a,a> = 2`, and `VLtau`, its 30-object
//! V_L^tau relative).
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod catalog;
pub mod cyclotomic;
pub mod fusion_ring;
pub mod lattice;
mod linalg;
pub mod modular_data;
pub mod qseries;

pub use catalog::CatalogError;
pub use cyclotomic::{CycError, CycNum, DEFAULT_ORDER_CAP};
pub use fusion_ring::{FusionRing, RingElement, RingError};
pub use lattice::{Coset, Lattice, LatticeError};
pub use modular_data::{ModularDatum, ModularError};
pub use qseries::QSeries;

/// Small exact rationals (twists, exponents, lattice coordinates).
pub type Q = num_rational::Rational64;
