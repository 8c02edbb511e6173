//! Exact arithmetic for associated divisor functions, joint ordered
//! factorisations of integer tuples and the sum systems they generate.
//!
//! The crate is organised bottom-up:
//!
//! - [`number`]: prime factorisation and multi-index combinatorics.
//! - [`dirichlet`]: the Dirichlet convolution algebra and the divisor
//!   functions `d_j`, `c_j` and `c_j^(r)` for integer `r`.
//! - [`arrangements`]: linear arrangements of typed blocks with no two
//!   equal neighbours.
//! - [`jof`]: counting and enumerating joint ordered factorisations.
//! - [`sumsys`]: building and verifying sum systems.
//!
//! All counts are [`num_bigint::BigInt`]; nothing here uses floating point.

pub mod arrangements;
pub mod dirichlet;
pub mod error;
pub mod jof;
pub mod number;
pub mod sumsys;

pub use error::{Error, Result};
