//! Exact computation with finite linearly reductive group schemes over
//! fields of characteristic p >= 0: classification catalogs of very small
//! subgroup schemes of GL_d for d <= 3, invariants of the associated
//! quotient singularities, and rigidity/deformation diagnostics.
//!
//! All arithmetic is exact (cyclotomic fields over the rationals); floating
//! point appears only in test oracles.

pub mod error;
pub mod exactmath;
pub mod groups;
pub mod lrgs;
pub mod classify;
pub mod singularity;

pub use error::{Error, Result};
