//! Computational toolkit for S-prime ideals of the infinite polynomial ring
//! `Q[x1, x2, …]` under the infinite symmetric group.

pub mod combinat;
pub mod contractlab;
pub mod error;
pub mod generators;
pub mod groebner;
pub mod poly;
pub mod spectrum;
pub mod sprime;
pub mod theta;
pub mod witness;

pub use error::{Error, Result};
