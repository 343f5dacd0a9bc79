//! Desk-scale laboratory for interactive (non-)primality testing of
//! polynomial ideals: exact polynomial and circuit arithmetic, ideal
//! membership by linear algebra, finite-field point counting with Lang-Weil
//! classification, set lower-bound protocols, and good-prime density
//! experiments.

pub mod amcore;
pub mod arith;
pub mod circuit;
pub mod error;
pub mod idealsys;
pub mod intpoly;
pub mod lab;
pub mod linalg;
pub mod mpoly;
pub mod primality;
pub mod rng;
pub mod sieve;
pub mod variety;

pub use error::{Error, Result};
