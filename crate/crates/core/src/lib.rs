//! Exact integer group determinants for small finite groups, the
//! representation-theoretic factorization for the Heisenberg groups `H_p`,
//! checkers for the congruence and divisibility results they satisfy, and
//! numeric Lind-Mahler measures for a few infinite groups.

pub mod cyclotomic;
pub mod error;
pub mod fast;
pub mod groups;
pub mod infinite;
pub mod linalg;
pub mod poly_expr;
pub mod rng;
pub mod search;
pub mod theorems;

pub use error::{Error, Result};
