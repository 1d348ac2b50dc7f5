//! Kubo–Ando operator means on positive definite matrices, tensor and
//! Hadamard products, and a randomized verifier for Callebaut-type matrix
//! inequalities in the Loewner order.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensembles;
pub mod error;
pub mod harness;
pub mod laws;
pub mod linalg;
pub mod means;

pub use error::{Error, Result};
