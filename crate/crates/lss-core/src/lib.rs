//! Stability and Lyapunov exponents of linear switching systems whose matrices
//! have real spectra.
//!
//! The pipeline picks an Euler step `τ` from Markov–Bernstein constants of
//! exponential Chebyshev systems, then brackets the joint spectral radius of the
//! discretized family by branch and bound.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expcheb;
pub mod hull;
pub mod jsr;
pub mod linalg;
pub mod lyapunov;
pub mod stepsize;

pub use error::{Error, Result};
