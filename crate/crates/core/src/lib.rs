//! Tensor products of 0-symmetric convex bodies.
//!
//! Bodies live in `ℝ^{d₁} ⊗ … ⊗ ℝ^{d_l}` with lexicographic flattening (the
//! last factor varies fastest). Everything here needs only `alloc`; the
//! `std` feature adds `std::error::Error` impls and `parallel` spreads
//! optimizer restarts over rayon.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bm_distance;
pub mod body;
pub mod ellipsoid_analysis;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod multilinear;
pub mod random;
pub mod scalar;
pub mod tensor_products;
pub mod tensor_space;
pub mod tensoriality;

pub use body::{Body, GaugeResult, GaugeWitness, Representation};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalar::{Rational, Scalar};
pub use tensor_space::{DecomposableVector, TensorMap, TensorShape};
