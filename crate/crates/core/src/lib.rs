//! Eigenvalues in spectral gaps of block-symmetric operators.
//!
//! A real symmetric matrix `A` split as `[[P, Cᵀ], [C, -B]]` along a pair of
//! complementary coordinate projections has, above `λ0 = max σ(-B)`, the
//! eigenvalues
//!
//! ```text
//! λ_k = inf_{V ⊂ upper, dim V = k}  sup_{z ∈ V ⊕ lower}  ⟨z, Az⟩ / ‖z‖²
//! ```
//!
//! which this crate computes without touching the full spectrum: for an energy
//! `E > λ0` the Schur complement `K_E = P - E + Cᵀ(B+E)⁻¹C` and the Gram matrix
//! `M_E = I + L_EᵀL_E`, `L_E = (B+E)⁻¹C`, form a symmetric-definite pencil
//! whose `k`-th level `μ_k(E)` changes sign exactly once, at `λ_k`.
//!
//! Modules:
//!
//! * [`linop`]: the block operator and the gap data `(λ0, λ1)`.
//! * [`oracle`]: dense eigendecomposition of the assembled matrix (ground truth).
//! * [`schur`]: `K_E`, `M_E`, `L_E`, the forms `q_E` and `φ_{E,x}`, and `μ_k`.
//! * [`minmax`]: root finding for `E(x)` and `λ_k`, gap sweeps with multiplicities.
//! * [`verify`]: matrix-scale checks of the factorization identities and gap bounds.
//! * [`models`]: radial Dirac–Coulomb, the cylinder operator, random gapped fixtures.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature to get
//! `std::error::Error` through the standard prelude, and `serde` for the model
//! specifications.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(a > b)` is used on purpose so that NaN takes the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod linalg;
pub mod linop;
pub mod matrix;
pub mod minmax;
pub mod models;
pub mod oracle;
pub mod schur;
pub mod verify;

mod math;

pub use error::{Error, Result};
pub use linop::{BlockOperator, GapData};
pub use matrix::Matrix;
pub use minmax::{MinMaxOptions, MinMaxResult};
pub use oracle::Spectrum;
pub use schur::SchurSystem;
pub use verify::VerificationReport;
