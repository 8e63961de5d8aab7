//! Exact combinatorics of simplicial homology spheres.
//!
//! The crate computes, entirely over exact rational arithmetic:
//!
//! - face, `h`-, `g`- and missing-face vectors of simplicial complexes,
//!   with the classical identities between them ([`invariants`]);
//! - reduced Z/2 homology and the homology-sphere validator ([`homology`]);
//! - linear and affine stress spaces of generically embedded complexes,
//!   whose dimensions recover `h_k` and `g_k` ([`stress`]);
//! - stress lifting to cones, and the two-star affine stress attached to an
//!   edge of an even-dimensional sphere ([`cone`]);
//! - stackedness certificates, join factorization, and the classification of
//!   spheres with `g_k = 1` into join normal forms ([`structure`]).
//!
//! Generic embeddings are emulated by seeded random rational coordinates; all
//! linear algebra on top of them is exact, so the only probabilistic aspect is
//! the genericity of the sample, handled by a minimum-over-trials protocol
//! and re-seeding. Every randomized entry point takes an explicit seed and is
//! fully reproducible.

pub mod bitset;
pub mod cli;
pub mod complex;
pub mod cone;
pub mod error;
pub mod homology;
pub mod io;
pub mod invariants;
pub mod linalg;
mod rng;
pub mod stress;
pub mod structure;

pub use bitset::VertexSet;
pub use complex::Complex;
pub use error::{Error, Result};
pub use linalg::{Q, RationalMatrix, Z};
