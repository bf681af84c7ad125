//! Separability of two-mode Gaussian states from their covariance matrices.
//!
//! The crate decides whether a 4×4 covariance matrix describes a physical
//! state, whether that state is entangled, and backs each answer with
//! evidence: a chain of local symplectic maps to a classical covariance
//! matrix for separable states, or an uncertainty-sum witness for entangled
//! ones.
//!
//! Conventions: phase-space ordering `(q₁, p₁, q₂, p₂)`, `ħ = 1`, vacuum
//! covariance `½·I`.

pub mod cli;
pub mod covariance;
pub mod error;
pub mod matcore;
pub mod selftest;
pub mod separability;
pub mod states;
pub mod symplectic;
pub mod wigner;
