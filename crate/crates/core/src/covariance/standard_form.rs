//! Reduction of a covariance matrix to the four-parameter standard form by a
//! local symplectic transformation.
//!
//! The reduction runs in two steps:
//!
//! 1. `Sᵢ = (det Xᵢ)^{1/4} · Xᵢ^{-1/2}` for `Xᵢ ∈ {A, B}`. Each `Sᵢ` is symmetric
//!    with unit determinant, hence in Sp(2,R), and maps `Xᵢ` to `√det Xᵢ · I`.
//! 2. A 2×2 singular value decomposition of the new cross block restricted to
//!    proper rotations, `R₁ C' R₂ᵀ = diag(c₁, c₂)`. Rotations leave the scalar
//!    diagonal blocks untouched. Any reflection is absorbed into the sign of
//!    `c₂`, so `c₁ ≥ |c₂|` and `sign(c₁c₂) = sign(det C)`.

use crate::error::{Error, Result};
use crate::matcore::{spd_inverse_sqrt, Mat2};
use crate::symplectic::{rotation2, LocalSymplectic};

use super::CovarianceMatrix;

/// Scalars `(a, b, c₁, c₂)` of `V₀` and the local element that produces it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    /// `V₀ = T V Tᵀ` with `T` the embedding of this element.
    pub to_standard: LocalSymplectic,
    /// Largest entry of `T V Tᵀ - V₀`.
    pub reconstruction_error: f64,
}

impl StandardForm {
    pub fn matrix(&self) -> CovarianceMatrix {
        CovarianceMatrix::standard(self.a, self.b, self.c1, self.c2)
    }
}

/// Residuals of the standard-form inequalities, `LHS - RHS`.
///
/// For a standard-form input both equal exactly four times the corresponding
/// invariant residual ([`super::Invariants::physical_residual`] and
/// [`super::Invariants::ppt_residual`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardResiduals {
    /// `4(ab - c₁²)(ab - c₂²) - [(a² + b²) + 2c₁c₂ - ¼]`.
    pub physical_residual: f64,
    /// `4(ab - c₁²)(ab - c₂²) - [(a² + b²) + 2|c₁c₂| - ¼]`.
    pub ppt_residual: f64,
}

pub fn standard_inequalities(sf: &StandardForm) -> StandardResiduals {
    let (a, b, c1, c2) = (sf.a, sf.b, sf.c1, sf.c2);
    let lhs = 4.0 * (a * b - c1 * c1) * (a * b - c2 * c2);
    let base = a * a + b * b - 0.25;
    StandardResiduals {
        physical_residual: lhs - (base + 2.0 * c1 * c2),
        ppt_residual: lhs - (base + 2.0 * (c1 * c2).abs()),
    }
}

/// Proper-rotation SVD of a 2×2 matrix: returns `(R₁, R₂, σ₁, σ₂)` with
/// `R₁ M R₂ᵀ = diag(σ₁, σ₂)`, `σ₁ ≥ |σ₂|`, and `σ₂` carrying the sign of `det M`.
fn rotation_svd(m: &Mat2) -> (Mat2, Mat2, f64, f64) {
    let e = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let f = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let g = 0.5 * (m[(1, 0)] + m[(0, 1)]);
    let h = 0.5 * (m[(1, 0)] - m[(0, 1)]);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);
    // m = Rot(φ)·diag(q + r, q - r)·Rot(θ) with Rot(α) = rotation2(-α).
    (rotation2(phi), rotation2(-theta), q + r, q - r)
}

/// Brings `V` to `V₀(a, b, c₁, c₂)` by a local symplectic transformation.
///
/// Requires `A` and `B` positive definite. `c₂` is set to exactly zero when
/// the second singular value of the cross block is below `tol · scale`.
pub fn to_standard_form(v: &CovarianceMatrix, tol: f64) -> Result<StandardForm> {
    let (a_blk, b_blk, c_blk) = (v.a(), v.b(), v.c());
    let det_a = a_blk.determinant();
    let det_b = b_blk.determinant();
    let s1 = spd_inverse_sqrt(&a_blk, tol).map_err(|_| Error::NotPositive("Alice"))? * det_a.powf(0.25);
    let s2 = spd_inverse_sqrt(&b_blk, tol).map_err(|_| Error::NotPositive("Bob"))? * det_b.powf(0.25);

    let c_prime = s1 * c_blk * s2.transpose();
    let (r1, r2, sigma1, sigma2) = rotation_svd(&c_prime);

    let to_standard = LocalSymplectic::new(r1 * s1, r2 * s2, 1e-8)?;
    let a = det_a.sqrt();
    let b = det_b.sqrt();
    let c2 = if sigma2.abs() <= tol * v.scale() { 0.0 } else { sigma2 };
    let c1 = sigma1;

    let reduced = v.transform_local(&to_standard);
    let reconstruction_error = (*reduced.matrix() - *CovarianceMatrix::standard(a, b, c1, c2).matrix()).max_abs();
    Ok(StandardForm { a, b, c1, c2, to_standard, reconstruction_error })
}
