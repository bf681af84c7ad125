//! Covariance (variance) matrices of two-mode states and the second-moment
//! conditions they must satisfy.
//!
//! The matrix is `V_ab = ⟨{Δξ_a, Δξ_b}⟩` for `ξ = (q₁, p₁, q₂, p₂)` in units
//! with `ħ = 1`, so the vacuum is `½·I`. Block form:
//!
//! ```text
//!     V = [ A   C ]
//!         [ Cᵀ  B ]
//! ```
//!
//! with `A` belonging to Alice's mode and `B` to Bob's.
//!
//! Two independent routes decide each condition. The matrix route looks at
//! the spectrum of `V + (i/2)Ω` (or its mirror image); the invariant route
//! evaluates polynomials in the local invariants `I₁..I₄`. The polynomial
//! inequality alone is not a complete test: a matrix with both symplectic
//! eigenvalues below ½ (for example a pure state scaled down by 0.8) satisfies
//! it, as do some indefinite matrices. [`is_physical_invariant`] therefore adds
//! the invariant side conditions `det A, det B ≥ ¼`, `tr A, tr B > 0`,
//! `I₁ + I₂ + 2I₃ ≥ ½` and `2I₁I₂ ≥ I₄`, which close the gap.

mod standard_form;

pub use standard_form::{standard_inequalities, to_standard_form, StandardForm, StandardResiduals};

use crate::error::{Error, Result};
use crate::matcore::{self, HermitianPair, Mat2, Mat4, Vector};
use crate::symplectic::{LocalSymplectic, SymplecticMatrix, J, LAMBDA, OMEGA, OMEGA_TILDE};

/// Width, in units of `tol · scale`, of the band around a decision boundary
/// inside which verdicts are flagged as marginal.
pub const MARGINAL_BAND: f64 = 10.0;

/// Symmetric 4×4 covariance matrix in `(q₁, p₁, q₂, p₂)` ordering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceMatrix {
    v: Mat4,
}

impl CovarianceMatrix {
    /// Validates `raw`, symmetrizing away asymmetry up to `tol · scale`.
    pub fn from_matrix(raw: Mat4, tol: f64) -> Result<Self> {
        if !raw.is_finite() {
            return Err(Error::NonFinite);
        }
        let asymmetry = raw.asymmetry();
        if asymmetry > tol * raw.scale() {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(Self { v: raw.symmetrized() })
    }

    /// `[[A, C], [Cᵀ, B]]`; `A` and `B` must be symmetric.
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2, tol: f64) -> Result<Self> {
        Self::from_matrix(Mat4::from_blocks(a, c, &c.transpose(), b), tol)
    }

    /// Standard form `V₀(a, b, c₁, c₂)`: `A = aI`, `B = bI`, `C = diag(c₁, c₂)`.
    pub fn standard(a: f64, b: f64, c1: f64, c2: f64) -> Self {
        Self {
            v: Mat4::from_rows([
                [a, 0.0, c1, 0.0],
                [0.0, a, 0.0, c2],
                [c1, 0.0, b, 0.0],
                [0.0, c2, 0.0, b],
            ]),
        }
    }

    pub fn vacuum() -> Self {
        Self { v: Mat4::scalar(0.5) }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.v
    }

    pub fn a(&self) -> Mat2 {
        self.v.block(0, 0)
    }

    pub fn b(&self) -> Mat2 {
        self.v.block(1, 1)
    }

    pub fn c(&self) -> Mat2 {
        self.v.block(0, 1)
    }

    pub fn scale(&self) -> f64 {
        self.v.scale()
    }

    pub fn invariants(&self) -> Invariants {
        invariants(self)
    }

    /// Congruence `V → S V Sᵀ`.
    pub fn transform(&self, s: &SymplecticMatrix) -> Self {
        Self { v: self.v.congruence(s.matrix()) }
    }

    pub fn transform_local(&self, local: &LocalSymplectic) -> Self {
        Self { v: self.v.congruence(&local.to_matrix()) }
    }

    /// `ΛVΛ`.
    pub fn mirror_reflect(&self) -> Self {
        mirror_reflect(self)
    }

    /// Congruence by an arbitrary matrix, without a symplectic check.
    pub(crate) fn congruence_unchecked(&self, s: &Mat4) -> Self {
        Self { v: self.v.congruence(s) }
    }
}

/// The local invariants `I₁ = det A`, `I₂ = det B`, `I₃ = det C`,
/// `I₄ = tr(AJCJBJCᵀJ)` together with `det V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Invariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub detv: f64,
}

impl Invariants {
    /// `det V - (I₁I₂ + I₃² - I₄)`; zero up to rounding.
    pub fn det_identity_defect(&self) -> f64 {
        self.detv - (self.i1 * self.i2 + self.i3 * self.i3 - self.i4)
    }

    /// Uncertainty-principle polynomial `I₁I₂ + (¼ - I₃)² - I₄ - ¼(I₁ + I₂)`.
    pub fn physical_residual(&self) -> f64 {
        self.residual_with(self.i3)
    }

    /// Partial-transpose polynomial: the same expression with `|I₃|`.
    pub fn ppt_residual(&self) -> f64 {
        self.residual_with(self.i3.abs())
    }

    fn residual_with(&self, i3: f64) -> f64 {
        self.i1 * self.i2 + (0.25 - i3).powi(2) - self.i4 - 0.25 * (self.i1 + self.i2)
    }

    /// `I₁ + I₂ + 2I₃`, the sum of the squared symplectic eigenvalues.
    pub fn symplectic_square_sum(&self) -> f64 {
        self.i1 + self.i2 + 2.0 * self.i3
    }

    /// Invariants of the mirror image `ΛVΛ`.
    pub fn mirrored(&self) -> Self {
        Self { i3: -self.i3, ..*self }
    }
}

pub fn invariants(v: &CovarianceMatrix) -> Invariants {
    let (a, b, c) = (v.a(), v.b(), v.c());
    let i4 = (a * J * c * J * b * J * c.transpose() * J).trace();
    Invariants {
        i1: a.determinant(),
        i2: b.determinant(),
        i3: c.determinant(),
        i4,
        detv: v.v.determinant(),
    }
}

/// Outcome of a spectral positivity test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub ok: bool,
    /// Smallest eigenvalue of the Hermitian matrix under test.
    pub margin: f64,
}

/// Outcome of an invariant-polynomial test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantCheck {
    pub ok: bool,
    /// Polynomial residual, `LHS - RHS`; non-negative when the inequality holds.
    pub residual: f64,
    /// `det A, det B ≥ ¼` and `tr A, tr B > 0`.
    pub blocks_ok: bool,
    /// `I₁ + I₂ + 2I₃ ≥ ½` and `2I₁I₂ ≥ I₄`.
    pub spectrum_ok: bool,
}

fn half_omega_check(v: &Mat4, form: &Mat4, tol: f64) -> PsdCheck {
    let h = HermitianPair::new(*v, *form * 0.5, tol).expect("covariance is symmetric");
    let rep = matcore::is_psd_hermitian(&h, tol);
    PsdCheck { ok: rep.psd, margin: rep.min_eig }
}

/// `V + (i/2)Ω ⪰ 0`.
pub fn is_physical_psd(v: &CovarianceMatrix, tol: f64) -> PsdCheck {
    half_omega_check(&v.v, &OMEGA, tol)
}

fn side_conditions(v: &CovarianceMatrix, inv: &Invariants, tol: f64) -> (bool, bool) {
    let slack = tol * v.scale();
    let blocks_ok = inv.i1 >= 0.25 - slack
        && inv.i2 >= 0.25 - slack
        && v.a().trace() > 0.0
        && v.b().trace() > 0.0;
    let spectrum_ok = inv.symplectic_square_sum() >= 0.5 - slack && 2.0 * inv.i1 * inv.i2 - inv.i4 >= -slack;
    (blocks_ok, spectrum_ok)
}

/// Local-invariant form of the uncertainty principle.
pub fn is_physical_invariant(v: &CovarianceMatrix, tol: f64) -> InvariantCheck {
    let inv = invariants(v);
    let residual = inv.physical_residual();
    let (blocks_ok, spectrum_ok) = side_conditions(v, &inv, tol);
    InvariantCheck {
        ok: residual >= -tol * v.scale() && blocks_ok && spectrum_ok,
        residual,
        blocks_ok,
        spectrum_ok,
    }
}

pub fn mirror_reflect(v: &CovarianceMatrix) -> CovarianceMatrix {
    v.congruence_unchecked(&LAMBDA)
}

/// `ΛVΛ + (i/2)Ω ⪰ 0`: the mirror image is again a valid covariance matrix.
pub fn ppt_psd(v: &CovarianceMatrix, tol: f64) -> PsdCheck {
    reflected_psd(v, &LAMBDA, tol)
}

/// `RVRᵀ + (i/2)Ω ⪰ 0` for an arbitrary reflection `R`; [`ppt_psd`] with `R = Λ`.
pub fn reflected_psd(v: &CovarianceMatrix, reflection: &Mat4, tol: f64) -> PsdCheck {
    half_omega_check(&v.v.congruence(reflection).symmetrized(), &OMEGA, tol)
}

/// The same condition written as `V + (i/2)Ω̃ ⪰ 0` with `Ω̃ = ΛΩΛ`.
pub fn ppt_psd_tilde(v: &CovarianceMatrix, tol: f64) -> PsdCheck {
    half_omega_check(&v.v, &OMEGA_TILDE, tol)
}

/// Local- and mirror-invariant partial-transpose condition on a physical `V`.
///
/// `ok` is decided by the polynomial residual alone; the side conditions are
/// reported for the mirror image and hold automatically when `V` is physical.
pub fn ppt_invariant(v: &CovarianceMatrix, tol: f64) -> InvariantCheck {
    let inv = invariants(v);
    let residual = inv.ppt_residual();
    let (blocks_ok, spectrum_ok) = side_conditions(v, &inv.mirrored(), tol);
    InvariantCheck { ok: residual >= -tol * v.scale(), residual, blocks_ok, spectrum_ok }
}

/// Checked congruence `V → S V Sᵀ`.
pub fn transform(v: &CovarianceMatrix, s: &Mat4, tol: f64) -> Result<CovarianceMatrix> {
    let s = SymplecticMatrix::new(*s, tol)?;
    Ok(v.transform(&s))
}

/// Uncertainty sum of two quadrature combinations and the lower bounds it is
/// compared against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintySum {
    /// `dᵀVd + d'ᵀVd'`.
    pub sum: f64,
    /// `|d'ᵀΩd|`, the bound every physical state obeys.
    pub omega_bound: f64,
    /// `|d'ᵀΩ̃d|`, the bound obeyed by every mirror-reflected physical state.
    pub omega_tilde_bound: f64,
    /// `|d₁d'₂ - d₂d'₁| + |d₃d'₄ - d₄d'₃|`, the bound for separable states.
    pub separable_bound: f64,
}

impl UncertaintySum {
    /// `separable_bound - sum`; positive values certify entanglement.
    pub fn separable_violation(&self) -> f64 {
        self.separable_bound - self.sum
    }
}

pub fn uncertainty_sum(v: &CovarianceMatrix, d: &Vector<4>, dp: &Vector<4>) -> UncertaintySum {
    let alice = d[0] * dp[1] - d[1] * dp[0];
    let bob = d[2] * dp[3] - d[3] * dp[2];
    UncertaintySum {
        sum: v.v.quad_form(d) + v.v.quad_form(dp),
        omega_bound: OMEGA.bilinear(dp, d).abs(),
        omega_tilde_bound: OMEGA_TILDE.bilinear(dp, d).abs(),
        separable_bound: alice.abs() + bob.abs(),
    }
}
