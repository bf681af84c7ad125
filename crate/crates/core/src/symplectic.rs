//! The symplectic structure of two-mode phase space, ordered `(q₁, p₁, q₂, p₂)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matcore::{Mat2, Mat4};

/// Single-mode symplectic form `J`.
pub const J: Mat2 = Mat2::from_rows([[0.0, 1.0], [-1.0, 0.0]]);

/// Two-mode symplectic form `Ω = J ⊕ J`.
pub const OMEGA: Mat4 = Mat4::from_rows([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
]);

/// Mirror reflection `p₂ → -p₂`, the phase-space image of partial transposition.
pub const LAMBDA: Mat4 = Mat4::from_rows([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
]);

/// `Ω̃ = ΛΩΛ = J ⊕ (-J)`.
pub const OMEGA_TILDE: Mat4 = Mat4::from_rows([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
]);

/// Pauli `σ₃ = diag(1, -1)`.
pub const SIGMA3: Mat2 = Mat2::from_rows([[1.0, 0.0], [0.0, -1.0]]);

/// `‖SΩSᵀ - Ω‖` (largest entry), or `‖SJSᵀ - J‖` for 2×2 input.
pub fn symplectic_defect4(s: &Mat4) -> f64 {
    (OMEGA.congruence(s) - OMEGA).max_abs()
}

pub fn symplectic_defect2(s: &Mat2) -> f64 {
    (J.congruence(s) - J).max_abs()
}

/// Membership test for Sp(4,R) with tolerance scaled by `max(1, ‖S‖²)`.
pub fn is_symplectic4(s: &Mat4, tol: f64) -> bool {
    s.is_finite() && symplectic_defect4(s) <= tol * s.scale().powi(2)
}

/// Membership test for Sp(2,R) = SL(2,R).
pub fn is_symplectic2(s: &Mat2, tol: f64) -> bool {
    s.is_finite() && symplectic_defect2(s) <= tol * s.scale().powi(2)
}

/// A verified element of Sp(4,R).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticMatrix(Mat4);

impl SymplecticMatrix {
    pub fn new(m: Mat4, tol: f64) -> Result<Self> {
        if is_symplectic4(&m, tol) {
            Ok(Self(m))
        } else {
            Err(Error::NotSymplectic { defect: symplectic_defect4(&m) })
        }
    }

    pub fn identity() -> Self {
        Self(Mat4::identity())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// Local element `S₁ ⊕ S₂` of Sp(2,R) ⊗ Sp(2,R): `s1` acts on Alice's mode,
/// `s2` on Bob's.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalSymplectic {
    s1: Mat2,
    s2: Mat2,
}

impl LocalSymplectic {
    pub fn new(s1: Mat2, s2: Mat2, tol: f64) -> Result<Self> {
        for s in [&s1, &s2] {
            if !is_symplectic2(s, tol) {
                return Err(Error::FactorNotSymplectic { defect: symplectic_defect2(s) });
            }
        }
        Ok(Self { s1, s2 })
    }

    pub fn identity() -> Self {
        Self { s1: Mat2::identity(), s2: Mat2::identity() }
    }

    pub fn alice(&self) -> &Mat2 {
        &self.s1
    }

    pub fn bob(&self) -> &Mat2 {
        &self.s2
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Self) -> Self {
        Self { s1: self.s1 * first.s1, s2: self.s2 * first.s2 }
    }

    pub fn to_matrix(&self) -> Mat4 {
        Mat4::block_diag(&self.s1, &self.s2)
    }

    pub fn embed(&self) -> SymplecticMatrix {
        SymplecticMatrix(self.to_matrix())
    }
}

/// Block-diagonal embedding `S₁ ⊕ S₂`.
pub fn embed_local(local: &LocalSymplectic) -> SymplecticMatrix {
    local.embed()
}

/// `[[cos θ, sin θ], [-sin θ, cos θ]]`.
pub fn rotation2(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::from_rows([[c, s], [-s, c]])
}

/// Single-mode squeeze `diag(x, 1/x)`.
pub fn squeeze2(x: f64) -> Result<Mat2> {
    if x > 0.0 && x.is_finite() {
        Ok(Mat2::diag([x, 1.0 / x]))
    } else {
        Err(Error::NonPositiveScale(x))
    }
}

/// Rotation by the same angle in the `(q₁, q₂)` and `(p₁, p₂)` planes: a
/// passive beam splitter, both orthogonal and symplectic.
pub fn equal_rotation4(theta: f64) -> SymplecticMatrix {
    let (s, c) = theta.sin_cos();
    SymplecticMatrix(Mat4::from_rows([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, s],
        [-s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ]))
}

/// Two-mode squeezer: `exp` of the generator coupling `q₁q₂ - p₁p₂`.
pub fn two_mode_squeeze4(r: f64) -> SymplecticMatrix {
    let (ch, sh) = (r.cosh(), r.sinh());
    SymplecticMatrix(Mat4::from_rows([
        [ch, 0.0, sh, 0.0],
        [0.0, ch, 0.0, -sh],
        [sh, 0.0, ch, 0.0],
        [0.0, -sh, 0.0, ch],
    ]))
}

/// Parameters for [`random_symplectic`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    /// Bound on `|ln x|` for every squeeze factor.
    pub max_log_squeeze: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { max_log_squeeze: 1.0 }
    }
}

/// Output of [`random_symplectic`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RandomSymplectic {
    Global(SymplecticMatrix),
    Local(LocalSymplectic),
}

impl RandomSymplectic {
    pub fn matrix(&self) -> Mat4 {
        match self {
            Self::Global(s) => *s.matrix(),
            Self::Local(l) => l.to_matrix(),
        }
    }
}

/// Seeded random element: a local product `R·Z·R` per mode, sandwiched
/// between two mode-mixing equal rotations unless `local_only`.
pub fn random_symplectic(seed: u64, local_only: bool) -> RandomSymplectic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symplectic_with(&mut rng, local_only, SamplerConfig::default())
}

pub fn random_symplectic_with<R: Rng + ?Sized>(
    rng: &mut R,
    local_only: bool,
    cfg: SamplerConfig,
) -> RandomSymplectic {
    let local = random_local_with(rng, cfg);
    if local_only {
        return RandomSymplectic::Local(local);
    }
    let before = equal_rotation4(rng.random_range(0.0..std::f64::consts::TAU));
    let after = equal_rotation4(rng.random_range(0.0..std::f64::consts::TAU));
    RandomSymplectic::Global(after.compose(&local.embed()).compose(&before))
}

pub fn random_local_with<R: Rng + ?Sized>(rng: &mut R, cfg: SamplerConfig) -> LocalSymplectic {
    LocalSymplectic { s1: random_mode_with(rng, cfg), s2: random_mode_with(rng, cfg) }
}

/// Random element of Sp(2,R) as rotation · squeeze · rotation.
pub fn random_mode_with<R: Rng + ?Sized>(rng: &mut R, cfg: SamplerConfig) -> Mat2 {
    let theta1 = rng.random_range(0.0..std::f64::consts::TAU);
    let theta2 = rng.random_range(0.0..std::f64::consts::TAU);
    let bound = cfg.max_log_squeeze.abs();
    let log_x = if bound > 0.0 { rng.random_range(-bound..=bound) } else { 0.0 };
    rotation2(theta1) * Mat2::diag([log_x.exp(), (-log_x).exp()]) * rotation2(theta2)
}
