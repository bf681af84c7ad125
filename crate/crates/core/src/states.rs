//! Named Gaussian states and seeded random generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::covariance::{is_physical_psd, CovarianceMatrix};
use crate::error::{Error, Result};
use crate::matcore::{Mat2, Mat4, Vector, DEFAULT_TOL};
use crate::symplectic::{random_mode_with, random_symplectic_with, two_mode_squeeze4, SamplerConfig};

/// A Gaussian state: first moments plus a physical covariance matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianState {
    mean: Vector<4>,
    cov: CovarianceMatrix,
}

impl GaussianState {
    /// Checks that `mean` is finite and `cov` satisfies the uncertainty
    /// principle at tolerance `tol`.
    pub fn new(mean: Vector<4>, cov: CovarianceMatrix, tol: f64) -> Result<Self> {
        if !mean.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let check = is_physical_psd(&cov, tol);
        if !check.ok {
            return Err(Error::NotPhysical { margin: check.margin });
        }
        Ok(Self { mean, cov })
    }

    pub(crate) fn from_parts(mean: Vector<4>, cov: CovarianceMatrix) -> Self {
        Self { mean, cov }
    }

    pub fn centered(cov: CovarianceMatrix, tol: f64) -> Result<Self> {
        Self::new([0.0; 4], cov, tol)
    }

    pub fn mean(&self) -> &Vector<4> {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }
}

pub fn vacuum() -> GaussianState {
    GaussianState::from_parts([0.0; 4], CovarianceMatrix::vacuum())
}

/// Product of thermal states with mean occupations `n1`, `n2`.
pub fn thermal(n1: f64, n2: f64) -> Result<GaussianState> {
    for n in [n1, n2] {
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if n < 0.0 {
            return Err(Error::NegativeOccupation(n));
        }
    }
    let cov = CovarianceMatrix::from_matrix(Mat4::diag([n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5]), DEFAULT_TOL)?;
    Ok(GaussianState::from_parts([0.0; 4], cov))
}

/// Two-mode squeezed vacuum, built by congruence of the vacuum with the
/// two-mode squeezer.
pub fn two_mode_squeezed(r: f64) -> Result<GaussianState> {
    if !r.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(GaussianState::from_parts([0.0; 4], CovarianceMatrix::vacuum().transform(&two_mode_squeeze4(r))))
}

/// `V = S·diag(ν₁, ν₁, ν₂, ν₂)·Sᵀ` with random symplectic `S` and
/// `νᵢ = ½ + U(0, mixedness)`.
pub fn random_physical(seed: u64, mixedness: f64) -> Result<GaussianState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_physical_with(&mut rng, mixedness, SamplerConfig::default())
}

pub fn random_physical_with<R: Rng + ?Sized>(
    rng: &mut R,
    mixedness: f64,
    cfg: SamplerConfig,
) -> Result<GaussianState> {
    if !(mixedness >= 0.0) || !mixedness.is_finite() {
        return Err(Error::InvalidParameter(format!("mixedness must be >= 0, got {mixedness}")));
    }
    let mut nu = || if mixedness > 0.0 { 0.5 + rng.random_range(0.0..mixedness) } else { 0.5 };
    let (nu1, nu2) = (nu(), nu());
    let s = random_symplectic_with(rng, false, cfg).matrix();
    let cov = CovarianceMatrix::from_matrix(Mat4::diag([nu1, nu1, nu2, nu2]).congruence(&s), DEFAULT_TOL)?;
    Ok(GaussianState::from_parts([0.0; 4], cov))
}

/// Gaussian state with the first and second moments of a `k`-component
/// mixture of product states: `Σpⱼ(Vⱼ + μⱼμⱼᵀ) - μ̄μ̄ᵀ`.
///
/// Separable by construction: the product part is block diagonal and the
/// mean-dispersion term is classical displacement noise.
pub fn random_separable(seed: u64, k: usize) -> Result<GaussianState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_separable_with(&mut rng, k)
}

pub fn random_separable_with<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Result<GaussianState> {
    if k == 0 {
        return Err(Error::InvalidParameter("mixture needs at least one component".into()));
    }
    let cfg = SamplerConfig { max_log_squeeze: 1.0 };
    let weights: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();

    let mut second = Mat4::zeros();
    let mut mean = [0.0; 4];
    for w in &weights {
        let p = w / total;
        let local = |rng: &mut R| {
            let nu = 0.5 + rng.random_range(0.0..0.5);
            Mat2::scalar(nu).congruence(&random_mode_with(rng, cfg))
        };
        let (a, b) = (local(rng), local(rng));
        let mu: Vector<4> = if k == 1 {
            [0.0; 4]
        } else {
            std::array::from_fn(|_| StandardNormal.sample(rng))
        };
        second = second + (Mat4::block_diag(&a, &b) + outer(&mu, &mu)) * p;
        for i in 0..4 {
            mean[i] += p * mu[i];
        }
    }
    let cov = CovarianceMatrix::from_matrix((second - outer(&mean, &mean)).symmetrized(), DEFAULT_TOL)?;
    Ok(GaussianState::from_parts(mean, cov))
}

fn outer(u: &Vector<4>, v: &Vector<4>) -> Mat4 {
    Mat4::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| u[i] * v[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::is_physical_psd;
    use crate::symplectic::SIGMA3;

    #[test]
    fn vacuum_and_thermal() {
        let v = vacuum();
        assert_eq!(*v.cov().matrix(), Mat4::scalar(0.5));
        assert_eq!(v.cov().matrix().determinant(), 1.0 / 16.0);
        assert_eq!(thermal(0.0, 0.0).unwrap(), v);
        assert_eq!(*thermal(0.5, 0.5).unwrap().cov().matrix(), Mat4::identity());
        assert_eq!(thermal(-0.1, 0.0), Err(Error::NegativeOccupation(-0.1)));
    }

    #[test]
    fn tmsv_matches_closed_form() {
        assert_eq!(*two_mode_squeezed(0.0).unwrap().cov().matrix(), Mat4::scalar(0.5));
        for r in [0.1f64, 0.5, 1.0, 2.0] {
            let cov = *two_mode_squeezed(r).unwrap().cov();
            let (a, c) = (0.5 * (2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
            assert!((cov.a() - Mat2::scalar(a)).max_abs() < 1e-12 * cov.scale());
            assert!((cov.b() - Mat2::scalar(a)).max_abs() < 1e-12 * cov.scale());
            assert!((cov.c() - SIGMA3 * c).max_abs() < 1e-12 * cov.scale());
            assert!((cov.matrix().determinant() - 1.0 / 16.0).abs() < 1e-10 * cov.scale());
        }
        let c = *two_mode_squeezed(0.5).unwrap().cov();
        assert!((c.c().determinant() + 0.25 * 1f64.sinh().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn random_physical_properties() {
        for seed in 0..100 {
            let pure = random_physical(seed, 0.0).unwrap();
            assert!((pure.cov().matrix().determinant() - 1.0 / 16.0).abs() < 1e-10);
            let mixed = random_physical(seed, 2.0).unwrap();
            assert!(is_physical_psd(mixed.cov(), DEFAULT_TOL).ok);
        }
        assert_eq!(random_physical(9, 1.0).unwrap(), random_physical(9, 1.0).unwrap());
        assert!(random_physical(1, -1.0).is_err());
    }

    #[test]
    fn random_separable_properties() {
        let single = random_separable(3, 1).unwrap();
        assert_eq!(single.cov().c(), Mat2::zeros());
        assert_eq!(*single.mean(), [0.0; 4]);
        for seed in 0..50 {
            let s = random_separable(seed, 4).unwrap();
            assert!(is_physical_psd(s.cov(), DEFAULT_TOL).ok);
        }
        assert!(random_separable(0, 0).is_err());
        assert_eq!(random_separable(5, 3).unwrap(), random_separable(5, 3).unwrap());
    }

    #[test]
    fn constructor_rejects_unphysical() {
        let cov = CovarianceMatrix::from_matrix(Mat4::scalar(0.4), DEFAULT_TOL).unwrap();
        assert!(matches!(GaussianState::centered(cov, DEFAULT_TOL), Err(Error::NotPhysical { .. })));
        assert!(GaussianState::new([f64::NAN, 0.0, 0.0, 0.0], CovarianceMatrix::vacuum(), DEFAULT_TOL).is_err());
    }
}
