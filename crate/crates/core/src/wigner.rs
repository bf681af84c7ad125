//! Gaussian Wigner functions, their mirror image under partial transposition,
//! and a Monte-Carlo estimate of second moments.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::covariance::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::matcore::{sym_eigen, Mat4, Vector, DEFAULT_TOL};
use crate::states::GaussianState;
use crate::symplectic::LAMBDA;

/// Phase-space point `(q₁, p₁, q₂, p₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint(pub Vector<4>);

impl PhasePoint {
    pub fn new(xi: Vector<4>) -> Result<Self> {
        if xi.iter().all(|x| x.is_finite()) {
            Ok(Self(xi))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn mirrored(&self) -> Self {
        Self(LAMBDA.mul_vec(&self.0))
    }
}

/// `(4π²√det V)⁻¹ exp(-½(ξ-μ)ᵀV⁻¹(ξ-μ))` for arbitrary first and second moments.
pub fn gaussian_density(mean: &Vector<4>, cov: &CovarianceMatrix, xi: &PhasePoint) -> Result<f64> {
    let det = cov.matrix().determinant();
    if !(det > 0.0) {
        return Err(Error::SingularCovariance);
    }
    let inv = cov.matrix().inverse(DEFAULT_TOL).map_err(|_| Error::SingularCovariance)?;
    let dx: Vector<4> = std::array::from_fn(|i| xi.0[i] - mean[i]);
    Ok((-0.5 * inv.quad_form(&dx)).exp() / peak_for(det))
}

fn peak_for(det: f64) -> f64 {
    4.0 * std::f64::consts::PI.powi(2) * det.sqrt()
}

pub fn wigner_eval(state: &GaussianState, xi: &PhasePoint) -> Result<f64> {
    gaussian_density(state.mean(), state.cov(), xi)
}

/// Largest value of the Wigner function, attained at the mean.
pub fn peak_value(state: &GaussianState) -> f64 {
    1.0 / peak_for(state.cov().matrix().determinant())
}

/// Wigner function after partial transposition: `W(Λξ)`.
pub fn partial_transpose_eval(state: &GaussianState, xi: &PhasePoint) -> Result<f64> {
    wigner_eval(state, &xi.mirrored())
}

/// Moments of the mirror image `(Λμ, ΛVΛ)`, which need not be physical.
pub fn mirrored_moments(state: &GaussianState) -> (Vector<4>, CovarianceMatrix) {
    (LAMBDA.mul_vec(state.mean()), state.cov().mirror_reflect())
}

/// Empirical moments of samples drawn from a Gaussian Wigner function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentEstimate {
    pub empirical_mean: Vector<4>,
    pub empirical_cov: Mat4,
    /// Standard error of each covariance entry, from the spread of batch estimates.
    pub stderr: Mat4,
    pub samples: usize,
}

impl MomentEstimate {
    /// Largest `|empirical - expected| / stderr` over all entries.
    pub fn max_z_score(&self, expected: &Mat4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let dev = (self.empirical_cov[(i, j)] - expected[(i, j)]).abs();
                let se = self.stderr[(i, j)];
                let z = if se > 0.0 { dev / se } else if dev == 0.0 { 0.0 } else { f64::INFINITY };
                worst = worst.max(z);
            }
        }
        worst
    }
}

const MAX_BATCHES: usize = 100;

#[derive(Clone, Copy)]
struct Accumulator {
    n: usize,
    sum: Vector<4>,
    outer: Mat4,
}

impl Accumulator {
    fn mean(&self) -> Vector<4> {
        self.sum.map(|s| s / self.n as f64)
    }

    fn cov(&self) -> Mat4 {
        let mu = self.mean();
        let n = self.n as f64;
        Mat4::from_rows(std::array::from_fn(|i| {
            std::array::from_fn(|j| (self.outer[(i, j)] - n * mu[i] * mu[j]) / (n - 1.0))
        }))
    }
}

/// Draws `n` phase-space points `ξ = μ + V^{1/2}z` and returns their
/// empirical moments.
///
/// Samples are split into up to 100 batches, each with its own ChaCha stream
/// derived from `seed`, so the result does not depend on thread scheduling.
pub fn sample_moments(state: &GaussianState, n: usize, seed: u64) -> Result<MomentEstimate> {
    if n < 10 {
        return Err(Error::InvalidParameter(format!("need at least 10 samples, got {n}")));
    }
    let eig = sym_eigen(state.cov().matrix(), DEFAULT_TOL)?;
    let root = eig.map_spectrum(|l| l.max(0.0).sqrt());
    let mean = *state.mean();

    let batches = (n / 5).clamp(2, MAX_BATCHES);
    let parts: Vec<Accumulator> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let size = n / batches + usize::from(b < n % batches);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut acc = Accumulator { n: size, sum: [0.0; 4], outer: Mat4::zeros() };
            for _ in 0..size {
                let z: Vector<4> = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
                let dz = root.mul_vec(&z);
                let xi: Vector<4> = std::array::from_fn(|i| mean[i] + dz[i]);
                for i in 0..4 {
                    acc.sum[i] += xi[i];
                    for j in 0..4 {
                        acc.outer[(i, j)] += xi[i] * xi[j];
                    }
                }
            }
            acc
        })
        .collect();

    let total = parts.iter().fold(Accumulator { n: 0, sum: [0.0; 4], outer: Mat4::zeros() }, |mut t, p| {
        t.n += p.n;
        for i in 0..4 {
            t.sum[i] += p.sum[i];
        }
        t.outer = t.outer + p.outer;
        t
    });

    let batch_covs: Vec<Mat4> = parts.iter().map(Accumulator::cov).collect();
    let k = batch_covs.len() as f64;
    let avg = batch_covs.iter().fold(Mat4::zeros(), |s, c| s + *c) * (1.0 / k);
    let stderr = Mat4::from_rows(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let var = batch_covs.iter().map(|c| (c[(i, j)] - avg[(i, j)]).powi(2)).sum::<f64>() / (k - 1.0);
            (var / k).sqrt()
        })
    }));

    Ok(MomentEstimate { empirical_mean: total.mean(), empirical_cov: total.cov(), stderr, samples: n })
}
