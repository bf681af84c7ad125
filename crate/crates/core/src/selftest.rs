//! Randomized cross-checks between the independent decision routes.
//!
//! Each suite draws its samples from a ChaCha stream indexed by sample
//! number, so results are identical whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::covariance::{
    is_physical_invariant, is_physical_psd, ppt_invariant, ppt_psd_tilde, reflected_psd, CovarianceMatrix,
};
use crate::matcore::{sym_eigen, Mat4, DEFAULT_TOL};
use crate::separability::{certify_separable, decide_with, DecideOptions, VerdictKind};
use crate::states::{random_physical_with, two_mode_squeezed, vacuum, GaussianState};
use crate::symplectic::{is_symplectic2, random_local_with, SamplerConfig, LAMBDA};
use crate::wigner::sample_moments;

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Reflection used by the matrix route of the partial-transpose check.
    /// Anything other than `Λ` should make the run fail.
    pub reflection: Mat4,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { samples: DEFAULT_SAMPLES, seed: 0, tol: DEFAULT_TOL, reflection: LAMBDA }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    /// Samples inside the marginal band, where the routes may legitimately differ.
    pub skipped: usize,
    pub failures: usize,
    /// Largest discrepancy seen, in the suite's own units.
    pub worst: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// Per-sample outcome: `None` when skipped, otherwise `(failed, discrepancy)`.
type Outcome = Option<(bool, f64)>;

fn tally(name: &'static str, outcomes: Vec<Outcome>) -> SuiteReport {
    let mut report = SuiteReport { name, checked: 0, skipped: 0, failures: 0, worst: 0.0 };
    for o in outcomes {
        match o {
            None => report.skipped += 1,
            Some((failed, d)) => {
                report.checked += 1;
                report.failures += usize::from(failed);
                report.worst = report.worst.max(d);
            }
        }
    }
    report
}

fn rng_for(seed: u64, suite: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(index as u64);
    rng
}

fn random_state(rng: &mut ChaCha8Rng) -> GaussianState {
    let mixedness = rng.random_range(0.0..1.5);
    random_physical_with(rng, mixedness, SamplerConfig::default()).expect("mixedness is valid")
}

/// Random physical `V` with `det C ≥ 0`: draws with `det C < 0` are replaced
/// by their mirror image when that is physical, and redrawn otherwise.
pub fn certifiable_state(rng: &mut ChaCha8Rng, tol: f64) -> CovarianceMatrix {
    loop {
        let v = *random_state(rng).cov();
        if v.invariants().i3 >= 0.0 {
            return v;
        }
        let m = v.mirror_reflect();
        if is_physical_psd(&m, tol).ok {
            return m;
        }
    }
}

/// Sample `index` of the equivalence sweeps: even indices are physical,
/// odd ones are physical matrices pushed off the cone by a random symmetric
/// perturbation, a shrink, or a diagonal shift.
pub fn sweep_matrix(seed: u64, index: usize) -> CovarianceMatrix {
    let mut rng = rng_for(seed, 1, index);
    let v = *random_state(&mut rng).cov().matrix();
    if index.is_multiple_of(2) {
        return CovarianceMatrix::from_matrix(v, DEFAULT_TOL).expect("physical sample");
    }
    let m = match rng.random_range(0..3) {
        0 => {
            let eps = 10f64.powf(rng.random_range(-4.0..0.0));
            let g: [[f64; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| StandardNormal.sample(&mut rng)));
            let g = Mat4::from_rows(g);
            v + (g + g.transpose()) * (0.5 * eps * v.scale())
        }
        1 => v * rng.random_range(0.6..1.0),
        _ => v - Mat4::scalar(rng.random_range(0.0..0.6)),
    };
    CovarianceMatrix::from_matrix(m.symmetrized(), DEFAULT_TOL).expect("finite symmetric sample")
}

fn uncertainty_suite(cfg: &SelftestConfig) -> SuiteReport {
    let band = 10.0 * cfg.tol;
    let outcomes = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let v = sweep_matrix(cfg.seed, i);
            let psd = is_physical_psd(&v, cfg.tol);
            let inv = is_physical_invariant(&v, cfg.tol);
            if psd.margin.abs() <= band || inv.residual.abs() <= band {
                return None;
            }
            Some((psd.ok != inv.ok, f64::from(u8::from(psd.ok != inv.ok))))
        })
        .collect();
    tally("uncertainty-equivalence", outcomes)
}

fn ppt_suite(cfg: &SelftestConfig) -> SuiteReport {
    let band = 10.0 * cfg.tol;
    let outcomes = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let v = sweep_matrix(cfg.seed, i);
            let phys = is_physical_psd(&v, cfg.tol);
            let reflected = reflected_psd(&v, &cfg.reflection, cfg.tol);
            let tilde = ppt_psd_tilde(&v, cfg.tol);
            // The two matrix forms differ by a sign change of one coordinate,
            // which the eigensolver carries through exactly.
            let forms_differ = reflected != tilde;
            let phys_inv = is_physical_invariant(&v, cfg.tol);
            let ppt_inv = ppt_invariant(&v, cfg.tol);
            if [phys.margin, reflected.margin, phys_inv.residual, ppt_inv.residual].iter().any(|x| x.abs() <= band) {
                return forms_differ.then_some((true, (reflected.margin - tilde.margin).abs()));
            }
            let by_matrix = phys.ok && reflected.ok;
            let by_invariant = phys_inv.ok && ppt_inv.ok;
            let failed = forms_differ || by_matrix != by_invariant;
            Some((failed, (reflected.margin - tilde.margin).abs()))
        })
        .collect();
    tally("ppt-equivalence", outcomes)
}

fn invariance_suite(cfg: &SelftestConfig) -> SuiteReport {
    let n = (cfg.samples / 10).max(10);
    let outcomes = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, 3, i);
            let v = *random_state(&mut rng).cov();
            let local = random_local_with(&mut rng, SamplerConfig::default());
            let w = v.transform_local(&local);
            let (p, q) = (v.invariants(), w.invariants());
            let s = v.scale().max(w.scale());
            let rel = [
                (p.i1 - q.i1).abs() / s.powi(2),
                (p.i2 - q.i2).abs() / s.powi(2),
                (p.i3 - q.i3).abs() / s.powi(2),
                (p.i4 - q.i4).abs() / s.powi(4),
                (p.detv - q.detv).abs() / s.powi(4),
            ];
            let worst = rel.iter().fold(0.0f64, |m, x| m.max(*x));
            let identity = p.det_identity_defect().abs() / v.scale().powi(4);
            Some((worst > 1e-8 || identity > 1e-10, worst))
        })
        .collect();
    tally("local-invariance", outcomes)
}

fn certificate_suite(cfg: &SelftestConfig) -> SuiteReport {
    let n = (cfg.samples / 10).max(10);
    let outcomes = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, 4, i);
            let v = certifiable_state(&mut rng, cfg.tol);
            let Ok(cert) = certify_separable(&v, cfg.tol) else {
                return Some((true, f64::INFINITY));
            };
            let shifted = *cert.final_v.matrix() - Mat4::scalar(0.5);
            let min = sym_eigen(&shifted.symmetrized(), f64::INFINITY).map(|e| e.min()).unwrap_or(f64::NEG_INFINITY);
            let symplectic = cert.locals.iter().all(|l| is_symplectic2(l.alice(), 1e-10) && is_symplectic2(l.bob(), 1e-10));
            Some((min < -1e-9 || !symplectic, (-min).max(0.0)))
        })
        .collect();
    tally("certificates", outcomes)
}

fn decision_suite(cfg: &SelftestConfig) -> SuiteReport {
    let band = 10.0 * cfg.tol;
    let opts = DecideOptions { tol: cfg.tol, gaussian: true, witness_budget: None };
    let outcomes = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(cfg.seed, 5, i);
            let v = *random_state(&mut rng).cov();
            let margin = reflected_psd(&v, &cfg.reflection, cfg.tol).margin;
            if margin.abs() <= band {
                return None;
            }
            let expected = if margin > 0.0 { VerdictKind::Separable } else { VerdictKind::Entangled };
            let wrong = decide_with(&v, &opts).kind != expected;
            Some((wrong, if wrong { margin.abs() } else { 0.0 }))
        })
        .collect();
    tally("decision-consistency", outcomes)
}

fn moments_suite(cfg: &SelftestConfig) -> SuiteReport {
    let n = (cfg.samples * 100).clamp(10_000, 1_000_000);
    let outcomes = [vacuum(), two_mode_squeezed(0.5).expect("finite squeezing")]
        .iter()
        .enumerate()
        .map(|(k, state)| {
            let est = sample_moments(state, n, cfg.seed.wrapping_add(k as u64));
            match est {
                Ok(e) => {
                    let z = e.max_z_score(state.cov().matrix());
                    Some((!(z < 5.0), z))
                }
                Err(_) => Some((true, f64::INFINITY)),
            }
        })
        .collect();
    tally("moments", outcomes)
}

pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    SelftestReport {
        suites: vec![
            uncertainty_suite(cfg),
            ppt_suite(cfg),
            invariance_suite(cfg),
            certificate_suite(cfg),
            decision_suite(cfg),
            moments_suite(cfg),
        ],
    }
}
