//! Separability decisions for two-mode Gaussian states, with constructive
//! certificates for separable states and uncertainty-sum witnesses for
//! entangled ones.
//!
//! The decision follows the sign of `det C`. States with `det C ≥ 0` are
//! always separable. For `det C < 0` the state is separable exactly when the
//! partial-transpose residual is non-negative, in which case the certificate
//! is built for the mirror image (which has `det C > 0`).
//!
//! A certificate is a chain of local symplectic maps taking `V` to a matrix
//! `V'` with `V' - ½I ⪰ 0`. Such a covariance matrix has a non-negative
//! P-function, i.e. it is a mixture of coherent product states.

use crate::covariance::{
    invariants, is_physical_psd, ppt_invariant, to_standard_form, uncertainty_sum, CovarianceMatrix, MARGINAL_BAND,
};
use crate::error::{Error, Result};
use crate::matcore::{sym_eigen, Mat2, Vector, DEFAULT_TOL};
use crate::symplectic::{equal_rotation4, LocalSymplectic, OMEGA};

/// Default number of objective evaluations for [`find_witness`].
pub const DEFAULT_WITNESS_BUDGET: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Separable,
    Entangled,
    Unphysical,
}

impl VerdictKind {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Separable => 0,
            Self::Entangled => 1,
            Self::Unphysical => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Some residual lies within the marginal band of its decision boundary.
    pub marginal: bool,
    pub ppt_residual: f64,
    /// Smallest eigenvalue of `V + (i/2)Ω`.
    pub physical_margin: f64,
    pub certificate: Option<Certificate>,
    pub witness: Option<WitnessPair>,
    /// The input is known to describe a Gaussian state. Without this the
    /// partial-transpose condition is only necessary, so a passing state is
    /// reported as PPT-consistent rather than separable.
    pub gaussian: bool,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match (self.kind, self.gaussian) {
            (VerdictKind::Separable, true) => "separable",
            (VerdictKind::Separable, false) => "ppt-consistent",
            (VerdictKind::Entangled, _) => "entangled",
            (VerdictKind::Unphysical, _) => "unphysical",
        }
    }
}

/// Which construction produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CertificateBranch {
    /// `det C > 0`: reciprocal scaling by `x`, common scaling by `y`.
    PositiveDetC { x: f64, y: f64, rotation_angle: f64 },
    /// `det C = 0`: scaling by `diag(√2a, 1/√2a, √2b, 1/√2b)`.
    ZeroDetC,
    /// The input is already classical.
    Classical,
}

/// Diagonal of the equally rotated matrix in the `det C > 0` branch,
/// ordered `(q₁, p₁, q₂, p₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kappa {
    pub plus: f64,
    pub plus_prime: f64,
    pub minus: f64,
    pub minus_prime: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// Local maps applied in order to the (possibly mirrored) input.
    pub locals: Vec<LocalSymplectic>,
    /// The certificate is for `ΛVΛ` rather than `V`.
    pub mirrored: bool,
    pub final_v: CovarianceMatrix,
    /// Smallest eigenvalue of `final_v - ½I`.
    pub classical_margin: f64,
    pub kappa: Option<Kappa>,
    pub branch: CertificateBranch,
}

impl Certificate {
    /// Composite local map `T` with `final_v = T V Tᵀ`.
    pub fn composite(&self) -> LocalSymplectic {
        self.locals.iter().fold(LocalSymplectic::identity(), |acc, l| l.after(&acc))
    }
}

/// Pair of quadrature combinations whose uncertainty sum falls below the
/// separable bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessPair {
    pub d: Vector<4>,
    pub dp: Vector<4>,
    /// `separable_bound - sum`, with the pair normalized to `separable_bound = 2`.
    pub violation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecideOptions {
    pub tol: f64,
    pub gaussian: bool,
    /// Evaluation budget for the witness search; `None` skips the search.
    pub witness_budget: Option<usize>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, gaussian: true, witness_budget: Some(DEFAULT_WITNESS_BUDGET) }
    }
}

pub fn decide(v: &CovarianceMatrix, tol: f64) -> Verdict {
    decide_with(v, &DecideOptions { tol, ..DecideOptions::default() })
}

pub fn decide_with(v: &CovarianceMatrix, opts: &DecideOptions) -> Verdict {
    let tol = opts.tol;
    let band = MARGINAL_BAND * tol * v.scale();
    let physical = is_physical_psd(v, tol);
    let ppt = ppt_invariant(v, tol);
    let mut verdict = Verdict {
        kind: VerdictKind::Unphysical,
        marginal: physical.margin.abs() <= band,
        ppt_residual: ppt.residual,
        physical_margin: physical.margin,
        certificate: None,
        witness: None,
        gaussian: opts.gaussian,
    };
    if !physical.ok {
        return verdict;
    }
    // Past the physicality gate the verdict rests on the partial-transpose residual.
    verdict.marginal = ppt.residual.abs() <= band;

    let det_c = invariants(v).i3;
    let certify = |target: &CovarianceMatrix, mirrored: bool| {
        certify_separable(target, tol).ok().map(|c| Certificate { mirrored, ..c })
    };
    if det_c >= 0.0 {
        verdict.kind = VerdictKind::Separable;
        verdict.certificate = certify(v, false);
    } else if !ppt.ok {
        verdict.kind = VerdictKind::Entangled;
        verdict.witness = opts.witness_budget.and_then(|budget| find_witness(v, budget));
    } else {
        verdict.kind = VerdictKind::Separable;
        verdict.certificate = certify(&v.mirror_reflect(), true);
    }
    if verdict.kind == VerdictKind::Separable && verdict.certificate.is_none() {
        verdict.marginal = true;
    }
    verdict
}

fn classical_margin(v: &CovarianceMatrix) -> f64 {
    sym_eigen(v.matrix(), f64::INFINITY).expect("covariance is finite").min() - 0.5
}

fn scaling(alice: [f64; 2], bob: [f64; 2]) -> LocalSymplectic {
    LocalSymplectic::new(Mat2::diag(alice), Mat2::diag(bob), 1e-8).expect("reciprocal scalings are symplectic")
}

/// Builds a chain of local symplectic maps that takes `V` (with `det C ≥ 0`)
/// to a classical covariance matrix.
pub fn certify_separable(v: &CovarianceMatrix, tol: f64) -> Result<Certificate> {
    let physical = is_physical_psd(v, tol);
    if !physical.ok {
        return Err(Error::NotPhysical { margin: physical.margin });
    }
    let det_c = invariants(v).i3;
    if det_c < -tol * v.scale() {
        return Err(Error::PreconditionDetC { det_c });
    }

    let sf = to_standard_form(v, tol)?;
    let (a, b, c1, c2) = (sf.a, sf.b, sf.c1, sf.c2);
    let mut locals = vec![sf.to_standard];
    let mut kappa = None;

    let branch = if c2 > 0.0 && c2 * a + c1 * b > tol * v.scale() {
        let x = ((c1 * a + c2 * b) / (c2 * a + c1 * b)).powf(0.25);
        let (x2, ix2) = (x * x, 1.0 / (x * x));
        let g = ((x2 * a - ix2 * b).powi(2) + 4.0 * c1 * c1).sqrt();
        let gp = ((ix2 * a - x2 * b).powi(2) + 4.0 * c2 * c2).sqrt();
        let num = ix2 * a + x2 * b - gp;
        let den = x2 * a + ix2 * b - g;
        // Both are 2κ₋ / y^{±2}, positive for positive definite V.
        let num = num.max(0.0);
        let den = den.max(f64::MIN_POSITIVE);
        let y = (num / den).powf(0.25);
        let y2 = y * y;
        kappa = Some(Kappa {
            plus: 0.5 * y2 * (x2 * a + ix2 * b + g),
            plus_prime: 0.5 / y2 * (ix2 * a + x2 * b + gp),
            minus: 0.5 * y2 * (x2 * a + ix2 * b - g),
            minus_prime: 0.5 / y2 * (ix2 * a + x2 * b - gp),
        });
        locals.push(scaling([x, 1.0 / x], [1.0 / x, x]));
        locals.push(scaling([y, 1.0 / y], [y, 1.0 / y]));
        let rotation_angle = 0.5 * (2.0 * c1).atan2(x2 * a - ix2 * b);
        CertificateBranch::PositiveDetC { x, y, rotation_angle }
    } else {
        let (sa, sb) = ((2.0 * a).sqrt(), (2.0 * b).sqrt());
        locals.push(scaling([sa, 1.0 / sa], [sb, 1.0 / sb]));
        CertificateBranch::ZeroDetC
    };

    let mut cert = Certificate { locals, mirrored: false, final_v: *v, classical_margin: 0.0, kappa, branch };
    cert.final_v = v.transform_local(&cert.composite());
    cert.classical_margin = classical_margin(&cert.final_v);
    if cert.classical_margin >= -tol * cert.final_v.scale() {
        return Ok(cert);
    }

    let direct = classical_margin(v);
    if direct >= -tol * v.scale() {
        return Ok(Certificate {
            locals: Vec::new(),
            mirrored: false,
            final_v: *v,
            classical_margin: direct,
            kappa: None,
            branch: CertificateBranch::Classical,
        });
    }
    Err(Error::CertificateFailed { margin: cert.classical_margin })
}

/// `V''` of the `det C > 0` branch: the certificate's final matrix after the
/// equal rotation, diagonal with entries `(κ₊, κ₊', κ₋, κ₋')`.
pub fn rotated_final(cert: &Certificate) -> Option<CovarianceMatrix> {
    match cert.branch {
        CertificateBranch::PositiveDetC { rotation_angle, .. } => {
            Some(cert.final_v.transform(&equal_rotation4(rotation_angle)))
        }
        _ => None,
    }
}

const EPR_SEEDS: [(Vector<4>, Vector<4>); 2] = [
    ([1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, 1.0]),
    ([1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, -1.0]),
];

/// Searches for `(d, d')` whose uncertainty sum falls below the separable
/// bound.
///
/// Seeds are the EPR pairs of the standard form pulled back to the input
/// coordinates; each is refined by coordinate descent on the ratio
/// `sum / separable_bound`, within `budget` evaluations in total. Failing to
/// find a witness says nothing about separability.
pub fn find_witness(v: &CovarianceMatrix, budget: usize) -> Option<WitnessPair> {
    let sf = to_standard_form(v, DEFAULT_TOL).ok()?;
    let t = sf.to_standard.to_matrix().transpose();
    let ratio = |z: &[f64; 8]| {
        let (d, dp) = split(z);
        let u = uncertainty_sum(v, &d, &dp);
        if u.separable_bound > 0.0 {
            u.sum / u.separable_bound
        } else {
            f64::INFINITY
        }
    };

    let mut evaluations = 0;
    let mut best: Option<([f64; 8], f64)> = None;
    let per_seed = budget / EPR_SEEDS.len();
    for (d0, dp0) in EPR_SEEDS {
        let mut z = join(&t.mul_vec(&d0), &t.mul_vec(&dp0));
        let mut value = ratio(&z);
        evaluations += 1;
        let mut spent = 1;
        let mut step = 0.25 * z.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        while spent < per_seed && evaluations < budget && step > 1e-12 {
            let mut improved = false;
            for i in 0..8 {
                for sign in [1.0, -1.0] {
                    if spent >= per_seed || evaluations >= budget {
                        break;
                    }
                    let mut trial = z;
                    trial[i] += sign * step;
                    let tv = ratio(&trial);
                    evaluations += 1;
                    spent += 1;
                    if tv < value {
                        z = trial;
                        value = tv;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((z, value));
        }
    }

    let (z, value) = best?;
    if !(value < 1.0 - DEFAULT_TOL) {
        return None;
    }
    let (d, dp) = split(&z);
    let bound = uncertainty_sum(v, &d, &dp).separable_bound;
    let k = (2.0 / bound).sqrt();
    let (d, dp) = (d.map(|x| x * k), dp.map(|x| x * k));
    let u = uncertainty_sum(v, &d, &dp);
    Some(WitnessPair { d, dp, violation: u.separable_violation() })
}

fn split(z: &[f64; 8]) -> (Vector<4>, Vector<4>) {
    (std::array::from_fn(|i| z[i]), std::array::from_fn(|i| z[i + 4]))
}

fn join(d: &Vector<4>, dp: &Vector<4>) -> [f64; 8] {
    std::array::from_fn(|i| if i < 4 { d[i] } else { dp[i - 4] })
}

/// Commuting quadrature pair with separable bound 4.
pub const COMMUTING_PAIR: (Vector<4>, Vector<4>) = ([1.0, 1.0, 1.0, 1.0], [1.0, -1.0, -1.0, 1.0]);

/// Uncertainty sum of `q₁ + p₁ + q₂ + p₂` and `q₁ - p₁ - q₂ + p₂`. The two
/// commute, yet the sum is at least 4 in every separable state.
pub fn check_commuting_pair_bound(v: &CovarianceMatrix) -> f64 {
    let (d, dp) = COMMUTING_PAIR;
    debug_assert_eq!(OMEGA.bilinear(&dp, &d), 0.0);
    uncertainty_sum(v, &d, &dp).sum
}
