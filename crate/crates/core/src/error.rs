use thiserror::Error;

/// Errors raised by the numerical and decision routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("hermitian pair is malformed: {0}")]
    MalformedHermitian(&'static str),
    #[error("matrix is not symmetric positive definite (smallest eigenvalue {min_eig:e})")]
    NotSpd { min_eig: f64 },
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("local factor is not in Sp(2,R) (defect {defect:e})")]
    FactorNotSymplectic { defect: f64 },
    #[error("matrix is not symplectic (defect {defect:e})")]
    NotSymplectic { defect: f64 },
    #[error("{0} block is not positive definite")]
    NotPositive(&'static str),
    #[error("certificate construction needs det C >= 0, got {det_c:e}")]
    PreconditionDetC { det_c: f64 },
    #[error("covariance violates the uncertainty principle (margin {margin:e})")]
    NotPhysical { margin: f64 },
    #[error("mean occupation must be non-negative, got {0}")]
    NegativeOccupation(f64),
    #[error("covariance matrix is singular; the Wigner function is undefined")]
    SingularCovariance,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("separability certificate failed verification (classical margin {margin:e})")]
    CertificateFailed { margin: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
