//! Decide separability for a handful of states and show the numbers behind
//! each verdict.

use cvsep::covariance::CovarianceMatrix;
use cvsep::matcore::{Mat4, DEFAULT_TOL};
use cvsep::separability::{decide, VerdictKind};
use cvsep::states;

pub fn run_example() -> Result<Vec<(String, VerdictKind)>, Box<dyn std::error::Error>> {
    let cases = [
        ("vacuum", *states::vacuum().cov()),
        ("thermal n=(1, 0.2)", *states::thermal(1.0, 0.2)?.cov()),
        ("TMSV r=0.5", *states::two_mode_squeezed(0.5)?.cov()),
        ("random separable mixture", *states::random_separable(7, 4)?.cov()),
        ("below vacuum noise", CovarianceMatrix::from_matrix(Mat4::scalar(0.4), DEFAULT_TOL)?),
    ];
    let mut out = Vec::new();
    for (name, v) in cases {
        let verdict = decide(&v, DEFAULT_TOL);
        println!(
            "{name:>26}: {:<10} ppt residual {:+.6e}  physical margin {:+.6e}{}",
            verdict.label(),
            verdict.ppt_residual,
            verdict.physical_margin,
            if verdict.marginal { "  (marginal)" } else { "" }
        );
        out.push((name.to_string(), verdict.kind));
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
