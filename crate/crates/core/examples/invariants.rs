//! Local invariants under random local symplectic maps, and the two routes
//! to the uncertainty principle on a matrix that fools the bare polynomial.

use cvsep::covariance::{is_physical_invariant, is_physical_psd, CovarianceMatrix};
use cvsep::matcore::DEFAULT_TOL;
use cvsep::states;
use cvsep::symplectic::{random_symplectic, RandomSymplectic};

pub fn run_example() -> Result<(f64, bool), Box<dyn std::error::Error>> {
    let v = *states::random_physical(5, 1.0)?.cov();
    let RandomSymplectic::Local(local) = random_symplectic(9, true) else {
        return Err("expected a local element".into());
    };
    let w = v.transform_local(&local);
    let (p, q) = (v.invariants(), w.invariants());
    println!("I1 {:.12} -> {:.12}", p.i1, q.i1);
    println!("I3 {:.12} -> {:.12}", p.i3, q.i3);
    println!("I4 {:.12} -> {:.12}", p.i4, q.i4);
    println!("det V - (I1 I2 + I3^2 - I4) = {:.3e}", p.det_identity_defect());
    let drift = (p.i4 - q.i4).abs() / p.i4.abs().max(1.0);

    // A pure state scaled by 0.8 has both symplectic eigenvalues at 0.4.
    let scaled = CovarianceMatrix::from_matrix(*states::two_mode_squeezed(1.5)?.cov().matrix() * 0.8, DEFAULT_TOL)?;
    let psd = is_physical_psd(&scaled, DEFAULT_TOL);
    let inv = is_physical_invariant(&scaled, DEFAULT_TOL);
    println!(
        "scaled pure state: residual {:+.4} (polynomial alone would accept), spectrum check {} -> physical {}, matrix route margin {:+.4}",
        inv.residual, inv.spectrum_ok, inv.ok, psd.margin
    );
    Ok((drift, inv.ok == psd.ok))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
