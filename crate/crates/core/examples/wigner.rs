//! Gaussian Wigner functions, partial transposition as a momentum flip, and
//! a Monte-Carlo check of the second moments.

use cvsep::states;
use cvsep::wigner::{mirrored_moments, partial_transpose_eval, peak_value, sample_moments, wigner_eval, PhasePoint};
use cvsep::covariance::is_physical_psd;
use cvsep::matcore::DEFAULT_TOL;

pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let state = states::two_mode_squeezed(0.5)?;
    let xi = PhasePoint::new([0.3, 0.4, 0.3, 0.4])?;
    println!("peak W = {:.9}", peak_value(&state));
    println!("W(xi) = {:.9}, W(PT)(xi) = {:.9}", wigner_eval(&state, &xi)?, partial_transpose_eval(&state, &xi)?);

    let (_, mirrored) = mirrored_moments(&state);
    println!("mirror image physical: {}", is_physical_psd(&mirrored, DEFAULT_TOL).ok);

    let est = sample_moments(&state, 200_000, 42)?;
    let z = est.max_z_score(state.cov().matrix());
    println!("200000 samples, worst covariance z-score {z:.3}");
    Ok(z)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
