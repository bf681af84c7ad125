//! Reduce a scrambled covariance matrix to standard form and check that the
//! local invariants survive the trip.

use cvsep::covariance::{standard_inequalities, to_standard_form, StandardForm};
use cvsep::matcore::DEFAULT_TOL;
use cvsep::states;

pub fn run_example() -> Result<StandardForm, Box<dyn std::error::Error>> {
    let v = *states::random_physical(11, 0.8)?.cov();
    let sf = to_standard_form(&v, DEFAULT_TOL)?;
    println!("a = {:.12}, b = {:.12}, c1 = {:.12}, c2 = {:.12}", sf.a, sf.b, sf.c1, sf.c2);
    println!("reconstruction error {:.3e}", sf.reconstruction_error);
    println!("S_A = {:?}\nS_B = {:?}", sf.to_standard.alice().rows(), sf.to_standard.bob().rows());

    let before = v.invariants();
    let after = sf.matrix().invariants();
    println!("det A: {:.12} -> {:.12}", before.i1, after.i1);
    println!("det C: {:.12} -> {:.12}", before.i3, after.i3);

    let res = standard_inequalities(&sf);
    println!("displayed inequalities: physical {:+.6e}, ppt {:+.6e}", res.physical_residual, res.ppt_residual);
    Ok(sf)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
