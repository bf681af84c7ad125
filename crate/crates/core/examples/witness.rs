//! Entanglement witnesses from uncertainty sums: a pair of quadrature
//! combinations whose variances add up to less than any separable state
//! allows.

use cvsep::covariance::uncertainty_sum;
use cvsep::separability::{check_commuting_pair_bound, find_witness, WitnessPair, DEFAULT_WITNESS_BUDGET};
use cvsep::states;

pub fn run_example() -> Result<Vec<WitnessPair>, Box<dyn std::error::Error>> {
    let mut found = Vec::new();
    for r in [0.25f64, 0.5, 1.0] {
        let v = *states::two_mode_squeezed(r)?.cov();
        let w = find_witness(&v, DEFAULT_WITNESS_BUDGET).ok_or("no witness for a squeezed state")?;
        let u = uncertainty_sum(&v, &w.d, &w.dp);
        println!(
            "r = {r}: sum {:.9} < bound {:.9}, violation {:.9} (EPR value {:.9})",
            u.sum,
            u.separable_bound,
            w.violation,
            2.0 - 2.0 * (-2.0 * r).exp()
        );
        found.push(w);
    }
    let sep = states::random_separable(3, 3)?;
    println!("commuting pair on a separable state: {:.6} (bound 4)", check_commuting_pair_bound(sep.cov()));
    Ok(found)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
