//! Randomized cross-checks, and what happens when the partial transpose is
//! implemented with the wrong reflection.

use cvsep::matcore::Mat4;
use cvsep::selftest::{run, SelftestConfig};

pub fn run_example() -> Result<(bool, bool), Box<dyn std::error::Error>> {
    let cfg = SelftestConfig { samples: 500, seed: 1, ..SelftestConfig::default() };
    let good = run(&cfg);
    for s in &good.suites {
        println!("{:<26} checked {:>5}  failures {}", s.name, s.checked, s.failures);
    }
    // With the identity in place of the reflection the partial transpose is
    // never taken, and the cross-checks must notice.
    let broken = run(&SelftestConfig { reflection: Mat4::identity(), ..cfg });
    println!("with the identity in place of the reflection: passed = {}", broken.passed());
    Ok((good.passed(), broken.passed()))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
