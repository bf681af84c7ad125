#[allow(dead_code)]
#[path = "../examples/decide.rs"]
mod decide;
#[allow(dead_code)]
#[path = "../examples/standard_form.rs"]
mod standard_form;
#[allow(dead_code)]
#[path = "../examples/certificate.rs"]
mod certificate;
#[allow(dead_code)]
#[path = "../examples/witness.rs"]
mod witness;
#[allow(dead_code)]
#[path = "../examples/wigner.rs"]
mod wigner;
#[allow(dead_code)]
#[path = "../examples/invariants.rs"]
mod invariants;
#[allow(dead_code)]
#[path = "../examples/state_files.rs"]
mod state_files;
#[allow(dead_code)]
#[path = "../examples/selftest.rs"]
mod selftest;

use cvsep::separability::{CertificateBranch, VerdictKind};

#[test]
fn decide_example() {
    let kinds: Vec<VerdictKind> = decide::run_example().unwrap().into_iter().map(|(_, k)| k).collect();
    use VerdictKind::*;
    assert_eq!(kinds, [Separable, Separable, Entangled, Separable, Unphysical]);
}

#[test]
fn standard_form_example() {
    let sf = standard_form::run_example().unwrap();
    assert!(sf.c1 >= sf.c2.abs());
    assert!(sf.reconstruction_error < 1e-12);
}

#[test]
fn certificate_example() {
    let cert = certificate::run_example().unwrap();
    assert!(matches!(cert.branch, CertificateBranch::PositiveDetC { .. }));
    assert!(cert.classical_margin > 0.0);
}

#[test]
fn witness_example() {
    let found = witness::run_example().unwrap();
    for (w, r) in found.iter().zip([0.25f64, 0.5, 1.0]) {
        assert!(w.violation >= 2.0 - 2.0 * (-2.0 * r).exp() - 1e-6);
    }
}

#[test]
fn wigner_example() {
    assert!(wigner::run_example().unwrap() < 5.0);
}

#[test]
fn invariants_example() {
    let (drift, routes_agree) = invariants::run_example().unwrap();
    assert!(drift < 1e-10);
    assert!(routes_agree);
}

#[test]
fn state_files_example() {
    assert_eq!(state_files::run_example().unwrap(), [1, 0, 0, 3]);
}

#[test]
fn selftest_example() {
    assert_eq!(selftest::run_example().unwrap(), (true, false));
}
