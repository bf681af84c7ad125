//! Acceptance run: each numbered criterion prints one PASS/FAIL line and the
//! process exits non-zero if any fails.

use std::time::{Duration, Instant};

use cvsep::covariance::{
    is_physical_invariant, is_physical_psd, ppt_invariant, ppt_psd, ppt_psd_tilde, to_standard_form, uncertainty_sum,
    CovarianceMatrix, Invariants,
};
use cvsep::matcore::{sym_eigen, Mat4, Vector};
use cvsep::separability::{
    certify_separable, check_commuting_pair_bound, decide, decide_with, find_witness, DecideOptions, VerdictKind,
};
use cvsep::states::{random_physical_with, random_separable, two_mode_squeezed, vacuum};
use cvsep::symplectic::{is_symplectic2, random_local_with, SamplerConfig};
use cvsep::wigner::sample_moments;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

const TOL: f64 = 1e-9;
const BAND: f64 = 1e-8;
const SEED: u64 = 20_240_611;

fn rng(suite: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + suite);
    rng.set_stream(index as u64);
    rng
}

fn physical(rng: &mut ChaCha8Rng) -> CovarianceMatrix {
    let mixedness = rng.random_range(0.0..1.5);
    *random_physical_with(rng, mixedness, SamplerConfig::default()).unwrap().cov()
}

/// Even index: physical by construction. Odd index: pushed off the cone by
/// noise, a uniform shrink (which can leave the bare polynomial satisfied),
/// or a diagonal shift.
fn sweep_sample(index: usize) -> CovarianceMatrix {
    let mut r = rng(1, index);
    let v = *physical(&mut r).matrix();
    if index.is_multiple_of(2) {
        return CovarianceMatrix::from_matrix(v, TOL).unwrap();
    }
    let m = match r.random_range(0..3) {
        0 => {
            let eps = 10f64.powf(r.random_range(-5.0..0.0)) * v.scale();
            let g = Mat4::from_rows(std::array::from_fn(|_| std::array::from_fn(|_| StandardNormal.sample(&mut r))));
            v + (g + g.transpose()) * (0.5 * eps)
        }
        1 => v * r.random_range(0.5..1.0),
        _ => v - Mat4::scalar(r.random_range(0.0..0.5)),
    };
    CovarianceMatrix::from_matrix(m.symmetrized(), TOL).unwrap()
}

struct Line {
    ok: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Line) -> Line {
    let start = Instant::now();
    let mut line = f();
    let elapsed = start.elapsed();
    line.detail += &format!("; {:.2} s", elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed > limit {
            line.ok = false;
            line.detail += &format!(" exceeds {} s", limit.as_secs());
        }
    }
    line
}

fn criterion_1() -> Line {
    let n = 100_000;
    let rows: Vec<(bool, bool, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let v = sweep_sample(i);
            let psd = is_physical_psd(&v, TOL);
            let inv = is_physical_invariant(&v, TOL);
            let banded = psd.margin.abs() <= BAND || inv.residual.abs() <= BAND;
            (psd.ok, banded, !banded && psd.ok != inv.ok)
        })
        .collect();
    let physical = rows.iter().filter(|r| r.0).count();
    let banded = rows.iter().filter(|r| r.1).count();
    let disagree = rows.iter().filter(|r| r.2).count();
    Line {
        ok: disagree == 0,
        detail: format!("{n} matrices, {physical} physical, {banded} in band, {disagree} disagreements"),
    }
}

fn criterion_2() -> Line {
    let n = 100_000;
    let rows: Vec<(bool, bool, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let v = sweep_sample(i);
            let phys = is_physical_psd(&v, TOL);
            let mirror = ppt_psd(&v, TOL);
            let tilde = ppt_psd_tilde(&v, TOL);
            let phys_inv = is_physical_invariant(&v, TOL);
            let mirror_inv = ppt_invariant(&v, TOL);
            let banded = [phys.margin, mirror.margin, phys_inv.residual, mirror_inv.residual]
                .iter()
                .any(|x| x.abs() <= BAND);
            let disagree = !banded && (phys.ok && mirror.ok) != (phys_inv.ok && mirror_inv.ok);
            (mirror != tilde, banded, disagree)
        })
        .collect();
    let forms = rows.iter().filter(|r| r.0).count();
    let banded = rows.iter().filter(|r| r.1).count();
    let disagree = rows.iter().filter(|r| r.2).count();
    Line {
        ok: forms == 0 && disagree == 0,
        detail: format!(
            "{n} matrices, {banded} in band, {disagree} matrix/invariant disagreements, {forms} differences between the two matrix forms"
        ),
    }
}

fn rel(x: f64, y: f64, scale: f64) -> f64 {
    (x - y).abs() / x.abs().max(scale)
}

fn criterion_3() -> Line {
    let n = 1000;
    let worst: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(3, i);
            let v = physical(&mut r);
            let local = random_local_with(&mut r, SamplerConfig::default());
            let w = v.transform_local(&local);
            let (p, q): (Invariants, Invariants) = (v.invariants(), w.invariants());
            let s = v.matrix().max_abs();
            let drift = [
                rel(p.i1, q.i1, s * s),
                rel(p.i2, q.i2, s * s),
                rel(p.i3, q.i3, s * s),
                rel(p.i4, q.i4, s.powi(4)),
                rel(p.detv, q.detv, s.powi(4)),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            let identity = (p.detv - (p.i1 * p.i2 + p.i3 * p.i3 - p.i4)).abs() / v.scale().powi(4);
            (drift, identity)
        })
        .collect();
    let drift = worst.iter().map(|w| w.0).fold(0.0, f64::max);
    let identity = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    Line {
        ok: drift <= 1e-8 && identity <= 1e-10,
        detail: format!("{n} pairs, worst relative drift {drift:.2e}, worst determinant identity defect {identity:.2e}"),
    }
}

fn criterion_4() -> Line {
    let mut ok = true;
    let mut worst_ppt = 0.0f64;
    let mut worst_phys = 0.0f64;
    for r in [0.1f64, 0.25, 0.5, 1.0, 2.0] {
        let v = *two_mode_squeezed(r).unwrap().cov();
        let expected = -0.25 * (2.0 * r).sinh().powi(2);
        let ppt = ppt_invariant(&v, TOL).residual;
        let phys = is_physical_invariant(&v, TOL).residual;
        worst_ppt = worst_ppt.max(((ppt - expected) / expected).abs());
        worst_phys = worst_phys.max(phys.abs() / v.scale());
        ok &= ((ppt - expected) / expected).abs() <= 1e-9;
        ok &= phys.abs() <= 1e-9 * v.scale();
        ok &= decide(&v, TOL).kind == VerdictKind::Entangled;
    }
    let zero = decide(vacuum().cov(), TOL);
    let zero_ok = zero.kind == VerdictKind::Separable && zero.marginal;
    let tmsv_zero = decide(two_mode_squeezed(0.0).unwrap().cov(), TOL);
    let zero_ok = zero_ok && tmsv_zero.kind == VerdictKind::Separable && tmsv_zero.marginal;
    Line {
        ok: ok && zero_ok,
        detail: format!(
            "r in {{0.1, 0.25, 0.5, 1, 2}} entangled, worst ppt relative error {worst_ppt:.2e}, worst physical residual/scale {worst_phys:.2e}; r = 0 separable and marginal: {zero_ok}"
        ),
    }
}

/// Random physical `V` with `det C ≥ 0`; a draw with `det C < 0` is replaced
/// by its mirror image when that is physical and redrawn otherwise.
fn certifiable(r: &mut ChaCha8Rng) -> CovarianceMatrix {
    loop {
        let v = physical(r);
        if v.invariants().i3 >= 0.0 {
            return v;
        }
        let m = v.mirror_reflect();
        if is_physical_psd(&m, TOL).ok {
            return m;
        }
    }
}

fn criterion_5() -> Line {
    let n = 1000;
    let rows: Vec<(bool, f64, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let v = certifiable(&mut rng(5, i));
            match certify_separable(&v, TOL) {
                Ok(cert) => {
                    let shifted = (*cert.final_v.matrix() - Mat4::scalar(0.5)).symmetrized();
                    let min = sym_eigen(&shifted, TOL).unwrap().min();
                    let symplectic = cert
                        .locals
                        .iter()
                        .all(|l| is_symplectic2(l.alice(), 1e-10) && is_symplectic2(l.bob(), 1e-10));
                    (true, min, symplectic)
                }
                Err(_) => (false, f64::NEG_INFINITY, false),
            }
        })
        .collect();
    let failed = rows.iter().filter(|r| !r.0).count();
    let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let non_symplectic = rows.iter().filter(|r| !r.2).count();
    Line {
        ok: failed == 0 && min >= -1e-9 && non_symplectic == 0,
        detail: format!(
            "{n} states, {failed} certificates failed, min eigenvalue of V' - I/2 {min:.3e}, {non_symplectic} with non-symplectic factors"
        ),
    }
}

fn criterion_6() -> Line {
    let n = 10_000;
    let opts = DecideOptions { tol: TOL, gaussian: true, witness_budget: None };
    let rows: Vec<Option<bool>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let v = physical(&mut rng(6, i));
            let margin = ppt_psd(&v, TOL).margin;
            if margin.abs() <= BAND {
                return None;
            }
            let expected = if margin > 0.0 { VerdictKind::Separable } else { VerdictKind::Entangled };
            Some(decide_with(&v, &opts).kind != expected)
        })
        .collect();
    let banded = rows.iter().filter(|r| r.is_none()).count();
    let mismatches = rows.iter().filter(|r| **r == Some(true)).count();
    let entangled = (0..n).filter(|&i| ppt_psd(&physical(&mut rng(6, i)), TOL).margin < 0.0).count();
    Line {
        ok: mismatches == 0,
        detail: format!("{n} states ({entangled} entangled), {banded} in band, {mismatches} mismatches"),
    }
}

fn random_vector(r: &mut ChaCha8Rng) -> Vector<4> {
    std::array::from_fn(|_| StandardNormal.sample(r))
}

fn criterion_7() -> Line {
    let n = 1000;
    let rows: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let k = 1 + i % 5;
            let state = random_separable(SEED + i as u64, k).unwrap();
            let v = state.cov();
            let commuting = check_commuting_pair_bound(v) - 4.0;
            let mut r = rng(7, i);
            let worst = (0..100)
                .map(|_| {
                    let (d, dp) = (random_vector(&mut r), random_vector(&mut r));
                    let u = uncertainty_sum(v, &d, &dp);
                    u.sum - u.separable_bound
                })
                .fold(f64::INFINITY, f64::min);
            (commuting, worst)
        })
        .collect();
    let commuting = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let slack = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Line {
        ok: commuting >= -1e-9 && slack >= -1e-9,
        detail: format!(
            "{n} separable states, min commuting-pair sum - 4 = {commuting:.3e}, min sum - separable bound over 10^5 pairs = {slack:.3e}"
        ),
    }
}

fn criterion_8() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [0.5f64, 1.0] {
        let v = *two_mode_squeezed(r).unwrap().cov();
        let target = 2.0 - 2.0 * (-2.0 * r).exp();
        let found = find_witness(&v, 2000).map_or(f64::NEG_INFINITY, |w| w.violation);
        ok &= found >= target - 1e-6;
        parts.push(format!("r = {r}: violation {found:.12} vs {target:.12}"));
    }
    Line { ok, detail: parts.join(", ") }
}

fn criterion_9() -> Line {
    let n = 1000;
    let rows: Vec<Option<(f64, f64, bool)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let v = physical(&mut rng(9, i));
            let sf = to_standard_form(&v, TOL).unwrap();
            let recon = sf.reconstruction_error / v.scale();
            let reduced = v.transform_local(&sf.to_standard);
            let (da, db) = (v.a().determinant().sqrt(), v.b().determinant().sqrt());
            let diag = reduced.matrix().diagonal();
            let ab = [
                (sf.a - da).abs(),
                (sf.b - db).abs(),
                (diag[0] - da).abs(),
                (diag[1] - da).abs(),
                (diag[2] - db).abs(),
                (diag[3] - db).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            let det_c = v.invariants().i3;
            if det_c.abs() <= 1e-9 * v.scale().powi(2) {
                return None;
            }
            let sign_ok = (sf.c1 * sf.c2).signum() == det_c.signum();
            Some((recon, ab, sign_ok))
        })
        .collect();
    let skipped = rows.iter().filter(|r| r.is_none()).count();
    let rows: Vec<_> = rows.into_iter().flatten().collect();
    let recon = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let ab = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let signs = rows.iter().filter(|r| !r.2).count();
    Line {
        ok: recon <= 1e-9 && ab <= 1e-10 && signs == 0,
        detail: format!(
            "{n} states ({skipped} with det C at zero), worst reconstruction/scale {recon:.2e}, worst (a, b) error {ab:.2e}, {signs} sign mismatches"
        ),
    }
}

fn criterion_10() -> Line {
    let n = 1_000_000;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, state) in [("vacuum", vacuum()), ("TMSV(0.5)", two_mode_squeezed(0.5).unwrap())] {
        let est = sample_moments(&state, n, SEED).unwrap();
        let z = est.max_z_score(state.cov().matrix());
        ok &= z < 5.0;
        parts.push(format!("{name}: max z = {z:.2}"));
    }
    Line { ok, detail: format!("n = {n}, {}", parts.join(", ")) }
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Line); 10] = [
        ("uncertainty principle: matrix and invariant routes agree", Some(30), criterion_1),
        ("partial transpose: matrix and invariant routes agree", None, criterion_2),
        ("local invariants are invariant", None, criterion_3),
        ("two-mode squeezed vacuum closed forms", None, criterion_4),
        ("separability certificates", None, criterion_5),
        ("decision matches partial-transpose margin", None, criterion_6),
        ("separable uncertainty-sum bounds", None, criterion_7),
        ("witness strength on squeezed vacuum", None, criterion_8),
        ("standard form", None, criterion_9),
        ("Monte-Carlo moments", Some(20), criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let line = timed(limit.map(Duration::from_secs), run);
        failed += usize::from(!line.ok);
        println!("{} [{}] {name}: {}", if line.ok { "PASS" } else { "FAIL" }, k + 1, line.detail);
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
