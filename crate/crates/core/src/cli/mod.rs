//! Command-line front end. Every command is a plain function from input text
//! and options to an [`Outcome`], so the binary only parses arguments, reads
//! input and prints.
//!
//! Exit codes: `0` separable, `1` entangled, `2` unphysical, `3` bad input.
//! `selftest` exits `0` on success and `1` on any failed check.

pub mod statefile;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::covariance::{
    is_physical_invariant, standard_inequalities, to_standard_form, uncertainty_sum, CovarianceMatrix,
};
use crate::matcore::{Mat2, DEFAULT_TOL};
use crate::selftest::{self, SelftestConfig};
use crate::separability::{
    decide_with, find_witness, Certificate, CertificateBranch, DecideOptions, Verdict, VerdictKind, WitnessPair,
    DEFAULT_WITNESS_BUDGET,
};
use crate::states::{self, GaussianState};
use crate::wigner::{partial_transpose_eval, peak_value, sample_moments, wigner_eval, PhasePoint};

pub use statefile::{to_pretty_json, Convention, InputError, StateFile};

pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cvsep", version, about = "Separability of two-mode Gaussian states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, clap::Args)]
pub struct GlobalOptions {
    /// Absolute tolerance, scaled by the largest matrix entry.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Treat the input as a Gaussian state. With `false` a passing state is
    /// only reported as PPT-consistent.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub gaussian: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_WITNESS_BUDGET)]
    pub witness_budget: usize,
}

impl Default for GlobalOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, seed: 0, json: false, gaussian: true, witness_budget: DEFAULT_WITNESS_BUDGET }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide separability of a state file.
    Check {
        /// State file; stdin when absent or `-`.
        input: Option<PathBuf>,
        /// Also search for an uncertainty-sum witness when entangled.
        #[arg(long)]
        witness: bool,
    },
    /// Reduce to standard form by local symplectic maps.
    Reduce { input: Option<PathBuf> },
    /// Write a state file: vacuum, thermal, tmsv, random-physical, random-separable.
    Generate {
        name: String,
        /// Parameters as key=value, e.g. `r=0.5` or `n1=1 n2=0.2`.
        params: Vec<String>,
    },
    /// Search for an uncertainty-sum entanglement witness.
    Witness { input: Option<PathBuf> },
    /// Evaluate the Wigner function and its partial transpose, or check
    /// sampled moments.
    Wigner {
        input: Option<PathBuf>,
        /// Phase-space point `q1,p1,q2,p2`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        at: Option<Vec<f64>>,
        /// Number of Monte-Carlo samples for a moment check.
        #[arg(long)]
        moments: Option<usize>,
    },
    /// Randomized cross-checks of the library.
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SAMPLES)]
        samples: usize,
    },
}

/// Result of a command: exit code and the text for each stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self { code, stdout, stderr: String::new() }
    }

    fn input_error(err: impl std::fmt::Display) -> Self {
        Self { code: EXIT_INPUT_ERROR, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

/// Reads a file, or stdin for `None` and `-`.
pub fn read_input(path: Option<&PathBuf>) -> Result<String, InputError> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(std::fs::read_to_string(p)?),
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

/// Parses arguments already handled by clap and runs the command.
pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let with_input = |path: &Option<PathBuf>, f: &dyn Fn(&str) -> Outcome| match read_input(path.as_ref()) {
        Ok(text) => f(&text),
        Err(e) => Outcome::input_error(e),
    };
    match &cli.command {
        Command::Check { input, witness } => with_input(input, &|t| check(t, g, *witness)),
        Command::Reduce { input } => with_input(input, &|t| reduce(t, g)),
        Command::Generate { name, params } => generate(name, params, g),
        Command::Witness { input } => with_input(input, &|t| witness(t, g)),
        Command::Wigner { input, at, moments } => with_input(input, &|t| wigner(t, g, at.as_deref(), *moments)),
        Command::Selftest { samples } => run_selftest(*samples, g),
    }
}

fn load(text: &str, tol: f64) -> Result<(StateFile, CovarianceMatrix), InputError> {
    let file = StateFile::parse(text)?;
    let cov = file.covariance(tol)?;
    Ok((file, cov))
}

fn mat_json<const N: usize>(m: &crate::matcore::Matrix<N>) -> Value {
    Value::Array(m.rows().iter().map(|r| json!(r.as_slice())).collect())
}

fn certificate_json(c: &Certificate) -> Value {
    let branch = match c.branch {
        CertificateBranch::PositiveDetC { x, y, rotation_angle } => {
            json!({"kind": "positive-det-c", "x": x, "y": y, "rotation_angle": rotation_angle})
        }
        CertificateBranch::ZeroDetC => json!({"kind": "zero-det-c"}),
        CertificateBranch::Classical => json!({"kind": "classical"}),
    };
    let locals: Vec<Value> =
        c.locals.iter().map(|l| json!({"alice": mat_json(l.alice()), "bob": mat_json(l.bob())})).collect();
    json!({
        "mirrored": c.mirrored,
        "branch": branch,
        "locals": locals,
        "final_cov": mat_json(c.final_v.matrix()),
        "classical_margin": c.classical_margin,
        "kappa": c.kappa.map(|k| json!([k.plus, k.plus_prime, k.minus, k.minus_prime])),
    })
}

fn witness_json(w: &WitnessPair) -> Value {
    json!({"d": w.d, "d_prime": w.dp, "violation": w.violation})
}

fn verdict_json(v: &Verdict, cov: &CovarianceMatrix) -> Value {
    let inv = cov.invariants();
    json!({
        "verdict": v.label(),
        "exit_code": v.kind.exit_code(),
        "marginal": v.marginal,
        "gaussian": v.gaussian,
        "invariants": {"i1": inv.i1, "i2": inv.i2, "i3": inv.i3, "i4": inv.i4, "det_v": inv.detv},
        "physical_margin": v.physical_margin,
        "physical_residual": is_physical_invariant(cov, DEFAULT_TOL).residual,
        "ppt_residual": v.ppt_residual,
        "certificate": v.certificate.as_ref().map(certificate_json),
        "witness": v.witness.as_ref().map(witness_json),
    })
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e6).contains(&x.abs()) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_f64(*x)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_mat2(m: &Mat2) -> String {
    format!("[{}, {}]", fmt_vec(&m.rows()[0]), fmt_vec(&m.rows()[1]))
}

fn verdict_text(v: &Verdict, cov: &CovarianceMatrix, tol: f64) -> String {
    let inv = cov.invariants();
    let mut out = format!("verdict: {}\n", v.label());
    out += &format!("marginal: {}\n", v.marginal);
    let lines = [
        ("I1 = det A", inv.i1),
        ("I2 = det B", inv.i2),
        ("I3 = det C", inv.i3),
        ("I4", inv.i4),
        ("det V", inv.detv),
        ("physical margin", v.physical_margin),
        ("physical residual", is_physical_invariant(cov, tol).residual),
        ("ppt residual", v.ppt_residual),
    ];
    for (name, x) in lines {
        out += &format!("{name}: {}\n", fmt_f64(x));
    }
    if let Some(c) = &v.certificate {
        out += &format!(
            "certificate: {} local maps{}, classical margin {}\n",
            c.locals.len(),
            if c.mirrored { " on the mirror image" } else { "" },
            fmt_f64(c.classical_margin)
        );
    }
    if let Some(w) = &v.witness {
        out += &witness_text(w);
    }
    out
}

fn witness_text(w: &WitnessPair) -> String {
    format!("witness d: {}\nwitness d': {}\nwitness violation: {}\n", fmt_vec(&w.d), fmt_vec(&w.dp), fmt_f64(w.violation))
}

pub fn check(text: &str, g: &GlobalOptions, witness: bool) -> Outcome {
    let (_, cov) = match load(text, g.tol) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error(e),
    };
    let opts = DecideOptions { tol: g.tol, gaussian: g.gaussian, witness_budget: witness.then_some(g.witness_budget) };
    let verdict = decide_with(&cov, &opts);
    let out = if g.json {
        to_pretty_json(&verdict_json(&verdict, &cov))
    } else {
        verdict_text(&verdict, &cov, g.tol)
    };
    Outcome::ok(verdict.kind.exit_code(), out)
}

pub fn reduce(text: &str, g: &GlobalOptions) -> Outcome {
    let (_, cov) = match load(text, g.tol) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error(e),
    };
    let phys = crate::covariance::is_physical_psd(&cov, g.tol);
    if !phys.ok {
        let msg = format!("unphysical: physical margin {}\n", fmt_f64(phys.margin));
        return Outcome { code: VerdictKind::Unphysical.exit_code(), stdout: msg, stderr: String::new() };
    }
    let sf = match to_standard_form(&cov, g.tol) {
        Ok(sf) => sf,
        Err(e) => return Outcome { code: VerdictKind::Unphysical.exit_code(), stdout: format!("{e}\n"), stderr: String::new() },
    };
    let res = standard_inequalities(&sf);
    let out = if g.json {
        let v = json!({
            "a": sf.a, "b": sf.b, "c1": sf.c1, "c2": sf.c2,
            "alice": mat_json(sf.to_standard.alice()),
            "bob": mat_json(sf.to_standard.bob()),
            "reconstruction_error": sf.reconstruction_error,
            "physical_residual": res.physical_residual,
            "ppt_residual": res.ppt_residual,
        });
        to_pretty_json(&v)
    } else {
        format!(
            "a: {}\nb: {}\nc1: {}\nc2: {}\nS_A: {}\nS_B: {}\nreconstruction error: {}\nphysical residual: {}\nppt residual: {}\n",
            fmt_f64(sf.a),
            fmt_f64(sf.b),
            fmt_f64(sf.c1),
            fmt_f64(sf.c2),
            fmt_mat2(sf.to_standard.alice()),
            fmt_mat2(sf.to_standard.bob()),
            fmt_f64(sf.reconstruction_error),
            fmt_f64(res.physical_residual),
            fmt_f64(res.ppt_residual)
        )
    };
    Outcome::ok(0, out)
}

fn parse_params(params: &[String], allowed: &[&str]) -> Result<Vec<(String, f64)>, String> {
    params
        .iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("expected key=value, got `{p}`"))?;
            if !allowed.contains(&k) {
                return Err(format!("unknown parameter `{k}`; expected one of {allowed:?}"));
            }
            let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
            Ok((k.to_string(), x))
        })
        .collect()
}

fn param(values: &[(String, f64)], key: &str, default: f64) -> f64 {
    values.iter().rev().find(|(k, _)| k == key).map_or(default, |(_, v)| *v)
}

/// Builds a named state. Parameters are `key=value` strings.
pub fn generate_state(name: &str, params: &[String], seed: u64) -> Result<GaussianState, String> {
    let allowed: &[&str] = match name {
        "vacuum" => &[],
        "thermal" => &["n1", "n2"],
        "tmsv" => &["r"],
        "random-physical" => &["mixedness"],
        "random-separable" => &["k"],
        _ => return Err(format!("unknown state `{name}`")),
    };
    let p = parse_params(params, allowed)?;
    let state = match name {
        "vacuum" => Ok(states::vacuum()),
        "thermal" => states::thermal(param(&p, "n1", 0.0), param(&p, "n2", 0.0)),
        "tmsv" => states::two_mode_squeezed(param(&p, "r", 0.5)),
        "random-physical" => states::random_physical(seed, param(&p, "mixedness", 1.0)),
        _ => {
            let k = param(&p, "k", 3.0);
            if k.fract() != 0.0 || k < 1.0 {
                return Err(format!("k must be a positive integer, got {k}"));
            }
            states::random_separable(seed, k as usize)
        }
    };
    state.map_err(|e| e.to_string())
}

pub fn generate(name: &str, params: &[String], g: &GlobalOptions) -> Outcome {
    match generate_state(name, params, g.seed) {
        Ok(state) => Outcome::ok(0, StateFile::from_state(&state).to_json()),
        Err(e) => Outcome::input_error(e),
    }
}

pub fn witness(text: &str, g: &GlobalOptions) -> Outcome {
    let (_, cov) = match load(text, g.tol) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error(e),
    };
    let verdict = decide_with(&cov, &DecideOptions { tol: g.tol, gaussian: g.gaussian, witness_budget: None });
    let found = match verdict.kind {
        VerdictKind::Entangled => find_witness(&cov, g.witness_budget),
        _ => None,
    };
    let out = if g.json {
        let mut v = json!({"verdict": verdict.label(), "witness": found.as_ref().map(witness_json)});
        if let Some(w) = &found {
            let u = uncertainty_sum(&cov, &w.d, &w.dp);
            v["sum"] = json!(u.sum);
            v["separable_bound"] = json!(u.separable_bound);
        }
        to_pretty_json(&v)
    } else {
        let mut s = format!("verdict: {}\n", verdict.label());
        match &found {
            Some(w) => s += &witness_text(w),
            None if verdict.kind == VerdictKind::Entangled => s += "no witness found within budget\n",
            None => s += "no witness: the uncertainty sums of this state respect the separable bound\n",
        }
        s
    };
    Outcome::ok(verdict.kind.exit_code(), out)
}

pub fn wigner(text: &str, g: &GlobalOptions, at: Option<&[f64]>, moments: Option<usize>) -> Outcome {
    let (file, cov) = match load(text, g.tol) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error(e),
    };
    let state = match GaussianState::new(file.mean_or_zero(), cov, g.tol) {
        Ok(s) => s,
        Err(e) => return Outcome::ok(VerdictKind::Unphysical.exit_code(), format!("{e}\n")),
    };
    let mut report = json!({"peak": peak_value(&state)});
    if let Some(xi) = at {
        let Ok(xi) = <[f64; 4]>::try_from(xi) else {
            return Outcome::input_error(format!("--at needs 4 coordinates, got {}", xi.len()));
        };
        let point = match PhasePoint::new(xi) {
            Ok(p) => p,
            Err(e) => return Outcome::input_error(e),
        };
        let (w, pt) = match (wigner_eval(&state, &point), partial_transpose_eval(&state, &point)) {
            (Ok(w), Ok(pt)) => (w, pt),
            (Err(e), _) | (_, Err(e)) => return Outcome::input_error(e),
        };
        report["point"] = json!(point.0);
        report["wigner"] = json!(w);
        report["partial_transpose"] = json!(pt);
    }
    let mut code = 0;
    if let Some(n) = moments {
        let est = match sample_moments(&state, n, g.seed) {
            Ok(e) => e,
            Err(e) => return Outcome::input_error(e),
        };
        let z = est.max_z_score(state.cov().matrix());
        if !(z < 5.0) {
            code = 1;
        }
        report["samples"] = json!(n);
        report["empirical_cov"] = mat_json(&est.empirical_cov);
        report["max_z_score"] = json!(z);
    }
    let out = if g.json {
        to_pretty_json(&report)
    } else {
        let mut s = format!("peak: {}\n", report["peak"]);
        for key in ["wigner", "partial_transpose", "samples", "max_z_score"] {
            if !report[key].is_null() {
                s += &format!("{}: {}\n", key.replace('_', " "), report[key]);
            }
        }
        s
    };
    Outcome::ok(code, out)
}

pub fn run_selftest(samples: usize, g: &GlobalOptions) -> Outcome {
    selftest_with(&SelftestConfig { samples, seed: g.seed, tol: g.tol, ..SelftestConfig::default() }, g.json)
}

/// `selftest` with a full configuration, including the reflection used by the
/// partial-transpose matrix route.
pub fn selftest_with(cfg: &SelftestConfig, json: bool) -> Outcome {
    let report = selftest::run(cfg);
    let code = i32::from(!report.passed());
    let out = if json {
        let suites: Vec<Value> = report
            .suites
            .iter()
            .map(|s| {
                json!({"name": s.name, "passed": s.passed(), "checked": s.checked,
                       "skipped": s.skipped, "failures": s.failures, "worst": s.worst})
            })
            .collect();
        to_pretty_json(&json!({"passed": report.passed(), "suites": suites}))
    } else {
        let mut s = String::new();
        for r in &report.suites {
            s += &format!(
                "{} {}: checked {}, skipped {}, failures {}, worst {:e}\n",
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                r.checked,
                r.skipped,
                r.failures,
                r.worst
            );
        }
        s += if report.passed() { "selftest passed\n" } else { "selftest FAILED\n" };
        s
    };
    Outcome::ok(code, out)
}
