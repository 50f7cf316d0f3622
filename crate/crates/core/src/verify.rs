//! Random-ensemble invariant suites behind `qcorr verify`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::channels::{
    apply_channel_both, evolve_omega, evolve_omega_kraus, phase_damping_kraus, OmegaParams,
};
use crate::correlations::{
    classical_correlation_at, objective_f, objective_g, one_way_deficit, quantum_discord,
    GapFunction, StateEntropies,
};
use crate::entanglement::eof_bc_koashi_winter;
use crate::error::{QcorrError, Result};
use crate::measure::{
    avg_conditional_entropy, conditional_spectrum, dg_dphi, dg_dtheta,
    explicit_avg_conditional_entropy, explicit_post_measurement_entropy, outcome_probabilities,
    post_measurement_entropy, MeasurementBasis,
};
use crate::qmat::{h2, hermitian_eigenvalues, x_state_from_params, XParams};
use crate::sampling::StateSampler;

pub const FD_STEP: f64 = 1e-6;
/// Denominator floor for relative gradient errors.
pub const GRADIENT_FLOOR: f64 = 1e-4;
/// Smallest post-measurement eigenvalue / distance from the poles accepted
/// as "non-singular" for the gradient suite.
pub const GRADIENT_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// parameters (and basis, if any) of the first violating sample
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str, tolerance: f64) -> Self {
        SuiteResult {
            name,
            checks: 0,
            failures: 0,
            max_residual: 0.0,
            tolerance,
            first_failure: None,
        }
    }

    fn record(&mut self, residual: f64, context: impl FnOnce() -> String) {
        self.checks += 1;
        if residual.is_nan() || residual > self.tolerance {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(context());
            }
        }
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
        }
    }

    fn error(&mut self, err: &QcorrError, context: impl FnOnce() -> String) {
        self.record(f64::NAN, || format!("{}: {err}", context()));
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerificationSummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    /// Plain-text report; identical inputs give identical bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {} samples {}", self.seed, self.samples);
        for s in &self.suites {
            let _ = writeln!(
                out,
                "{:<4} {:<22} checks {:>6} failures {:>4} max_residual {:.3e} tol {:.0e}",
                if s.passed() { "PASS" } else { "FAIL" },
                s.name,
                s.checks,
                s.failures,
                s.max_residual,
                s.tolerance
            );
            if let Some(ctx) = &s.first_failure {
                let _ = writeln!(out, "     first failure: {ctx}");
            }
        }
        let _ = writeln!(
            out,
            "{}",
            if self.all_passed() {
                "all suites passed"
            } else {
                "verification FAILED"
            }
        );
        out
    }
}

fn describe(p: &XParams) -> String {
    format!(
        "a={:?} b={:?} cx={:?} cy={:?} cz={:?}",
        p.a, p.b, p.cx, p.cy, p.cz
    )
}

fn describe_at(p: &XParams, basis: &MeasurementBasis) -> String {
    format!(
        "{} theta={:?} phi={:?}",
        describe(p),
        basis.theta,
        basis.phi
    )
}

/// S(post) = H(p) + sum_k p_k S(rho^B|k), checked on the closed-form path and
/// the explicit-matrix path.
fn joint_entropy_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("joint_entropy", 1e-10);
    for _ in 0..n {
        let p = sampler.state();
        let basis = sampler.basis();
        let residual = (|| -> Result<f64> {
            let (p0, _) = outcome_probabilities(&p, basis.theta);
            let closed = (post_measurement_entropy(&p, &basis)?
                - h2(p0)
                - avg_conditional_entropy(&p, &basis)?)
            .abs();
            let rho = x_state_from_params(&p)?;
            let explicit = (explicit_post_measurement_entropy(&rho, &basis)?
                - h2(p0)
                - explicit_avg_conditional_entropy(&rho, &basis)?)
            .abs();
            Ok(closed.max(explicit))
        })();
        match residual {
            Ok(r) => suite.record(r, || describe_at(&p, &basis)),
            Err(e) => suite.error(&e, || describe_at(&p, &basis)),
        }
    }
    suite
}

/// Closed-form entropies against the explicit projector pipeline.
fn closed_vs_explicit_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("closed_vs_explicit", 1e-10);
    for _ in 0..n {
        let p = sampler.state();
        let basis = sampler.basis();
        let residual = (|| -> Result<f64> {
            let rho = x_state_from_params(&p)?;
            let cond = (avg_conditional_entropy(&p, &basis)?
                - explicit_avg_conditional_entropy(&rho, &basis)?)
            .abs();
            let post = (post_measurement_entropy(&p, &basis)?
                - explicit_post_measurement_entropy(&rho, &basis)?)
            .abs();
            Ok(cond.max(post))
        })();
        match residual {
            Ok(r) => suite.record(r, || describe_at(&p, &basis)),
            Err(e) => suite.error(&e, || describe_at(&p, &basis)),
        }
    }
    suite
}

/// G - F = h(p0) - S(rho^A) pointwise, and 0 <= G - F <= 1.
fn gap_identity_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("gap_identity", 1e-10);
    for _ in 0..n {
        let p = sampler.state();
        let basis = sampler.basis();
        let residual = (|| -> Result<f64> {
            let gap =
                objective_g(&p, basis.theta, basis.phi)? - objective_f(&p, basis.theta, basis.phi)?;
            let identity = (gap - GapFunction::new(&p).value(basis.theta)).abs();
            let range = (-gap).max(gap - 1.0).max(0.0);
            Ok(identity.max(range))
        })();
        match residual {
            Ok(r) => suite.record(r, || describe_at(&p, &basis)),
            Err(e) => suite.error(&e, || describe_at(&p, &basis)),
        }
    }
    suite
}

/// Optimized discord <= deficit <= S(rho^A); the residual is the worst violation.
fn ordering_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("discord_deficit_order", 1e-9);
    for _ in 0..n {
        let p = sampler.state();
        let residual = (|| -> Result<f64> {
            let discord = quantum_discord(&p)?.value;
            let deficit = one_way_deficit(&p)?.value;
            let s_a = h2(0.5 * (1.0 + p.a));
            Ok((discord - deficit).max(deficit - s_a).max(0.0))
        })();
        match residual {
            Ok(r) => suite.record(r, || describe(&p)),
            Err(e) => suite.error(&e, || describe(&p)),
        }
    }
    suite
}

/// a = 0 forces equal discord and deficit.
fn a_zero_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("a_zero_equality", 1e-8);
    for _ in 0..n {
        let p = sampler.state_a_zero();
        let residual = (|| -> Result<f64> {
            Ok((one_way_deficit(&p)?.value - quantum_discord(&p)?.value).abs())
        })();
        match residual {
            Ok(r) => suite.record(r, || describe(&p)),
            Err(e) => suite.error(&e, || describe(&p)),
        }
    }
    suite
}

/// S(rho^B) = J + E_f(rho^BC) and discord = S(rho^A) + E_f(rho^BC) - S(rho^AB).
fn koashi_winter_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("koashi_winter", 1e-9);
    for _ in 0..n {
        let p = sampler.state();
        let residual = (|| -> Result<f64> {
            let s = StateEntropies::of(&p)?;
            let discord = quantum_discord(&p)?;
            let j = classical_correlation_at(&p, &discord)?;
            let ef = eof_bc_koashi_winter(&p)?;
            let first = (s.entropy_b - j - ef).abs();
            let second = (discord.value - (s.entropy_a + ef - s.entropy_ab)).abs();
            Ok(first.max(second))
        })();
        match residual {
            Ok(r) => suite.record(r, || describe(&p)),
            Err(e) => suite.error(&e, || describe(&p)),
        }
    }
    suite
}

/// Whether finite differences around `basis` stay clear of log singularities.
pub fn gradient_regular(p: &XParams, basis: &MeasurementBasis) -> bool {
    let t = basis.theta;
    if !(GRADIENT_MARGIN..=std::f64::consts::PI - GRADIENT_MARGIN).contains(&t) {
        return false;
    }
    if (p.a * t.cos()).abs() > 1.0 - GRADIENT_MARGIN {
        return false;
    }
    match conditional_spectrum(p, basis) {
        Ok(spec) => (0..2).all(|k| spec.w[k].iter().all(|&w| spec.p[k] * w > GRADIENT_MARGIN)),
        Err(_) => false,
    }
}

/// |analytic - fd| / max(|fd|, floor).
pub fn relative_error(analytic: f64, fd: f64) -> f64 {
    (analytic - fd).abs() / fd.abs().max(GRADIENT_FLOOR)
}

/// Worst relative error of dG/dtheta, dG/dphi and the gap derivative at one point.
pub fn gradient_residual(p: &XParams, basis: &MeasurementBasis) -> Result<f64> {
    let (t, f) = (basis.theta, basis.phi);
    let g = |t: f64, f: f64| post_measurement_entropy(p, &MeasurementBasis::new(t, f));
    let fd_theta = (g(t + FD_STEP, f)? - g(t - FD_STEP, f)?) / (2.0 * FD_STEP);
    let fd_phi = (g(t, f + FD_STEP)? - g(t, f - FD_STEP)?) / (2.0 * FD_STEP);
    let gap = GapFunction::new(p);
    let fd_gap = (gap.value(t + FD_STEP) - gap.value(t - FD_STEP)) / (2.0 * FD_STEP);
    Ok(relative_error(dg_dtheta(p, basis)?, fd_theta)
        .max(relative_error(dg_dphi(p, basis)?, fd_phi))
        .max(relative_error(gap.derivative(t)?, fd_gap)))
}

fn gradient_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("gradients", 1e-5);
    while suite.checks < n {
        let p = sampler.state();
        let basis = sampler.basis();
        if !gradient_regular(&p, &basis) {
            continue;
        }
        match gradient_residual(&p, &basis) {
            Ok(r) => suite.record(r, || describe_at(&p, &basis)),
            Err(e) => suite.error(&e, || describe_at(&p, &basis)),
        }
    }
    suite
}

/// Phase damping on both qubits keeps unit trace and positivity.
fn channel_validity_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("channel_validity", 1e-10);
    for _ in 0..n {
        let p = sampler.state();
        let gamma = sampler.unit();
        let residual = (|| -> Result<f64> {
            let rho = x_state_from_params(&p)?;
            let out = apply_channel_both(&rho, &phase_damping_kraus(gamma)?)?;
            let trace = (out.matrix().trace().re - 1.0).abs();
            let min_eig = hermitian_eigenvalues(out.matrix())?[3];
            Ok(trace.max(-min_eig).max(0.0))
        })();
        match residual {
            Ok(r) => suite.record(r, || format!("{} gamma={gamma:?}", describe(&p))),
            Err(e) => suite.error(&e, || format!("{} gamma={gamma:?}", describe(&p))),
        }
    }
    suite
}

/// Kraus evolution of the a = 0 family against the (1 - gamma) closed form.
fn channel_closed_form_suite(sampler: &mut StateSampler, n: usize) -> SuiteResult {
    let mut suite = SuiteResult::new("channel_closed_form", 1e-12);
    for _ in 0..n {
        let p = sampler.state_a_zero();
        let gamma = sampler.unit();
        let residual = (|| -> Result<f64> {
            let omega = OmegaParams::new(p.b, p.cx, p.cy, p.cz)?;
            let kraus = evolve_omega_kraus(&omega, gamma)?.as_array();
            let closed = evolve_omega(&omega, gamma)?.as_array();
            Ok(kraus
                .iter()
                .zip(closed)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max))
        })();
        match residual {
            Ok(r) => suite.record(r, || format!("{} gamma={gamma:?}", describe(&p))),
            Err(e) => suite.error(&e, || format!("{} gamma={gamma:?}", describe(&p))),
        }
    }
    suite
}

/// Runs every suite with `n` samples each. Each suite draws from its own
/// stream derived from `seed`, so suites are independent of each other's size.
pub fn run_verification(seed: u64, n: usize) -> Result<VerificationSummary> {
    if n == 0 {
        return Err(QcorrError::InvalidInput(
            "sample count must be at least 1".into(),
        ));
    }
    type Suite = fn(&mut StateSampler, usize) -> SuiteResult;
    let suites: [Suite; 9] = [
        joint_entropy_suite,
        closed_vs_explicit_suite,
        gap_identity_suite,
        ordering_suite,
        a_zero_suite,
        koashi_winter_suite,
        gradient_suite,
        channel_validity_suite,
        channel_closed_form_suite,
    ];
    use rayon::prelude::*;
    let results = suites
        .par_iter()
        .enumerate()
        .map(|(i, suite)| {
            let mut sampler = StateSampler::new(seed.wrapping_add(i as u64));
            suite(&mut sampler, n)
        })
        .collect();
    Ok(VerificationSummary {
        seed,
        samples: n,
        suites: results,
    })
}
