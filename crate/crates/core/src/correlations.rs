//! Quantum discord, one-way deficit and the relations between them.
//!
//! Both measures minimize an entropy objective over the measured basis:
//!
//! * `F(theta, phi) = S(rho^A) + sum_k p_k S(rho^B|k) - S(rho^AB)` (discord)
//! * `G(theta, phi) = S(sum_k M_k rho M_k) - S(rho^AB)` (deficit)
//!
//! Their difference `G - F = h(p_0) - S(rho^A)` does not depend on phi, and
//! both depend on phi only through `R`, which is extremal at phi in {0, pi/2}.
//! The fast optimizer therefore scans theta on [0, pi/2] for those two phis;
//! [`grid_oracle`] checks that reduction on the full sphere.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QcorrError, Result};
use crate::measure::{
    avg_conditional_entropy, dg_dtheta, explicit_avg_conditional_entropy,
    explicit_post_measurement_entropy, h_theta, outcome_probabilities, post_measurement_entropy,
    MeasurementBasis,
};
use crate::qmat::{
    h2, partial_trace, von_neumann_entropy, x_state_from_params, Subsystem, XParams,
};

/// Number of theta samples on [0, pi/2] before refinement.
pub const THETA_GRID_POINTS: usize = 1001;
/// Golden-section bracket width at which refinement stops.
pub const GOLDEN_TOL: f64 = 1e-10;
/// Objective differences below this count as ties (smallest theta wins).
pub const FLAT_TOL: f64 = 1e-12;
/// |a| at or below this selects the a = 0 branch.
pub const A_ZERO_TOL: f64 = 1e-12;
/// Argmin distance (radians) to 0 or pi/2 for the theta branches.
pub const BRANCH_THETA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    /// discord objective
    F,
    /// deficit objective
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerMethod {
    Grid,
    GoldenRefined,
    DerivativeRoot,
}

/// Minimized objective value together with its argmin basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub value: f64,
    pub theta_star: f64,
    pub phi_star: f64,
    pub method: OptimizerMethod,
    pub evaluations: usize,
}

impl Optimum {
    pub fn basis(&self) -> MeasurementBasis {
        MeasurementBasis::new(self.theta_star, self.phi_star)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremBranch {
    AZero,
    ThetaZero,
    ThetaHalfPi,
    None,
}

impl TheoremBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremBranch::AZero => "a_zero",
            TheoremBranch::ThetaZero => "theta_zero",
            TheoremBranch::ThetaHalfPi => "theta_half_pi",
            TheoremBranch::None => "none",
        }
    }
}

/// Entropies of the state and its marginals, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateEntropies {
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub entropy_ab: f64,
}

impl StateEntropies {
    pub fn of(p: &XParams) -> Result<Self> {
        let rho = x_state_from_params(p)?;
        Ok(StateEntropies {
            entropy_a: h2(0.5 * (1.0 + p.a)),
            entropy_b: h2(0.5 * (1.0 + p.b)),
            entropy_ab: von_neumann_entropy(&rho)?,
        })
    }

    pub fn mutual_information(&self) -> f64 {
        self.entropy_a + self.entropy_b - self.entropy_ab
    }
}

/// Everything computed for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub params: XParams,
    pub discord: Optimum,
    pub deficit: Optimum,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub entropy_ab: f64,
    pub theorem_branch: TheoremBranch,
    /// `None` when no theorem branch applies.
    pub relation_residual: Option<f64>,
}

/// Both objectives for one fixed state, with the basis-independent entropies cached.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Landscape {
    params: XParams,
    entropies: StateEntropies,
}

impl Landscape {
    pub(crate) fn new(p: &XParams) -> Result<Self> {
        Ok(Landscape {
            params: *p,
            entropies: StateEntropies::of(p)?,
        })
    }

    fn f(&self, theta: f64, phi: f64) -> Result<f64> {
        let cond = avg_conditional_entropy(&self.params, &MeasurementBasis::new(theta, phi))?;
        Ok(self.entropies.entropy_a + cond - self.entropies.entropy_ab)
    }

    fn g(&self, theta: f64, phi: f64) -> Result<f64> {
        let post = post_measurement_entropy(&self.params, &MeasurementBasis::new(theta, phi))?;
        Ok(post - self.entropies.entropy_ab)
    }

    fn eval(&self, which: Objective, theta: f64, phi: f64) -> Result<f64> {
        match which {
            Objective::F => self.f(theta, phi),
            Objective::G => self.g(theta, phi),
        }
    }

    fn derivative(&self, which: Objective, theta: f64, phi: f64) -> Result<f64> {
        let dg = dg_dtheta(&self.params, &MeasurementBasis::new(theta, phi))?;
        match which {
            Objective::G => Ok(dg),
            Objective::F => Ok(dg - gap_derivative(&self.params, theta)?),
        }
    }
}

/// F(theta, phi): the discord objective at a fixed basis.
pub fn objective_f(p: &XParams, theta: f64, phi: f64) -> Result<f64> {
    Landscape::new(p)?.f(theta, phi)
}

/// G(theta, phi): the deficit objective at a fixed basis.
pub fn objective_g(p: &XParams, theta: f64, phi: f64) -> Result<f64> {
    Landscape::new(p)?.g(theta, phi)
}

/// The gap H(theta) = G - F = h(p_0) - S(rho^A), independent of phi.
#[derive(Debug, Clone, Copy)]
pub struct GapFunction {
    params: XParams,
}

impl GapFunction {
    pub fn new(p: &XParams) -> Self {
        GapFunction { params: *p }
    }

    pub fn value(&self, theta: f64) -> f64 {
        let (p0, _) = outcome_probabilities(&self.params, theta);
        h2(p0) - h2(0.5 * (1.0 + self.params.a))
    }

    pub fn derivative(&self, theta: f64) -> Result<f64> {
        gap_derivative(&self.params, theta)
    }
}

/// dH/dtheta = (a/2) sin(theta) log2[(1 + a cos theta)/(1 - a cos theta)].
pub fn gap_derivative(p: &XParams, theta: f64) -> Result<f64> {
    let x = p.a * theta.cos();
    if x.abs() >= 1.0 {
        return Err(QcorrError::InfiniteSlope);
    }
    Ok(0.5 * p.a * theta.sin() * ((1.0 + x) / (1.0 - x)).log2())
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_section(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Bisection on a derivative that is negative at `lo` and positive at `hi`.
fn derivative_root(d: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Option<f64> {
    let dlo = d(lo).ok()?;
    let dhi = d(hi).ok()?;
    if !(dlo < 0.0 && dhi > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match d(mid).ok()? {
            x if x < 0.0 => lo = mid,
            x if x > 0.0 => hi = mid,
            _ => return Some(mid),
        }
    }
    Some(0.5 * (lo + hi))
}

/// Grid scan over theta in [0, pi/2] at phi in {0, pi/2}, refined by golden
/// section and, where the analytic derivative is regular, by derivative bisection.
pub(crate) fn minimize_over_theta(
    value: impl Fn(f64, f64) -> Result<f64>,
    derivative: impl Fn(f64, f64) -> Result<f64>,
) -> Result<Optimum> {
    let evaluations = Cell::new(0usize);
    let eval = |theta: f64, phi: f64| {
        evaluations.set(evaluations.get() + 1);
        value(theta, phi)
    };
    let step = FRAC_PI_2 / (THETA_GRID_POINTS - 1) as f64;
    let theta_at = |i: usize| {
        if i == THETA_GRID_POINTS - 1 {
            FRAC_PI_2
        } else {
            i as f64 * step
        }
    };

    let mut best: Option<Optimum> = None;
    for phi in [0.0, FRAC_PI_2] {
        let values = (0..THETA_GRID_POINTS)
            .map(|i| eval(theta_at(i), phi))
            .collect::<Result<Vec<f64>>>()?;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let idx = values
            .iter()
            .position(|&v| v <= min + FLAT_TOL)
            .expect("non-empty grid");
        let mut cand = Optimum {
            value: values[idx],
            theta_star: theta_at(idx),
            phi_star: phi,
            method: OptimizerMethod::Grid,
            evaluations: 0,
        };

        let lo = theta_at(idx.saturating_sub(1));
        let hi = theta_at((idx + 1).min(THETA_GRID_POINTS - 1));
        let (tg, vg) = golden_section(|t| eval(t, phi), lo, hi, GOLDEN_TOL)?;
        if vg < cand.value - FLAT_TOL {
            cand.value = vg;
            cand.theta_star = tg;
            cand.method = OptimizerMethod::GoldenRefined;
        }
        if let Some(td) = derivative_root(|t| derivative(t, phi), lo, hi) {
            let vd = eval(td, phi)?;
            if vd < values[idx] - FLAT_TOL && vd <= cand.value {
                cand.value = vd;
                cand.theta_star = td;
                cand.method = OptimizerMethod::DerivativeRoot;
            }
        }

        best = match best {
            Some(b) if b.value <= cand.value + FLAT_TOL => Some(b),
            _ => Some(cand),
        };
    }
    let mut best = best.expect("two phi candidates");
    best.evaluations = evaluations.get();
    Ok(best)
}

/// Minimizes F (discord) or G (deficit) over projective measurements on A.
pub fn minimize_objective(p: &XParams, which: Objective) -> Result<Optimum> {
    let land = Landscape::new(p)?;
    minimize_over_theta(
        |t, f| land.eval(which, t, f),
        |t, f| land.derivative(which, t, f),
    )
}

pub fn quantum_discord(p: &XParams) -> Result<Optimum> {
    minimize_objective(p, Objective::F)
}

pub fn one_way_deficit(p: &XParams) -> Result<Optimum> {
    minimize_objective(p, Objective::G)
}

/// I(rho) = S(rho^A) + S(rho^B) - S(rho^AB).
pub fn mutual_information(p: &XParams) -> Result<f64> {
    Ok(StateEntropies::of(p)?.mutual_information())
}

/// J = S(rho^B) - sum_k p_k S(rho^B|k) evaluated at the discord-optimal basis.
pub fn classical_correlation_at(p: &XParams, discord: &Optimum) -> Result<f64> {
    let cond = avg_conditional_entropy(p, &discord.basis())?;
    Ok(h2(0.5 * (1.0 + p.b)) - cond)
}

pub fn classical_correlation(p: &XParams) -> Result<f64> {
    classical_correlation_at(p, &quantum_discord(p)?)
}

/// Which sufficient condition for shared optima holds, and how well the
/// corresponding relation between deficit and discord is satisfied.
pub fn theorem_classify(
    p: &XParams,
    discord: &Optimum,
    deficit: &Optimum,
) -> (TheoremBranch, Option<f64>) {
    let near = |x: f64, target: f64| (x - target).abs() <= BRANCH_THETA_TOL;
    let branch = if p.a.abs() <= A_ZERO_TOL {
        TheoremBranch::AZero
    } else if near(discord.theta_star, 0.0) && near(deficit.theta_star, 0.0) {
        TheoremBranch::ThetaZero
    } else if near(discord.theta_star, FRAC_PI_2) && near(deficit.theta_star, FRAC_PI_2) {
        TheoremBranch::ThetaHalfPi
    } else {
        TheoremBranch::None
    };
    let residual = match branch {
        TheoremBranch::AZero | TheoremBranch::ThetaZero => {
            Some((deficit.value - discord.value).abs())
        }
        TheoremBranch::ThetaHalfPi => {
            let s_a = h2(0.5 * (1.0 + p.a));
            Some((deficit.value - discord.value + s_a - 1.0).abs())
        }
        TheoremBranch::None => None,
    };
    (branch, residual)
}

/// Full report for one state.
pub fn analyze(p: &XParams) -> Result<CorrelationReport> {
    let entropies = StateEntropies::of(p)?;
    let discord = quantum_discord(p)?;
    let deficit = one_way_deficit(p)?;
    let classical_correlation = classical_correlation_at(p, &discord)?;
    let (theorem_branch, relation_residual) = theorem_classify(p, &discord, &deficit);
    Ok(CorrelationReport {
        params: *p,
        discord,
        deficit,
        classical_correlation,
        mutual_information: entropies.mutual_information(),
        entropy_a: entropies.entropy_a,
        entropy_b: entropies.entropy_b,
        entropy_ab: entropies.entropy_ab,
        theorem_branch,
        relation_residual,
    })
}

/// Curvature indicator of G at theta = pi/2, phi = 0: dH_theta/dtheta by
/// central difference. The equator is a local minimum of G where this is negative.
pub fn equator_curvature(p: &XParams) -> Result<f64> {
    const STEP: f64 = 1e-6;
    let up = h_theta(p, &MeasurementBasis::new(FRAC_PI_2 + STEP, 0.0))?;
    let down = h_theta(p, &MeasurementBasis::new(FRAC_PI_2 - STEP, 0.0))?;
    Ok((up - down) / (2.0 * STEP))
}

/// Parameter value in `[lo, hi]` at which the deficit's optimal basis leaves
/// (or reaches) the equator for a one-parameter family of states.
pub fn basis_switch_root(
    family: impl Fn(f64) -> Result<XParams>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo >= hi || tol.is_nan() || tol <= 0.0 {
        return Err(QcorrError::InvalidInput(format!(
            "bad bracket [{lo}, {hi}] or tolerance {tol}"
        )));
    }
    let curvature = |q: f64| -> Result<f64> {
        family(q)
            .and_then(|p| equator_curvature(&p))
            .map_err(|e| QcorrError::RootNotFound(format!("curvature undefined at {q}: {e}")))
    };
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = curvature(lo)?;
    let f_hi = curvature(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(QcorrError::RootNotFound(format!(
            "no sign change on [{lo}, {hi}] ({f_lo:e}, {f_hi:e})"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = curvature(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Basis-switch root of q |psi-><psi-| + (1-q)|00><00| on [0.5, 0.9].
pub fn werner_like_switch_root(tol: f64) -> Result<f64> {
    basis_switch_root(XParams::werner_like_q, 0.5, 0.9, tol)
}

/// Outcome of checking discord + C_RE(rho^A) = deficit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffCheck {
    /// relative entropy of coherence of rho^A in the shared optimal basis
    pub coherence: f64,
    pub residual: f64,
}

/// Tradeoff identity with C_RE taken in the shared optimal measurement basis.
pub fn coherence_tradeoff_check(p: &XParams) -> Result<TradeoffCheck> {
    let discord = quantum_discord(p)?;
    let deficit = one_way_deficit(p)?;
    let (branch, _) = theorem_classify(p, &discord, &deficit);
    if branch == TheoremBranch::None {
        return Err(QcorrError::NotApplicable(
            "discord and deficit do not share an optimal basis".into(),
        ));
    }
    let coherence = GapFunction::new(p).value(deficit.theta_star);
    Ok(TradeoffCheck {
        coherence,
        residual: (discord.value + coherence - deficit.value).abs(),
    })
}

/// Exhaustive minimum over theta in [0, pi] x phi in [0, 2pi] (endpoints
/// included) through explicit projectors and matrices. No phi reduction, no
/// canonicalization.
pub fn grid_oracle(p: &XParams, which: Objective, n_theta: usize, n_phi: usize) -> Result<Optimum> {
    if n_theta < 101 || n_phi < 101 {
        return Err(QcorrError::InvalidInput(format!(
            "grid oracle needs at least 101 points per axis, got {n_theta}x{n_phi}"
        )));
    }
    let rho = x_state_from_params(p)?;
    let s_ab = von_neumann_entropy(&rho)?;
    let s_a = von_neumann_entropy(&partial_trace(&rho, Subsystem::A)?)?;
    let theta_at = |i: usize| PI * i as f64 / (n_theta - 1) as f64;
    let phi_at = |j: usize| 2.0 * PI * j as f64 / (n_phi - 1) as f64;

    let rows = (0..n_theta)
        .into_par_iter()
        .map(|i| -> Result<(f64, usize)> {
            let mut best = (f64::INFINITY, 0);
            for j in 0..n_phi {
                let basis = MeasurementBasis::new(theta_at(i), phi_at(j));
                let v = match which {
                    Objective::F => s_a + explicit_avg_conditional_entropy(&rho, &basis)? - s_ab,
                    Objective::G => explicit_post_measurement_entropy(&rho, &basis)? - s_ab,
                };
                if v < best.0 - FLAT_TOL {
                    best = (v, j);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = (f64::INFINITY, 0, 0);
    for (i, &(v, j)) in rows.iter().enumerate() {
        if v < best.0 - FLAT_TOL {
            best = (v, i, j);
        }
    }
    Ok(Optimum {
        value: best.0,
        theta_star: theta_at(best.1),
        phi_star: phi_at(best.2),
        method: OptimizerMethod::Grid,
        evaluations: n_theta * n_phi,
    })
}
