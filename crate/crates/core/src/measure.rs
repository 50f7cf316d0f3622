//! Projective measurement on subsystem A.
//!
//! The closed forms below operate on [`XParams`] directly. The `explicit_*`
//! functions build the same quantities from projectors and 4x4 matrices and
//! serve as the independent route for cross-checks and the grid oracle.

use serde::{Deserialize, Serialize};

use crate::error::{QcorrError, Result};
use crate::qmat::{
    hermitian_eigenvalues, kron, neg_xlog2x, spectrum_entropy, ComplexMatrix, DensityMatrix, Pauli,
    XParams, C64, POSITIVITY_TOL,
};

/// Outcome probabilities at or below this are treated as impossible.
pub const DEGENERATE_PROB: f64 = 1e-14;
/// Log arguments closer than this to a singularity make the analytic derivatives unavailable.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Polar and azimuthal angles of the measured basis {|0'>, |1'>}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub const fn new(theta: f64, phi: f64) -> Self {
        MeasurementBasis { theta, phi }
    }

    pub const fn computational() -> Self {
        MeasurementBasis {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// Basis kets |0'> and |1'> as amplitude pairs.
    pub fn kets(&self) -> [[C64; 2]; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), -e.conj() * s], [e * s, C64::new(c, 0.0)]]
    }

    /// Single-qubit unitary whose columns are |0'> and |1'>.
    pub fn unitary(&self) -> ComplexMatrix {
        let [k0, k1] = self.kets();
        ComplexMatrix::new(2, vec![k0[0], k1[0], k0[1], k1[1]]).expect("2x2")
    }
}

/// Projectors M0 = |0'><0'| and M1 = |1'><1'|.
pub fn basis_projectors(basis: &MeasurementBasis) -> (ComplexMatrix, ComplexMatrix) {
    let [k0, k1] = basis.kets();
    (
        ComplexMatrix::outer(&k0, &k0).expect("2x2"),
        ComplexMatrix::outer(&k1, &k1).expect("2x2"),
    )
}

/// p_k = (1 +/- a cos theta) / 2.
pub fn outcome_probabilities(p: &XParams, theta: f64) -> (f64, f64) {
    let shift = p.a * theta.cos();
    let p0 = 0.5 * (1.0 + shift);
    (p0, 1.0 - p0)
}

/// Intermediates shared by the closed-form spectra and derivatives.
#[derive(Debug, Clone, Copy)]
struct Terms {
    /// normalized outcome probabilities
    prob: [f64; 2],
    /// R = (cx^2 cos^2 phi + cy^2 sin^2 phi) sin^2 theta
    r: f64,
    /// b + (-1)^k cz cos theta
    shift: [f64; 2],
    /// sqrt(R + T_k)
    radius: [f64; 2],
}

impl Terms {
    fn new(p: &XParams, basis: &MeasurementBasis) -> Self {
        let (sin_t, cos_t) = basis.theta.sin_cos();
        let (sin_p, cos_p) = basis.phi.sin_cos();
        let (p0, p1) = outcome_probabilities(p, basis.theta);
        let r = (p.cx * p.cx * cos_p * cos_p + p.cy * p.cy * sin_p * sin_p) * sin_t * sin_t;
        let shift = [p.b + p.cz * cos_t, p.b - p.cz * cos_t];
        let radius = [
            (r + shift[0] * shift[0]).sqrt(),
            (r + shift[1] * shift[1]).sqrt(),
        ];
        Terms {
            prob: [p0, p1],
            r,
            shift,
            radius,
        }
    }

    /// Unnormalized eigenvalue pair p_k w_kj = (2 p_k +/- sqrt(R+T_k)) / 4.
    fn weighted(&self, k: usize) -> [f64; 2] {
        let big = 2.0 * self.prob[k];
        [(big + self.radius[k]) / 4.0, (big - self.radius[k]) / 4.0]
    }
}

/// Outcome probabilities and the spectra of the two conditional states of B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalSpectrum {
    pub p: [f64; 2],
    /// `w[k][j]`: eigenvalue j of the B state conditioned on outcome k.
    pub w: [[f64; 2]; 2],
    pub r: f64,
    pub t: [f64; 2],
}

pub fn conditional_spectrum(p: &XParams, basis: &MeasurementBasis) -> Result<ConditionalSpectrum> {
    let terms = Terms::new(p, basis);
    let mut w = [[0.0; 2]; 2];
    for (k, row) in w.iter_mut().enumerate() {
        let pk = terms.prob[k];
        if pk <= DEGENERATE_PROB {
            return Err(QcorrError::DegenerateOutcome {
                outcome: k,
                probability: pk,
            });
        }
        let [hi, lo] = terms.weighted(k);
        *row = [hi / pk, lo / pk];
    }
    Ok(ConditionalSpectrum {
        p: terms.prob,
        w,
        r: terms.r,
        t: [terms.shift[0].powi(2), terms.shift[1].powi(2)],
    })
}

fn check_weight(x: f64) -> Result<f64> {
    if x < -POSITIVITY_TOL {
        Err(QcorrError::InvalidState { min_eigenvalue: x })
    } else {
        Ok(x.max(0.0))
    }
}

/// sum_k p_k S(rho^B | k) in bits. Impossible outcomes contribute zero.
pub fn avg_conditional_entropy(p: &XParams, basis: &MeasurementBasis) -> Result<f64> {
    let terms = Terms::new(p, basis);
    let mut total = 0.0;
    for k in 0..2 {
        let pk = terms.prob[k];
        if pk <= DEGENERATE_PROB {
            continue;
        }
        for lam in terms.weighted(k) {
            let lam = check_weight(lam)?;
            // -p w log w with w = lam / p
            total += neg_xlog2x(lam) + lam * pk.log2();
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// S(sum_k M_k rho M_k) from the four closed-form eigenvalues.
pub fn post_measurement_entropy(p: &XParams, basis: &MeasurementBasis) -> Result<f64> {
    let terms = Terms::new(p, basis);
    let [l1, l2] = terms.weighted(0);
    let [l3, l4] = terms.weighted(1);
    spectrum_entropy(&[l1, l2, l3, l4])
}

/// Checked log2((P + s) / (P - s)) with P = 2 p_k and s = sqrt(R + T_k).
fn log_ratio(terms: &Terms, k: usize, basis: &MeasurementBasis) -> Result<f64> {
    let big = 2.0 * terms.prob[k];
    let s = terms.radius[k];
    if s <= SINGULAR_TOL || big - s <= SINGULAR_TOL {
        return Err(QcorrError::SingularPoint {
            theta: basis.theta,
            phi: basis.phi,
        });
    }
    Ok(((big + s) / (big - s)).log2())
}

/// The bracketed factor of dG/dtheta = -(sin theta / 4) H_theta.
///
/// Uses the signed shifts b +/- cz cos theta, which reduce to sqrt(T_k) when
/// those are nonnegative.
pub fn h_theta(p: &XParams, basis: &MeasurementBasis) -> Result<f64> {
    let terms = Terms::new(p, basis);
    let (sin_p, cos_p) = basis.phi.sin_cos();
    let cos_t = basis.theta.cos();
    // R csc(theta) cot(theta), regular at theta = 0
    let r_csc_cot = (p.cx * p.cx * cos_p * cos_p + p.cy * p.cy * sin_p * sin_p) * cos_t;
    let l0 = log_ratio(&terms, 0, basis)?;
    let l1 = log_ratio(&terms, 1, basis)?;
    let big = [2.0 * terms.prob[0], 2.0 * terms.prob[1]];
    let det = |k: usize| big[k] * big[k] - terms.radius[k] * terms.radius[k];
    let first = (r_csc_cot - p.cz * terms.shift[0]) / terms.radius[0] * l0;
    let middle = p.a * (det(1) / det(0)).log2();
    let last = (r_csc_cot + p.cz * terms.shift[1]) / terms.radius[1] * l1;
    Ok(first + middle + last)
}

/// Analytic dG/dtheta of the post-measurement entropy.
pub fn dg_dtheta(p: &XParams, basis: &MeasurementBasis) -> Result<f64> {
    Ok(-0.25 * basis.theta.sin() * h_theta(p, basis)?)
}

/// H_phi = sum_k log2((P_k + s_k)/(P_k - s_k)) / s_k; strictly positive where defined.
pub fn h_phi(p: &XParams, basis: &MeasurementBasis) -> Result<f64> {
    let terms = Terms::new(p, basis);
    let l0 = log_ratio(&terms, 0, basis)?;
    let l1 = log_ratio(&terms, 1, basis)?;
    Ok(l0 / terms.radius[0] + l1 / terms.radius[1])
}

/// Analytic dG/dphi = (cx^2 - cy^2)/8 sin^2 theta sin 2phi H_phi.
///
/// On canonical parameters (|cx| >= |cy|) the prefactor equals 2ef with
/// e = |cx + cy|/4, f = |cx - cy|/4.
pub fn dg_dphi(p: &XParams, basis: &MeasurementBasis) -> Result<f64> {
    let sin_t = basis.theta.sin();
    let prefactor = (p.cx * p.cx - p.cy * p.cy) / 8.0 * sin_t * sin_t * (2.0 * basis.phi).sin();
    if prefactor == 0.0 {
        return Ok(0.0);
    }
    Ok(prefactor * h_phi(p, basis)?)
}

/// Local-unitary canonical form: |cx| >= |cy| and cx >= 0.
///
/// Swapping cx and cy is R_z(pi/2) on both qubits; flipping both signs is a
/// sigma_z conjugation on A. Neither changes a, b, cz or any correlation measure.
pub fn canonicalize(p: &XParams) -> XParams {
    let mut out = *p;
    if out.cy.abs() > out.cx.abs() {
        std::mem::swap(&mut out.cx, &mut out.cy);
    }
    if out.cx < 0.0 {
        out.cx = -out.cx;
        out.cy = -out.cy;
    }
    out
}

fn lift_a(m: &ComplexMatrix) -> ComplexMatrix {
    kron(m, &Pauli::I.matrix()).expect("2x2 operands")
}

/// (M_k x I) rho (M_k x I) for both outcomes.
pub fn explicit_branches(rho: &DensityMatrix, basis: &MeasurementBasis) -> [ComplexMatrix; 2] {
    let (m0, m1) = basis_projectors(basis);
    [m0, m1].map(|m| {
        let big = lift_a(&m);
        &(&big * rho.matrix()) * &big
    })
}

/// sum_k (M_k x I) rho (M_k x I) as an explicit 4x4 matrix.
pub fn explicit_post_measurement_state(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> ComplexMatrix {
    let [b0, b1] = explicit_branches(rho, basis);
    &b0 + &b1
}

/// Outcome probability and (when possible) the normalized conditional state of B.
pub fn explicit_conditional_states(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> [(f64, Option<ComplexMatrix>); 2] {
    explicit_branches(rho, basis).map(|branch| {
        let mut reduced = ComplexMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                let z: C64 = (0..2).map(|k| branch.get(2 * k + i, 2 * k + j)).sum();
                reduced.set(i, j, z);
            }
        }
        let pk = reduced.trace().re;
        if pk <= DEGENERATE_PROB {
            (pk.max(0.0), None)
        } else {
            (pk, Some(reduced.scale(C64::new(1.0 / pk, 0.0))))
        }
    })
}

/// sum_k p_k S(rho^B | k) through explicit conditional states.
pub fn explicit_avg_conditional_entropy(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<f64> {
    let mut total = 0.0;
    for (pk, state) in explicit_conditional_states(rho, basis) {
        if let Some(state) = state {
            total += pk * spectrum_entropy(&hermitian_eigenvalues(&state)?)?;
        }
    }
    Ok(total)
}

/// S(sum_k M_k rho M_k) through the explicit 4x4 post-measurement state.
pub fn explicit_post_measurement_entropy(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<f64> {
    let post = explicit_post_measurement_state(rho, basis);
    spectrum_entropy(&hermitian_eigenvalues(&post)?)
}
