//! Entanglement of formation: Wootters concurrence for rho^AB and the
//! Koashi-Winter value for the purifying split B|C.

use serde::{Deserialize, Serialize};

use crate::correlations::{minimize_over_theta, TheoremBranch};
use crate::error::{QcorrError, Result};
use crate::measure::{avg_conditional_entropy, MeasurementBasis};
use crate::qmat::{
    h2, hermitian_eigen, hermitian_eigenvalues, kron, von_neumann_entropy, x_state_from_params,
    ComplexMatrix, DensityMatrix, Pauli, XParams, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// concurrence of rho^AB
    pub concurrence: f64,
    /// entanglement of formation of rho^AB
    pub eof: f64,
    /// entanglement of formation of rho^BC for a purification |psi>_ABC
    pub eof_bc: f64,
}

/// Wootters concurrence from the spin-flipped spectrum.
///
/// The eigenvalues of rho (Y.Y) rho* (Y.Y) are obtained as the spectrum of the
/// Hermitian sqrt(rho) rho~ sqrt(rho).
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    if m.dim() != 4 {
        return Err(QcorrError::InvalidInput(
            "concurrence needs a two-qubit state".into(),
        ));
    }
    let yy = kron(&Pauli::Y.matrix(), &Pauli::Y.matrix())?;
    let flipped = &(&yy * &m.conj()) * &yy;

    let (values, vectors) = hermitian_eigen(m)?;
    let roots: Vec<f64> = values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let sqrt_rho = &(&vectors * &ComplexMatrix::diag(&roots)?) * &vectors.adjoint();
    let mut sandwich = &(&sqrt_rho * &flipped) * &sqrt_rho;
    // restore exact Hermiticity lost to rounding
    sandwich = (&sandwich + &sandwich.adjoint()).scale(C64::new(0.5, 0.0));

    let mu = hermitian_eigenvalues(&sandwich)?;
    let s: Vec<f64> = mu.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// X-state closed form 2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33)).
pub fn concurrence_x_state(p: &XParams) -> f64 {
    let d11 = (1.0 + p.a + p.b + p.cz) / 4.0;
    let d22 = (1.0 + p.a - p.b - p.cz) / 4.0;
    let d33 = (1.0 - p.a + p.b - p.cz) / 4.0;
    let d44 = (1.0 - p.a - p.b + p.cz) / 4.0;
    let r14 = (p.cx - p.cy).abs() / 4.0;
    let r23 = (p.cx + p.cy).abs() / 4.0;
    let first = r23 - (d11 * d44).max(0.0).sqrt();
    let second = r14 - (d22 * d33).max(0.0).sqrt();
    (2.0 * first.max(second).max(0.0)).min(1.0)
}

/// E_f = h((1 + sqrt(1 - C^2)) / 2).
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(QcorrError::InvalidInput(format!(
            "concurrence {c} outside [0,1]"
        )));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(h2(0.5 * (1.0 + (1.0 - c * c).sqrt())))
}

/// E_f(rho^BC) = min over measurements on A of sum_k p_k S(rho^B|k).
pub fn eof_bc_koashi_winter(p: &XParams) -> Result<f64> {
    let opt = minimize_over_theta(
        |t, f| avg_conditional_entropy(p, &MeasurementBasis::new(t, f)),
        |_, _| Err(QcorrError::NotApplicable("no analytic derivative".into())),
    )?;
    Ok(opt.value.max(0.0))
}

/// Deficit reassembled from E_f(rho^BC) for a branch in which discord and
/// deficit share their optimal basis.
pub fn corollary2_deficit(p: &XParams, branch: TheoremBranch) -> Result<f64> {
    let constant = match branch {
        TheoremBranch::AZero | TheoremBranch::ThetaHalfPi => 1.0,
        TheoremBranch::ThetaZero => h2(0.5 * (1.0 - p.a)),
        TheoremBranch::None => {
            return Err(QcorrError::NotApplicable("no shared optimal basis".into()))
        }
    };
    let s_ab = von_neumann_entropy(&x_state_from_params(p)?)?;
    Ok(eof_bc_koashi_winter(p)? - s_ab + constant)
}

pub fn entanglement_report(p: &XParams) -> Result<EntanglementReport> {
    let rho = x_state_from_params(p)?;
    let concurrence = concurrence_two_qubit(&rho)?;
    Ok(EntanglementReport {
        concurrence,
        eof: eof_from_concurrence(concurrence)?,
        eof_bc: eof_bc_koashi_winter(p)?,
    })
}
