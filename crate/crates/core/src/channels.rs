//! Local Kraus channels and the phase-damping evolution of the
//! a = 0 family (I + b I.Z + sum_i c_i s_i.s_i)/4.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{analyze, CorrelationReport};
use crate::error::{QcorrError, Result};
use crate::qmat::{
    kron, params_from_density, x_state_from_params, ComplexMatrix, DensityMatrix, XParams, C64,
};

pub const COMPLETENESS_TOL: f64 = 1e-12;

/// Single-qubit channel given by Kraus operators with sum K^dagger K = I.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.is_empty() || operators.iter().any(|k| k.dim() != 2) {
            return Err(QcorrError::InvalidInput(
                "kraus operators must be 2x2".into(),
            ));
        }
        let residual = completeness_residual(&operators);
        if residual > COMPLETENESS_TOL {
            return Err(QcorrError::IncompleteChannel { residual });
        }
        Ok(KrausChannel { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.operators)
    }
}

fn completeness_residual(ops: &[ComplexMatrix]) -> f64 {
    let mut sum = ComplexMatrix::zeros(2);
    for k in ops {
        sum = &sum + &(&k.adjoint() * k);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(2))
}

/// K1 = |0><0| + sqrt(1-gamma)|1><1|, K2 = sqrt(gamma)|1><1|.
pub fn phase_damping_kraus(gamma: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(QcorrError::InvalidInput(format!(
            "gamma {gamma} outside [0,1]"
        )));
    }
    KrausChannel::new(vec![
        ComplexMatrix::diag(&[1.0, (1.0 - gamma).sqrt()])?,
        ComplexMatrix::diag(&[0.0, gamma.sqrt()])?,
    ])
}

/// Which qubits the channel acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelTarget {
    A,
    B,
    Both,
}

pub fn apply_channel(
    rho: &DensityMatrix,
    channel: &KrausChannel,
    target: ChannelTarget,
) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(QcorrError::InvalidInput(
            "channel expects a two-qubit state".into(),
        ));
    }
    let id = [ComplexMatrix::identity(2)];
    let (left, right): (&[ComplexMatrix], &[ComplexMatrix]) = match target {
        ChannelTarget::A => (&channel.operators, &id),
        ChannelTarget::B => (&id, &channel.operators),
        ChannelTarget::Both => (&channel.operators, &channel.operators),
    };
    let mut out = ComplexMatrix::zeros(4);
    for ka in left {
        for kb in right {
            let k = kron(ka, kb)?;
            out = &out + &(&(&k * rho.matrix()) * &k.adjoint());
        }
    }
    // trace and Hermiticity are preserved analytically; strip rounding asymmetry
    out = (&out + &out.adjoint()).scale(C64::new(0.5, 0.0));
    DensityMatrix::new(out)
}

/// Independent action of the same channel on both qubits.
pub fn apply_channel_both(rho: &DensityMatrix, channel: &KrausChannel) -> Result<DensityMatrix> {
    apply_channel(rho, channel, ChannelTarget::Both)
}

/// Initial states with a = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaParams {
    pub b: f64,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl OmegaParams {
    pub fn new(b: f64, cx: f64, cy: f64, cz: f64) -> Result<Self> {
        let p = OmegaParams { b, cx, cy, cz };
        p.to_xparams()?;
        Ok(p)
    }

    pub fn to_xparams(&self) -> Result<XParams> {
        XParams::new(0.0, self.b, self.cx, self.cy, self.cz)
    }
}

/// Closed form of the phase-damped state: transverse correlations scale by (1 - gamma).
pub fn evolve_omega(p: &OmegaParams, gamma: f64) -> Result<XParams> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(QcorrError::InvalidInput(format!(
            "gamma {gamma} outside [0,1]"
        )));
    }
    XParams::new(0.0, p.b, (1.0 - gamma) * p.cx, (1.0 - gamma) * p.cy, p.cz)
}

/// Phase-damped parameters through the explicit Kraus sum.
pub fn evolve_omega_kraus(p: &OmegaParams, gamma: f64) -> Result<XParams> {
    let rho = x_state_from_params(&p.to_xparams()?)?;
    let out = apply_channel_both(&rho, &phase_damping_kraus(gamma)?)?;
    params_from_density(&out)
}

/// Correlation reports along a decoherence trajectory, in input order.
pub fn sweep_gamma(p: &OmegaParams, gammas: &[f64]) -> Result<Vec<CorrelationReport>> {
    gammas
        .par_iter()
        .map(|&g| analyze(&evolve_omega_kraus(p, g)?))
        .collect()
}
