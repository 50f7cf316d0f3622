//! Quantum discord, one-way quantum deficit, classical correlation and
//! entanglement of formation for two-qubit X states.
//!
//! ```
//! use qcorr_core::{one_way_deficit, quantum_discord, XParams};
//!
//! let singlet = XParams::singlet();
//! assert!((quantum_discord(&singlet).unwrap().value - 1.0).abs() < 1e-9);
//! assert!((one_way_deficit(&singlet).unwrap().value - 1.0).abs() < 1e-9);
//! ```

pub mod channels;
pub mod correlations;
pub mod entanglement;
pub mod error;
pub mod measure;
pub mod qmat;
pub mod sampling;
pub mod sweep;
pub mod verify;

pub use channels::{
    apply_channel, apply_channel_both, evolve_omega, evolve_omega_kraus, phase_damping_kraus,
    sweep_gamma, ChannelTarget, KrausChannel, OmegaParams,
};
pub use correlations::{
    analyze, basis_switch_root, classical_correlation, coherence_tradeoff_check, gap_derivative,
    grid_oracle, minimize_objective, mutual_information, objective_f, objective_g, one_way_deficit,
    quantum_discord, theorem_classify, werner_like_switch_root, CorrelationReport, GapFunction,
    Objective, OptimizerMethod, Optimum, StateEntropies, TheoremBranch, TradeoffCheck,
};
pub use entanglement::{
    concurrence_two_qubit, concurrence_x_state, corollary2_deficit, entanglement_report,
    eof_bc_koashi_winter, eof_from_concurrence, EntanglementReport,
};
pub use error::{QcorrError, Result};
pub use measure::{
    avg_conditional_entropy, basis_projectors, canonicalize, conditional_spectrum, dg_dphi,
    dg_dtheta, outcome_probabilities, post_measurement_entropy, ConditionalSpectrum,
    MeasurementBasis,
};
pub use qmat::{
    binary_entropy, hermitian_eigenvalues, kron, params_from_density, partial_trace,
    von_neumann_entropy, x_state_from_params, ComplexMatrix, DensityMatrix, Subsystem, XParams,
};
pub use sampling::StateSampler;
pub use sweep::{SweepRow, CSV_HEADER};
