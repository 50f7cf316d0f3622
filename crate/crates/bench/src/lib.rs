//! Fixed states shared by the criterion benches.

use qcorr_core::{StateSampler, XParams};

/// The q = 0.8 member of q |psi-><psi-| + (1-q)|00><00|.
pub fn werner_like() -> XParams {
    XParams::werner_like_q(0.8).expect("valid q")
}

pub fn fig2_state() -> XParams {
    XParams::new(0.0, 0.26, 0.13, 0.55, 0.08).expect("valid state")
}

/// `n` seeded random valid X states.
pub fn random_states(seed: u64, n: usize) -> Vec<XParams> {
    let mut sampler = StateSampler::new(seed);
    (0..n).map(|_| sampler.state()).collect()
}
