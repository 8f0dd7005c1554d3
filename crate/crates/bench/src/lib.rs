//! Shared fixtures for the benchmarks.

use qbclab_core::channels::{CompoundSet, CqChannel, CqqBroadcastChannel};
use qbclab_core::linalg::DensityOperator;
use qbclab_core::random::{random_state, seeded};
use qbclab_core::regions::FactorizedInput;

/// Binary symmetric channel with crossover `q`, as diagonal qubit states.
pub fn noisy_bit(q: f64) -> CqChannel {
    CqChannel::new(vec![
        DensityOperator::diagonal(&[1.0 - q, q]).expect("valid state"),
        DensityOperator::diagonal(&[q, 1.0 - q]).expect("valid state"),
    ])
    .expect("valid channel")
}

/// Two wiretap members with a clean Bob and a noisy Eve.
pub fn wiretap_compound() -> CompoundSet {
    let members = [(0.0, 0.3), (0.05, 0.2)]
        .iter()
        .map(|&(b, e)| CqqBroadcastChannel::product(&noisy_bit(b), &noisy_bit(e)).expect("valid product"))
        .collect();
    CompoundSet::new(members).expect("uniform shapes")
}

/// Trivial auxiliary, uniform randomisation letters, identity encoder.
pub fn plain_input() -> FactorizedInput {
    FactorizedInput::new(1, vec![1.0], vec![vec![0.5, 0.5]], vec![vec![1.0, 0.0], vec![0.0, 1.0]])
        .expect("valid input")
}

/// Hilbert-Schmidt random states of dimension `dim`.
pub fn random_states(dim: usize, count: usize, seed: u64) -> Vec<DensityOperator> {
    let mut rng = seeded(seed);
    (0..count).map(|_| random_state(dim, &mut rng)).collect()
}
