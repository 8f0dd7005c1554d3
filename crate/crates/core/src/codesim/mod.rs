//! Desk-scale construction and exact evaluation of superposition wiretap
//! codes, together with the covering-lemma concentration experiment.

pub mod codebook;
pub mod covering;
pub mod decoder;
pub mod experiment;
mod ops;
pub mod wiretap;

pub use codebook::{sample_superposition_codebook, CodebookLayout, SuperpositionCodebook};
pub use covering::{
    covering_bound, covering_check, BernoulliDiagonal, ConstantSampler, CoveringConfig, CoveringPoint, CoveringReport,
    MatrixSampler,
};
pub use decoder::{build_decoder, codebook_error, decoder_from_states, Decoder, DecoderMethod};
pub use experiment::{
    resolve_layout, run_single, run_universal_experiment, BlockSummary, CODEWORD_GUARD, ExperimentConfig, ExperimentReport,
    ExperimentRow, LayoutPolicy,
};
pub use wiretap::{
    average_error, build_wiretap_code, composed_decoder_terms, effective_channel, leakage_detail,
    project_eve_outputs, security_leakage, ComposedTerms, LeakageDetail, ProjectedEveOutput, StochasticEncoder,
    WiretapCode,
};
