//! Square-root decoders against member-averaged product channels.

use serde::{Deserialize, Serialize};

use super::ops::{letter_ops, mixed_word_op, Op};
use crate::channels::CqChannel;
use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, Povm};
use crate::typicality::Word;

/// How the decoding measurement is built from the codeword outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum DecoderMethod {
    /// Pretty good measurement `G^{-1/2} rho_m G^{-1/2}`.
    #[default]
    Pgm,
    /// Square-root measurement over the projectors `{rho_m > threshold * mean}`,
    /// where `mean` is the codebook average of the outputs.
    HayashiNagaoka { threshold: f64 },
}

/// One element per message plus an abort element that completes the
/// measurement and always counts as an error.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoder {
    pub(crate) elements: Vec<Op>,
    pub(crate) abort: Op,
}

impl Decoder {
    pub(crate) fn trivial(dim: usize) -> Decoder {
        Decoder {
            elements: vec![Op::identity(dim)],
            abort: Op::Diag(vec![0.0; dim]),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.abort.dim()
    }

    /// The measurement with the abort outcome last, validated.
    pub fn povm(&self) -> Result<Povm> {
        let mut elements: Vec<_> = self.elements.iter().map(Op::to_operator).collect();
        elements.push(self.abort.to_operator());
        Povm::new(elements)
    }

    pub fn success_probability(&self, message: usize, state: &DensityOperator) -> f64 {
        self.elements[message].trace_with(&Op::from_operator(state.op()))
    }
}

pub(crate) fn decoder_from_ops(states: &[Op], method: DecoderMethod) -> Result<Decoder> {
    let Some(first) = states.first() else {
        return Err(Error::Layout("decoder needs at least one codeword".into()));
    };
    let d = first.dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(Error::Dimension("codeword outputs differ in dimension".into()));
    }
    if states.len() == 1 {
        return Ok(Decoder::trivial(d));
    }
    let targets: Vec<Op> = match method {
        DecoderMethod::Pgm => states.to_vec(),
        DecoderMethod::HayashiNagaoka { threshold } => {
            if !(threshold.is_finite() && threshold >= 0.0) {
                return Err(Error::Domain(format!("threshold {threshold} must be nonnegative")));
            }
            let mut mean = first.zeros_like();
            for s in states {
                mean.add_scaled(s, 1.0 / states.len() as f64);
            }
            states
                .iter()
                .map(|s| s.sub(&mean.scale(threshold)).positive_projector(1e-12))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let mut gram = first.zeros_like();
    for t in &targets {
        gram.add_scaled(t, 1.0);
    }
    let inv_sqrt = gram.power(-0.5)?;
    let elements: Vec<Op> = targets.iter().map(|t| Op::sandwich(&inv_sqrt, t)).collect();
    let mut abort = Op::identity(d);
    for e in &elements {
        abort.add_scaled(e, -1.0);
    }
    if let Op::Dense(m) = &abort {
        abort = Op::Dense(m.hermitian_part());
    }
    Ok(Decoder { elements, abort })
}

pub fn decoder_from_states(states: &[DensityOperator], method: DecoderMethod) -> Result<Decoder> {
    let ops: Vec<Op> = states.iter().map(|s| Op::from_operator(s.op())).collect();
    decoder_from_ops(&ops, method)
}

fn check_mix(mix: &[CqChannel]) -> Result<()> {
    let Some(first) = mix.first() else {
        return Err(Error::validation("non-empty compound", "no channels to average"));
    };
    if mix.iter().any(|c| c.dim() != first.dim() || c.alphabet_size() != first.alphabet_size()) {
        return Err(Error::validation("uniform member shapes", "averaged channels differ in shape"));
    }
    Ok(())
}

/// Decoder for `words` against `(1/S) sum_s W_s^{⊗n}`.
pub fn build_decoder(words: &[Word], mix: &[CqChannel], method: DecoderMethod) -> Result<Decoder> {
    check_mix(mix)?;
    let letters: Vec<Vec<Op>> = mix.iter().map(letter_ops).collect();
    let states = words
        .iter()
        .map(|w| {
            crate::channels::check_letters(w, mix[0].alphabet_size())?;
            mixed_word_op(&letters, w)
        })
        .collect::<Result<Vec<_>>>()?;
    decoder_from_ops(&states, method)
}

/// `(1/M) sum_m tr((1 - D_m) W^{⊗n}(w_m))` for a plain code.
pub fn codebook_error(decoder: &Decoder, words: &[Word], channel: &CqChannel) -> Result<f64> {
    if words.len() != decoder.len() {
        return Err(Error::Layout(format!("{} words for a decoder of {} messages", words.len(), decoder.len())));
    }
    let letters = vec![letter_ops(channel)];
    let mut success = 0.0;
    for (m, w) in words.iter().enumerate() {
        let state = mixed_word_op(&letters, w)?;
        if state.dim() != decoder.dim() {
            return Err(Error::Dimension("channel output does not match decoder".into()));
        }
        success += decoder.elements[m].trace_with(&state);
    }
    Ok((1.0 - success / words.len() as f64).clamp(0.0, 1.0))
}
