//! Wiretap codes: the stochastic encoder, composed decoders, exact error
//! and leakage evaluation, and Eve's doubly projected outputs.

use serde::{Deserialize, Serialize};

use super::codebook::{CodebookLayout, SuperpositionCodebook};
use super::decoder::Decoder;
use super::ops::{letter_ops, word_op, Op};
use crate::channels::{all_words, CqChannel, CqqBroadcastChannel, Receiver};
use crate::error::{Error, Result};
use crate::linalg::{ComplexOperator, DensityOperator};
use crate::prob::check_stochastic;
use crate::typicality::{typical_projector, ChannelConditioning, ProjectorKind, Word, WORD_GUARD};

/// `E(x|m0, j) = (1/L) sum_l t^{⊗n}(x | y_{m0,j,l})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StochasticEncoder {
    layout: CodebookLayout,
    t: Vec<Vec<f64>>,
    words: Vec<Vec<Word>>,
}

impl StochasticEncoder {
    pub fn new(codebook: &SuperpositionCodebook, t: &[Vec<f64>]) -> Result<Self> {
        let ny = codebook.y_words.iter().flatten().flatten().copied().max().map_or(1, |m| m + 1);
        let nx = t.first().map_or(0, |r| r.len());
        if t.len() < ny {
            return Err(Error::Dimension(format!("t has {} rows but codewords use {ny} letters", t.len())));
        }
        check_stochastic(t, t.len(), nx, "t")?;
        let layout = codebook.layout;
        if codebook.y_words.len() != layout.m0 || codebook.y_words.iter().any(|w| w.len() != layout.inner_size()) {
            return Err(Error::Layout("codebook shape does not match its layout".into()));
        }
        Ok(StochasticEncoder {
            layout,
            t: t.to_vec(),
            words: codebook.y_words.clone(),
        })
    }

    pub fn layout(&self) -> CodebookLayout {
        self.layout
    }

    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.t
    }

    pub fn words(&self, m0: usize, j: usize) -> &[Word] {
        let start = self.layout.inner_index(j, 0);
        &self.words[m0][start..start + self.layout.l]
    }

    /// The encoding distribution over input words, lexicographic order.
    pub fn distribution(&self, m0: usize, j: usize) -> Result<Vec<f64>> {
        let nx = self.t[0].len();
        let count = (nx as f64).powi(self.layout.n as i32);
        if count > WORD_GUARD {
            return Err(Error::EnumerationGuard {
                count,
                guard: WORD_GUARD,
            });
        }
        let inputs = all_words(nx, self.layout.n);
        let weight = 1.0 / self.layout.l as f64;
        let mut dist = vec![0.0; inputs.len()];
        for y in self.words(m0, j) {
            for (k, x) in inputs.iter().enumerate() {
                dist[k] += weight * y.iter().zip(x).map(|(&a, &b)| self.t[a][b]).product::<f64>();
            }
        }
        Ok(dist)
    }

    /// `sum_x E(x|m0, j) W^{⊗n}(x)` for the channel whose letter outputs
    /// are `letters`, already composed with `t`.
    pub(crate) fn output_op(&self, letters: &[Op], m0: usize, j: usize) -> Result<Op> {
        let words = self.words(m0, j);
        let mut acc = word_op(letters, &words[0])?.scale(1.0 / words.len() as f64);
        for y in &words[1..] {
            acc.add_scaled(&word_op(letters, y)?, 1.0 / words.len() as f64);
        }
        Ok(acc)
    }

    pub fn output(&self, effective: &CqChannel, m0: usize, j: usize) -> Result<DensityOperator> {
        Ok(self.output_op(&letter_ops(effective), m0, j)?.to_state())
    }
}

/// Letter channel `y -> sum_x t(x|y) W^{⊗l}(x)` seen by one receiver.
pub fn effective_channel(
    member: &CqqBroadcastChannel,
    receiver: Receiver,
    block: usize,
    t: &[Vec<f64>],
) -> Result<CqChannel> {
    member.marginal(receiver).block_power(block)?.precompose(t)
}

/// A wiretap code with Bob's measurement over `(m0, j)` and, when Eve must
/// decode the common message, her measurement over `m0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WiretapCode {
    pub layout: CodebookLayout,
    /// Channel uses per codeword letter.
    pub block: usize,
    pub encoder: StochasticEncoder,
    /// Elements indexed by `m0 * J + j`.
    pub bob: Decoder,
    pub eve: Option<Decoder>,
}

impl WiretapCode {
    pub fn bob_index(&self, m0: usize, j: usize) -> usize {
        m0 * self.layout.j + j
    }
}

/// Assembles the code: Bob's element for `(m0, j)` is
/// `sum_l sqrt(D_m0) Lambda^{m0}_{j,l} sqrt(D_m0)`.
pub fn build_wiretap_code(
    codebook: &SuperpositionCodebook,
    t: &[Vec<f64>],
    block: usize,
    outer_bob: &Decoder,
    inner_bob: &[Decoder],
    outer_eve: Option<&Decoder>,
) -> Result<WiretapCode> {
    let layout = codebook.layout;
    if outer_bob.len() != layout.m0 || inner_bob.len() != layout.m0 {
        return Err(Error::Layout(format!(
            "outer decoder has {} outcomes and {} inner decoders for M0 = {}",
            outer_bob.len(),
            inner_bob.len(),
            layout.m0
        )));
    }
    if let Some(bad) = inner_bob.iter().find(|d| d.len() != layout.inner_size()) {
        return Err(Error::Layout(format!(
            "inner decoder has {} outcomes, expected J*L = {}",
            bad.len(),
            layout.inner_size()
        )));
    }
    if let Some(e) = outer_eve {
        if e.len() != layout.m0 {
            return Err(Error::Layout(format!("Eve's decoder has {} outcomes for M0 = {}", e.len(), layout.m0)));
        }
    }
    let d = outer_bob.dim();
    if inner_bob.iter().any(|i| i.dim() != d) {
        return Err(Error::Dimension("inner and outer decoders act on different spaces".into()));
    }
    let encoder = StochasticEncoder::new(codebook, t)?;
    let mut elements = Vec::with_capacity(layout.m0 * layout.j);
    let mut total = Op::Diag(vec![0.0; d]);
    for (m0, inner) in inner_bob.iter().enumerate() {
        let root = outer_bob.elements[m0].power(0.5)?;
        for j in 0..layout.j {
            let mut coarse = inner.elements[layout.inner_index(j, 0)].clone();
            for l in 1..layout.l {
                coarse.add_scaled(&inner.elements[layout.inner_index(j, l)], 1.0);
            }
            let composed = Op::sandwich(&root, &coarse);
            total.add_scaled(&composed, 1.0);
            elements.push(composed);
        }
    }
    let mut abort = Op::identity(d);
    abort.add_scaled(&total, -1.0);
    Ok(WiretapCode {
        layout,
        block,
        encoder,
        bob: Decoder { elements, abort },
        eve: outer_eve.cloned(),
    })
}

/// Average decoding error of one receiver on one member: Bob decodes
/// `(m0, j)`, Eve decodes `m0`.
pub fn average_error(code: &WiretapCode, member: &CqqBroadcastChannel, receiver: Receiver) -> Result<f64> {
    let letters = letter_ops(&effective_channel(member, receiver, code.block, code.encoder.kernel())?);
    let layout = code.layout;
    let mut success = 0.0;
    for m0 in 0..layout.m0 {
        for j in 0..layout.j {
            let state = code.encoder.output_op(&letters, m0, j)?;
            success += match receiver {
                Receiver::Bob => code.bob.elements[code.bob_index(m0, j)].trace_with(&state),
                Receiver::Eve => {
                    let eve = code
                        .eve
                        .as_ref()
                        .ok_or_else(|| Error::Domain("the code has no measurement for Eve".into()))?;
                    eve.elements[m0].trace_with(&state)
                }
            };
        }
    }
    Ok((1.0 - success / (layout.m0 * layout.j) as f64).clamp(0.0, 1.0))
}

/// Exact leakage and the largest deviation of a message-conditional Eve
/// state from its average.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageDetail {
    /// `I(M_c; E | M_0)` in bits.
    pub leakage: f64,
    /// `I(M_c; E)` of each outer message.
    pub per_outer: Vec<f64>,
    /// `max_{m0, j} || sigma^{m0,j} - sigma^{m0} ||_1`.
    pub max_deviation: f64,
    pub eve_dim: usize,
}

pub fn leakage_detail(code: &WiretapCode, member: &CqqBroadcastChannel) -> Result<LeakageDetail> {
    let letters = letter_ops(&effective_channel(member, Receiver::Eve, code.block, code.encoder.kernel())?);
    let layout = code.layout;
    let mut per_outer = Vec::with_capacity(layout.m0);
    let mut max_deviation: f64 = 0.0;
    let eve_dim = letters[0].dim().pow(layout.n as u32);
    for m0 in 0..layout.m0 {
        let states = (0..layout.j)
            .map(|j| code.encoder.output_op(&letters, m0, j))
            .collect::<Result<Vec<_>>>()?;
        let mut mean = states[0].zeros_like();
        let mut conditional = 0.0;
        for s in &states {
            mean.add_scaled(s, 1.0 / layout.j as f64);
            conditional += s.entropy()? / layout.j as f64;
        }
        for s in &states {
            max_deviation = max_deviation.max(s.sub(&mean).trace_norm());
        }
        per_outer.push(mean.entropy()? - conditional);
    }
    Ok(LeakageDetail {
        leakage: per_outer.iter().sum::<f64>() / layout.m0 as f64,
        per_outer,
        max_deviation,
        eve_dim,
    })
}

pub fn security_leakage(code: &WiretapCode, member: &CqqBroadcastChannel) -> Result<f64> {
    Ok(leakage_detail(code, member)?.leakage)
}

/// Success probabilities entering the composed-decoder inequality for one
/// inner outcome and one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComposedTerms {
    /// `tr(rho sqrt(D) Lambda sqrt(D))`.
    pub composed: f64,
    /// `tr(rho Lambda)`.
    pub inner: f64,
    /// `tr(rho D)`.
    pub outer: f64,
}

impl ComposedTerms {
    /// `inner - 2 sqrt(1 - outer)`.
    pub fn lower_bound(&self) -> f64 {
        self.inner - 2.0 * (1.0 - self.outer).max(0.0).sqrt()
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.composed >= self.lower_bound() - slack
    }
}

pub fn composed_decoder_terms(
    outer: &Decoder,
    m0: usize,
    inner: &Decoder,
    k: usize,
    state: &DensityOperator,
) -> Result<ComposedTerms> {
    let rho = Op::from_operator(state.op());
    let d = &outer.elements[m0];
    let lambda = &inner.elements[k];
    let composed = Op::sandwich(&d.power(0.5)?, lambda);
    Ok(ComposedTerms {
        composed: composed.trace_with(&rho),
        inner: lambda.trace_with(&rho),
        outer: d.trace_with(&rho),
    })
}

/// Eve's outputs compressed by the conditional and the total conditional
/// typical projectors of an outer word.
#[derive(Clone, Debug)]
pub struct ProjectedEveOutput {
    /// `Q(y) = Pi_u Pi_{u,y} W^{⊗n}(y) Pi_{u,y} Pi_u` per supplied word.
    pub compressed: Vec<ComplexOperator>,
    /// `sum_y weight(y) Q(y)`.
    pub average: ComplexOperator,
    /// `|| W^{⊗n}(y) - Q(y) ||_1`.
    pub distances: Vec<f64>,
    /// `2 sqrt(e1) + 2 sqrt(e2 + 2 sqrt(e1))` with `e1 = 1 - tr(Pi_{u,y} W)`
    /// and `e2 = 1 - tr(Pi_u W)`.
    pub bounds: Vec<f64>,
}

pub fn project_eve_outputs(
    eve: &CqChannel,
    r: &[Vec<f64>],
    u_word: &[usize],
    y_words: &[Word],
    weights: &[f64],
    delta: f64,
) -> Result<ProjectedEveOutput> {
    if y_words.len() != weights.len() {
        return Err(Error::Dimension("one weight per y word is required".into()));
    }
    let states = eve.outputs();
    let total = typical_projector(
        states,
        u_word,
        delta,
        ProjectorKind::TotalConditional,
        Some(ChannelConditioning { r, y_word: None }),
    )?;
    let pi_u = Op::from_operator(total.projector());
    let letters = letter_ops(eve);
    let mut compressed = Vec::with_capacity(y_words.len());
    let mut distances = Vec::with_capacity(y_words.len());
    let mut bounds = Vec::with_capacity(y_words.len());
    let mut average: Option<Op> = None;
    for (y, &w) in y_words.iter().zip(weights) {
        let cond = typical_projector(
            states,
            u_word,
            delta,
            ProjectorKind::Conditional,
            Some(ChannelConditioning { r, y_word: Some(y) }),
        )?;
        let pi_uy = Op::from_operator(cond.projector());
        let out = word_op(&letters, y)?;
        let q = Op::sandwich(&pi_u, &Op::sandwich(&pi_uy, &out));
        let e1 = (1.0 - pi_uy.trace_with(&out)).max(0.0);
        let e2 = (1.0 - pi_u.trace_with(&out)).max(0.0);
        bounds.push(2.0 * e1.sqrt() + 2.0 * (e2 + 2.0 * e1.sqrt()).sqrt());
        distances.push(out.sub(&q).trace_norm());
        match &mut average {
            None => average = Some(q.scale(w)),
            Some(a) => a.add_scaled(&q, w),
        }
        compressed.push(q.to_operator());
    }
    let average = average.map_or_else(|| ComplexOperator::zeros(pi_u.dim()), |a| a.to_operator());
    Ok(ProjectedEveOutput {
        compressed,
        average,
        distances,
        bounds,
    })
}
