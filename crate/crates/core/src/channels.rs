//! Classical-quantum channels, broadcast channels, compound sets and
//! τ-nets over parametric channel families.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    check_cap, composite_dim, dim_cap, partial_trace, permute_subsystems, tensor_all, trace_norm, ComplexOperator,
    DensityOperator, Subsystem, C64,
};
use crate::random::{seeded, stream, LabRng};

/// A map from a finite alphabet to states on one Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct CqChannel {
    outputs: Vec<DensityOperator>,
}

impl CqChannel {
    pub fn new(outputs: Vec<DensityOperator>) -> Result<Self> {
        let Some(first) = outputs.first() else {
            return Err(Error::validation("one output per letter", "channel has an empty alphabet"));
        };
        let d = first.dim();
        if let Some(bad) = outputs.iter().position(|o| o.dim() != d) {
            return Err(Error::Dimension(format!("output {bad} has dimension {} not {d}", outputs[bad].dim())));
        }
        Ok(CqChannel { outputs })
    }

    /// Letter `y` goes to the basis state `|y>` of a `dim`-dimensional space.
    pub fn noiseless(alphabet_size: usize) -> Self {
        CqChannel {
            outputs: (0..alphabet_size).map(|y| DensityOperator::basis(alphabet_size, y)).collect(),
        }
    }

    /// Every letter goes to the same state.
    pub fn constant(alphabet_size: usize, state: DensityOperator) -> Self {
        CqChannel {
            outputs: vec![state; alphabet_size],
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn output(&self, letter: usize) -> &DensityOperator {
        &self.outputs[letter]
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    /// The memoryless product output for a word.
    pub fn apply_word(&self, word: &[usize]) -> Result<DensityOperator> {
        word_product(&self.outputs, word)
    }

    /// `sum_y p(y) W(y)`.
    pub fn average_output(&self, p: &[f64]) -> Result<DensityOperator> {
        if p.len() != self.alphabet_size() {
            return Err(Error::Dimension(format!(
                "distribution has {} entries for alphabet of size {}",
                p.len(),
                self.alphabet_size()
            )));
        }
        let mut acc = ComplexOperator::zeros(self.dim());
        for (w, o) in p.iter().zip(&self.outputs) {
            if *w != 0.0 {
                acc.add_scaled(o.op(), *w);
            }
        }
        Ok(DensityOperator::from_op(acc))
    }

    /// Precomposition with a classical channel `t(x|y)`, rows indexed by the
    /// new input letter.
    pub fn precompose(&self, t: &[Vec<f64>]) -> Result<CqChannel> {
        let outputs = t.iter().map(|row| self.average_output(row)).collect::<Result<Vec<_>>>()?;
        CqChannel::new(outputs)
    }

    /// The `l`-fold product channel over the alphabet of length-`l` blocks,
    /// block letters enumerated lexicographically.
    pub fn block_power(&self, l: usize) -> Result<CqChannel> {
        check_cap(composite_dim((0..l).map(|_| self.dim())), dim_cap())?;
        let outputs = all_words(self.alphabet_size(), l)
            .iter()
            .map(|w| self.apply_word(w))
            .collect::<Result<Vec<_>>>()?;
        CqChannel::new(outputs)
    }
}

/// A channel whose outputs live on a bipartite space shared by Bob and Eve.
#[derive(Clone, Debug, PartialEq)]
pub struct CqqBroadcastChannel {
    outputs: Vec<DensityOperator>,
    dims: (usize, usize),
}

/// The two receivers of a broadcast channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Receiver {
    Bob,
    Eve,
}

impl CqqBroadcastChannel {
    pub fn new(outputs: Vec<DensityOperator>, dims: (usize, usize)) -> Result<Self> {
        let cq = CqChannel::new(outputs)?;
        if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != cq.dim() {
            return Err(Error::Dimension(format!(
                "outputs of dimension {} do not factor as {}x{}",
                cq.dim(),
                dims.0,
                dims.1
            )));
        }
        Ok(CqqBroadcastChannel {
            outputs: cq.outputs,
            dims,
        })
    }

    /// A cq channel viewed as a broadcast channel with a trivial Eve.
    pub fn from_cq(channel: CqChannel) -> Self {
        let d = channel.dim();
        CqqBroadcastChannel {
            outputs: channel.outputs,
            dims: (d, 1),
        }
    }

    /// Outputs `W_B(x) ⊗ W_E(x)`.
    pub fn product(bob: &CqChannel, eve: &CqChannel) -> Result<Self> {
        if bob.alphabet_size() != eve.alphabet_size() {
            return Err(Error::Dimension("marginals have different alphabets".into()));
        }
        let outputs = bob
            .outputs
            .iter()
            .zip(&eve.outputs)
            .map(|(b, e)| b.tensor(e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(outputs, (bob.dim(), eve.dim()))
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    pub fn output(&self, letter: usize) -> &DensityOperator {
        &self.outputs[letter]
    }

    pub fn marginal(&self, receiver: Receiver) -> CqChannel {
        let keep = match receiver {
            Receiver::Bob => Subsystem::First,
            Receiver::Eve => Subsystem::Second,
        };
        let outputs = self
            .outputs
            .iter()
            .map(|o| {
                DensityOperator::from_op(
                    partial_trace(o.op(), keep, self.dims).expect("output dims are validated at construction"),
                )
            })
            .collect();
        CqChannel { outputs }
    }

    /// The joint-output cq channel.
    pub fn joint(&self) -> CqChannel {
        CqChannel {
            outputs: self.outputs.clone(),
        }
    }

    /// Product output with factors ordered `(B E)(B E)...`.
    pub fn apply_word(&self, word: &[usize]) -> Result<DensityOperator> {
        word_product(&self.outputs, word)
    }
}

fn word_product(outputs: &[DensityOperator], word: &[usize]) -> Result<DensityOperator> {
    check_letters(word, outputs.len())?;
    check_cap(composite_dim(word.iter().map(|_| outputs[0].dim())), dim_cap())?;
    Ok(DensityOperator::from_op(tensor_all(word.iter().map(|&y| outputs[y].op()))?))
}

/// Largest per-letter trace distance between two cq channels.
pub fn cq_distance(w: &CqChannel, v: &CqChannel) -> Result<f64> {
    if w.alphabet_size() != v.alphabet_size() || w.dim() != v.dim() {
        return Err(Error::validation(
            "matching channel shapes",
            format!(
                "({}, {}) against ({}, {})",
                w.alphabet_size(),
                w.dim(),
                v.alphabet_size(),
                v.dim()
            ),
        ));
    }
    Ok(w.outputs
        .iter()
        .zip(&v.outputs)
        .map(|(a, b)| trace_norm(&(a.op() - b.op())))
        .fold(0.0, f64::max))
}

/// [`cq_distance`] between the joint outputs of two broadcast channels.
pub fn broadcast_distance(w: &CqqBroadcastChannel, v: &CqqBroadcastChannel) -> Result<f64> {
    if w.dims != v.dims {
        return Err(Error::validation("matching channel shapes", "receiver dimensions differ"));
    }
    cq_distance(&w.joint(), &v.joint())
}

/// Where the members of a compound set came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Literal,
    Net { tau: f64, seed: u64, family: String },
}

/// A finite, non-empty family of broadcast channels with common shape.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundSet {
    members: Vec<CqqBroadcastChannel>,
    provenance: Provenance,
}

impl CompoundSet {
    pub fn new(members: Vec<CqqBroadcastChannel>) -> Result<Self> {
        Self::with_provenance(members, Provenance::Literal)
    }

    pub fn with_provenance(members: Vec<CqqBroadcastChannel>, provenance: Provenance) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::validation("non-empty compound", "compound set has no members"));
        };
        for (k, m) in members.iter().enumerate() {
            if m.alphabet_size() != first.alphabet_size() || m.dims() != first.dims() {
                return Err(Error::validation(
                    "uniform member shapes",
                    format!("member {k} differs in alphabet or dimensions from member 0"),
                ));
            }
        }
        Ok(CompoundSet { members, provenance })
    }

    pub fn singleton(channel: CqqBroadcastChannel) -> Self {
        CompoundSet {
            members: vec![channel],
            provenance: Provenance::Literal,
        }
    }

    pub fn members(&self) -> &[CqqBroadcastChannel] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.members[0].alphabet_size()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.members[0].dims()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Net fineness, when the set was produced by net discretisation.
    pub fn tau(&self) -> Option<f64> {
        match self.provenance {
            Provenance::Net { tau, .. } => Some(tau),
            Provenance::Literal => None,
        }
    }

    pub fn marginals(&self, receiver: Receiver) -> Vec<CqChannel> {
        self.members.iter().map(|m| m.marginal(receiver)).collect()
    }

    /// The subset keeping the listed members, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<CompoundSet> {
        let members = indices
            .iter()
            .map(|&i| {
                self.members
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Dimension(format!("member index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        CompoundSet::with_provenance(members, self.provenance.clone())
    }

    pub fn without(&self, index: usize) -> Result<CompoundSet> {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != index).collect();
        self.subset(&keep)
    }
}

/// A quantum channel given by Kraus operators mapping `d_A` to `d_B * d_E`.
#[derive(Clone, Debug, PartialEq)]
pub struct CptpChannel {
    kraus: Vec<DMatrix<C64>>,
    input_dim: usize,
    dims: (usize, usize),
}

impl CptpChannel {
    pub fn new(kraus: Vec<DMatrix<C64>>, input_dim: usize, dims: (usize, usize)) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::validation("trace preserving", "no Kraus operators"));
        }
        let out = dims.0 * dims.1;
        let mut sum = DMatrix::<C64>::zeros(input_dim, input_dim);
        for (k, op) in kraus.iter().enumerate() {
            if op.nrows() != out || op.ncols() != input_dim {
                return Err(Error::Dimension(format!(
                    "Kraus operator {k} is {}x{}, expected {out}x{input_dim}",
                    op.nrows(),
                    op.ncols()
                )));
            }
            sum += op.adjoint() * op;
        }
        let residual = crate::linalg::hermitian_operator_norm(&ComplexOperator::from_matrix(
            sum - DMatrix::<C64>::identity(input_dim, input_dim),
        ))?;
        if residual > 1e-8 {
            return Err(Error::validation(
                "trace preserving",
                format!("sum of K^dagger K deviates from identity by {residual:.3e}"),
            ));
        }
        Ok(CptpChannel { kraus, input_dim, dims })
    }

    pub fn identity(dim: usize) -> Self {
        CptpChannel {
            kraus: vec![DMatrix::identity(dim, dim)],
            input_dim: dim,
            dims: (dim, 1),
        }
    }

    /// Qubit depolarising channel `rho -> (1-p) rho + p I/2`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("depolarising parameter {p} outside [0, 1]")));
        }
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let paulis = [
            DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        ];
        let weights = [1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0];
        let kraus = paulis
            .into_iter()
            .zip(weights)
            .filter(|(_, w)| *w > 0.0)
            .map(|(m, w)| m * C64::new(w.sqrt(), 0.0))
            .collect();
        CptpChannel::new(kraus, 2, (2, 1))
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn kraus(&self) -> &[DMatrix<C64>] {
        &self.kraus
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.apply_block(rho, 1)
    }

    /// Applies the `l`-fold product channel to a state on `d_A^l`, returning
    /// the output with factors ordered `B_1 .. B_l E_1 .. E_l`.
    pub fn apply_block(&self, rho: &DensityOperator, l: usize) -> Result<DensityOperator> {
        let din = composite_dim((0..l).map(|_| self.input_dim));
        if rho.dim() != din {
            return Err(Error::Dimension(format!(
                "input state has dimension {}, expected {din}",
                rho.dim()
            )));
        }
        let dout_letter = self.dims.0 * self.dims.1;
        let dout = composite_dim((0..l).map(|_| dout_letter));
        check_cap(dout, dim_cap())?;
        let mut acc = DMatrix::<C64>::zeros(dout, dout);
        for indices in all_words(self.kraus.len(), l) {
            let mut k = DMatrix::<C64>::identity(1, 1);
            for &i in &indices {
                k = k.kronecker(&self.kraus[i]);
            }
            acc += &k * rho.matrix() * k.adjoint();
        }
        let interleaved = ComplexOperator::from_matrix(acc);
        if self.dims.1 == 1 || l == 1 {
            return Ok(DensityOperator::from_op(interleaved));
        }
        let factor_dims: Vec<usize> = (0..l).flat_map(|_| [self.dims.0, self.dims.1]).collect();
        let perm: Vec<usize> = (0..l).map(|k| 2 * k).chain((0..l).map(|k| 2 * k + 1)).collect();
        Ok(DensityOperator::from_op(permute_subsystems(&interleaved, &factor_dims, &perm)?))
    }
}

/// A seeded sampler over a parametric channel family.
pub trait ChannelFamily: Sync {
    fn id(&self) -> String;
    fn sample(&self, rng: &mut LabRng) -> CqqBroadcastChannel;
}

/// Qubit depolarising cq channels `x -> (1-p)|x><x| + p I/2` with
/// `p` uniform on `[p_min, p_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DepolarizingFamily {
    p_min: f64,
    p_max: f64,
}

impl DepolarizingFamily {
    pub fn new(p_min: f64, p_max: f64) -> Result<Self> {
        if !(0.0 <= p_min && p_min <= p_max && p_max <= 1.0) {
            return Err(Error::Domain(format!("parameter range [{p_min}, {p_max}] not inside [0, 1]")));
        }
        Ok(DepolarizingFamily { p_min, p_max })
    }

    pub fn full() -> Self {
        DepolarizingFamily { p_min: 0.0, p_max: 1.0 }
    }

    pub fn channel_at(p: f64) -> CqqBroadcastChannel {
        let outputs = (0..2)
            .map(|x| {
                let mut diag = [p / 2.0, p / 2.0];
                diag[x] += 1.0 - p;
                DensityOperator::from_op(ComplexOperator::from_real_diagonal(&diag))
            })
            .collect();
        CqqBroadcastChannel { outputs, dims: (2, 1) }
    }
}

impl ChannelFamily for DepolarizingFamily {
    fn id(&self) -> String {
        format!("depolarizing[{},{}]", self.p_min, self.p_max)
    }

    fn sample(&self, rng: &mut LabRng) -> CqqBroadcastChannel {
        let p = self.p_min + (self.p_max - self.p_min) * rng.random::<f64>();
        Self::channel_at(p)
    }
}

/// Uniform sampling from an explicit finite list of channels.
#[derive(Clone, Debug)]
pub struct FiniteFamily {
    members: Vec<CqqBroadcastChannel>,
}

impl FiniteFamily {
    pub fn new(members: Vec<CqqBroadcastChannel>) -> Result<Self> {
        CompoundSet::new(members.clone())?;
        Ok(FiniteFamily { members })
    }
}

impl ChannelFamily for FiniteFamily {
    fn id(&self) -> String {
        format!("finite[{}]", self.members.len())
    }

    fn sample(&self, rng: &mut LabRng) -> CqqBroadcastChannel {
        self.members[rng.random_range(0..self.members.len())].clone()
    }
}

/// Settings for greedy net construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetConfig {
    pub tau: f64,
    pub seed: u64,
    /// Total number of family samples the builder may draw.
    pub sample_budget: usize,
    /// Samples per round; each round first serves as a hold-out check.
    pub batch_size: usize,
}

impl NetConfig {
    pub fn new(tau: f64, seed: u64) -> Self {
        NetConfig {
            tau,
            seed,
            sample_budget: 8192,
            batch_size: 512,
        }
    }
}

/// A net together with construction diagnostics.
#[derive(Clone, Debug)]
pub struct NetOutcome {
    pub net: CompoundSet,
    /// Largest distance from a fresh hold-out batch to the final net.
    pub holdout_radius: f64,
    pub samples_used: usize,
    /// `log2` of the existence bound `(6/tau)^(2 |X| dim^2)`.
    pub log2_cardinality_bound: f64,
}

pub fn log2_net_cardinality_bound(tau: f64, alphabet_size: usize, dim: usize) -> f64 {
    2.0 * alphabet_size as f64 * (dim * dim) as f64 * (6.0 / tau).log2()
}

/// Greedy farthest-point net over rounds of family samples.
///
/// Each round's fresh batch is first measured against the current net; if
/// every sample is within `tau` the net is returned. Otherwise the batch
/// joins the candidate pool and farthest candidates are promoted until the
/// pool is covered.
pub fn build_net(family: &dyn ChannelFamily, config: &NetConfig) -> Result<NetOutcome> {
    let tau = config.tau;
    if !(tau > 0.0 && tau < (-1.0f64).exp()) {
        return Err(Error::Domain(format!("net fineness {tau} outside (0, 1/e)")));
    }
    if config.batch_size == 0 || config.sample_budget == 0 {
        return Err(Error::Domain("sample budget and batch size must be positive".into()));
    }
    let mut rng = seeded(config.seed);
    let mut pool: Vec<CqqBroadcastChannel> = Vec::new();
    let mut pool_dist: Vec<f64> = Vec::new();
    let mut net: Vec<CqqBroadcastChannel> = Vec::new();
    let mut used = 0;
    let mut holdout_radius = f64::INFINITY;
    while used < config.sample_budget {
        let take = config.batch_size.min(config.sample_budget - used);
        let batch: Vec<CqqBroadcastChannel> = (0..take).map(|_| family.sample(&mut rng)).collect();
        used += take;
        let batch_dist: Vec<f64> = batch.par_iter().map(|c| nearest_distance(c, &net).0).collect::<Vec<_>>();
        holdout_radius = batch_dist.iter().copied().fold(0.0, f64::max);
        if !net.is_empty() && holdout_radius <= tau {
            return finish_net(net, family, config, holdout_radius, used);
        }
        pool.extend(batch);
        pool_dist.extend(batch_dist);
        loop {
            let (far, radius) = argmax(&pool_dist);
            if radius <= tau {
                break;
            }
            let centre = pool[far].clone();
            pool_dist
                .par_iter_mut()
                .zip(pool.par_iter())
                .for_each(|(d, c)| *d = d.min(joint_distance(c, &centre)));
            net.push(centre);
        }
    }
    Err(Error::PartialNet {
        size: net.len(),
        radius: holdout_radius,
    })
}

fn finish_net(
    net: Vec<CqqBroadcastChannel>,
    family: &dyn ChannelFamily,
    config: &NetConfig,
    holdout_radius: f64,
    used: usize,
) -> Result<NetOutcome> {
    let (dims, alphabet) = (net[0].dims(), net[0].alphabet_size());
    let provenance = Provenance::Net {
        tau: config.tau,
        seed: config.seed,
        family: family.id(),
    };
    Ok(NetOutcome {
        net: CompoundSet::with_provenance(net, provenance)?,
        holdout_radius,
        samples_used: used,
        log2_cardinality_bound: log2_net_cardinality_bound(config.tau, alphabet, dims.0 * dims.1),
    })
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
}

fn joint_distance(a: &CqqBroadcastChannel, b: &CqqBroadcastChannel) -> f64 {
    a.outputs
        .iter()
        .zip(&b.outputs)
        .map(|(x, y)| trace_norm(&(x.op() - y.op())))
        .fold(0.0, f64::max)
}

fn nearest_distance(channel: &CqqBroadcastChannel, net: &[CqqBroadcastChannel]) -> (f64, usize) {
    net.iter()
        .enumerate()
        .map(|(i, m)| (joint_distance(channel, m), i))
        .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Outcome of checking a net against fresh family samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetVerification {
    pub samples: usize,
    pub max_distance: f64,
    pub tau: f64,
    pub pass: bool,
    pub block_checks: Vec<BlockCheck>,
}

/// Largest observed `||W^{⊗n}(x) - W_near^{⊗n}(x)||_1` over sampled words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCheck {
    pub n: usize,
    pub max_distance: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn verify_net(
    net: &CompoundSet,
    family: &dyn ChannelFamily,
    tau: f64,
    samples: usize,
    seed: u64,
) -> Result<NetVerification> {
    let members = net.members();
    let results: Vec<Result<(f64, [f64; 3])>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, k as u64);
            let channel = family.sample(&mut rng);
            let (dist, nearest) = nearest_distance(&channel, members);
            let mut blocks = [0.0; 3];
            for (slot, n) in (1..=3).enumerate() {
                let word: Vec<usize> = (0..n).map(|_| rng.random_range(0..channel.alphabet_size())).collect();
                let a = channel.apply_word(&word)?;
                let b = members[nearest].apply_word(&word)?;
                blocks[slot] = trace_norm(&(a.op() - b.op()));
            }
            Ok((dist, blocks))
        })
        .collect();
    let mut max_distance = 0.0f64;
    let mut block_max = [0.0f64; 3];
    for r in results {
        let (d, blocks) = r?;
        max_distance = max_distance.max(d);
        for (m, b) in block_max.iter_mut().zip(blocks) {
            *m = m.max(b);
        }
    }
    let block_checks: Vec<BlockCheck> = (1..=3)
        .map(|n| {
            let bound = 2.0 * n as f64 * tau;
            BlockCheck {
                n,
                max_distance: block_max[n - 1],
                bound,
                pass: block_max[n - 1] <= bound + 1e-12,
            }
        })
        .collect();
    let pass = max_distance <= tau && block_checks.iter().all(|b| b.pass);
    Ok(NetVerification {
        samples,
        max_distance,
        tau,
        pass,
        block_checks,
    })
}

/// All words of length `n` over `0..alphabet_size`, lexicographic order.
pub fn all_words(alphabet_size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(alphabet_size.saturating_pow(n as u32));
    let mut word = vec![0usize; n];
    if alphabet_size == 0 {
        return out;
    }
    loop {
        out.push(word.clone());
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] < alphabet_size {
                break;
            }
            word[pos] = 0;
        }
    }
}

pub(crate) fn check_letters(word: &[usize], alphabet_size: usize) -> Result<()> {
    if let Some((i, &x)) = word.iter().enumerate().find(|(_, &x)| x >= alphabet_size) {
        return Err(Error::Dimension(format!(
            "letter {x} at position {i} outside alphabet of size {alphabet_size}"
        )));
    }
    Ok(())
}
