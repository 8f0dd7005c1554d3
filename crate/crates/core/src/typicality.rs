//! Method of types: exact types, typical and conditionally typical sets,
//! pruned distributions and frequency-typical projectors.
//!
//! A word `x` is δ-typical for `p` when every letter frequency is within
//! `δ` of `p(x)` and a letter occurs exactly when it has positive
//! probability. A word `y` is conditionally typical given `x` for `t` when
//! every pair count satisfies `|N(x,y)/n - t(y|x) N(x)/n| <= δ`, and for
//! every letter `x` occurring in the conditioning word, `(x, y)` occurs
//! exactly when `t(y|x) > 0`. Letters absent from the conditioning word
//! impose no support constraint.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropics::spectrum_entropy;
use crate::error::{Error, Result};
use crate::linalg::{check_cap, composite_dim, dim_cap, spectral, tensor_all, ComplexOperator, DensityOperator};
use crate::prob::{check_distribution, check_stochastic, ZERO_PROBABILITY};

pub type Word = Vec<usize>;

pub const TYPE_GUARD: f64 = 1e6;
pub const WORD_GUARD: f64 = 1e7;

/// Letter counts of a word of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeVector {
    counts: Vec<usize>,
}

impl TypeVector {
    pub fn new(counts: Vec<usize>) -> Self {
        TypeVector { counts }
    }

    pub fn of_word(word: &[usize], alphabet_size: usize) -> Result<Self> {
        crate::channels::check_letters(word, alphabet_size)?;
        let mut counts = vec![0; alphabet_size];
        for &x in word {
            counts[x] += 1;
        }
        Ok(TypeVector { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

fn multiset_count(alphabet_size: usize, n: usize) -> f64 {
    // C(n + a - 1, a - 1)
    let k = alphabet_size.saturating_sub(1);
    (1..=k).fold(1.0, |acc, i| acc * (n + i) as f64 / i as f64)
}

/// Every type of block length `n`, first count descending.
pub fn enumerate_types(alphabet_size: usize, n: usize) -> Result<Vec<TypeVector>> {
    if alphabet_size == 0 {
        return Err(Error::Domain("alphabet must be non-empty".into()));
    }
    let count = multiset_count(alphabet_size, n);
    if count > TYPE_GUARD {
        return Err(Error::EnumerationGuard {
            count,
            guard: TYPE_GUARD,
        });
    }
    let mut out = Vec::with_capacity(count.round() as usize);
    let mut prefix = Vec::with_capacity(alphabet_size);
    fill_types(alphabet_size, n, &mut prefix, &mut out);
    Ok(out)
}

fn fill_types(alphabet_size: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<TypeVector>) {
    if prefix.len() + 1 == alphabet_size {
        prefix.push(remaining);
        out.push(TypeVector::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for c in (0..=remaining).rev() {
        prefix.push(c);
        fill_types(alphabet_size, remaining - c, prefix, out);
        prefix.pop();
    }
}

fn is_zero(p: f64) -> bool {
    p <= ZERO_PROBABILITY
}

/// Typicality predicate against an already validated distribution.
pub fn is_typical(word: &[usize], p: &[f64], delta: f64) -> bool {
    let n = word.len() as f64;
    let mut counts = vec![0usize; p.len()];
    for &x in word {
        if x >= p.len() {
            return false;
        }
        counts[x] += 1;
    }
    counts.iter().zip(p).all(|(&c, &px)| {
        let freq_ok = n == 0.0 || (c as f64 / n - px).abs() <= delta + 1e-12;
        freq_ok && (is_zero(px) == (c == 0))
    })
}

/// Conditional typicality predicate; `t` has one row per conditioning letter.
pub fn is_conditionally_typical(y_word: &[usize], x_word: &[usize], t: &[Vec<f64>], delta: f64) -> bool {
    if y_word.len() != x_word.len() {
        return false;
    }
    let ny = t.first().map_or(0, |r| r.len());
    let nx = t.len();
    let n = x_word.len() as f64;
    let mut pair = vec![0usize; nx * ny];
    let mut single = vec![0usize; nx];
    for (&x, &y) in x_word.iter().zip(y_word) {
        if x >= nx || y >= ny {
            return false;
        }
        pair[x * ny + y] += 1;
        single[x] += 1;
    }
    for x in 0..nx {
        for y in 0..ny {
            let c = pair[x * ny + y] as f64;
            if (c / n - t[x][y] * single[x] as f64 / n).abs() > delta + 1e-12 {
                return false;
            }
            if single[x] > 0 && is_zero(t[x][y]) != (pair[x * ny + y] == 0) {
                return false;
            }
        }
    }
    true
}

fn check_word_guard(alphabet_size: usize, n: usize) -> Result<()> {
    let count = (alphabet_size as f64).powi(n as i32);
    if count > WORD_GUARD {
        return Err(Error::EnumerationGuard {
            count,
            guard: WORD_GUARD,
        });
    }
    Ok(())
}

fn words_where(alphabet_size: usize, n: usize, mut keep: impl FnMut(&[usize]) -> bool) -> Vec<Word> {
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    loop {
        if keep(&word) {
            out.push(word.clone());
        }
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

/// All δ-typical words of length `n`, lexicographic order.
pub fn typical_set(p: &[f64], n: usize, delta: f64) -> Result<Vec<Word>> {
    check_distribution(p, "p")?;
    check_delta(delta)?;
    check_word_guard(p.len(), n)?;
    Ok(words_where(p.len(), n, |w| is_typical(w, p, delta)))
}

/// All words conditionally typical given `x_word`, lexicographic order.
pub fn conditionally_typical_set(t: &[Vec<f64>], x_word: &[usize], delta: f64) -> Result<Vec<Word>> {
    let ny = check_conditional(t, x_word)?;
    check_delta(delta)?;
    check_word_guard(ny, x_word.len())?;
    Ok(words_where(ny, x_word.len(), |y| is_conditionally_typical(y, x_word, t, delta)))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("typicality slack {delta} must be nonnegative")))
    }
}

fn check_conditional(t: &[Vec<f64>], x_word: &[usize]) -> Result<usize> {
    let ny = t.first().map_or(0, |r| r.len());
    check_stochastic(t, t.len(), ny, "t")?;
    crate::channels::check_letters(x_word, t.len())?;
    Ok(ny)
}

/// The i.i.d. law renormalised onto a typical set.
#[derive(Clone, Debug, PartialEq)]
pub struct PrunedDistribution {
    n: usize,
    support: Vec<Word>,
    probs: Vec<f64>,
    typical_mass: f64,
    cumulative: Vec<f64>,
}

impl PrunedDistribution {
    fn from_weights(n: usize, support: Vec<Word>, weights: Vec<f64>, what: String) -> Result<Self> {
        let mass: f64 = weights.iter().sum();
        if support.is_empty() || mass <= 0.0 {
            return Err(Error::EmptyTypicalSet(what));
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / mass).collect();
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(PrunedDistribution {
            n,
            support,
            probs,
            typical_mass: mass,
            cumulative,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[Word] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of the typical set under the unpruned i.i.d. law.
    pub fn typical_mass(&self) -> f64 {
        self.typical_mass
    }

    /// `sum |pruned - iid|`, which equals `2 (1 - mass)`.
    pub fn l1_distance_to_iid(&self) -> f64 {
        2.0 * (1.0 - self.typical_mass)
    }

    /// Total-variation distance, half the L1 distance.
    pub fn tv_distance_to_iid(&self) -> f64 {
        1.0 - self.typical_mass
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &Word {
        let u: f64 = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
        let k = self.cumulative.partition_point(|&c| c <= u).min(self.support.len() - 1);
        &self.support[k]
    }
}

/// `p^n` restricted to the δ-typical set and renormalised.
pub fn pruned(p: &[f64], n: usize, delta: f64) -> Result<PrunedDistribution> {
    let support = typical_set(p, n, delta)?;
    let weights = support.iter().map(|w| w.iter().map(|&x| p[x]).product()).collect();
    PrunedDistribution::from_weights(n, support, weights, format!("p={p:?}, n={n}, delta={delta}"))
}

/// `t^n(.|x)` restricted to the conditionally typical set and renormalised.
pub fn pruned_conditional(t: &[Vec<f64>], x_word: &[usize], delta: f64) -> Result<PrunedDistribution> {
    let support = conditionally_typical_set(t, x_word, delta)?;
    let weights = support
        .iter()
        .map(|y| x_word.iter().zip(y).map(|(&x, &yy)| t[x][yy]).product())
        .collect();
    PrunedDistribution::from_weights(
        x_word.len(),
        support,
        weights,
        format!("t={t:?}, x={x_word:?}, delta={delta}"),
    )
}

/// Which projector of the typicality toolbox to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectorKind {
    /// Frequency-typical subspace of `⊗ rho_{x_i}`.
    Unconditional,
    /// Typical subspace of `⊗ W(y_i)` conditioned on the pair pattern `(x_i, y_i)`.
    Conditional,
    /// Typical subspace of `⊗ sum_y r(y|x_i) W(y)`.
    TotalConditional,
}

/// The channel `r(y|x)` and, optionally, a word `y` drawn from it.
#[derive(Clone, Copy, Debug)]
pub struct ChannelConditioning<'a> {
    pub r: &'a [Vec<f64>],
    pub y_word: Option<&'a [usize]>,
}

/// Measured statistics of a typical projector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorStats {
    pub n: usize,
    /// `tr(rho Pi)` for the product state the projector is built from.
    pub overlap: f64,
    pub rank: usize,
    /// Largest eigenvalue of `Pi rho Pi`.
    pub max_eigenvalue: f64,
    /// Empirically weighted conditional entropy per letter.
    pub entropy_rate: f64,
    /// `log2(rank)/n - entropy_rate`.
    pub delta_meas: f64,
    /// `entropy_rate + log2(max_eigenvalue)/n`.
    pub gamma_meas: f64,
    /// For the total-conditional kind with a sampled `y`: `tr(W^n(y) Pi)`.
    pub total_overlap: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct TypicalProjector {
    projector: ComplexOperator,
    kind: ProjectorKind,
    stats: ProjectorStats,
}

impl TypicalProjector {
    pub fn projector(&self) -> &ComplexOperator {
        &self.projector
    }

    pub fn kind(&self) -> ProjectorKind {
        self.kind
    }

    pub fn stats(&self) -> &ProjectorStats {
        &self.stats
    }
}

struct LetterSpectrum {
    values: Vec<f64>,
    vectors: ComplexOperator,
}

fn letter_spectrum(state: &DensityOperator) -> Result<LetterSpectrum> {
    let spec = spectral(state.op())?;
    let values = spec
        .values
        .iter()
        .map(|&v| if v <= crate::linalg::SUPPORT_EPS { 0.0 } else { v })
        .collect();
    Ok(LetterSpectrum {
        values,
        vectors: ComplexOperator::from_matrix(spec.vectors),
    })
}

/// Row index of the single unit entry of each column, when `v` is a
/// permutation matrix.
fn basis_permutation(v: &ComplexOperator) -> Option<Vec<usize>> {
    let m = v.matrix();
    let mut perm = Vec::with_capacity(m.ncols());
    for k in 0..m.ncols() {
        let mut row = None;
        for i in 0..m.nrows() {
            let z = m[(i, k)];
            if z.re == 0.0 && z.im == 0.0 {
                continue;
            }
            if row.is_some() || z.re != 1.0 || z.im != 0.0 {
                return None;
            }
            row = Some(i);
        }
        perm.push(row?);
    }
    Some(perm)
}

/// Builds a frequency-typical projector.
///
/// `states` holds one state per letter of the alphabet the word is spelled
/// in: the `x` alphabet for the unconditional kind and the `y` alphabet for
/// the two conditional kinds.
pub fn typical_projector(
    states: &[DensityOperator],
    x_word: &[usize],
    delta: f64,
    kind: ProjectorKind,
    conditioning: Option<ChannelConditioning<'_>>,
) -> Result<TypicalProjector> {
    check_delta(delta)?;
    let Some(first) = states.first() else {
        return Err(Error::Dimension("no per-letter states supplied".into()));
    };
    let d = first.dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(Error::Dimension("per-letter states differ in dimension".into()));
    }
    let n = x_word.len();
    let total_dim = composite_dim((0..n).map(|_| d));
    check_cap(total_dim, dim_cap())?;

    // Per-position class and per-class state.
    let (classes, class_states, y_for_total): (Vec<usize>, Vec<DensityOperator>, Option<Vec<usize>>) = match kind {
        ProjectorKind::Unconditional => {
            crate::channels::check_letters(x_word, states.len())?;
            (x_word.to_vec(), states.to_vec(), None)
        }
        ProjectorKind::Conditional => {
            let cond = conditioning
                .ok_or_else(|| Error::Domain("conditional projector needs (r, y_word)".into()))?;
            let y = cond
                .y_word
                .ok_or_else(|| Error::Domain("conditional projector needs a y word".into()))?;
            check_conditional(cond.r, x_word)?;
            if cond.r[0].len() != states.len() {
                return Err(Error::Dimension("r columns must match the number of states".into()));
            }
            if !is_conditionally_typical(y, x_word, cond.r, delta) {
                return Err(Error::NonTypicalWord(format!("y={y:?} given x={x_word:?}")));
            }
            let ny = states.len();
            let classes = x_word.iter().zip(y).map(|(&x, &yy)| x * ny + yy).collect();
            let class_states = (0..cond.r.len() * ny).map(|c| states[c % ny].clone()).collect();
            (classes, class_states, None)
        }
        ProjectorKind::TotalConditional => {
            let cond = conditioning
                .ok_or_else(|| Error::Domain("total conditional projector needs r".into()))?;
            check_conditional(cond.r, x_word)?;
            if cond.r[0].len() != states.len() {
                return Err(Error::Dimension("r columns must match the number of states".into()));
            }
            let averaged = cond
                .r
                .iter()
                .map(|row| DensityOperator::mixture(row, states))
                .collect::<Result<Vec<_>>>()?;
            let y = match cond.y_word {
                Some(y) => {
                    if !is_conditionally_typical(y, x_word, cond.r, delta) {
                        return Err(Error::NonTypicalWord(format!("y={y:?} given x={x_word:?}")));
                    }
                    Some(y.to_vec())
                }
                None => None,
            };
            (x_word.to_vec(), averaged, y)
        }
    };

    let spectra = class_states.iter().map(letter_spectrum).collect::<Result<Vec<_>>>()?;
    let lambda: Vec<Vec<f64>> = spectra.iter().map(|s| s.values.clone()).collect();

    let mut mask = vec![false; total_dim];
    let mut overlap = 0.0;
    let mut rank = 0usize;
    let mut max_eigenvalue = 0.0f64;
    let mut index = vec![0usize; n];
    for (flat, slot) in mask.iter_mut().enumerate() {
        let mut rem = flat;
        for pos in (0..n).rev() {
            index[pos] = rem % d;
            rem /= d;
        }
        if is_conditionally_typical(&index, &classes, &lambda, delta) {
            *slot = true;
            rank += 1;
            let weight: f64 = index.iter().zip(&classes).map(|(&k, &c)| lambda[c][k]).product();
            overlap += weight;
            max_eigenvalue = max_eigenvalue.max(weight);
        }
    }

    let bases: Vec<&ComplexOperator> = classes.iter().map(|&c| &spectra[c].vectors).collect();
    let v = tensor_all(bases.iter().copied())?;
    let projector = match basis_permutation(&v) {
        Some(perm) => {
            let mut diag = vec![0.0; total_dim];
            for (k, &m) in mask.iter().enumerate() {
                if m {
                    diag[perm[k]] = 1.0;
                }
            }
            ComplexOperator::from_real_diagonal(&diag)
        }
        None => {
            let mut scaled = v.matrix().clone();
            for (k, &m) in mask.iter().enumerate() {
                if !m {
                    scaled.column_mut(k).fill(num_complex::Complex64::new(0.0, 0.0));
                }
            }
            ComplexOperator::from_matrix(&scaled * v.matrix().adjoint()).hermitian_part()
        }
    };

    let mut class_counts = vec![0usize; class_states.len()];
    for &c in &classes {
        class_counts[c] += 1;
    }
    let entropy_rate: f64 = class_counts
        .iter()
        .zip(&lambda)
        .filter(|(c, _)| **c > 0)
        .map(|(&c, l)| c as f64 / n as f64 * spectrum_entropy(l))
        .sum();
    let nf = n.max(1) as f64;
    let delta_meas = if rank > 0 {
        (rank as f64).log2() / nf - entropy_rate
    } else {
        f64::NEG_INFINITY
    };
    let gamma_meas = if max_eigenvalue > 0.0 {
        entropy_rate + max_eigenvalue.log2() / nf
    } else {
        f64::NEG_INFINITY
    };

    let total_overlap = match y_for_total {
        Some(y) => {
            let out = tensor_all(y.iter().map(|&yy| states[yy].op()))?;
            Some(out.trace_product(&projector).re)
        }
        None => None,
    };

    Ok(TypicalProjector {
        projector,
        kind,
        stats: ProjectorStats {
            n,
            overlap,
            rank,
            max_eigenvalue,
            entropy_rate,
            delta_meas,
            gamma_meas,
            total_overlap,
        },
    })
}

/// Limits of the measured rank and eigenvalue exponents for a single
/// spectrum at slack `delta`: the largest entropy excess and the largest
/// log-likelihood deficit over frequency vectors within `delta` of the
/// spectrum that share its support.
pub fn spectral_typicality_limits(spectrum: &[f64], delta: f64) -> Result<(f64, f64)> {
    check_distribution(spectrum, "spectrum")?;
    check_delta(delta)?;
    let support: Vec<f64> = spectrum.iter().copied().filter(|&v| !is_zero(v)).collect();
    let lo: Vec<f64> = support.iter().map(|&v| (v - delta).max(0.0)).collect();
    let hi: Vec<f64> = support.iter().map(|&v| (v + delta).min(1.0)).collect();
    let s = spectrum_entropy(&support);

    // Maximum entropy in the box: clamp a common level into each interval.
    let fill = |level: f64| -> f64 { lo.iter().zip(&hi).map(|(&l, &h)| level.clamp(l, h)).sum() };
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if fill(mid) < 1.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let level = 0.5 * (a + b);
    let kappa: Vec<f64> = lo.iter().zip(&hi).map(|(&l, &h)| level.clamp(l, h)).collect();
    let entropy_excess = spectrum_entropy(&kappa) - s;

    // Minimum of sum kappa_k (-log2 lambda_k): greedy on the box.
    let cost: Vec<f64> = support.iter().map(|&v| -v.log2()).collect();
    let mut order: Vec<usize> = (0..support.len()).collect();
    order.sort_by(|&i, &j| cost[i].total_cmp(&cost[j]));
    let mut kappa = lo.clone();
    let mut remaining = 1.0 - kappa.iter().sum::<f64>();
    for &k in &order {
        let add = (hi[k] - kappa[k]).min(remaining.max(0.0));
        kappa[k] += add;
        remaining -= add;
    }
    let min_cost: f64 = kappa.iter().zip(&cost).map(|(k, c)| k * c).sum();
    Ok((entropy_excess, s - min_cost))
}
