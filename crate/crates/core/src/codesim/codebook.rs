//! Two-layer superposition codebooks drawn from pruned typical laws.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{check_distribution, check_stochastic};
use crate::random::stream;
use crate::typicality::{pruned, pruned_conditional, Word};

/// Message-set sizes of a two-layer code of block length `n`.
///
/// The inner layer of each outer message has `j * l` words: `j`
/// confidential messages, each randomised over `l` words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodebookLayout {
    pub m0: usize,
    pub j: usize,
    pub l: usize,
    pub n: usize,
}

impl CodebookLayout {
    pub fn new(m0: usize, j: usize, l: usize, n: usize) -> Result<Self> {
        if m0 == 0 || j == 0 || l == 0 || n == 0 {
            return Err(Error::Layout(format!("sizes must be positive, got M0={m0}, J={j}, L={l}, n={n}")));
        }
        Ok(CodebookLayout { m0, j, l, n })
    }

    /// A plain two-layer code with `m1` inner messages and no randomisation.
    pub fn plain(m0: usize, m1: usize, n: usize) -> Result<Self> {
        Self::new(m0, m1, 1, n)
    }

    pub fn inner_size(&self) -> usize {
        self.j * self.l
    }

    pub fn total_words(&self) -> usize {
        self.m0 * self.inner_size()
    }

    /// Index of `(j, l)` within an inner layer.
    pub fn inner_index(&self, j: usize, l: usize) -> usize {
        j * self.l + l
    }
}

/// Outer words `u_m` and, for each of them, the inner words `y_{m,j,l}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionCodebook {
    pub layout: CodebookLayout,
    pub u_words: Vec<Word>,
    /// `y_words[m][layout.inner_index(j, l)]`.
    pub y_words: Vec<Vec<Word>>,
    pub seed: u64,
    pub delta: f64,
    /// Typical mass of the outer law.
    pub u_mass: f64,
    /// Typical mass of each inner law.
    pub y_masses: Vec<f64>,
}

impl SuperpositionCodebook {
    pub fn y_word(&self, m: usize, j: usize, l: usize) -> &Word {
        &self.y_words[m][self.layout.inner_index(j, l)]
    }

    pub fn inner_words(&self, m: usize) -> &[Word] {
        &self.y_words[m]
    }
}

const OUTER_STREAM: u64 = u64::MAX;

fn inner_stream(m: usize, j: usize) -> u64 {
    ((m as u64) << 32) | j as u64
}

/// Samples outer words i.i.d. from the pruned `q^n` and, for each outer
/// word, inner words i.i.d. from the pruned `r^n(.|u_m)`.
///
/// The words of confidential message `(m, j)` come from their own random
/// stream in order of `l`, so codebooks that differ only in `L` share
/// their leading randomisation words.
pub fn sample_superposition_codebook(
    q: &[f64],
    r: &[Vec<f64>],
    layout: CodebookLayout,
    delta: f64,
    seed: u64,
) -> Result<SuperpositionCodebook> {
    check_distribution(q, "q")?;
    let ny = r.first().map_or(0, |row| row.len());
    check_stochastic(r, q.len(), ny, "r")?;
    let outer = pruned(q, layout.n, delta)?;
    let mut rng = stream(seed, OUTER_STREAM);
    let u_words: Vec<Word> = (0..layout.m0).map(|_| outer.sample(&mut rng).clone()).collect();
    let mut y_words = Vec::with_capacity(layout.m0);
    let mut y_masses = Vec::with_capacity(layout.m0);
    for (m, u) in u_words.iter().enumerate() {
        let inner = pruned_conditional(r, u, delta)?;
        let mut words = Vec::with_capacity(layout.inner_size());
        for j in 0..layout.j {
            let mut rng = stream(seed, inner_stream(m, j));
            for _ in 0..layout.l {
                words.push(inner.sample(&mut rng).clone());
            }
        }
        y_words.push(words);
        y_masses.push(inner.typical_mass());
    }
    Ok(SuperpositionCodebook {
        layout,
        u_words,
        y_words,
        seed,
        delta,
        u_mass: outer.typical_mass(),
        y_masses,
    })
}
