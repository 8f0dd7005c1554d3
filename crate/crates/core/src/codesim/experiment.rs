//! End-to-end universal coding experiments over a finite compound.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::codebook::{sample_superposition_codebook, CodebookLayout};
use super::decoder::{build_decoder, DecoderMethod};
use super::wiretap::{average_error, build_wiretap_code, effective_channel, security_leakage};
use crate::channels::{CompoundSet, CqChannel, Receiver};
use crate::error::{Error, Result};
use crate::regions::{evaluate_corner, net_slack, FactorizedInput, Scenario};

/// Largest number of codewords a single experiment may sample.
pub const CODEWORD_GUARD: usize = 1 << 14;

/// How message-set sizes are chosen for each block length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum LayoutPolicy {
    Fixed { m0: usize, j: usize, l: usize },
    /// Rates in bits per channel use; sizes are `floor(2^{uses * rate})`.
    Rates { r_pub: f64, r_c: f64, r_rand: f64 },
    /// Sizes from the entropic terms of the input: the public and
    /// confidential rates shrunk by `margin`, the randomisation rate (Eve's
    /// worst conditional term) inflated by it.
    Template { margin: f64 },
}

impl Default for LayoutPolicy {
    fn default() -> Self {
        LayoutPolicy::Template { margin: 0.15 }
    }
}

fn size_for(uses: usize, rate: f64) -> Result<usize> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::Domain(format!("rate {rate} must be finite and nonnegative")));
    }
    let size = (uses as f64 * rate + 1e-9).exp2().floor();
    if size > CODEWORD_GUARD as f64 {
        return Err(Error::EnumerationGuard {
            count: size,
            guard: CODEWORD_GUARD as f64,
        });
    }
    Ok((size as usize).max(1))
}

/// Resolves a policy for `n` codeword letters of `block` channel uses each.
pub fn resolve_layout(
    policy: &LayoutPolicy,
    compound: &CompoundSet,
    input: &FactorizedInput,
    scenario: Scenario,
    n: usize,
) -> Result<CodebookLayout> {
    let uses = n * input.l;
    let layout = match *policy {
        LayoutPolicy::Fixed { m0, j, l } => CodebookLayout::new(m0, j, l, n)?,
        LayoutPolicy::Rates { r_pub, r_c, r_rand } => {
            CodebookLayout::new(size_for(uses, r_pub)?, size_for(uses, r_c)?, size_for(uses, r_rand)?, n)?
        }
        LayoutPolicy::Template { margin } => {
            if !(0.0..1.0).contains(&margin) {
                return Err(Error::Domain(format!("margin {margin} must lie in [0, 1)")));
            }
            let corner = evaluate_corner(compound, input, scenario)?;
            let randomisation = corner
                .terms
                .iter()
                .map(|t| t.y_eve_given_u)
                .fold(0.0, f64::max)
                / input.l as f64;
            CodebookLayout::new(
                size_for(uses, corner.r_pub * (1.0 - margin))?,
                size_for(uses, corner.r_c * (1.0 - margin))?,
                size_for(uses, randomisation * (1.0 + margin))?,
                n,
            )?
        }
    };
    if layout.total_words() > CODEWORD_GUARD {
        return Err(Error::EnumerationGuard {
            count: layout.total_words() as f64,
            guard: CODEWORD_GUARD as f64,
        });
    }
    Ok(layout)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub input: FactorizedInput,
    pub policy: LayoutPolicy,
    pub n_grid: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Typicality slack of the codebook laws.
    pub delta: f64,
    #[serde(default)]
    pub method: DecoderMethod,
}

/// Exact figures of merit of one code on one member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub seed: u64,
    pub member: usize,
    pub e_bob: f64,
    /// Eve's error on the common message; absent for the TPC scenario.
    pub e_eve: Option<f64>,
    pub leakage: f64,
}

/// Seed averages of the worst member, per block length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub n: usize,
    pub layout: CodebookLayout,
    pub mean_max_e_bob: f64,
    pub mean_max_e_eve: Option<f64>,
    pub mean_max_leakage: f64,
    /// Largest leakage over seeds and members, in bits per channel use.
    pub max_leakage_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub scenario: Scenario,
    pub members: usize,
    pub seeds: Vec<u64>,
    pub rows: Vec<ExperimentRow>,
    pub summaries: Vec<BlockSummary>,
    /// Continuity slack when the compound is a net, per block length.
    pub slack: Vec<Option<f64>>,
    pub wall_clock_secs: f64,
}

/// Builds the code for one `(n, seed)` and evaluates it on every member.
pub fn run_single(
    compound: &CompoundSet,
    config: &ExperimentConfig,
    layout: CodebookLayout,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    let input = &config.input;
    if input.u_size() != input.q.len() || input.y_size() == 0 {
        return Err(Error::Layout("input distributions are inconsistent".into()));
    }
    let codebook = sample_superposition_codebook(&input.q, &input.r, layout, config.delta, seed)?;
    let effective = |receiver: Receiver| -> Result<Vec<CqChannel>> {
        compound
            .members()
            .iter()
            .map(|m| effective_channel(m, receiver, input.l, &input.t))
            .collect()
    };
    let bob_inner = effective(Receiver::Bob)?;
    let bob_outer = bob_inner.iter().map(|c| c.precompose(&input.r)).collect::<Result<Vec<_>>>()?;
    let outer_bob = build_decoder(&codebook.u_words, &bob_outer, config.method)?;
    let inner = (0..layout.m0)
        .map(|m| build_decoder(codebook.inner_words(m), &bob_inner, config.method))
        .collect::<Result<Vec<_>>>()?;
    let outer_eve = match config.scenario {
        Scenario::Bcc => {
            let eve_outer = effective(Receiver::Eve)?
                .iter()
                .map(|c| c.precompose(&input.r))
                .collect::<Result<Vec<_>>>()?;
            Some(build_decoder(&codebook.u_words, &eve_outer, config.method)?)
        }
        Scenario::Tpc => None,
    };
    let code = build_wiretap_code(&codebook, &input.t, input.l, &outer_bob, &inner, outer_eve.as_ref())?;
    compound
        .members()
        .iter()
        .enumerate()
        .map(|(s, member)| {
            Ok(ExperimentRow {
                n: layout.n,
                seed,
                member: s,
                e_bob: average_error(&code, member, Receiver::Bob)?,
                e_eve: match config.scenario {
                    Scenario::Bcc => Some(average_error(&code, member, Receiver::Eve)?),
                    Scenario::Tpc => None,
                },
                leakage: security_leakage(&code, member)?,
            })
        })
        .collect()
}

pub fn run_universal_experiment(compound: &CompoundSet, config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    config.input.validate()?;
    if config.n_grid.is_empty() || config.seeds.is_empty() {
        return Err(Error::Domain("the n grid and the seed list must be non-empty".into()));
    }
    if config.input.block_alphabet_size() != compound.alphabet_size().pow(config.input.l as u32) {
        return Err(Error::Dimension(format!(
            "input blocks span {} letters but the compound has {}^{}",
            config.input.block_alphabet_size(),
            compound.alphabet_size(),
            config.input.l
        )));
    }
    let layouts = config
        .n_grid
        .iter()
        .map(|&n| resolve_layout(&config.policy, compound, &config.input, config.scenario, n))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, u64)> = (0..layouts.len())
        .flat_map(|k| config.seeds.iter().map(move |&s| (k, s)))
        .collect();
    let results: Vec<Result<Vec<ExperimentRow>>> = jobs
        .par_iter()
        .map(|&(k, seed)| run_single(compound, config, layouts[k], seed))
        .collect();
    let mut rows = Vec::with_capacity(jobs.len() * compound.len());
    for r in results {
        rows.extend(r?);
    }

    let summaries = layouts
        .iter()
        .map(|layout| {
            let mut sum_b = 0.0;
            let mut sum_e = 0.0;
            let mut sum_leak = 0.0;
            let mut max_rate: f64 = 0.0;
            for &seed in &config.seeds {
                let block: Vec<&ExperimentRow> = rows.iter().filter(|r| r.n == layout.n && r.seed == seed).collect();
                sum_b += block.iter().map(|r| r.e_bob).fold(0.0, f64::max);
                sum_e += block.iter().filter_map(|r| r.e_eve).fold(0.0, f64::max);
                let leak = block.iter().map(|r| r.leakage).fold(0.0, f64::max);
                sum_leak += leak;
                max_rate = max_rate.max(leak / (layout.n * config.input.l) as f64);
            }
            let count = config.seeds.len() as f64;
            BlockSummary {
                n: layout.n,
                layout: *layout,
                mean_max_e_bob: sum_b / count,
                mean_max_e_eve: (config.scenario == Scenario::Bcc).then_some(sum_e / count),
                mean_max_leakage: sum_leak / count,
                max_leakage_rate: max_rate,
            }
        })
        .collect();
    let slack = config
        .n_grid
        .iter()
        .map(|&n| {
            compound
                .tau()
                .map(|tau| net_slack(tau, n * config.input.l, compound.dims()))
                .transpose()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        scenario: config.scenario,
        members: compound.len(),
        seeds: config.seeds.clone(),
        rows,
        summaries,
        slack,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}
