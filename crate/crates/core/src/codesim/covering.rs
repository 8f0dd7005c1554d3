//! Monte Carlo check of operator concentration for sums of bounded
//! positive random matrices.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ops::Op;
use crate::error::{Error, Result};
use crate::linalg::ComplexOperator;
use crate::random::{stream, LabRng};

/// A seeded law of PSD matrices.
pub trait MatrixSampler: Sync {
    fn dim(&self) -> usize;
    fn sample(&self, rng: &mut LabRng) -> ComplexOperator;
}

/// `diag(b_1, ..., b_d)` with independent `b_i ~ Bernoulli(p_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernoulliDiagonal {
    pub probs: Vec<f64>,
}

impl MatrixSampler for BernoulliDiagonal {
    fn dim(&self) -> usize {
        self.probs.len()
    }

    fn sample(&self, rng: &mut LabRng) -> ComplexOperator {
        let diag: Vec<f64> = self
            .probs
            .iter()
            .map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
            .collect();
        ComplexOperator::from_real_diagonal(&diag)
    }
}

/// A law concentrated on one matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantSampler(pub ComplexOperator);

impl MatrixSampler for ConstantSampler {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn sample(&self, _rng: &mut LabRng) -> ComplexOperator {
        self.0.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringConfig {
    /// Operator bound `X <= mu 1`.
    pub mu: f64,
    /// Deviation threshold, also the lower bound `E X >= epsilon 1`.
    pub epsilon: f64,
    pub sample_counts: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Samples used to estimate `E X`.
    pub prepass: usize,
}

impl CoveringConfig {
    pub fn new(mu: f64, epsilon: f64, sample_counts: Vec<usize>, trials: usize, seed: u64) -> Self {
        CoveringConfig {
            mu,
            epsilon,
            sample_counts,
            trials,
            seed,
            prepass: 100_000,
        }
    }
}

/// `2 d exp(-L eps^3 / (2 d mu ln 2))`.
pub fn covering_bound(dim: usize, mu: f64, epsilon: f64, samples: usize) -> f64 {
    let d = dim as f64;
    2.0 * d * (-(samples as f64) * epsilon.powi(3) / (2.0 * d * mu * std::f64::consts::LN_2)).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringPoint {
    pub samples: usize,
    pub violations: usize,
    pub trials: usize,
    pub rate: f64,
    pub bound: f64,
    /// Binomial standard error of the rate.
    pub sigma: f64,
    /// `rate <= bound + 3 sigma`.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub dim: usize,
    pub mu: f64,
    pub epsilon: f64,
    /// Smallest eigenvalue of the estimated mean.
    pub mean_min_eigenvalue: f64,
    pub points: Vec<CoveringPoint>,
    /// Rates never increase, and drop whenever the previous one is positive.
    pub decreasing: bool,
    pub pass: bool,
}

fn checked_sample(sampler: &dyn MatrixSampler, rng: &mut LabRng, mu: f64) -> Result<Op> {
    let x = Op::from_operator(&sampler.sample(rng));
    let spectrum = match &x {
        Op::Diag(v) => v.clone(),
        Op::Dense(m) => crate::linalg::spectral(m)?.values,
    };
    let (lo, hi) = spectrum
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if lo < -1e-10 {
        return Err(Error::validation("sample positive semi-definite", format!("eigenvalue {lo:.3e}")));
    }
    if hi > mu + 1e-10 {
        return Err(Error::validation("sample bounded by mu", format!("eigenvalue {hi} exceeds mu = {mu}")));
    }
    Ok(x)
}

pub fn covering_check(sampler: &dyn MatrixSampler, config: &CoveringConfig) -> Result<CoveringReport> {
    let (mu, eps) = (config.mu, config.epsilon);
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::Domain(format!("mu = {mu} must be positive")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("epsilon = {eps} must lie in (0, 1/2)")));
    }
    if config.trials == 0 || config.prepass == 0 {
        return Err(Error::Domain("trials and pre-pass samples must be positive".into()));
    }
    let d = sampler.dim();
    let mut rng = stream(config.seed, u64::MAX);
    let mut mean = Op::Diag(vec![0.0; d]);
    for _ in 0..config.prepass {
        mean.add_scaled(&checked_sample(sampler, &mut rng, mu)?, 1.0 / config.prepass as f64);
    }
    let mean_min_eigenvalue = match &mean {
        Op::Diag(v) => v.iter().copied().fold(f64::INFINITY, f64::min),
        Op::Dense(m) => *crate::linalg::spectral(m)?.values.last().expect("non-empty"),
    };
    if mean_min_eigenvalue < eps {
        return Err(Error::validation(
            "mean bounded below by epsilon",
            format!("estimated mean has eigenvalue {mean_min_eigenvalue} below {eps}"),
        ));
    }

    let mut points = Vec::with_capacity(config.sample_counts.len());
    for (idx, &samples) in config.sample_counts.iter().enumerate() {
        if samples == 0 {
            return Err(Error::Domain("sample counts must be positive".into()));
        }
        let outcomes: Vec<Result<bool>> = (0..config.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = stream(config.seed, ((idx as u64) << 32) | trial as u64);
                let mut avg = mean.zeros_like();
                for _ in 0..samples {
                    avg.add_scaled(&checked_sample(sampler, &mut rng, mu)?, 1.0 / samples as f64);
                }
                Ok(avg.sub(&mean).trace_norm() > eps)
            })
            .collect();
        let mut violations = 0;
        for o in outcomes {
            violations += usize::from(o?);
        }
        let rate = violations as f64 / config.trials as f64;
        let sigma = (rate * (1.0 - rate) / config.trials as f64).sqrt();
        let bound = covering_bound(d, mu, eps, samples);
        points.push(CoveringPoint {
            samples,
            violations,
            trials: config.trials,
            rate,
            bound,
            sigma,
            pass: rate <= bound + 3.0 * sigma,
        });
    }
    let decreasing = points
        .windows(2)
        .all(|w| w[1].rate <= w[0].rate && (w[0].rate == 0.0 || w[1].rate < w[0].rate));
    let pass = points.iter().all(|p| p.pass);
    Ok(CoveringReport {
        dim: d,
        mu,
        epsilon: eps,
        mean_min_eigenvalue,
        points,
        decreasing,
        pass,
    })
}
