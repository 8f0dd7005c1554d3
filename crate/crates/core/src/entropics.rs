//! Entropic functionals in bits.

use crate::channels::CqChannel;
use crate::error::{Error, Result};
use crate::linalg::{
    operator_function, partial_trace, spectral, ComplexOperator, DensityOperator, ScalarFunction, Subsystem,
    SUPPORT_EPS,
};
use crate::prob::check_distribution;

/// Shannon entropy of a spectrum, ignoring entries below the support
/// threshold.
pub fn spectrum_entropy(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&v| v > SUPPORT_EPS)
        .map(|&v| -v * v.log2())
        .sum()
}

pub fn shannon_entropy(p: &[f64]) -> f64 {
    spectrum_entropy(p)
}

pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

/// Von Neumann entropy.
pub fn entropy(rho: &DensityOperator) -> f64 {
    operator_entropy(rho.op())
}

pub(crate) fn operator_entropy(op: &ComplexOperator) -> f64 {
    if op.is_diagonal() {
        return spectrum_entropy(&op.real_diagonal());
    }
    let spec = spectral(op).expect("states are Hermitian");
    spectrum_entropy(&spec.values)
}

pub fn mutual_information(rho: &DensityOperator, dims: (usize, usize)) -> Result<f64> {
    let a = partial_trace(rho.op(), Subsystem::First, dims)?;
    let b = partial_trace(rho.op(), Subsystem::Second, dims)?;
    Ok(operator_entropy(&a) + operator_entropy(&b) - entropy(rho))
}

/// A finite ensemble `{p(x), rho_x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        check_distribution(&weights, "ensemble weights")?;
        if weights.len() != states.len() {
            return Err(Error::Dimension(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::Dimension("ensemble states differ in dimension".into()));
        }
        Ok(Ensemble { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn average(&self) -> DensityOperator {
        let mut acc = ComplexOperator::zeros(self.states[0].dim());
        for (w, s) in self.weights.iter().zip(&self.states) {
            acc.add_scaled(s.op(), *w);
        }
        DensityOperator::from_op(acc)
    }
}

/// `sum_x p(x) I(A;B)_{rho_x}`.
pub fn conditional_mutual_information(ensemble: &Ensemble, dims: (usize, usize)) -> Result<f64> {
    let mut total = 0.0;
    for (w, s) in ensemble.weights.iter().zip(&ensemble.states) {
        if *w > 0.0 {
            total += w * mutual_information(s, dims)?;
        }
    }
    Ok(total)
}

/// Holevo quantity `S(sum p W) - sum p S(W)`.
pub fn holevo(p: &[f64], w: &CqChannel) -> Result<f64> {
    check_distribution(p, "input distribution")?;
    let avg = w.average_output(p)?;
    let inner: f64 = p
        .iter()
        .zip(w.outputs())
        .filter(|(q, _)| **q > 0.0)
        .map(|(q, o)| q * entropy(o))
        .sum();
    Ok(entropy(&avg) - inner)
}

/// Relative entropy `tr rho (log rho - log sigma)`, infinite when the
/// support of `rho` is not contained in that of `sigma`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let spec = spectral(sigma.op())?;
    let kernel_weight: f64 = spec
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v <= SUPPORT_EPS)
        .map(|(k, _)| {
            let col = spec.vectors.column(k);
            (col.adjoint() * rho.matrix() * col)[(0, 0)].re
        })
        .sum();
    if kernel_weight > 1e-12 {
        return Ok(f64::INFINITY);
    }
    let log_sigma = spec.reconstruct_with(|v| if v > SUPPORT_EPS { v.log2() } else { 0.0 });
    Ok(-entropy(rho) - rho.expectation(&log_sigma))
}

/// Petz-Rényi quasi-divergence and divergence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenyiDivergence {
    pub q_alpha: f64,
    pub d_alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Rényi order {alpha} outside (0, 1)")))
    }
}

/// `Q = tr(rho^a sigma^(1-a))` and `D = log2(Q) / (a - 1)`.
pub fn renyi_divergence(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<RenyiDivergence> {
    check_alpha(alpha)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension("states differ in dimension".into()));
    }
    let a = operator_function(rho.op(), ScalarFunction::Power(alpha))?;
    let b = operator_function(sigma.op(), ScalarFunction::Power(1.0 - alpha))?;
    let q_alpha = a.trace_product(&b).re;
    let d_alpha = if q_alpha > 0.0 {
        q_alpha.log2() / (alpha - 1.0)
    } else {
        f64::INFINITY
    };
    Ok(RenyiDivergence { q_alpha, d_alpha })
}

fn weighted_power_sum(p: &[f64], w: &CqChannel, alpha: f64) -> Result<ComplexOperator> {
    check_alpha(alpha)?;
    check_distribution(p, "input distribution")?;
    if p.len() != w.alphabet_size() {
        return Err(Error::Dimension("distribution does not match channel alphabet".into()));
    }
    let mut acc = ComplexOperator::zeros(w.dim());
    for (q, o) in p.iter().zip(w.outputs()) {
        if *q > 0.0 {
            acc.add_scaled(&operator_function(o.op(), ScalarFunction::Power(alpha))?, *q);
        }
    }
    Ok(acc)
}

/// `chi_a(p, W) = a/(a-1) log2 tr (sum_y p(y) W(y)^a)^(1/a)`, the minimum
/// over output states of `D_a(W(p) || p ⊗ sigma)`.
pub fn chi_alpha(p: &[f64], w: &CqChannel, alpha: f64) -> Result<f64> {
    let sum = weighted_power_sum(p, w, alpha)?;
    let root = operator_function(&sum, ScalarFunction::Power(1.0 / alpha))?;
    let tr = root.trace().re;
    Ok(alpha / (alpha - 1.0) * tr.log2())
}

/// The output state attaining the minimum in [`chi_alpha`].
pub fn chi_alpha_minimizer(p: &[f64], w: &CqChannel, alpha: f64) -> Result<DensityOperator> {
    let sum = weighted_power_sum(p, w, alpha)?;
    let root = operator_function(&sum, ScalarFunction::Power(1.0 / alpha))?;
    let tr = root.trace().re;
    Ok(DensityOperator::from_op(root.scale(1.0 / tr)))
}

/// Which continuity estimate to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuityKind {
    /// `delta log2(d-1) + h(delta)`.
    Entropy,
    /// `2 (delta log2 d + (1+delta) h(delta/(1+delta)))`.
    ConditionalMutualInformation,
}

/// Continuity bound at trace distance `delta` on dimension `d`.
///
/// The entropy form uses the binary entropy of `delta`, which is only
/// defined up to `delta = 1`; beyond that the bound falls back to the
/// larger of `delta log2(d-1)` and `log2 d`.
pub fn continuity_bounds(delta: f64, d: usize, kind: ContinuityKind) -> Result<f64> {
    if !(0.0..=2.0).contains(&delta) {
        return Err(Error::Domain(format!("trace distance {delta} outside [0, 2]")));
    }
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} below 2")));
    }
    let df = d as f64;
    Ok(match kind {
        ContinuityKind::Entropy => {
            let linear = delta * (df - 1.0).log2();
            if delta <= 1.0 {
                linear + binary_entropy(delta)
            } else {
                linear.max(df.log2())
            }
        }
        ContinuityKind::ConditionalMutualInformation => {
            2.0 * (delta * df.log2() + (1.0 + delta) * binary_entropy(delta / (1.0 + delta)))
        }
    })
}
