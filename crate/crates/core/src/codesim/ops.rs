//! Block operators that stay diagonal whenever their inputs are.

use nalgebra::DMatrix;

use crate::channels::CqChannel;
use crate::entropics::spectrum_entropy;
use crate::error::Result;
use crate::linalg::{
    operator_function, spectral, tensor_all, trace_norm, ComplexOperator, DensityOperator, ScalarFunction, C64,
    SUPPORT_EPS,
};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Op {
    Diag(Vec<f64>),
    Dense(ComplexOperator),
}

impl Op {
    pub(crate) fn from_operator(op: &ComplexOperator) -> Op {
        if op.is_diagonal() && (0..op.dim()).all(|i| op.get(i, i).im == 0.0) {
            Op::Diag(op.real_diagonal())
        } else {
            Op::Dense(op.clone())
        }
    }

    pub(crate) fn identity(d: usize) -> Op {
        Op::Diag(vec![1.0; d])
    }

    pub(crate) fn zeros_like(&self) -> Op {
        match self {
            Op::Diag(v) => Op::Diag(vec![0.0; v.len()]),
            Op::Dense(m) => Op::Dense(ComplexOperator::zeros(m.dim())),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        match self {
            Op::Diag(v) => v.len(),
            Op::Dense(m) => m.dim(),
        }
    }

    pub(crate) fn to_operator(&self) -> ComplexOperator {
        match self {
            Op::Diag(v) => ComplexOperator::from_real_diagonal(v),
            Op::Dense(m) => m.clone(),
        }
    }

    fn dense(&self) -> DMatrix<C64> {
        self.to_operator().into_matrix()
    }

    pub(crate) fn add_scaled(&mut self, other: &Op, factor: f64) {
        match (&mut *self, other) {
            (Op::Diag(a), Op::Diag(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += factor * y;
                }
            }
            (Op::Dense(a), b) => a.add_scaled(&b.to_operator(), factor),
            (Op::Diag(_), Op::Dense(b)) => {
                let mut m = self.to_operator();
                m.add_scaled(b, factor);
                *self = Op::Dense(m);
            }
        }
    }

    pub(crate) fn sub(&self, other: &Op) -> Op {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    pub(crate) fn scale(&self, factor: f64) -> Op {
        match self {
            Op::Diag(v) => Op::Diag(v.iter().map(|x| x * factor).collect()),
            Op::Dense(m) => Op::Dense(m.scale(factor)),
        }
    }

    /// Real part of `tr(self other)`.
    pub(crate) fn trace_with(&self, other: &Op) -> f64 {
        match (self, other) {
            (Op::Diag(a), Op::Diag(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            (Op::Diag(a), Op::Dense(m)) | (Op::Dense(m), Op::Diag(a)) => {
                a.iter().enumerate().map(|(i, x)| x * m.get(i, i).re).sum()
            }
            (Op::Dense(a), Op::Dense(b)) => a.trace_product(b).re,
        }
    }

    /// `a b a`.
    pub(crate) fn sandwich(a: &Op, b: &Op) -> Op {
        match (a, b) {
            (Op::Diag(x), Op::Diag(y)) => Op::Diag(x.iter().zip(y).map(|(p, q)| p * p * q).collect()),
            _ => {
                let am = a.dense();
                let m = &am * b.dense() * &am;
                Op::Dense(ComplexOperator::from_matrix(m).hermitian_part())
            }
        }
    }

    /// `x^t` on the support, zero on the kernel for `t <= 0`.
    pub(crate) fn power(&self, t: f64) -> Result<Op> {
        match self {
            Op::Diag(v) => Op::Diag(v.clone()).mapped(|x| {
                if x <= SUPPORT_EPS {
                    if t <= 0.0 {
                        0.0
                    } else {
                        x.max(0.0).powf(t)
                    }
                } else {
                    x.powf(t)
                }
            }),
            Op::Dense(m) => Ok(Op::Dense(operator_function(&m.hermitian_part(), ScalarFunction::Power(t))?)),
        }
    }

    fn mapped(self, f: impl Fn(f64) -> f64) -> Result<Op> {
        match self {
            Op::Diag(v) => Ok(Op::Diag(v.into_iter().map(f).collect())),
            Op::Dense(m) => Ok(Op::Dense(spectral(&m.hermitian_part())?.reconstruct_with(f))),
        }
    }

    /// Projector onto the eigenspaces with eigenvalue above `threshold`.
    pub(crate) fn positive_projector(&self, threshold: f64) -> Result<Op> {
        self.clone().mapped(|x| if x > threshold { 1.0 } else { 0.0 })
    }

    pub(crate) fn entropy(&self) -> Result<f64> {
        Ok(match self {
            Op::Diag(v) => spectrum_entropy(v),
            Op::Dense(m) => spectrum_entropy(&spectral(&m.hermitian_part())?.values),
        })
    }

    pub(crate) fn trace_norm(&self) -> f64 {
        match self {
            Op::Diag(v) => v.iter().map(|x| x.abs()).sum(),
            Op::Dense(m) => trace_norm(m),
        }
    }

    pub(crate) fn to_state(&self) -> DensityOperator {
        DensityOperator::from_op(self.to_operator())
    }
}

/// Per-letter outputs of a cq channel.
pub(crate) fn letter_ops(channel: &CqChannel) -> Vec<Op> {
    channel.outputs().iter().map(|s| Op::from_operator(s.op())).collect()
}

/// `⊗_i letters[word_i]`.
pub(crate) fn word_op(letters: &[Op], word: &[usize]) -> Result<Op> {
    if word.iter().all(|&y| matches!(letters[y], Op::Diag(_))) {
        crate::linalg::check_cap(
            crate::linalg::composite_dim(word.iter().map(|&y| letters[y].dim())),
            crate::linalg::dim_cap(),
        )?;
        let mut acc = vec![1.0];
        for &y in word {
            let Op::Diag(d) = &letters[y] else { unreachable!() };
            acc = acc.iter().flat_map(|a| d.iter().map(move |b| a * b)).collect();
        }
        return Ok(Op::Diag(acc));
    }
    let ops: Vec<ComplexOperator> = word.iter().map(|&y| letters[y].to_operator()).collect();
    Ok(Op::Dense(tensor_all(ops.iter())?))
}

/// `(1/S) sum_s ⊗_i letters_s[word_i]`.
pub(crate) fn mixed_word_op(mix: &[Vec<Op>], word: &[usize]) -> Result<Op> {
    let mut acc: Option<Op> = None;
    let w = 1.0 / mix.len() as f64;
    for letters in mix {
        let term = word_op(letters, word)?;
        match &mut acc {
            None => acc = Some(term.scale(w)),
            Some(a) => a.add_scaled(&term, w),
        }
    }
    Ok(acc.expect("mixtures are non-empty"))
}
