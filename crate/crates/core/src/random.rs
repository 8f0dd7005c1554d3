//! Seeded random generation of states, operators and distributions.
//!
//! All randomness in the crate flows through [`LabRng`]. Independent
//! workers obtain their own generator with [`stream`], which selects a
//! ChaCha stream from the base seed so results do not depend on
//! scheduling.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{ComplexOperator, DensityOperator, C64};

pub type LabRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for worker `stream_id` derived from `seed`.
pub fn stream(seed: u64, stream_id: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Hilbert-Schmidt distributed (almost surely full-rank) mixed state.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    random_state_of_rank(dim, dim, rng)
}

pub fn random_state_of_rank<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m.map(|z| z / tr);
    DensityOperator::from_op(ComplexOperator::from_matrix(symmetrize(m)))
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    random_state_of_rank(dim, 1, rng)
}

/// Haar-distributed unitary via QR with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexOperator {
    let g = ginibre(dim, dim, rng);
    ComplexOperator::from_matrix(symmetrize(&g + g.adjoint()))
}

/// Random operator `T` with `0 <= T <= 1`.
pub fn random_effect<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexOperator {
    let u = random_unitary(dim, rng);
    let mut scaled = u.clone();
    for k in 0..dim {
        let e: f64 = rng.random();
        for i in 0..dim {
            scaled[(i, k)] *= e;
        }
    }
    ComplexOperator::from_matrix(symmetrize(&scaled * u.adjoint()))
}

/// Random orthogonal projector of the given rank.
pub fn random_projector<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> ComplexOperator {
    let u = random_unitary(dim, rng);
    let cols = u.columns(0, rank.min(dim)).into_owned();
    ComplexOperator::from_matrix(symmetrize(&cols * cols.adjoint()))
}

/// Uniform draw from the probability simplex.
pub fn random_distribution<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..size).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

fn symmetrize(m: DMatrix<C64>) -> DMatrix<C64> {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}
