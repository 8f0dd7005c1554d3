//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Operators are stored as `DMatrix<Complex64>`. Every composite
//! construction (tensor products, block powers) is checked against a
//! dimension cap, which defaults to 4096 and can be overridden once per
//! process through the `QBCLAB_DIM_CAP` environment variable.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const DEFAULT_DIM_CAP: usize = 4096;
pub const DIM_CAP_ENV: &str = "QBCLAB_DIM_CAP";

/// Eigenvalues at or below this magnitude are treated as zero by entropies
/// and by negative powers.
pub const SUPPORT_EPS: f64 = 1e-12;

/// The process-wide composite-dimension cap.
pub fn dim_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DIM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&c| c > 0)
            .unwrap_or(DEFAULT_DIM_CAP)
    })
}

pub(crate) fn check_cap(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        Err(Error::CapacityExceeded { requested, cap })
    } else {
        Ok(())
    }
}

/// Product of dimensions, saturating so that overflow still trips the cap.
pub(crate) fn composite_dim(dims: impl IntoIterator<Item = usize>) -> usize {
    dims.into_iter().fold(1usize, |acc, d| acc.saturating_mul(d))
}

/// Numerical tolerances used when validating states and measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub negative_eigenvalue: f64,
    pub trace: f64,
    pub povm_element: f64,
    pub povm_sum: f64,
    pub spectral_hermitian: f64,
    /// Eigenvalues above `-clip_floor` are clipped to zero before a scalar
    /// function is applied; anything lower is rejected.
    pub clip_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-10,
            negative_eigenvalue: 1e-10,
            trace: 1e-10,
            povm_element: 1e-9,
            povm_sum: 1e-8,
            spectral_hermitian: 1e-8,
            clip_floor: 1e-8,
        }
    }
}

/// A square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator(DMatrix<C64>);

impl ComplexOperator {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("finite entries", "operator has NaN or infinite entries"));
        }
        Ok(ComplexOperator(m))
    }

    pub(crate) fn from_matrix(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        ComplexOperator(m)
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexOperator(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexOperator(DMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        ComplexOperator(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// `|psi><psi|` without normalisation.
    pub fn outer(psi: &[C64]) -> Self {
        let d = psi.len();
        ComplexOperator(DMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn basis_projector(dim: usize, index: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        ComplexOperator(m)
    }

    /// Builds an operator from row-major rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension(format!("rows of a {d}-row operator must all have length {d}")));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        ComplexOperator(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        ComplexOperator(self.0.map(|z| z * factor))
    }

    pub fn add_scaled(&mut self, other: &ComplexOperator, factor: f64) {
        self.0.zip_apply(&other.0, |a, b| *a += b * factor);
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexOperator) -> C64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn hermitian_part(&self) -> Self {
        ComplexOperator((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        for j in 0..d {
            for i in 0..d {
                if i != j {
                    let z = self.0[(i, j)];
                    if z.re != 0.0 || z.im != 0.0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn max_abs_diff(&self, other: &ComplexOperator) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: &ComplexOperator) -> ComplexOperator {
        ComplexOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: &ComplexOperator) -> ComplexOperator {
        ComplexOperator(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: &ComplexOperator) -> ComplexOperator {
        if self.is_diagonal() && rhs.is_diagonal() {
            let d = self.dim();
            let mut m = DMatrix::zeros(d, d);
            for i in 0..d {
                m[(i, i)] = self.0[(i, i)] * rhs.0[(i, i)];
            }
            return ComplexOperator(m);
        }
        ComplexOperator(&self.0 * &rhs.0)
    }
}

/// A Hermitian, positive semi-definite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator(ComplexOperator);

impl DensityOperator {
    pub fn new(op: ComplexOperator) -> Result<Self> {
        Self::with_tolerances(op, &Tolerances::default())
    }

    pub fn with_tolerances(op: ComplexOperator, tol: &Tolerances) -> Result<Self> {
        let dev = op.hermitian_deviation();
        if dev > tol.hermitian {
            return Err(Error::validation("hermitian", format!("deviation {dev:.3e} exceeds {:.0e}", tol.hermitian)));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::validation(
                "trace",
                format!("trace is {:.12} (expected 1 within {:.0e})", tr.re, tol.trace),
            ));
        }
        let min = spectral(&op.hermitian_part())?.values.last().copied().unwrap_or(0.0);
        if min < -tol.negative_eigenvalue {
            return Err(Error::validation("positive semi-definite", format!("eigenvalue {min:.3e} is negative")));
        }
        Ok(DensityOperator(op))
    }

    /// Wraps an operator known to be a state by construction.
    pub(crate) fn from_op(op: ComplexOperator) -> Self {
        DensityOperator(op)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator(ComplexOperator::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        DensityOperator(ComplexOperator::basis_projector(dim, index))
    }

    /// The pure state along `psi`, normalised.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::validation("normalisable vector", "state vector is zero or not finite"));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(DensityOperator(ComplexOperator::outer(&v)))
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexOperator::from_real_diagonal(probs))
    }

    pub fn mixture(weights: &[f64], states: &[DensityOperator]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::Dimension("mixture needs one weight per state".into()));
        }
        let d = states[0].dim();
        let mut acc = ComplexOperator::zeros(d);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != d {
                return Err(Error::Dimension("mixture components differ in dimension".into()));
            }
            acc.add_scaled(s.op(), *w);
        }
        Self::new(acc)
    }

    pub fn op(&self) -> &ComplexOperator {
        &self.0
    }

    pub fn into_op(self) -> ComplexOperator {
        self.0
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.0.matrix()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        Ok(DensityOperator(tensor(&self.0, &other.0)?))
    }

    /// `tr(self * op)`, real part.
    pub fn expectation(&self, op: &ComplexOperator) -> f64 {
        self.0.trace_product(op).re
    }
}

/// A positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexOperator>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexOperator>) -> Result<Self> {
        Self::with_tolerances(elements, &Tolerances::default())
    }

    pub fn with_tolerances(elements: Vec<ComplexOperator>, tol: &Tolerances) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::validation("non-empty povm", "no elements"));
        };
        let d = first.dim();
        let mut sum = ComplexOperator::zeros(d);
        for (k, e) in elements.iter().enumerate() {
            if e.dim() != d {
                return Err(Error::Dimension(format!("povm element {k} has dimension {} not {d}", e.dim())));
            }
            let dev = e.hermitian_deviation();
            if dev > tol.povm_element {
                return Err(Error::validation("povm element hermitian", format!("element {k} deviates by {dev:.3e}")));
            }
            let min = spectral(&e.hermitian_part())?.values.last().copied().unwrap_or(0.0);
            if min < -tol.povm_element {
                return Err(Error::validation("povm element positive", format!("element {k} has eigenvalue {min:.3e}")));
            }
            sum.add_scaled(e, 1.0);
        }
        let residual = hermitian_operator_norm(&(&sum - &ComplexOperator::identity(d)))?;
        if residual > tol.povm_sum {
            return Err(Error::validation(
                "povm completeness",
                format!("elements sum to identity only within {residual:.3e}"),
            ));
        }
        Ok(Povm { elements })
    }

    pub fn elements(&self) -> &[ComplexOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn probability(&self, outcome: usize, rho: &DensityOperator) -> f64 {
        rho.expectation(&self.elements[outcome])
    }

    pub fn probabilities(&self, rho: &DensityOperator) -> Vec<f64> {
        self.elements.iter().map(|e| rho.expectation(e)).collect()
    }
}

/// Kronecker product, checked against the process-wide cap.
pub fn tensor(a: &ComplexOperator, b: &ComplexOperator) -> Result<ComplexOperator> {
    tensor_with_cap(a, b, dim_cap())
}

pub fn tensor_with_cap(a: &ComplexOperator, b: &ComplexOperator, cap: usize) -> Result<ComplexOperator> {
    check_cap(composite_dim([a.dim(), b.dim()]), cap)?;
    Ok(ComplexOperator(a.0.kronecker(&b.0)))
}

/// Kronecker product of a sequence of operators, left to right.
pub fn tensor_all<'a>(ops: impl IntoIterator<Item = &'a ComplexOperator>) -> Result<ComplexOperator> {
    let ops: Vec<&ComplexOperator> = ops.into_iter().collect();
    if ops.is_empty() {
        return Ok(ComplexOperator::identity(1));
    }
    check_cap(composite_dim(ops.iter().map(|o| o.dim())), dim_cap())?;
    if ops.iter().all(|o| o.is_diagonal()) {
        let mut diag = vec![C64::new(1.0, 0.0)];
        for o in &ops {
            let d = o.dim();
            let mut next = Vec::with_capacity(diag.len() * d);
            for a in &diag {
                for i in 0..d {
                    next.push(a * o.0[(i, i)]);
                }
            }
            diag = next;
        }
        let d = diag.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, z) in diag.into_iter().enumerate() {
            m[(i, i)] = z;
        }
        return Ok(ComplexOperator(m));
    }
    let mut acc = ops[0].0.clone();
    for o in &ops[1..] {
        acc = acc.kronecker(&o.0);
    }
    Ok(ComplexOperator(acc))
}

/// Which factor of a bipartite space to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

pub fn partial_trace(op: &ComplexOperator, keep: Subsystem, dims: (usize, usize)) -> Result<ComplexOperator> {
    let (da, db) = dims;
    if da * db != op.dim() {
        return Err(Error::Dimension(format!(
            "operator of dimension {} does not factor as {da}x{db}",
            op.dim()
        )));
    }
    let m = &op.0;
    let out = match keep {
        Subsystem::First => DMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::Second => DMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    };
    Ok(ComplexOperator(out))
}

/// Reorders tensor factors: factor `k` of the result is factor `perm[k]` of
/// the input.
pub fn permute_subsystems(op: &ComplexOperator, dims: &[usize], perm: &[usize]) -> Result<ComplexOperator> {
    let total = composite_dim(dims.iter().copied());
    if total != op.dim() {
        return Err(Error::Dimension(format!("dims {dims:?} do not multiply to {}", op.dim())));
    }
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() || perm.iter().any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Dimension(format!("{perm:?} is not a permutation of {} factors", dims.len())));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    // stride of each input factor
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let map: Vec<usize> = (0..total)
        .map(|new_index| {
            let mut rem = new_index;
            let mut old = 0;
            for k in (0..new_dims.len()).rev() {
                let digit = rem % new_dims[k];
                rem /= new_dims[k];
                old += digit * strides[perm[k]];
            }
            old
        })
        .collect();
    Ok(ComplexOperator(DMatrix::from_fn(total, total, |i, j| op.0[(map[i], map[j])])))
}

/// Reduced operator on the listed factors, in the listed order.
pub fn reduce_to(op: &ComplexOperator, dims: &[usize], keep: &[usize]) -> Result<ComplexOperator> {
    let mut perm: Vec<usize> = keep.to_vec();
    perm.extend((0..dims.len()).filter(|k| !keep.contains(k)));
    let permuted = permute_subsystems(op, dims, &perm)?;
    let kept = composite_dim(keep.iter().map(|&k| dims[k]));
    let rest = op.dim() / kept.max(1);
    partial_trace(&permuted, Subsystem::First, (kept, rest))
}

/// Eigen-decomposition of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: DMatrix<C64>,
}

impl Spectrum {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexOperator {
        let mut scaled = self.vectors.clone();
        for (k, &v) in self.values.iter().enumerate() {
            let fv = f(v);
            scaled.column_mut(k).scale_mut(fv);
        }
        ComplexOperator(&scaled * self.vectors.adjoint())
    }
}

pub fn spectral(h: &ComplexOperator) -> Result<Spectrum> {
    spectral_with_tolerance(h, Tolerances::default().spectral_hermitian)
}

pub fn spectral_with_tolerance(h: &ComplexOperator, hermitian_tol: f64) -> Result<Spectrum> {
    let dev = h.hermitian_deviation();
    if dev > hermitian_tol {
        return Err(Error::validation("hermitian", format!("spectral input deviates by {dev:.3e}")));
    }
    let d = h.dim();
    let mut pairs: Vec<(f64, Vec<C64>)> = if h.is_diagonal() {
        (0..d)
            .map(|i| {
                let mut v = vec![C64::new(0.0, 0.0); d];
                v[i] = C64::new(1.0, 0.0);
                (h.0[(i, i)].re, v)
            })
            .collect()
    } else {
        let eig = SymmetricEigen::new(h.hermitian_part().0);
        (0..d)
            .map(|k| {
                let mut v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
                normalise_phase(&mut v);
                (eig.eigenvalues[k], v)
            })
            .collect()
    };
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        let tol = 1e-12 * pairs[start].0.abs().max(1.0);
        while end < pairs.len() && (pairs[start].0 - pairs[end].0).abs() <= tol {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| lexicographic_desc(&a.1, &b.1));
        start = end;
    }
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = DMatrix::from_fn(d, d, |i, k| pairs[k].1[i]);
    Ok(Spectrum { values, vectors })
}

fn normalise_phase(v: &mut [C64]) {
    if let Some(pivot) = v.iter().copied().find(|z| z.norm() > 1e-12) {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn lexicographic_desc(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Scalar functions that can be lifted to PSD operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalarFunction {
    /// `x^t`; for `t <= 0` the function acts on the support only.
    Power(f64),
    /// Base-two logarithm on the support, zero on the kernel.
    Log2,
}

impl ScalarFunction {
    fn eval(self, x: f64) -> f64 {
        match self {
            ScalarFunction::Power(t) => {
                if x <= 0.0 || (x <= SUPPORT_EPS && t <= 0.0) {
                    0.0
                } else {
                    x.powf(t)
                }
            }
            ScalarFunction::Log2 => {
                if x <= SUPPORT_EPS {
                    0.0
                } else {
                    x.log2()
                }
            }
        }
    }
}

pub fn operator_function(h: &ComplexOperator, f: ScalarFunction) -> Result<ComplexOperator> {
    let floor = Tolerances::default().clip_floor;
    if h.is_diagonal() && h.hermitian_deviation() == 0.0 {
        let diag = h.real_diagonal();
        if let Some(&bad) = diag.iter().find(|&&x| x < -floor) {
            return Err(Error::validation("positive semi-definite", format!("eigenvalue {bad:.3e} below -{floor:.0e}")));
        }
        let mapped: Vec<f64> = diag.iter().map(|&x| f.eval(x.max(0.0))).collect();
        return Ok(ComplexOperator::from_real_diagonal(&mapped));
    }
    let spec = spectral(h)?;
    if let Some(&bad) = spec.values.iter().find(|&&x| x < -floor) {
        return Err(Error::validation("positive semi-definite", format!("eigenvalue {bad:.3e} below -{floor:.0e}")));
    }
    Ok(spec.reconstruct_with(|x| f.eval(x.max(0.0))))
}

/// Sum of singular values.
pub fn trace_norm(op: &ComplexOperator) -> f64 {
    if op.is_diagonal() {
        return op.0.diagonal().iter().map(|z| z.norm()).sum();
    }
    let scale = op.0.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if op.hermitian_deviation() <= 1e-13 * scale {
        let eig = SymmetricEigen::new(op.hermitian_part().0);
        return eig.eigenvalues.iter().map(|v| v.abs()).sum();
    }
    op.0.clone().svd(false, false).singular_values.iter().sum()
}

/// Largest absolute eigenvalue of a Hermitian operator.
pub fn hermitian_operator_norm(op: &ComplexOperator) -> Result<f64> {
    let spec = spectral(op)?;
    Ok(spec.values.iter().map(|v| v.abs()).fold(0.0, f64::max))
}
