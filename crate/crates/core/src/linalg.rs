//! Real symmetric matrices, the Loewner order and spectral functional calculus.
//!
//! Everything downstream is built from one primitive: the symmetric
//! eigendecomposition `A = Q diag(λ) Qᵀ`. Square roots, inverses and `f(A)`
//! are all computed through it, so a single tolerance policy (see
//! [`Tolerances`]) governs how near-zero eigenvalues are treated.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{MeansError, Result};

const EIGEN_MAX_ITER: usize = 10_000;

/// Numerical tolerances shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative eigenvalue slack for PSD and Loewner tests.
    pub psd_slack: f64,
    /// Relative Frobenius tolerance for equality tests.
    pub eq_tol: f64,
    /// First regularization ε of the A + εI schedule.
    pub eps0: f64,
    /// Smallest ε tried before the schedule stops.
    pub eps_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd_slack: 1e-9,
            eq_tol: 1e-8,
            eps0: 1e-2,
            eps_min: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [self.psd_slack, self.eq_tol, self.eps0, self.eps_min];
        if fields.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(MeansError::InvalidTolerances(
                "all tolerances must be finite and nonnegative".into(),
            ));
        }
        if self.eps_min >= self.eps0 {
            return Err(MeansError::InvalidTolerances(format!(
                "eps_min ({}) must be smaller than eps0 ({})",
                self.eps_min, self.eps0
            )));
        }
        Ok(())
    }
}

/// A real symmetric matrix. Symmetry is enforced on construction by
/// replacing `M` with `(M + Mᵀ)/2`, after which it holds exactly.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    inner: DMatrix<f64>,
}

impl SymMatrix {
    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_row_major(dim: usize, data: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(MeansError::InvalidMatrix("dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(MeansError::InvalidMatrix(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(MeansError::InvalidMatrix(format!("non-finite entry {bad}")));
        }
        Ok(Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, data)))
    }

    /// Wraps a square matrix, symmetrizing it.
    ///
    /// Panics if `m` is not square or is empty.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Self {
        assert!(m.is_square() && m.nrows() > 0, "SymMatrix requires a non-empty square matrix");
        let t = m.transpose();
        Self { inner: (m + t) * 0.5 }
    }

    pub fn identity(dim: usize) -> Self {
        Self { inner: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { inner: DMatrix::zeros(dim, dim) }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self { inner: DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(values)) }
    }

    pub fn scalar(value: f64) -> Self {
        Self::diag(&[value])
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.inner
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Spectral norm, i.e. the largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<f64> {
        let s = spectrum(self)?;
        Ok(s.first().unwrap().abs().max(s.last().unwrap().abs()))
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { inner: &self.inner * k }
    }

    /// `A + εI`.
    pub fn shift(&self, eps: f64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..self.dim() {
            m[(i, i)] += eps;
        }
        Self { inner: m }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.inner - &other.inner).norm()
    }

    /// Frobenius distance relative to `max(1, ‖other‖_F)`.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        self.distance(other) / other.frobenius_norm().max(1.0)
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(MeansError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMatrix({}x{}, {:?})", self.dim(), self.dim(), self.to_row_major())
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix { inner: &self.inner + &rhs.inner }
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix { inner: &self.inner - &rhs.inner }
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    data: Vec<f64>,
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr { dim: self.dim(), data: self.to_row_major() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        SymMatrix::from_row_major(repr.dim, &repr.data).map_err(serde::de::Error::custom)
    }
}

/// Eigendecomposition with eigenvalues sorted ascending; column `i` of
/// `vectors` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Eigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn abs_max(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `Q diag(d) Qᵀ`.
    pub fn reconstruct(&self, diag: &[f64]) -> SymMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &d) in diag.iter().enumerate().take(n) {
            scaled.column_mut(j).scale_mut(d);
        }
        SymMatrix::from_dmatrix(scaled * self.vectors.transpose())
    }
}

pub fn eigh(a: &SymMatrix) -> Result<Eigen> {
    let n = a.dim();
    let dec = SymmetricEigen::try_new(a.inner.clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(MeansError::EigenFailure { dim: n, norm: a.frobenius_norm() })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dec.eigenvalues[i].total_cmp(&dec.eigenvalues[j]));
    let values = order.iter().map(|&i| dec.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &dec.eigenvectors.column(src));
    }
    Ok(Eigen { values, vectors })
}

/// All eigenvalues with multiplicity, ascending.
pub fn spectrum(a: &SymMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.values)
}

fn psd_threshold(eig: &Eigen, tol: &Tolerances) -> f64 {
    -tol.psd_slack * eig.abs_max().max(1.0)
}

/// True iff the smallest eigenvalue is at least `-psd_slack * max(1, ‖A‖₂)`.
pub fn is_psd(a: &SymMatrix, tol: &Tolerances) -> Result<bool> {
    let eig = eigh(a)?;
    Ok(eig.min() >= psd_threshold(&eig, tol))
}

/// Smallest eigenvalue of `a` divided by `max(1, ‖a‖₂)`. Nonnegative up to
/// `-psd_slack` means PSD in the sense of [`is_psd`].
pub fn psd_margin(a: &SymMatrix) -> Result<f64> {
    let eig = eigh(a)?;
    Ok(eig.min() / eig.abs_max().max(1.0))
}

/// True iff the smallest eigenvalue exceeds `psd_slack * max(1, ‖A‖₂)`.
pub fn is_pd(a: &SymMatrix, tol: &Tolerances) -> Result<bool> {
    let eig = eigh(a)?;
    Ok(eig.min() > -psd_threshold(&eig, tol))
}

/// Loewner order `A ⪯ B`, i.e. `B − A` is PSD within slack.
pub fn loewner_leq(a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<bool> {
    a.check_same_dim(b)?;
    is_psd(&(b - a), tol)
}

/// Eigendecomposition of a PSD matrix with slightly negative eigenvalues
/// clipped to zero. Errors if an eigenvalue lies below the slack.
pub fn eigh_psd(a: &SymMatrix, tol: &Tolerances) -> Result<Eigen> {
    let mut eig = eigh(a)?;
    let threshold = psd_threshold(&eig, tol);
    if eig.min() < threshold {
        return Err(MeansError::NotPsd { min_eigenvalue: eig.min() });
    }
    for v in eig.values.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(eig)
}

/// Spectral functional calculus `f(A) = Q diag(f(λ)) Qᵀ` for PSD `A`.
pub fn fn_calculus<F>(f: F, a: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix>
where
    F: Fn(f64) -> f64,
{
    let eig = eigh_psd(a, tol)?;
    apply_to_eigen(&f, &eig)
}

pub(crate) fn apply_to_eigen<F>(f: &F, eig: &Eigen) -> Result<SymMatrix>
where
    F: Fn(f64) -> f64,
{
    let mapped = eig
        .values
        .iter()
        .map(|&x| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(MeansError::FunctionEval { x, value: v })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(eig.reconstruct(&mapped))
}

pub fn sqrt_psd(a: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
    fn_calculus(f64::sqrt, a, tol)
}

/// Inverse of a positive definite matrix via its eigendecomposition.
pub fn inv_pd(a: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
    let eig = eigh(a)?;
    if eig.min() <= -psd_threshold(&eig, tol) {
        return Err(MeansError::Singular { min_eigenvalue: eig.min() });
    }
    let inv: Vec<f64> = eig.values.iter().map(|v| 1.0 / v).collect();
    Ok(eig.reconstruct(&inv))
}

/// `C X C`.
pub fn congruence(c: &SymMatrix, x: &SymMatrix) -> Result<SymMatrix> {
    c.check_same_dim(x)?;
    Ok(SymMatrix::from_dmatrix(&c.inner * &x.inner * &c.inner))
}

/// Evaluates `g` along `ε_k = eps0 · 2^-k` and returns the limit as `ε ↓ 0`.
///
/// Stops on the Cauchy criterion `‖g(ε_{k+1}) − g(ε_k)‖_F ≤ eq_tol · max(1, ‖g(ε_k)‖_F)`.
/// If the schedule drops below `eps_min` first, the last iterate is accepted
/// when the final step is within `sqrt(eq_tol)` (relative), which admits the
/// `√ε` convergence typical of geometric-type means at singular arguments.
pub fn regularize_limit<G>(g: G, tol: &Tolerances) -> Result<SymMatrix>
where
    G: Fn(f64) -> Result<SymMatrix>,
{
    tol.validate()?;
    let mut eps = tol.eps0;
    let mut previous = g(eps)?;
    loop {
        eps *= 0.5;
        let current = g(eps)?;
        let distance = current.distance(&previous);
        let scale = previous.frobenius_norm().max(1.0);
        if distance <= tol.eq_tol * scale {
            return Ok(current);
        }
        if eps < tol.eps_min {
            if distance <= tol.eq_tol.sqrt() * scale {
                return Ok(current);
            }
            return Err(MeansError::NonConvergence {
                distance,
                last: Box::new(current),
                previous: Box::new(previous),
            });
        }
        previous = current;
    }
}
