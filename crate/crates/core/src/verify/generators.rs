use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{SymMatrix, Tolerances};

/// Generator for trial `trial` of a run seeded with `seed`. Each trial owns
/// an independent ChaCha stream, so trials can run in any order.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Range of the nonzero eigenvalues of [`random_psd_rank`] (log-uniform).
pub const PSD_SPECTRUM: (f64, f64) = (1e-2, 1e1);
/// Range of the eigenvalues of [`random_congruence`] (log-uniform).
pub const CONGRUENCE_SPECTRUM: (f64, f64) = (0.25, 4.0);

/// `U diag(s) Uᵀ` with `U` the first `rank` columns of a Haar-random
/// orthogonal matrix and `s` log-uniform in `range`. Zero eigenvalues are
/// exact up to rounding, nonzero ones are bounded away from zero.
fn spectral<R: Rng + ?Sized>(dim: usize, rank: usize, range: (f64, f64), rng: &mut R) -> SymMatrix {
    if rank == 0 {
        return SymMatrix::zeros(dim);
    }
    let q = haar_orthogonal(dim, rng);
    let (lo, hi) = (range.0.ln(), range.1.ln());
    let s: Vec<f64> = (0..dim).map(|k| if k < rank { rng.random_range(lo..=hi).exp() } else { 0.0 }).collect();
    let d = DMatrix::from_diagonal(&DVector::from_vec(s));
    SymMatrix::from_dmatrix(&q * d * q.transpose())
}

/// QR of a Gaussian matrix with the signs of `R`'s diagonal moved into `Q`.
fn haar_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let qr = gaussian(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// PSD matrix of rank `rank` with nonzero spectrum in [`PSD_SPECTRUM`].
pub fn random_psd_rank<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> SymMatrix {
    spectral(dim, rank, PSD_SPECTRUM, rng)
}

pub fn random_psd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> SymMatrix {
    random_psd_rank(dim, dim, rng)
}

/// A [`random_psd`] draw shifted by `10·psd_slack`.
pub fn random_pd<R: Rng + ?Sized>(dim: usize, rng: &mut R, tol: &Tolerances) -> SymMatrix {
    random_psd(dim, rng).shift(10.0 * tol.psd_slack)
}

/// `(A, A + P)` with `A`, `P` random PSD, so `A ⪯ B` by construction.
pub fn random_ordered_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> (SymMatrix, SymMatrix) {
    random_ordered_pair_rank(dim, dim, rng)
}

/// As [`random_ordered_pair`] with `A` of rank `rank`.
pub fn random_ordered_pair_rank<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> (SymMatrix, SymMatrix) {
    let a = random_psd_rank(dim, rank, rng);
    let b = &a + &random_psd(dim, rng);
    (a, b)
}

/// Positive definite matrix with spectrum in [`CONGRUENCE_SPECTRUM`].
pub fn random_congruence<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> SymMatrix {
    random_congruence_rank(dim, dim, rng)
}

/// PSD matrix of rank `rank` with nonzero spectrum in [`CONGRUENCE_SPECTRUM`].
pub fn random_congruence_rank<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> SymMatrix {
    spectral(dim, rank, CONGRUENCE_SPECTRUM, rng)
}

pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}
