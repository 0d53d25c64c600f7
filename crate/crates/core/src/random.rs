//! Seeded random generators for instances and property suites.
//!
//! Stream contract: a `Pcg32` generator (64-bit state, `rand_pcg`) seeded via
//! `seed_from_u64`. Complex Gaussian entries are drawn row-major, real part
//! first then imaginary part, each from `rand_distr::StandardNormal`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_distr::StandardNormal;
use rand_pcg::Pcg32;

use crate::matrix::{ComplexMatrix, Subspace};

pub struct Rng(Pcg32);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(Pcg32::seed_from_u64(seed))
    }

    pub fn gaussian(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re = self.gaussian();
        let im = self.gaussian();
        Complex64::new(re, im)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.random_range(lo..hi)
    }

    /// Uniform in `lo..hi`.
    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        self.0.random_range(lo..hi)
    }

    pub fn coin(&mut self) -> bool {
        self.0.random::<bool>()
    }
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(rng.complex_gaussian());
    }
    ComplexMatrix::from_row_major(rows, cols, entries).expect("finite Gaussian entries")
}

/// Hermitian matrix `(G + G*)/2` with `G` Gaussian.
pub fn random_hermitian(rng: &mut Rng, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary from the phase-corrected QR of a Gaussian matrix.
pub fn random_unitary(rng: &mut Rng, n: usize) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let g: DMatrix<Complex64> = random_matrix(rng, n, n).into_inner();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_inner(q)
}

/// Uniformly random `k`-dimensional subspace of `C^n`.
pub fn random_subspace(rng: &mut Rng, n: usize, k: usize) -> Subspace {
    let u = random_unitary(rng, n);
    Subspace::from_orthonormal(u.submatrix(0, 0, n, k))
}
