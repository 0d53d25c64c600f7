use std::ops::Range;

use faer::{c64, Mat, Side};

use super::{ComplexMatrix, Subspace, TolerancePolicy};
use crate::error::{Error, Result};

// SVD and Hermitian eigenproblems go through faer; nalgebra 0.35's complex
// SVD returns inaccurate factors for some matrices of the form U·diag(s).

fn to_faer(m: &ComplexMatrix) -> Mat<c64> {
    Mat::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, c64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD `m = U Σ V*` with `U`, `V` square unitary and σ descending
/// (length `min(rows, cols)`).
pub(crate) fn svd_full(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok((ComplexMatrix::identity(rows), Vec::new(), ComplexMatrix::identity(cols)));
    }
    let svd = to_faer(m)
        .svd()
        .map_err(|e| Error::NumericalFailure(format!("SVD did not converge: {e:?}")))?;
    let sigma: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    Ok((from_faer(svd.U()), sigma, from_faer(svd.V())))
}

/// Singular values in descending order (length `min(rows, cols)`).
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let s = to_faer(m).singular_values().expect("SVD did not converge");
    let mut s: Vec<f64> = s.into_iter().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Full set of right singular vectors: returns `(sigma, V)` where `V` is
/// `cols × cols` unitary and `sigma` has length `cols` (padded with zeros when
/// the matrix is wide), both sorted by descending singular value.
pub(crate) fn right_singular(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let cols = m.cols();
    if cols == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let (_, mut sigma, v) = svd_full(m)?;
    sigma.resize(cols, 0.0);
    Ok((sigma, v))
}

/// Orthonormal basis (columns) for the numerical range of `m`, using the
/// relative cutoff `rank_rtol · σ_max`.
pub(crate) fn range_basis(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<ComplexMatrix> {
    let (sigma, u) = right_singular(&m.adjoint())?;
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(ComplexMatrix::zeros(m.rows(), 0));
    }
    let cutoff = pol.rank_cutoff(smax);
    let rank = sigma.iter().take_while(|&&s| s > cutoff).count();
    Ok(u.submatrix(0, 0, m.rows(), rank))
}

/// Kernel of `m`: span of right singular vectors with σ ≤ `rank_rtol · σ_max`.
/// The zero matrix has the whole space as kernel.
pub fn kernel(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<Subspace> {
    let smax = singular_values(m).first().copied().unwrap_or(0.0);
    kernel_scaled(m, smax, pol)
}

/// Kernel with an explicit reference scale: keeps σ ≤ `rank_rtol · scale`.
///
/// Use this when `m` was assembled from operands whose norms are known, e.g.
/// `I + Y*X` has natural scale `1 + ‖Y‖‖X‖` even when it is numerically zero.
pub fn kernel_scaled(m: &ComplexMatrix, scale: f64, pol: &TolerancePolicy) -> Result<Subspace> {
    let n = m.cols();
    let (sigma, v) = right_singular(m)?;
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(Subspace::full(n));
    }
    let cutoff = pol.rank_cutoff(scale);
    let rank = sigma.iter().take_while(|&&s| s > cutoff).count();
    let null = v.submatrix(0, rank, n, n - rank);
    Ok(Subspace::from_orthonormal(null))
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `j` belongs to `values[j]`.
    pub vectors: ComplexMatrix,
    /// Consecutive index ranges of eigenvalues closer than the cluster width.
    pub clusters: Vec<Range<usize>>,
}

impl HermitianEigen {
    /// Orthonormal eigenvectors spanning cluster `c`.
    pub fn cluster_basis(&self, c: usize) -> ComplexMatrix {
        let r = self.clusters[c].clone();
        self.vectors.submatrix(0, r.start, self.vectors.rows(), r.len())
    }

    pub fn cluster_subspace(&self, c: usize) -> Subspace {
        Subspace::from_orthonormal(self.cluster_basis(c))
    }

    /// Mean eigenvalue of cluster `c`.
    pub fn cluster_value(&self, c: usize) -> f64 {
        let r = self.clusters[c].clone();
        let len = r.len() as f64;
        self.values[r].iter().sum::<f64>() / len
    }

    pub fn multiplicity(&self, c: usize) -> usize {
        self.clusters[c].len()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diagonal(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition with eigenvalue clustering.
pub fn eig_hermitian(h: &ComplexMatrix, pol: &TolerancePolicy) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let asym = h.asymmetry();
    let bound = pol.residual_atol * (1.0 + h.frobenius());
    if asym > bound {
        return Err(Error::NotHermitian { asymmetry: asym, bound });
    }
    let n = h.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
            clusters: Vec::new(),
        });
    }
    let eig = to_faer(&h.hermitian_part())
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("Hermitian eigensolver did not converge: {e:?}")))?;
    let raw: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let u = eig.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    let norm = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let clusters = cluster_sorted(&values, pol.cluster_width(norm));
    Ok(HermitianEigen { values, vectors, clusters })
}

/// Single-linkage clustering of ascending values: a new cluster starts at
/// every gap of at least `width`.
pub(crate) fn cluster_sorted(values: &[f64], width: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] >= width {
            if i > start {
                clusters.push(start..i);
            }
            start = i;
        }
    }
    clusters
}
