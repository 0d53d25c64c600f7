use num_complex::Complex64;

use super::decomp::{kernel_scaled, range_basis};
use super::dense::ZERO;
use super::{ComplexMatrix, TolerancePolicy};
use crate::error::{Error, Result};

/// Closed subspace of `C^n`, stored as an orthonormal basis (columns).
///
/// Bases are canonical: they are re-derived from the orthogonal projection by
/// Gram–Schmidt with column pivoting, so two constructions of the same span
/// agree up to rounding, and a coordinate subspace always comes back with the
/// coordinate vectors as its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: ComplexMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: ComplexMatrix::identity(ambient) }
    }

    /// Span of the standard basis vectors `e_i`, `i ∈ idx`.
    pub fn coordinate(ambient: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = idx.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        assert!(idx.iter().all(|&i| i < ambient), "coordinate index out of range");
        let basis = ComplexMatrix::identity(ambient).select_columns(&idx);
        Self { ambient, basis }
    }

    /// Span of the columns of `m`, with numerical rank decided by `pol`.
    pub fn from_spanning(m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidMatrix("spanning set has non-finite entries".into()));
        }
        let u = range_basis(m, pol)?;
        Ok(Self::from_orthonormal(u))
    }

    /// Wraps columns that are already orthonormal, canonicalizing the basis.
    pub(crate) fn from_orthonormal(u: ComplexMatrix) -> Self {
        let ambient = u.rows();
        let k = u.cols();
        if k == 0 {
            return Self::zero(ambient);
        }
        if k == ambient {
            return Self::full(ambient);
        }
        let p = &u * &u.adjoint();
        Self { ambient, basis: pivoted_gram_schmidt(&p, k) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Orthogonal projection `basis · basis*`.
    pub fn project(&self) -> ComplexMatrix {
        &self.basis * &self.basis.adjoint()
    }

    /// `I − project()`
    pub fn complement_projector(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.ambient) - self.project()
    }

    pub fn ortho_complement(&self) -> Self {
        let k = self.ambient - self.dim();
        if k == 0 {
            return Self::zero(self.ambient);
        }
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        Self { ambient: self.ambient, basis: pivoted_gram_schmidt(&self.complement_projector(), k) }
    }

    /// ‖basis* · basis − I‖_F
    pub fn orthonormality_defect(&self) -> f64 {
        (&self.basis.adjoint() * &self.basis - ComplexMatrix::identity(self.dim())).frobenius()
    }

    /// ‖P_self − P_other‖ (operator norm); zero iff the spans agree.
    pub fn span_distance(&self, other: &Subspace) -> f64 {
        assert_eq!(self.ambient, other.ambient, "span_distance: ambient mismatch");
        (self.project() - other.project()).op_norm()
    }

    /// Spans agree within `tol` in the gap metric.
    pub fn span_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.span_distance(other) <= tol
    }

    /// ‖(I − P_other) · basis‖_F; zero iff `self ⊆ other`.
    pub fn containment_defect(&self, other: &Subspace) -> f64 {
        assert_eq!(self.ambient, other.ambient, "containment_defect: ambient mismatch");
        (&other.complement_projector() * &self.basis).frobenius()
    }

    /// Image of the subspace under `m` (columns of `m · basis`).
    pub fn image(&self, m: &ComplexMatrix, pol: &TolerancePolicy) -> Result<Self> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "cannot map a subspace of C^{} through a {}x{} matrix",
                self.ambient,
                m.rows(),
                m.cols()
            )));
        }
        if self.is_zero() {
            return Ok(Self::zero(m.rows()));
        }
        Self::from_spanning(&(m * &self.basis), pol)
    }

    /// `S1 + S2`
    pub fn sum(&self, other: &Subspace, pol: &TolerancePolicy) -> Result<Self> {
        check_same_ambient(self, other)?;
        Self::from_spanning(&ComplexMatrix::hstack(&[&self.basis, &other.basis]), pol)
    }

    /// Direct sum of mutually orthogonal subspaces; bases are concatenated.
    pub fn orthogonal_sum(parts: &[&Subspace]) -> Self {
        let ambient = parts.first().map_or(0, |s| s.ambient);
        let bases: Vec<&ComplexMatrix> = parts.iter().map(|s| &s.basis).collect();
        if bases.iter().all(|b| b.cols() == 0) {
            return Self::zero(ambient);
        }
        Self::from_orthonormal(ComplexMatrix::hstack(&bases))
    }

    /// Embeds a subspace of `C^k` into `C^n` through the isometry `frame`
    /// (`n × k`, orthonormal columns).
    pub fn embed(&self, frame: &ComplexMatrix) -> Self {
        assert_eq!(frame.cols(), self.ambient, "embed: frame width mismatch");
        if self.is_zero() {
            return Self::zero(frame.rows());
        }
        Self::from_orthonormal(frame * &self.basis)
    }
}

/// Numerical intersection, computed as the kernel of the stacked
/// complementary projections `[(I − P1); (I − P2)]`.
pub fn intersect(s1: &Subspace, s2: &Subspace, pol: &TolerancePolicy) -> Result<Subspace> {
    check_same_ambient(s1, s2)?;
    if s1.is_zero() || s2.is_zero() {
        return Ok(Subspace::zero(s1.ambient));
    }
    let stacked = ComplexMatrix::vstack(&[&s1.complement_projector(), &s2.complement_projector()]);
    kernel_scaled(&stacked, 1.0, pol)
}

pub fn ortho_complement(s: &Subspace) -> Subspace {
    s.ortho_complement()
}

pub fn project(s: &Subspace) -> ComplexMatrix {
    s.project()
}

pub fn op_norm(m: &ComplexMatrix) -> f64 {
    m.op_norm()
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.frobenius()
}

fn check_same_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch(format!(
            "subspaces live in C^{} and C^{}",
            a.ambient, b.ambient
        )));
    }
    Ok(())
}

/// Modified Gram–Schmidt with column pivoting on the columns of `m`, stopping
/// after `rank` vectors. Ties in residual norm go to the lowest column index,
/// which keeps coordinate subspaces coordinate-aligned.
fn pivoted_gram_schmidt(m: &ComplexMatrix, rank: usize) -> ComplexMatrix {
    let n = m.rows();
    let mut work: Vec<Vec<Complex64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let mut used = vec![false; work.len()];
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    for _ in 0..rank {
        let norms: Vec<f64> = work.iter().map(|c| norm(c)).collect();
        let best = norms
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .fold(0.0_f64, |m, (_, &v)| m.max(v));
        let pivot = (0..work.len())
            .find(|&j| !used[j] && norms[j] >= best * (1.0 - 1e-9))
            .expect("pivoted_gram_schmidt: rank exceeds column count");
        used[pivot] = true;
        let mut v = work[pivot].clone();
        // Two passes against the accepted vectors.
        for _ in 0..2 {
            for qk in &q {
                let c = dot(qk, &v);
                for (vi, qi) in v.iter_mut().zip(qk) {
                    *vi -= c * qi;
                }
            }
        }
        let nv = norm(&v);
        assert!(nv > 0.0, "pivoted_gram_schmidt: rank-deficient input");
        for vi in v.iter_mut() {
            *vi /= nv;
        }
        for (j, col) in work.iter_mut().enumerate() {
            if used[j] {
                continue;
            }
            let c = dot(&v, col);
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= c * vi;
            }
        }
        q.push(v);
    }
    ComplexMatrix::from_fn(n, rank, |i, j| q[j][i])
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
