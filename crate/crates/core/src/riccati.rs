//! The block operator `B = [[A0, V], [V*, A1]]` and its Riccati equation
//!
//! ```text
//! A1 X − X A0 − X V X + V* = 0.
//! ```
//!
//! `X` solves the equation iff the graph `𝒢(H0, X)` is `B`-invariant, so
//! every solution is read off an invariant subspace of `B` that happens to be
//! a graph over `H0 = C^{n0} ⊕ 0`. Spectral subspaces (unions of complete
//! eigenvalue clusters) give exactly the isolated solutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{analyze_graph, graph_projection, graph_subspace};
use crate::matrix::{eig_hermitian, right_singular, ComplexMatrix, HermitianEigen, Subspace, TolerancePolicy};

/// Largest number of eigenvalue clusters `solve_spectral` will enumerate.
pub const MAX_CLUSTERS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockOperatorRepr")]
pub struct BlockOperator {
    pub n0: usize,
    pub n1: usize,
    pub a0: ComplexMatrix,
    pub a1: ComplexMatrix,
    pub v: ComplexMatrix,
}

#[derive(Deserialize)]
struct BlockOperatorRepr {
    n0: usize,
    n1: usize,
    a0: ComplexMatrix,
    a1: ComplexMatrix,
    v: ComplexMatrix,
}

impl TryFrom<BlockOperatorRepr> for BlockOperator {
    type Error = Error;

    fn try_from(r: BlockOperatorRepr) -> Result<Self> {
        let b = BlockOperator::new(r.a0, r.a1, r.v, &TolerancePolicy::default())?;
        if b.n0 != r.n0 || b.n1 != r.n1 {
            return Err(Error::DimensionMismatch(format!(
                "declared n0 = {}, n1 = {} but blocks give n0 = {}, n1 = {}",
                r.n0, r.n1, b.n0, b.n1
            )));
        }
        Ok(b)
    }
}

fn check_hermitian(m: &ComplexMatrix, name: &str, pol: &TolerancePolicy) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{name} is {}x{}, not square", m.rows(), m.cols())));
    }
    let asymmetry = m.asymmetry();
    let bound = pol.residual_atol * (1.0 + m.frobenius());
    if asymmetry > bound {
        return Err(Error::NotHermitian { asymmetry, bound });
    }
    Ok(())
}

impl BlockOperator {
    /// Validates shapes and Hermiticity; `a0` and `a1` are then symmetrized
    /// exactly.
    pub fn new(a0: ComplexMatrix, a1: ComplexMatrix, v: ComplexMatrix, pol: &TolerancePolicy) -> Result<Self> {
        check_hermitian(&a0, "A0", pol)?;
        check_hermitian(&a1, "A1", pol)?;
        let (n0, n1) = (a0.rows(), a1.rows());
        if v.shape() != (n0, n1) {
            return Err(Error::DimensionMismatch(format!(
                "V must be {n0}x{n1}, got {}x{}",
                v.rows(),
                v.cols()
            )));
        }
        Ok(Self { n0, n1, a0: a0.hermitian_part(), a1: a1.hermitian_part(), v })
    }

    pub fn dim(&self) -> usize {
        self.n0 + self.n1
    }

    /// `B = [[A0, V], [V*, A1]]`
    pub fn assemble(&self) -> ComplexMatrix {
        ComplexMatrix::block2x2(&self.a0, &self.v, &self.v.adjoint(), &self.a1)
    }

    /// `A = diag(A0, A1)`
    pub fn diagonal(&self) -> ComplexMatrix {
        ComplexMatrix::block_diag(&self.a0, &self.a1)
    }

    pub fn norm(&self) -> f64 {
        self.assemble().op_norm()
    }

    /// `H0 = C^{n0} ⊕ 0` inside `C^{n0+n1}`.
    pub fn h0(&self) -> Subspace {
        Subspace::coordinate(self.dim(), 0..self.n0)
    }

    /// Conjugates by `diag(U0, U1)`. A solution `X` of `self` maps to
    /// `U1 X U0*`.
    pub fn conjugate(&self, u0: &ComplexMatrix, u1: &ComplexMatrix) -> Self {
        Self {
            n0: self.n0,
            n1: self.n1,
            a0: (&(u0 * &self.a0) * &u0.adjoint()).hermitian_part(),
            a1: (&(u1 * &self.a1) * &u1.adjoint()).hermitian_part(),
            v: &(u0 * &self.v) * &u1.adjoint(),
        }
    }

    fn check_x(&self, x: &ComplexMatrix) -> Result<()> {
        if x.shape() != (self.n1, self.n0) {
            return Err(Error::DimensionMismatch(format!(
                "X must be {}x{}, got {}x{}",
                self.n1,
                self.n0,
                x.rows(),
                x.cols()
            )));
        }
        Ok(())
    }

    /// `A1 X − X A0 − X V X + V*`
    pub fn riccati_map(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_x(x)?;
        let xv = x * &self.v;
        Ok(&self.a1 * x - x * &self.a0 - &xv * x + self.v.adjoint())
    }
}

/// `‖A1 X − X A0 − X V X + V*‖_F`
pub fn residual(b: &BlockOperator, x: &ComplexMatrix) -> Result<f64> {
    Ok(b.riccati_map(x)?.frobenius())
}

/// Acceptance bound for a residual: `atol + rtol · ‖B‖ · (1 + ‖X‖)²`.
pub fn residual_tolerance(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy) -> f64 {
    pol.residual_bound(b.norm(), x.op_norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceCheck {
    pub residual: f64,
    /// `‖(I − Q) B Q‖_F` for the graph projection `Q`.
    pub invariance_defect: f64,
    pub tolerance: f64,
    pub residual_ok: bool,
    pub invariance_ok: bool,
}

impl InvarianceCheck {
    /// Both small or both large.
    pub fn agree(&self) -> bool {
        self.residual_ok == self.invariance_ok
    }
}

/// Residual and invariance defect of the graph of `x`.
///
/// With `K0 = [I; X]`, `B K0 = K0 (A0 + V X) + [0; R]` where `R` is the
/// Riccati residual, so `defect ≤ ‖R‖_F ≤ (1 + ‖X‖²) · defect`. Both are
/// compared against the same tolerance.
pub fn invariance_check(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy) -> Result<InvarianceCheck> {
    let residual = residual(b, x)?;
    let q = graph_projection(b.n0, x);
    let n = b.dim();
    let defect = (&(&(ComplexMatrix::identity(n) - &q) * &b.assemble()) * &q).frobenius();
    let tolerance = residual_tolerance(b, x, pol);
    Ok(InvarianceCheck {
        residual,
        invariance_defect: defect,
        tolerance,
        residual_ok: residual <= tolerance,
        invariance_ok: defect <= tolerance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSolution {
    pub x: ComplexMatrix,
    pub residual: f64,
    pub is_spectral: bool,
    pub is_isolated: Option<bool>,
    pub is_contractive: bool,
    /// Indices of the eigenvalue clusters of `B` whose eigenspaces make up the
    /// graph (empty for non-spectral solutions).
    pub selected_spectrum: Vec<usize>,
    /// Cluster representatives (means) matching `selected_spectrum`.
    pub selected_values: Vec<f64>,
    pub norm_x: f64,
}

impl Serialize for RiccatiSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            x: &'a ComplexMatrix,
            residual: f64,
            spectral: bool,
            isolated: Option<bool>,
            contractive: bool,
            delta: &'a [usize],
            delta_values: &'a [f64],
            norm_x: f64,
        }
        Repr {
            x: &self.x,
            residual: self.residual,
            spectral: self.is_spectral,
            isolated: self.is_isolated,
            contractive: self.is_contractive,
            delta: &self.selected_spectrum,
            delta_values: &self.selected_values,
            norm_x: self.norm_x,
        }
        .serialize(s)
    }
}

impl RiccatiSolution {
    /// Classifies an arbitrary solution `x` of `b`.
    pub fn classify(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy) -> Result<Self> {
        let r = residual(b, x)?;
        let bound = residual_tolerance(b, x, pol);
        if r > bound {
            return Err(Error::NotASolution { residual: r, bound });
        }
        let eig = eig_hermitian(&b.assemble(), pol)?;
        let graph = graph_subspace(x);
        let profile = cluster_profile(&eig, &graph);
        let spectral = profile.iter().enumerate().all(|(c, &k)| k == 0 || k == eig.multiplicity(c));
        let (selected, values) = if spectral {
            let sel: Vec<usize> = (0..profile.len()).filter(|&c| profile[c] > 0).collect();
            let vals = sel.iter().map(|&c| eig.cluster_value(c)).collect();
            (sel, vals)
        } else {
            (Vec::new(), Vec::new())
        };
        let norm_x = x.op_norm();
        Ok(Self {
            x: x.clone(),
            residual: r,
            is_spectral: spectral,
            is_isolated: Some(spectral),
            is_contractive: pol.is_contractive_norm(norm_x),
            selected_spectrum: selected,
            selected_values: values,
            norm_x,
        })
    }
}

/// `dim(q ∩ E_c)` for every eigenvalue cluster `E_c`.
///
/// For an invariant `q`, `q = ⊕_c (q ∩ E_c)` and the singular values of
/// `E_c* q` are all 0 or 1, so counting those above 1/2 is robust to the
/// small rotations left by a finite tolerance.
fn cluster_profile(eig: &HermitianEigen, q: &Subspace) -> Vec<usize> {
    (0..eig.clusters.len())
        .map(|c| {
            let overlap = &eig.cluster_basis(c).adjoint() * q.basis();
            crate::matrix::singular_values(&overlap).iter().filter(|&&s| s > 0.5).count()
        })
        .collect()
}

/// All solutions whose graphs are spectral subspaces of `B`, sorted by `‖X‖`.
///
/// Enumerates every subset of eigenvalue clusters with total multiplicity
/// `n0` and keeps those whose span is a graph over `H0`.
pub fn solve_spectral(b: &BlockOperator, pol: &TolerancePolicy) -> Result<Vec<RiccatiSolution>> {
    let bm = b.assemble();
    let eig = eig_hermitian(&bm, pol)?;
    let d = eig.clusters.len();
    if d > MAX_CLUSTERS {
        return Err(Error::TooManyClusters { clusters: d, cap: MAX_CLUSTERS });
    }
    let h0 = b.h0();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << d) {
        let selected: Vec<usize> = (0..d).filter(|&c| mask & (1 << c) != 0).collect();
        if selected.iter().map(|&c| eig.multiplicity(c)).sum::<usize>() != b.n0 {
            continue;
        }
        let cols: Vec<usize> = selected.iter().flat_map(|&c| eig.clusters[c].clone()).collect();
        let q = if cols.is_empty() {
            Subspace::zero(b.dim())
        } else {
            Subspace::from_spanning(&eig.vectors.select_columns(&cols), pol)?
        };
        let report = analyze_graph(&h0, &q, pol)?;
        let Some(x) = report.x else { continue };
        let r = residual(b, &x)?;
        let norm_x = report.norm_x;
        out.push(RiccatiSolution {
            residual: r,
            is_spectral: true,
            is_isolated: Some(true),
            is_contractive: pol.is_contractive_norm(norm_x),
            selected_values: selected.iter().map(|&c| eig.cluster_value(c)).collect(),
            selected_spectrum: selected,
            norm_x,
            x,
        });
    }
    out.sort_by(|a, b| a.norm_x.total_cmp(&b.norm_x).then_with(|| a.selected_spectrum.cmp(&b.selected_spectrum)));
    Ok(out)
}

/// Whether the `B`-invariant subspace `q` is spectral, i.e. meets every
/// eigenvalue cluster either trivially or in the whole eigenspace.
pub fn is_spectral(b: &BlockOperator, q: &Subspace, pol: &TolerancePolicy) -> Result<bool> {
    if q.ambient() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of C^{} for a block operator on C^{}",
            q.ambient(),
            b.dim()
        )));
    }
    let bm = b.assemble();
    let defect = (&(&q.complement_projector() * &bm) * q.basis()).frobenius();
    let bound = pol.residual_atol + pol.residual_rtol * bm.op_norm();
    if defect > bound {
        return Err(Error::NotInvariant { defect, bound });
    }
    let eig = eig_hermitian(&bm, pol)?;
    let profile = cluster_profile(&eig, q);
    Ok(profile.iter().enumerate().all(|(c, &k)| k == 0 || k == eig.multiplicity(c)))
}

/// A different solution at distance `O(ε)` from `sol`, or `None` when `sol`
/// is isolated.
///
/// Non-spectral graphs meet some cluster `E` partially. Rotating one vector
/// of `G ∩ E` towards `E ⊖ G` by the angle `eps` keeps the subspace
/// invariant, and re-extracting the graph operator yields the witness.
pub fn isolation_witness(
    b: &BlockOperator,
    sol: &RiccatiSolution,
    eps: f64,
    pol: &TolerancePolicy,
) -> Result<Option<(ComplexMatrix, f64)>> {
    let eig = eig_hermitian(&b.assemble(), pol)?;
    let graph = graph_subspace(&sol.x);
    let profile = cluster_profile(&eig, &graph);
    let Some(c) = (0..profile.len()).find(|&c| profile[c] > 0 && profile[c] < eig.multiplicity(c)) else {
        return Ok(None);
    };
    let e = eig.cluster_basis(c);
    // Right singular vectors of G* E split E into G ∩ E (σ ≈ 1) and E ⊖ G (σ ≈ 0).
    let (sigma, v) = right_singular(&(&graph.basis().adjoint() * &e))?;
    let inside = sigma.iter().position(|&s| s > 0.5).expect("partial cluster has an inside vector");
    let outside = sigma.iter().position(|&s| s <= 0.5).expect("partial cluster has an outside vector");
    let k = e.cols();
    let u = &e * &v.submatrix(0, inside, k, 1);
    let w = &e * &v.submatrix(0, outside, k, 1);
    let rotated = u.scale(eps.cos()) + w.scale(eps.sin());

    let n = b.dim();
    let rest = &(ComplexMatrix::identity(n) - &u * &u.adjoint()) * graph.basis();
    let spanning = ComplexMatrix::hstack(&[&rest, &rotated]);
    let moved = Subspace::from_spanning(&spanning, pol)?;
    if moved.dim() != graph.dim() {
        return Err(Error::NumericalFailure("rotated subspace lost a dimension".into()));
    }
    let report = analyze_graph(&b.h0(), &moved, pol)?;
    let Some(y) = report.x else {
        return Err(Error::NumericalFailure(format!(
            "rotation by {eps:e} left the set of graphs ({})",
            report.reason.as_str()
        )));
    };
    let r = residual(b, &y)?;
    let bound = residual_tolerance(b, &y, pol);
    if r > bound {
        return Err(Error::NotASolution { residual: r, bound });
    }
    let distance = (&y - &sol.x).frobenius();
    Ok(Some((y, distance)))
}
