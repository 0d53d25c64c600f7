//! Graph subspaces `𝒢(H0, X) = {x ⊕ Xx : x ∈ H0}` and the angular operator.
//!
//! A subspace `Ran Q` is the graph of a (bounded) operator `X: Ran P → Ran P^⊥`
//! exactly when the corners `M01` and `M10` of the pair `(P, Q)` are trivial.
//! `X` is then read off the canonical decomposition as `W* tanΘ` on `M'0` and
//! zero on `M11`, so that
//!
//! ```text
//! ‖P − Q‖ = ‖X‖ / √(1 + ‖X‖²),    Ker X = M11,    Ker X* = M00.
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::halmos_decompose;
use crate::matrix::{kernel_scaled, ComplexMatrix, Subspace, TolerancePolicy};

/// Why a pair was (or was not) accepted as a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphReason {
    Graph,
    /// `dim Q ≠ dim P`, so `Q` cannot be a graph over all of `Ran P`.
    DimensionMismatch,
    /// `Ran P^⊥ ∩ Ran Q ≠ {0}`.
    CornerM01,
    /// `Ran P ∩ Ran Q^⊥ ≠ {0}`.
    CornerM10,
}

impl GraphReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Graph => "graph",
            Self::DimensionMismatch => "dimension_mismatch",
            Self::CornerM01 => "corner_m01",
            Self::CornerM10 => "corner_m10",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    pub is_graph: bool,
    /// `X: Ran P → Ran P^⊥` in the coordinates of the bases of `P` and `P^⊥`.
    pub x: Option<ComplexMatrix>,
    /// `‖X‖`; infinite (serialized as `null`) when the pair is not a graph.
    pub norm_x: f64,
    /// `‖P − Q‖`
    pub dist: f64,
    pub ker_x: Subspace,
    pub coker_x: Subspace,
    pub reason: GraphReason,
    /// Condition of the polar factor `W`; grows as angles approach π/2.
    pub condition: f64,
}

/// Decides whether `Ran Q` is the graph of an operator over `Ran P` and, if
/// so, extracts it.
///
/// For `P = H0` given as [`Subspace::coordinate`] on the leading `n0`
/// coordinates the bases are coordinate vectors, so `x` is the usual
/// `n1 × n0` block.
pub fn analyze_graph(p: &Subspace, q: &Subspace, pol: &TolerancePolicy) -> Result<GraphReport> {
    if p.ambient() != q.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "P lives in C^{} but Q lives in C^{}",
            p.ambient(),
            q.ambient()
        )));
    }
    let pc = p.ortho_complement();
    let n0 = p.dim();
    let n1 = pc.dim();
    let dist = (p.project() - q.project()).op_norm();
    let not_graph = |reason| GraphReport {
        is_graph: false,
        x: None,
        norm_x: f64::INFINITY,
        dist,
        ker_x: Subspace::zero(n0),
        coker_x: Subspace::zero(n1),
        reason,
        condition: f64::INFINITY,
    };
    if q.dim() != n0 {
        return Ok(not_graph(GraphReason::DimensionMismatch));
    }
    let d = halmos_decompose(p, q, pol)?;
    if !d.m01.is_zero() {
        return Ok(not_graph(GraphReason::CornerM01));
    }
    if !d.m10.is_zero() {
        return Ok(not_graph(GraphReason::CornerM10));
    }

    let tan: Vec<f64> = d.theta.iter().map(|t| t.tan()).collect();
    let x_ambient = &(&(&d.frame1 * &d.w.adjoint()) * &ComplexMatrix::from_real_diagonal(&tan)) * &d.frame0.adjoint();
    let x = &(&pc.basis().adjoint() * &x_ambient) * p.basis();
    let norm_x = tan.iter().copied().fold(0.0, f64::max);

    // Scale the cutoff by 1 + ‖X‖: tiny singular values of an X built from
    // angles near zero are noise relative to the unit graph basis.
    let ker_x = kernel_scaled(&x, 1.0 + norm_x, pol)?;
    let coker_x = kernel_scaled(&x.adjoint(), 1.0 + norm_x, pol)?;
    Ok(GraphReport {
        is_graph: true,
        x: Some(x),
        norm_x,
        dist,
        ker_x,
        coker_x,
        reason: GraphReason::Graph,
        condition: d.w_condition,
    })
}

fn graph_basis(x: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::vstack(&[&ComplexMatrix::identity(x.cols()), x])
}

/// `𝒢(H0, X)` as a subspace of `C^{n0+n1}`.
pub fn graph_subspace(x: &ComplexMatrix) -> Subspace {
    Subspace::from_spanning(&graph_basis(x), &TolerancePolicy::default())
        .expect("[I; X] has full column rank")
}

/// Orthogonal projection onto `𝒢(H0, X)`:
///
/// ```text
/// [[G, G X*], [X G, X G X*]],   G = (I + X*X)^{-1}
/// ```
///
/// `G` and `G X*` come from one Cholesky solve.
pub fn graph_projection(n0: usize, x: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(x.cols(), n0, "graph_projection: x must have n0 columns");
    let gram = ComplexMatrix::identity(n0) + &x.adjoint() * x;
    let rhs = ComplexMatrix::hstack(&[&ComplexMatrix::identity(n0), &x.adjoint()]);
    let sol = gram.solve_hpd(&rhs).expect("I + X*X is positive definite");
    let g = sol.submatrix(0, 0, n0, n0);
    let gx = sol.submatrix(0, n0, n0, x.rows());
    let top = ComplexMatrix::hstack(&[&g, &gx]);
    let bottom = x * &top;
    ComplexMatrix::vstack(&[&top, &bottom]).hermitian_part()
}

/// Orthocomplement of `𝒢(H0, X)`, checked against `𝒢(H1, −X*)`.
pub fn graph_complement(n0: usize, x: &ComplexMatrix) -> Result<Subspace> {
    if x.cols() != n0 {
        return Err(Error::DimensionMismatch(format!("x is {}x{} but n0 = {n0}", x.rows(), x.cols())));
    }
    let complement = graph_subspace(x).ortho_complement();
    let n1 = x.rows();
    if n1 == 0 {
        return Ok(complement);
    }
    let built = ComplexMatrix::vstack(&[&(-x.adjoint()), &ComplexMatrix::identity(n1)]);
    let expected = Subspace::from_spanning(&built, &TolerancePolicy::default())?;
    let distance = if complement.dim() == expected.dim() {
        complement.span_distance(&expected)
    } else {
        1.0
    };
    if distance > 1e-9 {
        return Err(Error::ComplementMismatch { distance });
    }
    Ok(complement)
}

/// `(dist, recovered_norm)` with `dist = ‖X‖/√(1+‖X‖²)` and
/// `recovered_norm = dist/√(1 − dist²)`.
pub fn norm_identities(x: &ComplexMatrix) -> (f64, f64) {
    let n = x.op_norm();
    let dist = n / n.hypot(1.0);
    // (1 − d)(1 + d) keeps a few more digits than 1 − d² near d = 1.
    let recovered = dist / ((1.0 - dist) * (1.0 + dist)).sqrt();
    (dist, recovered)
}
