//! Canonical decomposition of an ordered pair of orthogonal projections.
//!
//! For projections `P`, `Q` onto subspaces of `C^n` the space splits as
//!
//! ```text
//! C^n = M00 ⊕ M01 ⊕ M10 ⊕ M11 ⊕ M'        M' = M'0 ⊕ M'1
//! ```
//!
//! with `Mpq = {f : Pf = pf, Qf = qf}`, `M'0 = Ran P ⊖ (M10 ⊕ M11)` and
//! `M'1 = Ran P^⊥ ⊖ (M00 ⊕ M01)`. On the generic part `M'`
//!
//! ```text
//! P' = [[I, 0], [0, 0]]      Q' = 𝒲* [[cos²Θ, sinΘcosΘ], [sinΘcosΘ, sin²Θ]] 𝒲
//! ```
//!
//! where `𝒲 = diag(I, W)`, `W: M'1 → M'0` unitary, and every principal angle
//! of `Θ` lies strictly inside `(0, π/2)`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, intersect, singular_values, svd_full, ComplexMatrix, Subspace, TolerancePolicy};

#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    pub m00: Subspace,
    pub m01: Subspace,
    pub m10: Subspace,
    pub m11: Subspace,
    /// Orthonormal frame of `M'0`; column `i` carries angle `theta[i]`.
    pub frame0: ComplexMatrix,
    /// Orthonormal frame of `M'1`.
    pub frame1: ComplexMatrix,
    /// Principal angles in radians, ascending, each in `(0, π/2)`.
    pub theta: Vec<f64>,
    /// `W: M'1 → M'0` in the frames above (`frame1` coordinates to `frame0`
    /// coordinates).
    pub w: ComplexMatrix,
    /// Ratio of extreme singular values of `P'^⊥ Q' P'` on `M'0`; large values
    /// mean angles close to 0 or π/2 and a poorly determined `W`.
    pub w_condition: f64,
}

impl CanonicalDecomposition {
    pub fn ambient(&self) -> usize {
        self.m00.ambient()
    }

    pub fn m0_prime(&self) -> Subspace {
        Subspace::from_spanning(&self.frame0, &TolerancePolicy::default())
            .unwrap_or_else(|_| Subspace::zero(self.ambient()))
    }

    pub fn m1_prime(&self) -> Subspace {
        Subspace::from_spanning(&self.frame1, &TolerancePolicy::default())
            .unwrap_or_else(|_| Subspace::zero(self.ambient()))
    }

    pub fn generic_dim(&self) -> usize {
        self.theta.len()
    }

    /// `M01 = M10 = {0}`
    pub fn corners_trivial(&self) -> bool {
        self.m01.is_zero() && self.m10.is_zero()
    }

    fn sin_cos(&self) -> (ComplexMatrix, ComplexMatrix) {
        let s: Vec<f64> = self.theta.iter().map(|t| t.sin()).collect();
        let c: Vec<f64> = self.theta.iter().map(|t| t.cos()).collect();
        (ComplexMatrix::from_real_diagonal(&s), ComplexMatrix::from_real_diagonal(&c))
    }

    /// `P'` as an ambient matrix.
    pub fn generic_p(&self) -> ComplexMatrix {
        &self.frame0 * &self.frame0.adjoint()
    }

    /// `Q'` as an ambient matrix, assembled from `Θ` and `W`.
    pub fn generic_q(&self) -> ComplexMatrix {
        let (s, c) = self.sin_cos();
        let f0 = &self.frame0;
        let f1 = &self.frame1;
        let ws = self.w.adjoint(); // W*: M'0 → M'1
        let cc = &c * &c;
        let sc = &s * &c;
        let ss = &s * &s;
        let top_left = &(f0 * &cc) * &f0.adjoint();
        let top_right = &(&(f0 * &sc) * &self.w) * &f1.adjoint();
        let bottom_left = &(&(f1 * &ws) * &sc) * &f0.adjoint();
        let bottom_right = &(&(&(f1 * &ws) * &ss) * &self.w) * &f1.adjoint();
        top_left + top_right + bottom_left + bottom_right
    }

    /// `Q' − P'` through the factorized angle form
    /// `𝒲* diag(sinΘ, sinΘ) [[−sinΘ, cosΘ], [cosΘ, sinΘ]] 𝒲`.
    pub fn generic_difference_factored(&self) -> ComplexMatrix {
        let (s, c) = self.sin_cos();
        let r = self.generic_dim();
        let i = ComplexMatrix::identity(r);
        let frame = ComplexMatrix::hstack(&[&self.frame0, &self.frame1]);
        let wcal = ComplexMatrix::block_diag(&i, &self.w);
        let sin2 = ComplexMatrix::block_diag(&s, &s);
        let rot = ComplexMatrix::block2x2(&(-&s), &c, &c, &s);
        let inner = &(&(&wcal.adjoint() * &sin2) * &rot) * &wcal;
        &(&frame * &inner) * &frame.adjoint()
    }

    /// Largest `sin θ`, i.e. `‖Q' − P'‖`; zero when the generic part is empty.
    pub fn sin_theta_distance(&self) -> f64 {
        self.theta.iter().map(|t| t.sin()).fold(0.0, f64::max)
    }

    /// `‖P − Q‖` predicted by the decomposition: 1 when a corner `M01`/`M10`
    /// is present, otherwise the largest `sin θ`.
    pub fn projection_distance(&self) -> f64 {
        if self.corners_trivial() {
            self.sin_theta_distance()
        } else {
            1.0
        }
    }

    /// Every subspace of the decomposition, in the order
    /// `M00, M01, M10, M11, M'0, M'1`, as one matrix of concatenated bases.
    pub fn concatenated_bases(&self) -> ComplexMatrix {
        ComplexMatrix::hstack(&[
            self.m00.basis(),
            self.m01.basis(),
            self.m10.basis(),
            self.m11.basis(),
            &self.frame0,
            &self.frame1,
        ])
    }
}

/// Computes the canonical decomposition of the pair `(P, Q)`.
///
/// The four corners come from subspace intersections; the generic part is
/// what remains of `Ran P` and `Ran P^⊥`. Principal angles are eigenvalues of
/// `P'(I − Q')P'` on `M'0` and `W` is the unitary polar factor of
/// `P'^⊥ Q' P'` restricted to `M'0`.
pub fn halmos_decompose(p: &Subspace, q: &Subspace, pol: &TolerancePolicy) -> Result<CanonicalDecomposition> {
    if p.ambient() != q.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "projection pair lives in C^{} and C^{}",
            p.ambient(),
            q.ambient()
        )));
    }
    let n = p.ambient();
    let pc = p.ortho_complement();
    let qc = q.ortho_complement();
    let mut m11 = intersect(p, q, pol)?;
    let mut m10 = intersect(p, &qc, pol)?;
    let mut m01 = intersect(&pc, q, pol)?;
    let mut m00 = intersect(&pc, &qc, pol)?;

    let frame0 = remainder_frame(p, &[&m10, &m11])?;
    let frame1 = remainder_frame(&pc, &[&m00, &m01])?;
    let r = frame0.cols();
    if frame1.cols() != r {
        return Err(Error::DegenerateFrame(format!(
            "generic halves have dimensions {} and {}",
            r,
            frame1.cols()
        )));
    }
    if r == 0 {
        return Ok(CanonicalDecomposition {
            m00,
            m01,
            m10,
            m11,
            frame0: ComplexMatrix::zeros(n, 0),
            frame1: ComplexMatrix::zeros(n, 0),
            theta: Vec::new(),
            w: ComplexMatrix::zeros(0, 0),
            w_condition: 1.0,
        });
    }

    // sin²Θ = P'(I − Q')P' on M'0, diagonalized to pick the angle frame.
    let q_proj = q.project();
    let q_perp = q.complement_projector();
    let sin2 = &(&frame0.adjoint() * &q_perp) * &frame0;
    let eig = eig_hermitian(&sin2.hermitian_part(), pol)?;
    let mut frame0 = &frame0 * &eig.vectors;
    let mut theta: Vec<f64> = (0..r)
        .map(|i| {
            let f = frame0.submatrix(0, i, n, 1);
            let sin = (&q_perp * &f).frobenius();
            let cos = (&q_proj * &f).frobenius();
            sin.atan2(cos)
        })
        .collect();

    // W* is the unitary polar factor of T = F1* Q F0 = W* sinΘcosΘ.
    let t = &(&frame1.adjoint() * &q_proj) * &frame0;
    let mut w_adj = polar_unitary(&t)?;

    // Angles that sit on the boundary of (0, π/2) belong in the corners; their
    // partners in M'1 are the matching columns of the unitary completion.
    let mut kept = Vec::with_capacity(r);
    let g_all = &frame1 * &w_adj;
    for (i, th) in theta.iter().enumerate() {
        let f = Subspace::from_orthonormal(frame0.submatrix(0, i, n, 1));
        let g = Subspace::from_orthonormal(g_all.submatrix(0, i, n, 1));
        if th.sin() < pol.rank_rtol {
            m11 = Subspace::orthogonal_sum(&[&m11, &f]);
            m00 = Subspace::orthogonal_sum(&[&m00, &g]);
        } else if th.cos() < pol.rank_rtol {
            m10 = Subspace::orthogonal_sum(&[&m10, &f]);
            m01 = Subspace::orthogonal_sum(&[&m01, &g]);
        } else {
            kept.push(i);
        }
    }
    let mut frame1 = frame1;
    if kept.len() < r {
        // Re-express M'1 in the frame W*·e_i, in which W is the identity.
        frame0 = frame0.select_columns(&kept);
        frame1 = g_all.select_columns(&kept);
        theta = kept.iter().map(|&i| theta[i]).collect();
        w_adj = ComplexMatrix::identity(kept.len());
    }
    let t = &(&frame1.adjoint() * &q_proj) * &frame0;
    let s = singular_values(&t);
    let smax = s.first().copied().unwrap_or(1.0);
    let smin = s.last().copied().unwrap_or(1.0);
    if smin <= f64::EPSILON * smax.max(1.0) {
        return Err(Error::DegenerateFrame(format!(
            "polar factor is rank deficient (σ_min = {smin:.3e}); an angle of 0 or π/2 leaked into the generic part"
        )));
    }
    let w_condition = smax / smin;

    if let Some(bad) = theta.iter().find(|t| !(**t > 0.0 && **t < std::f64::consts::FRAC_PI_2)) {
        return Err(Error::DegenerateFrame(format!("angle {bad} left the open interval (0, π/2)")));
    }

    Ok(CanonicalDecomposition {
        m00,
        m01,
        m10,
        m11,
        frame0,
        frame1,
        theta,
        w: w_adj.adjoint(),
        w_condition,
    })
}

/// Orthonormal frame of `s ⊖ (parts)`. The parts lie inside `s`, so the
/// projected basis has singular values that are either ≈1 or ≈0.
fn remainder_frame(s: &Subspace, parts: &[&Subspace]) -> Result<ComplexMatrix> {
    let n = s.ambient();
    let corner = Subspace::orthogonal_sum(parts);
    let projected = &corner.complement_projector() * s.basis();
    let target = s.dim() - corner.dim().min(s.dim());
    if target == 0 {
        return Ok(ComplexMatrix::zeros(n, 0));
    }
    let split = TolerancePolicy { rank_rtol: 0.5, ..TolerancePolicy::default() };
    let sub = Subspace::from_spanning(&projected, &split)?;
    if sub.dim() != target {
        return Err(Error::DegenerateFrame(format!(
            "expected a {target}-dimensional generic half, found {}",
            sub.dim()
        )));
    }
    Ok(sub.basis().clone())
}

/// Unitary polar factor `U V*` of a square matrix `U Σ V*`.
fn polar_unitary(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (u, _, v) = svd_full(t)?;
    Ok(&u * &v.adjoint())
}

/// Rebuilds `(P, Q)` as ambient matrices from a decomposition.
pub fn reconstruct(d: &CanonicalDecomposition) -> (ComplexMatrix, ComplexMatrix) {
    let p = d.m10.project() + d.m11.project() + d.generic_p();
    let q = d.m01.project() + d.m11.project() + d.generic_q();
    (p, q)
}

pub fn sin_theta_distance(d: &CanonicalDecomposition) -> f64 {
    d.sin_theta_distance()
}

#[derive(Serialize)]
struct Frames<'a> {
    m0_prime: &'a ComplexMatrix,
    m1_prime: &'a ComplexMatrix,
}

#[derive(Serialize)]
struct DecompositionRepr<'a> {
    m00: &'a Subspace,
    m01: &'a Subspace,
    m10: &'a Subspace,
    m11: &'a Subspace,
    theta: &'a [f64],
    w: &'a ComplexMatrix,
    w_condition: f64,
    frames: Frames<'a>,
}

impl Serialize for CanonicalDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            m00: &self.m00,
            m01: &self.m01,
            m10: &self.m10,
            m11: &self.m11,
            theta: &self.theta,
            w: &self.w,
            w_condition: self.w_condition,
            frames: Frames { m0_prime: &self.frame0, m1_prime: &self.frame1 },
        }
        .serialize(s)
    }
}
