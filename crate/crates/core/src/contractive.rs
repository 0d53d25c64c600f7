//! Contractive solutions around a spectral contractive solution `X`.
//!
//! Every contractive solution `Y` corresponds to the subspace
//! `T_X(Y) = Ker(I + Y*X)`, and the image of `T_X` is the set `ℛ` of
//! subspaces
//!
//! ```text
//! L ⊆ Ker(I − X*X) ∩ Ker(XVX − V*)
//! ```
//!
//! reducing both `A0` and `VX`. The inverse map is `L ↦ Y = X (I − 2 P_L)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::graph_projection;
use crate::matrix::{eig_hermitian, intersect, kernel_scaled, ComplexMatrix, Subspace, TolerancePolicy};
use crate::random::Rng;
use crate::riccati::{residual, residual_tolerance, BlockOperator, RiccatiSolution};
use num_complex::Complex64;

/// Largest number of minimal reducing components enumerated in lattice mode.
pub const MAX_COMPONENTS: usize = 20;

/// Seed of the auxiliary generator used to split degenerate commutants. The
/// split only has to be generic, so one fixed seed keeps results reproducible.
const SPLIT_SEED: u64 = 0x5eed_c0de;

fn invariance_defect(l: &Subspace, m: &ComplexMatrix) -> f64 {
    if l.is_zero() {
        return 0.0;
    }
    (&(&l.complement_projector() * m) * l.basis()).frobenius()
}

fn image_defect(l: &Subspace, m: &ComplexMatrix) -> f64 {
    if l.is_zero() {
        return 0.0;
    }
    (m * l.basis()).frobenius()
}

fn check_contractive(x: &ComplexMatrix, pol: &TolerancePolicy) -> Result<f64> {
    let norm = x.op_norm();
    if !pol.is_contractive_norm(norm) {
        return Err(Error::NotContractive { norm });
    }
    Ok(norm)
}

/// Identities of the pair `(X, Y)` around `L = Ker(I + Y*X)`; every entry is
/// a defect that vanishes in exact arithmetic.
#[derive(Debug, Clone, Serialize)]
pub struct PairKernelChecks {
    /// `‖[Q_X, Q_Y]‖_F`
    pub commutator: f64,
    /// `‖(Y + X) P_L‖_F`
    pub minus_on_l: f64,
    /// `‖(Y − X)(I − P_L)‖_F`
    pub plus_on_complement: f64,
    /// Gap between `L` and `Ker(X + Y) ⊖ (Ker X ∩ Ker Y)`.
    pub sum_kernel_gap: f64,
    /// Gap between `L^⊥` and `Ker(X − Y)`.
    pub difference_kernel_gap: f64,
    /// `‖(I − X*X) P_L‖_F + ‖(I − Y*Y) P_L‖_F`
    pub unit_norm_defect: f64,
}

impl PairKernelChecks {
    pub fn max_defect(&self) -> f64 {
        [
            self.minus_on_l,
            self.plus_on_complement,
            self.sum_kernel_gap,
            self.difference_kernel_gap,
            self.unit_norm_defect,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn gap(a: &Subspace, b: &Subspace) -> f64 {
    if a.dim() != b.dim() {
        return 1.0;
    }
    a.span_distance(b)
}

/// `L = Ker(I + Y*X)` for contractive `X`, `Y` with commuting graph
/// projections, together with the identities relating `L` to `X` and `Y`.
pub fn commuting_pair_kernel(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    pol: &TolerancePolicy,
) -> Result<(Subspace, PairKernelChecks)> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch(format!(
            "X is {}x{} but Y is {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let nx = check_contractive(x, pol)?;
    let ny = check_contractive(y, pol)?;
    let n0 = x.cols();
    let qx = graph_projection(n0, x);
    let qy = graph_projection(n0, y);
    let commutator = (&qx * &qy - &qy * &qx).frobenius();
    let bound = pol.residual_atol * (1.0 + nx) * (1.0 + ny);
    if commutator > bound {
        return Err(Error::ProjectionsDontCommute { commutator, bound });
    }

    let id = ComplexMatrix::identity(n0);
    let l = kernel_scaled(&(&id + &y.adjoint() * x), 1.0 + nx * ny, pol)?;
    let pl = l.project();
    let pc = l.complement_projector();
    let sum = x + y;
    let diff = x - y;
    let scale = 1.0 + nx + ny;
    let ker_sum = kernel_scaled(&sum, scale, pol)?;
    let ker_diff = kernel_scaled(&diff, scale, pol)?;
    let ker_both = intersect(&kernel_scaled(x, 1.0 + nx, pol)?, &kernel_scaled(y, 1.0 + ny, pol)?, pol)?;
    let sum_minus_both = if ker_both.is_zero() || ker_sum.is_zero() {
        ker_sum.clone()
    } else {
        let projected = &ker_both.complement_projector() * ker_sum.basis();
        let split = TolerancePolicy { rank_rtol: 0.5, ..*pol };
        if ker_sum.dim() > ker_both.dim() {
            Subspace::from_spanning(&projected, &split)?
        } else {
            Subspace::zero(n0)
        }
    };
    let checks = PairKernelChecks {
        commutator,
        minus_on_l: (&sum * &pl).frobenius(),
        plus_on_complement: (&diff * &pc).frobenius(),
        sum_kernel_gap: gap(&l, &sum_minus_both),
        difference_kernel_gap: gap(&l.ortho_complement(), &ker_diff),
        unit_norm_defect: image_defect(&l, &(&id - &x.adjoint() * x))
            + image_defect(&l, &(&id - &y.adjoint() * y)),
    };
    Ok((l, checks))
}

/// `Ker(I − X*X) ∩ Ker(XVX − V*)`, its largest subspace reducing `A0` and
/// `VX`, and a decomposition of the latter into minimal reducing pieces.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleKernel {
    pub k: Subspace,
    pub l_max: Subspace,
    pub minimal_components: Vec<Subspace>,
    /// Dimension of the commutant of `{A0, VX}` restricted to `l_max`. It
    /// equals the number of components exactly when every admissible
    /// subspace is a sum of components (finitely many solutions).
    pub commutant_dim: usize,
}

impl AdmissibleKernel {
    /// The lattice spanned by the components is all of `ℛ`.
    pub fn lattice_is_complete(&self) -> bool {
        self.commutant_dim == self.minimal_components.len()
    }
}

fn check_solution(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy) -> Result<()> {
    let r = residual(b, x)?;
    let bound = residual_tolerance(b, x, pol);
    if r > bound {
        return Err(Error::NotASolution { residual: r, bound });
    }
    Ok(())
}

/// `(I − X*X, XVX − V*)`
fn kernel_operators(b: &BlockOperator, x: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let unit = ComplexMatrix::identity(b.n0) - &x.adjoint() * x;
    let quad = &(x * &b.v) * x - b.v.adjoint();
    (unit, quad)
}

pub fn admissible_kernel(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy) -> Result<AdmissibleKernel> {
    check_solution(b, x, pol)?;
    let nx = check_contractive(x, pol)?;
    let (unit, quad) = kernel_operators(b, x);
    let scale_v = b.v.op_norm().max(1.0);
    let k = kernel_scaled(&ComplexMatrix::vstack(&[&unit, &quad.scale(1.0 / scale_v)]), 1.0 + nx * nx, pol)?;

    let vx = &b.v * x;
    let ops = [b.a0.clone(), vx.clone(), vx.adjoint()];
    let op_scale = 1.0 + ops.iter().map(|m| m.op_norm()).fold(0.0, f64::max);

    // L ← L ∩ A0⁻¹L ∩ (VX)⁻¹L ∩ ((VX)*)⁻¹L, starting from k.
    let mut l = k.clone();
    while !l.is_zero() {
        let c = l.complement_projector();
        let mut blocks = vec![c.scale(op_scale)];
        blocks.extend(ops.iter().map(|m| &c * m));
        let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
        let next = kernel_scaled(&ComplexMatrix::vstack(&refs), op_scale, pol)?;
        let next = intersect(&l, &next, pol)?;
        if next.dim() == l.dim() {
            break;
        }
        l = next;
    }

    let (components, commutant_dim) = if l.is_zero() {
        (Vec::new(), 0)
    } else {
        let f = l.basis();
        let restricted: Vec<ComplexMatrix> = ops.iter().map(|m| &(&f.adjoint() * m) * f).collect();
        let dim = commutant_basis(&restricted, pol)?.len();
        let mut rng = Rng::new(SPLIT_SEED);
        let local = minimal_components(&restricted, pol, &mut rng, 0)?;
        (local.iter().map(|s| s.embed(f)).collect(), dim)
    };
    Ok(AdmissibleKernel { k, l_max: l, minimal_components: components, commutant_dim })
}

/// Frobenius-orthonormal basis of `{Z : Z M = M Z for all M in ops}`.
fn commutant_basis(ops: &[ComplexMatrix], pol: &TolerancePolicy) -> Result<Vec<ComplexMatrix>> {
    let m = ops[0].rows();
    let scale = 1.0 + ops.iter().map(|o| o.op_norm()).fold(0.0, f64::max);
    // Column p·m + q is the image of the matrix unit E_pq under all commutators.
    let rows = ops.len() * m * m;
    let mut system = ComplexMatrix::zeros(rows, m * m);
    for p in 0..m {
        for q in 0..m {
            let col = p * m + q;
            for (k, op) in ops.iter().enumerate() {
                // (E_pq M − M E_pq)_{ij} = δ_ip M_qj − M_ip δ_qj
                for j in 0..m {
                    system[(k * m * m + p * m + j, col)] += op[(q, j)];
                }
                for i in 0..m {
                    system[(k * m * m + i * m + q, col)] -= op[(i, p)];
                }
            }
        }
    }
    let null = kernel_scaled(&system, scale, pol)?;
    let basis = null.basis();
    Ok((0..null.dim())
        .map(|c| ComplexMatrix::from_fn(m, m, |i, j| basis[(i * m + j, c)]))
        .collect())
}

fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    (&a.adjoint() * b).trace()
}

/// Splits `C^m` into minimal subspaces reducing every operator in `ops`.
///
/// Spectral subspaces of a Hermitian element of the commutant reduce the
/// whole algebra. The first try projects `diag(1, 2, 4, …)` onto the
/// commutant so that coordinate-aligned problems keep coordinate components;
/// pieces that are still reducible are split with a random Hermitian
/// commutant element.
fn minimal_components(ops: &[ComplexMatrix], pol: &TolerancePolicy, rng: &mut Rng, depth: usize) -> Result<Vec<Subspace>> {
    let m = ops[0].rows();
    let basis = commutant_basis(ops, pol)?;
    if basis.len() <= 1 || depth > 2 * m + 4 {
        return Ok(vec![Subspace::full(m)]);
    }
    let weights: Vec<f64> = (0..m).map(|i| 2f64.powi(i as i32)).collect();
    let d = ComplexMatrix::from_real_diagonal(&weights);
    let project = |target: &ComplexMatrix| {
        basis
            .iter()
            .fold(ComplexMatrix::zeros(m, m), |acc, z| acc + z.scale_complex(frobenius_inner(z, target)))
            .hermitian_part()
    };
    let mut h = project(&d);
    let mut eig = eig_hermitian(&h, pol)?;
    if eig.clusters.len() < 2 {
        let random = crate::random::random_hermitian(rng, m);
        h = project(&random);
        eig = eig_hermitian(&h, pol)?;
    }
    if eig.clusters.len() < 2 {
        return Ok(vec![Subspace::full(m)]);
    }
    let mut out = Vec::new();
    for c in 0..eig.clusters.len() {
        let g = eig.cluster_basis(c);
        let restricted: Vec<ComplexMatrix> = ops.iter().map(|o| &(&g.adjoint() * o) * &g).collect();
        for piece in minimal_components(&restricted, pol, rng, depth + 1)? {
            out.push(piece.embed(&g));
        }
    }
    Ok(out)
}

/// Admissibility of `l` for `(b, x)`; returns the named violations.
fn admissibility_violations(
    b: &BlockOperator,
    x: &ComplexMatrix,
    l: &Subspace,
    pol: &TolerancePolicy,
) -> Vec<String> {
    let (unit, quad) = kernel_operators(b, x);
    let vx = &b.v * x;
    let tol = residual_tolerance(b, x, pol);
    let checks = [
        ("not contained in Ker(I - X*X)", image_defect(l, &unit)),
        ("not contained in Ker(XVX - V*)", image_defect(l, &quad)),
        ("not invariant under A0", invariance_defect(l, &b.a0)),
        ("not invariant under VX", invariance_defect(l, &vx)),
        ("not invariant under (VX)*", invariance_defect(l, &vx.adjoint())),
    ];
    checks
        .iter()
        .filter(|(_, d)| *d > tol)
        .map(|(name, d)| format!("{name} (defect {d:.3e}, tolerance {tol:.3e})"))
        .collect()
}

/// `Y = X (I − 2 P_L)`: `Y = −X` on `L` and `Y = X` on `L^⊥`.
pub fn construct_solution(
    b: &BlockOperator,
    x: &ComplexMatrix,
    l: &Subspace,
    pol: &TolerancePolicy,
) -> Result<ComplexMatrix> {
    if l.ambient() != b.n0 || x.shape() != (b.n1, b.n0) {
        return Err(Error::DimensionMismatch(format!(
            "L lives in C^{} and X is {}x{} for n0 = {}, n1 = {}",
            l.ambient(),
            x.rows(),
            x.cols(),
            b.n0,
            b.n1
        )));
    }
    let violations = admissibility_violations(b, x, l, pol);
    if !violations.is_empty() {
        return Err(Error::InvalidSubspace { violations });
    }
    let reflect = ComplexMatrix::identity(b.n0) - l.project().scale(2.0);
    Ok(x * &reflect)
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyMember {
    pub l: Subspace,
    pub y: ComplexMatrix,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractiveFamily {
    pub base_x: ComplexMatrix,
    /// Members come from the component lattice only (no sampling).
    pub lattice_only: bool,
    /// The component lattice exhausts `ℛ`, so `members` lists every
    /// contractive solution.
    pub complete: bool,
    pub members: Vec<FamilyMember>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Lattice,
    /// Lattice plus `count` random admissible subspaces drawn with `seed`.
    Sample { count: usize, seed: u64 },
}

fn require_spectral(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy) -> Result<()> {
    let sol = RiccatiSolution::classify(b, x, pol)?;
    if !sol.is_spectral {
        return Err(Error::NotSpectral);
    }
    Ok(())
}

/// Contractive solutions reachable from the spectral contractive solution `x`.
pub fn enumerate_contractive(
    b: &BlockOperator,
    x: &ComplexMatrix,
    pol: &TolerancePolicy,
    mode: EnumerationMode,
) -> Result<ContractiveFamily> {
    check_contractive(x, pol)?;
    require_spectral(b, x, pol)?;
    let ak = admissible_kernel(b, x, pol)?;
    let m = ak.minimal_components.len();
    if m > MAX_COMPONENTS {
        return Err(Error::TooManyComponents { components: m, cap: MAX_COMPONENTS });
    }
    let mut family = ContractiveFamily {
        base_x: x.clone(),
        lattice_only: matches!(mode, EnumerationMode::Lattice),
        complete: ak.lattice_is_complete(),
        members: Vec::new(),
    };
    for mask in 0u32..(1u32 << m) {
        let parts: Vec<&Subspace> = (0..m).filter(|&i| mask & (1 << i) != 0).map(|i| &ak.minimal_components[i]).collect();
        let l = if parts.is_empty() { Subspace::zero(b.n0) } else { Subspace::orthogonal_sum(&parts) };
        push_member(&mut family, b, x, l, pol)?;
    }
    if let EnumerationMode::Sample { count, seed } = mode {
        if !ak.l_max.is_zero() && !ak.lattice_is_complete() {
            let mut rng = Rng::new(seed);
            for _ in 0..count {
                let l = sample_admissible(b, x, &ak, pol, &mut rng)?;
                if !family.members.iter().any(|mb| mb.l.span_eq(&l, 1e-8)) {
                    push_member(&mut family, b, x, l, pol)?;
                }
            }
        }
    }
    Ok(family)
}

fn push_member(
    family: &mut ContractiveFamily,
    b: &BlockOperator,
    x: &ComplexMatrix,
    l: Subspace,
    pol: &TolerancePolicy,
) -> Result<()> {
    let y = construct_solution(b, x, &l, pol)?;
    check_contractive(&y, pol)?;
    let r = residual(b, &y)?;
    let bound = residual_tolerance(b, &y, pol);
    if r > bound {
        return Err(Error::NotASolution { residual: r, bound });
    }
    family.members.push(FamilyMember { l, y, residual: r });
    Ok(())
}

/// A random member of `ℛ`: a random union of spectral subspaces of a random
/// Hermitian element of the commutant of `{A0, VX, (VX)*}` on `l_max`.
pub fn sample_admissible(
    b: &BlockOperator,
    x: &ComplexMatrix,
    ak: &AdmissibleKernel,
    pol: &TolerancePolicy,
    rng: &mut Rng,
) -> Result<Subspace> {
    let f = ak.l_max.basis();
    let vx = &b.v * x;
    let ops = [&(&f.adjoint() * &b.a0) * f, &(&f.adjoint() * &vx) * f, &(&f.adjoint() * &vx.adjoint()) * f];
    let basis = commutant_basis(&ops, pol)?;
    let m = f.cols();
    let mut h = ComplexMatrix::zeros(m, m);
    for z in &basis {
        h = h + z.scale_complex(rng.complex_gaussian());
    }
    let eig = eig_hermitian(&h.hermitian_part(), pol)?;
    let picked: Vec<usize> = (0..eig.clusters.len())
        .filter(|_| rng.coin())
        .flat_map(|c| eig.clusters[c].clone())
        .collect();
    if picked.is_empty() {
        return Ok(Subspace::zero(b.n0));
    }
    Ok(Subspace::from_spanning(&eig.vectors.select_columns(&picked), pol)?.embed(f))
}

/// Which test certified (or failed to certify) uniqueness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessCriterion {
    /// `Ker(I − X*X) = {0}`
    StrictContraction,
    /// `Ker(I − X*X) ∩ Ker(Im VX) = {0}`
    Dissipative,
    /// `Ker(I − X*X) ∩ Ker(XVX − V*) = {0}`
    KernelCondition,
    /// The kernel intersection is nonzero but contains no nonzero subspace
    /// reducing `A0` and `VX`.
    ReducingLattice,
    /// Not unique.
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessVerdict {
    pub unique: bool,
    pub criterion: UniquenessCriterion,
    /// `Ker(I − X*X) ∩ Ker(XVX − V*) = {0}`
    pub kernel_condition: bool,
    pub strict_contraction: bool,
    pub dissipative: bool,
}

/// Whether `x` is the only contractive solution.
///
/// By the `T_X` bijection, `x` is unique iff `ℛ = {{0}}`, i.e. the largest
/// admissible reducing subspace is zero. The kernel condition and the two
/// sufficient tests are reported alongside.
pub fn uniqueness(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy) -> Result<UniquenessVerdict> {
    check_contractive(x, pol)?;
    require_spectral(b, x, pol)?;
    let ak = admissible_kernel(b, x, pol)?;
    let (unit, _) = kernel_operators(b, x);
    let nx = x.op_norm();
    let ker_unit = kernel_scaled(&unit, 1.0 + nx * nx, pol)?;
    let strict = ker_unit.is_zero();
    let im = (&b.v * x).imaginary_part();
    let dissipative = strict || intersect(&ker_unit, &kernel_scaled(&im, im.op_norm().max(1.0), pol)?, pol)?.is_zero();
    let kernel_condition = ak.k.is_zero();
    let unique = ak.l_max.is_zero();
    let criterion = if strict {
        UniquenessCriterion::StrictContraction
    } else if dissipative {
        UniquenessCriterion::Dissipative
    } else if kernel_condition {
        UniquenessCriterion::KernelCondition
    } else if unique {
        UniquenessCriterion::ReducingLattice
    } else {
        UniquenessCriterion::None
    };
    Ok(UniquenessVerdict { unique, criterion, kernel_condition, strict_contraction: strict, dissipative })
}

/// Defects of the dual subspace `L* = X L`.
#[derive(Debug, Clone, Serialize)]
pub struct DualChecks {
    /// `‖(I − XX*) P_{L*}‖_F`
    pub unit_norm_defect: f64,
    /// `‖(X*V*X* − V) P_{L*}‖_F`
    pub quadratic_defect: f64,
    pub a1_defect: f64,
    pub vx_adj_defect: f64,
    /// Gap between `X* L*` and `L`.
    pub round_trip_gap: f64,
}

impl DualChecks {
    pub fn max_defect(&self) -> f64 {
        [self.unit_norm_defect, self.quadratic_defect, self.a1_defect, self.vx_adj_defect, self.round_trip_gap]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `L* = X L` in `H1`, with the checks that it is admissible for the dual
/// problem and that `X* L* = L`.
pub fn dual_map(
    b: &BlockOperator,
    x: &ComplexMatrix,
    l: &Subspace,
    pol: &TolerancePolicy,
) -> Result<(Subspace, DualChecks)> {
    let violations = admissibility_violations(b, x, l, pol);
    if !violations.is_empty() {
        return Err(Error::InvalidSubspace { violations });
    }
    let l_star = l.image(x, pol)?;
    let back = l_star.image(&x.adjoint(), pol)?;
    let unit = ComplexMatrix::identity(b.n1) - x * &x.adjoint();
    let xa = x.adjoint();
    let quad = &(&xa * &b.v.adjoint()) * &xa - &b.v;
    let vx_adj = &b.v.adjoint() * &xa;
    let checks = DualChecks {
        unit_norm_defect: image_defect(&l_star, &unit),
        quadratic_defect: image_defect(&l_star, &quad),
        a1_defect: invariance_defect(&l_star, &b.a1).max(invariance_defect(&l_star.ortho_complement(), &b.a1)),
        vx_adj_defect: invariance_defect(&l_star, &vx_adj)
            .max(invariance_defect(&l_star.ortho_complement(), &vx_adj)),
        round_trip_gap: gap(&back, l),
    };
    Ok((l_star, checks))
}

/// Invariance defects of `L' = {u ⊕ Xu : u ∈ L}` under `A = diag(A0, A1)`
/// and under `B`.
pub fn lifted_invariance(
    b: &BlockOperator,
    x: &ComplexMatrix,
    l: &Subspace,
    pol: &TolerancePolicy,
) -> Result<(f64, f64)> {
    let violations = admissibility_violations(b, x, l, pol);
    if !violations.is_empty() {
        return Err(Error::InvalidSubspace { violations });
    }
    if l.is_zero() {
        return Ok((0.0, 0.0));
    }
    let lifted = Subspace::from_spanning(&ComplexMatrix::vstack(&[l.basis(), &(x * l.basis())]), pol)?;
    Ok((invariance_defect(&lifted, &b.diagonal()), invariance_defect(&lifted, &b.assemble())))
}
