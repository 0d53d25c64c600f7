//! Built-in instances.
//!
//! * `involution(k)`: `A0 = A1 = 0`, `V = I_k`. The equation reads `X² = I`.
//!   `±I` are the spectral solutions and every Hermitian unitary solves it.
//! * `multiplication(n)`: a diagonal discretization on the interior grid
//!   `λ_j = j/(n+1)` of `(0, 1)` with `A0 = Λ`, `A1 = −Λ`, `V = Λ²`. It is
//!   solved by `f(Λ)` with `f(λ) = −(1 + √(1+λ²))/λ`, whose norm grows like
//!   `2(n+1)` as the grid is refined.
//! * `random(n0, n1, seed, gap)`: Gaussian Hermitian blocks, optionally with
//!   `min spec A0 − max spec A1 ≥ gap`.
//! * `constructed_nonunique(seed)` and `constructed_dissipative(seed)`: found
//!   by seeded search and certified on construction.

use serde::{Deserialize, Serialize};

use crate::contractive::{enumerate_contractive, uniqueness, EnumerationMode, UniquenessCriterion};
use crate::error::{Error, Result};
use crate::graph::{graph_subspace, norm_identities};
use crate::matrix::{eig_hermitian, ComplexMatrix, TolerancePolicy};
use crate::random::{random_hermitian, random_matrix, random_unitary, Rng};
use crate::riccati::{residual, residual_tolerance, solve_spectral, BlockOperator, RiccatiSolution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    Involution { k: usize },
    Multiplication { n: usize },
    Random { n0: usize, n1: usize, seed: u64, gap: Option<f64> },
    ConstructedNonunique { seed: u64 },
    ConstructedDissipative { seed: u64 },
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Involution { k } if k < 1 => Err(Error::InvalidSpec("involution needs k >= 1".into())),
            Self::Multiplication { n } if n < 2 => Err(Error::InvalidSpec("multiplication needs n >= 2".into())),
            Self::Random { n0, n1, gap, .. } => {
                if n0 == 0 || n1 == 0 {
                    return Err(Error::InvalidSpec("random needs n0, n1 >= 1".into()));
                }
                match gap {
                    Some(g) if !(g.is_finite() && g >= 0.0) => {
                        Err(Error::InvalidSpec(format!("gap must be finite and >= 0, got {g}")))
                    }
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    pub fn description(&self) -> String {
        match *self {
            Self::Involution { k } => format!("X^2 = I on C^{k}: A0 = A1 = 0, V = I"),
            Self::Multiplication { n } => {
                format!("diagonal multiplication operator on the grid j/{}, j = 1..{n}", n + 1)
            }
            Self::Random { n0, n1, seed, gap } => match gap {
                Some(g) => format!("Gaussian blocks {n0}x{n1}, seed {seed}, spectral gap {g}"),
                None => format!("Gaussian blocks {n0}x{n1}, seed {seed}"),
            },
            Self::ConstructedNonunique { seed } => {
                format!("searched instance with several contractive solutions, seed {seed}")
            }
            Self::ConstructedDissipative { seed } => {
                format!("searched instance certified unique by the dissipative test, seed {seed}")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub b: BlockOperator,
    pub known_solutions: Vec<ComplexMatrix>,
}

/// `f(λ) = −(1 + √(1+λ²))/λ`
pub fn multiplication_symbol(lambda: f64) -> f64 {
    -(1.0 + lambda.hypot(1.0)) / lambda
}

/// `λ_j = j/(n+1)`, `j = 1..n`.
pub fn grid(n: usize) -> Vec<f64> {
    (1..=n).map(|j| j as f64 / (n + 1) as f64).collect()
}

pub fn build(spec: &InstanceSpec) -> Result<Instance> {
    spec.validate()?;
    let pol = TolerancePolicy::default();
    let (b, known) = match *spec {
        InstanceSpec::Involution { k } => {
            let b = BlockOperator::new(
                ComplexMatrix::zeros(k, k),
                ComplexMatrix::zeros(k, k),
                ComplexMatrix::identity(k),
                &pol,
            )?;
            let i = ComplexMatrix::identity(k);
            (b, vec![i.clone(), -i])
        }
        InstanceSpec::Multiplication { n } => {
            let lambda = grid(n);
            let sq: Vec<f64> = lambda.iter().map(|l| l * l).collect();
            let neg: Vec<f64> = lambda.iter().map(|l| -l).collect();
            let f: Vec<f64> = lambda.iter().map(|&l| multiplication_symbol(l)).collect();
            let b = BlockOperator::new(
                ComplexMatrix::from_real_diagonal(&lambda),
                ComplexMatrix::from_real_diagonal(&neg),
                ComplexMatrix::from_real_diagonal(&sq),
                &pol,
            )?;
            (b, vec![ComplexMatrix::from_real_diagonal(&f)])
        }
        InstanceSpec::Random { n0, n1, seed, gap } => (random_instance(n0, n1, seed, gap, &pol)?, Vec::new()),
        InstanceSpec::ConstructedNonunique { seed } => constructed_nonunique(seed, &pol)?,
        InstanceSpec::ConstructedDissipative { seed } => constructed_dissipative(seed, &pol)?,
    };
    Ok(Instance { spec: spec.clone(), b, known_solutions: known })
}

fn random_instance(n0: usize, n1: usize, seed: u64, gap: Option<f64>, pol: &TolerancePolicy) -> Result<BlockOperator> {
    let mut rng = Rng::new(seed);
    let mut a0 = random_hermitian(&mut rng, n0);
    let a1 = random_hermitian(&mut rng, n1);
    let v = random_matrix(&mut rng, n0, n1);
    if let Some(g) = gap {
        let lo0 = eig_hermitian(&a0, pol)?.values[0];
        let hi1 = *eig_hermitian(&a1, pol)?.values.last().expect("n1 >= 1");
        let shift = (g - (lo0 - hi1)).max(0.0);
        a0 = a0 + ComplexMatrix::identity(n0).scale(shift);
    }
    BlockOperator::new(a0, a1, v, pol)
}

const SEARCH_ATTEMPTS: usize = 64;

/// Direct sum of a gapped generic block with an `X² = I`-type block
/// `[[D, I], [I, D]]`, conjugated by a random block-diagonal unitary. The
/// spectral solution `X_g ⊕ I` is contractive with a nonzero admissible
/// kernel, so the family around it has at least two members.
fn constructed_nonunique(seed: u64, pol: &TolerancePolicy) -> Result<(BlockOperator, Vec<ComplexMatrix>)> {
    let mut rng = Rng::new(seed);
    for _ in 0..SEARCH_ATTEMPTS {
        let g0 = 1 + rng.index(0, 2);
        let g1 = 1 + rng.index(0, 2);
        let k = 1 + rng.index(0, 2);
        let a0g = random_hermitian(&mut rng, g0) + ComplexMatrix::identity(g0).scale(4.0);
        let a1g = random_hermitian(&mut rng, g1) - ComplexMatrix::identity(g1).scale(4.0);
        let vg = random_matrix(&mut rng, g0, g1).scale(0.3);
        let d: Vec<f64> = (0..k).map(|_| 0.5 * rng.index(0, 2) as f64).collect();
        let u0 = random_unitary(&mut rng, g0 + k);
        let u1 = random_unitary(&mut rng, g1 + k);

        let generic = BlockOperator::new(a0g.clone(), a1g.clone(), vg.clone(), pol)?;
        let Some(xg) = solve_spectral(&generic, pol)?.into_iter().find(|s| s.norm_x < 0.999).map(|s| s.x) else {
            continue;
        };
        let dm = ComplexMatrix::from_real_diagonal(&d);
        let plain = BlockOperator::new(
            ComplexMatrix::block_diag(&a0g, &dm),
            ComplexMatrix::block_diag(&a1g, &dm),
            ComplexMatrix::block_diag(&vg, &ComplexMatrix::identity(k)),
            pol,
        )?;
        let x = ComplexMatrix::block_diag(&xg, &ComplexMatrix::identity(k));
        let b = plain.conjugate(&u0, &u1);
        let x = &(&u1 * &x) * &u0.adjoint();
        if let Some(members) = certify(&b, &x, pol, false) {
            return Ok((b, members));
        }
    }
    Err(Error::InvalidSpec(format!("no certified non-unique instance found for seed {seed}")))
}

/// `X` with a unit singular value and a `B` for which the graph of `X` is a
/// spectral subspace, searched until the dissipative test certifies
/// uniqueness although `‖X‖ = 1`.
fn constructed_dissipative(seed: u64, pol: &TolerancePolicy) -> Result<(BlockOperator, Vec<ComplexMatrix>)> {
    let mut rng = Rng::new(seed);
    let n = 3;
    for _ in 0..SEARCH_ATTEMPTS {
        let s: Vec<f64> = [1.0, rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)].to_vec();
        let u0 = random_unitary(&mut rng, n);
        let u1 = random_unitary(&mut rng, n);
        let x = &(&u1 * &ComplexMatrix::from_real_diagonal(&s)) * &u0.adjoint();
        let g = graph_subspace(&x);
        let gc = g.ortho_complement();
        let lg = random_hermitian(&mut rng, n) + ComplexMatrix::identity(n).scale(6.0);
        let lc = random_hermitian(&mut rng, n) - ComplexMatrix::identity(n).scale(6.0);
        let bm = (&(g.basis() * &lg) * &g.basis().adjoint() + &(gc.basis() * &lc) * &gc.basis().adjoint())
            .hermitian_part();
        let b = BlockOperator::new(
            bm.submatrix(0, 0, n, n),
            bm.submatrix(n, n, n, n),
            bm.submatrix(0, n, n, n),
            pol,
        )?;
        let Ok(verdict) = uniqueness(&b, &x, pol) else { continue };
        if verdict.unique && verdict.criterion == UniquenessCriterion::Dissipative {
            if let Some(members) = certify(&b, &x, pol, true) {
                return Ok((b, members));
            }
        }
    }
    Err(Error::InvalidSpec(format!("no certified dissipative instance found for seed {seed}")))
}

/// Checks that `x` is a contractive spectral solution and that the
/// enumerated family has exactly one member (`unique`) or at least two.
/// Returns the family's solutions.
fn certify(b: &BlockOperator, x: &ComplexMatrix, pol: &TolerancePolicy, unique: bool) -> Option<Vec<ComplexMatrix>> {
    let sol = RiccatiSolution::classify(b, x, pol).ok()?;
    if !(sol.is_spectral && sol.is_contractive) {
        return None;
    }
    let verdict = uniqueness(b, x, pol).ok()?;
    let family = enumerate_contractive(b, x, pol, EnumerationMode::Lattice).ok()?;
    let ok = if unique { verdict.unique && family.members.len() == 1 } else { !verdict.unique && family.members.len() >= 2 };
    ok.then(|| family.members.into_iter().map(|m| m.y).collect())
}

/// The instances every corpus-wide check runs over.
pub fn builtin_corpus() -> Vec<InstanceSpec> {
    vec![
        InstanceSpec::Involution { k: 1 },
        InstanceSpec::Involution { k: 2 },
        InstanceSpec::Involution { k: 3 },
        InstanceSpec::Multiplication { n: 2 },
        InstanceSpec::Multiplication { n: 4 },
        InstanceSpec::Random { n0: 3, n1: 3, seed: 7, gap: Some(1.0) },
        InstanceSpec::Random { n0: 2, n1: 3, seed: 11, gap: None },
        InstanceSpec::Random { n0: 3, n1: 2, seed: 5, gap: Some(0.5) },
        InstanceSpec::ConstructedNonunique { seed: 1 },
        InstanceSpec::ConstructedNonunique { seed: 2 },
        InstanceSpec::ConstructedDissipative { seed: 1 },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementRow {
    pub n: usize,
    pub norm_x: f64,
    /// `‖P − Q‖ = ‖X‖/√(1 + ‖X‖²)`
    pub dist: f64,
    pub residual: f64,
}

/// `‖f(Λ)‖` and `‖P − Q‖` along a sequence of grids; `dist` climbs towards 1
/// as the discretized solutions blow up.
pub fn refinement_study(n_list: &[usize]) -> Result<Vec<RefinementRow>> {
    let pol = TolerancePolicy::default();
    n_list
        .iter()
        .map(|&n| {
            let inst = build(&InstanceSpec::Multiplication { n })?;
            let x = &inst.known_solutions[0];
            let r = residual(&inst.b, x)?;
            let bound = residual_tolerance(&inst.b, x, &pol);
            if r > bound {
                return Err(Error::NotASolution { residual: r, bound });
            }
            let (dist, _) = norm_identities(x);
            Ok(RefinementRow { n, norm_x: x.op_norm(), dist, residual: r })
        })
        .collect()
}

/// CSV with header `n,norm_x,dist`.
pub fn refinement_csv(rows: &[RefinementRow]) -> String {
    let mut out = String::from("n,norm_x,dist\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            r.n,
            crate::json::format_float(r.norm_x),
            crate::json::format_float(r.dist)
        ));
    }
    out
}
