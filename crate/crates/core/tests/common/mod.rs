//! Oracles shared by the integration suites. None of them calls the library's
//! SVD or eigensolver: eigenvalues come from characteristic polynomial roots,
//! eigenvectors from inverse iteration, projections from normal equations.
#![allow(dead_code)]

use riccati::random::{random_hermitian, random_matrix, Rng};
use riccati::riccati::BlockOperator;
use riccati::{Complex64, ComplexMatrix, TolerancePolicy};

pub fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// Monic characteristic polynomial by Faddeev–LeVerrier, coefficients from
/// the constant term up: `c[0] + c[1] t + … + t^n`.
pub fn charpoly(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let id = ComplexMatrix::identity(n);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale_complex(c[n - k + 1]);
        let am = a * &m;
        c[n - k] = -am.trace() / k as f64;
    }
    c
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

/// Durand–Kerner iteration on a monic polynomial.
pub fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius / (1.0 + k as f64)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Eigenvalues of a Hermitian matrix from its characteristic polynomial,
/// ascending.
pub fn oracle_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = poly_roots(&charpoly(h)).iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Unit eigenvector for an approximate simple eigenvalue `lambda` by inverse
/// iteration with an LU solve.
pub fn inverse_iteration(h: &ComplexMatrix, lambda: f64) -> ComplexMatrix {
    let n = h.rows();
    let shift = lambda + 1e-9 * (1.0 + lambda.abs());
    let m = h - &ComplexMatrix::identity(n).scale(shift);
    let mut v = ComplexMatrix::from_fn(n, 1, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.3 - 0.05 * i as f64));
    for _ in 0..4 {
        v = m.solve(&v).expect("shifted matrix is invertible");
        let norm = v.frobenius();
        v = v.scale(1.0 / norm);
    }
    v
}

/// Orthogonal projection onto the column space of a full-column-rank `m`,
/// `M (M*M)^{-1} M*`, via an LU solve.
pub fn normal_equation_projection(m: &ComplexMatrix) -> ComplexMatrix {
    let gram = &m.adjoint() * m;
    m * &gram.solve(&m.adjoint()).expect("full column rank")
}

pub fn random_block(rng: &mut Rng, n0: usize, n1: usize) -> BlockOperator {
    BlockOperator::new(
        random_hermitian(rng, n0),
        random_hermitian(rng, n1),
        random_matrix(rng, n0, n1),
        &pol(),
    )
    .expect("random blocks are Hermitian")
}

/// Every `n0`-subset of eigenvectors of a simple-spectrum `B` whose top block
/// is invertible yields `X = U1 U0^{-1}`. Returns `None` when the spectrum is
/// not simple enough for the oracle (minimum gap below `min_gap`).
pub fn brute_force_solutions(b: &BlockOperator, min_gap: f64) -> Option<Vec<ComplexMatrix>> {
    let bm = b.assemble();
    let n = b.dim();
    let values = oracle_eigenvalues(&bm);
    if values.windows(2).any(|w| w[1] - w[0] < min_gap) {
        return None;
    }
    let vectors: Vec<ComplexMatrix> = values.iter().map(|&l| inverse_iteration(&bm, l)).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != b.n0 {
            continue;
        }
        let cols: Vec<&ComplexMatrix> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| &vectors[i]).collect();
        let u = ComplexMatrix::hstack(&cols);
        let u0 = u.submatrix(0, 0, b.n0, b.n0);
        let u1 = u.submatrix(b.n0, 0, b.n1, b.n0);
        // Smallest singular value of U0 from the Gram matrix eigenvalues.
        if oracle_eigenvalues(&(&u0.adjoint() * &u0))[0].max(0.0).sqrt() < 1e-8 {
            continue;
        }
        // X U0 = U1  ⇔  U0* X* = U1*
        let x = u0.adjoint().solve(&u1.adjoint()).expect("invertible top block").adjoint();
        out.push(x);
    }
    Some(out)
}

/// `‖a − b‖_F / (1 + ‖b‖_F)`
pub fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius() / (1.0 + b.frobenius())
}

/// A projection pair with prescribed structure, conjugated by a random
/// unitary. Corner dimensions follow the library's naming: `m11 = P ∩ Q`,
/// `m10 = P ∩ Q^⊥`, `m01 = P^⊥ ∩ Q`, `m00 = P^⊥ ∩ Q^⊥`.
pub struct KnownPair {
    pub p: riccati::Subspace,
    pub q: riccati::Subspace,
    pub corners: [usize; 4], // m00, m01, m10, m11
    pub theta: Vec<f64>,
}

impl KnownPair {
    pub fn distance(&self) -> f64 {
        if self.corners[1] + self.corners[2] > 0 {
            1.0
        } else {
            self.theta.iter().map(|t| t.sin()).fold(0.0, f64::max)
        }
    }
}

/// Random structured pair in ambient dimension at most `max_dim`.
pub fn known_pair(rng: &mut Rng, max_dim: usize) -> KnownPair {
    let pol = pol();
    loop {
        let corners = [rng.index(0, 3), rng.index(0, 3), rng.index(0, 3), rng.index(0, 3)];
        let r = rng.index(0, 4);
        let n = corners.iter().sum::<usize>() + 2 * r;
        if n == 0 || n > max_dim {
            continue;
        }
        let mut theta: Vec<f64> = (0..r).map(|_| rng.uniform(0.05, std::f64::consts::FRAC_PI_2 - 0.05)).collect();
        theta.sort_by(f64::total_cmp);
        let u = riccati::random::random_unitary(rng, n);
        let e = |i: usize| u.submatrix(0, i, n, 1);
        let mut next = 0;
        let mut take = |k: usize| {
            let cols: Vec<ComplexMatrix> = (next..next + k).map(e).collect();
            next += k;
            cols
        };
        take(corners[0]); // m00 spans the rest
        let m01 = take(corners[1]);
        let m10 = take(corners[2]);
        let m11 = take(corners[3]);
        let a = take(r);
        let b = take(r);
        let p_cols: Vec<ComplexMatrix> = m10.iter().chain(&m11).chain(&a).cloned().collect();
        let mut q_cols: Vec<ComplexMatrix> = m01.iter().chain(&m11).cloned().collect();
        for i in 0..r {
            q_cols.push(a[i].scale(theta[i].cos()) + b[i].scale(theta[i].sin()));
        }
        let span = |cols: &[ComplexMatrix]| {
            if cols.is_empty() {
                riccati::Subspace::zero(n)
            } else {
                let refs: Vec<&ComplexMatrix> = cols.iter().collect();
                riccati::Subspace::from_spanning(&ComplexMatrix::hstack(&refs), &pol).unwrap()
            }
        };
        let p = span(&p_cols);
        let q = span(&q_cols);
        return KnownPair { p, q, corners, theta };
    }
}
