mod common;

use common::{brute_force_solutions, pol, random_block, rel_diff};
use riccati::contractive::{enumerate_contractive, EnumerationMode};
use riccati::graph::graph_subspace;
use riccati::instances::{build, builtin_corpus};
use riccati::random::{random_matrix, random_unitary, Rng};
use riccati::riccati::{
    invariance_check, is_spectral, isolation_witness, residual, solve_spectral, BlockOperator, RiccatiSolution,
};
use riccati::{ComplexMatrix, Error};

/// Matches two solution lists one-to-one; returns the worst relative gap.
fn match_sets(got: &[ComplexMatrix], want: &[ComplexMatrix]) -> Option<f64> {
    if got.len() != want.len() {
        return None;
    }
    let mut used = vec![false; want.len()];
    let mut worst = 0.0f64;
    for g in got {
        let (j, d) = want
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, rel_diff(g, w)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

#[test]
fn spectral_solutions_match_brute_force() {
    let mut rng = Rng::new(2024);
    let mut checked = 0;
    while checked < 25 {
        let b = random_block(&mut rng, 3, 3);
        let Some(oracle) = brute_force_solutions(&b, 1e-3) else { continue };
        let got: Vec<ComplexMatrix> = solve_spectral(&b, &pol()).unwrap().into_iter().map(|s| s.x).collect();
        let worst = match_sets(&got, &oracle).expect("same number of solutions");
        assert!(worst <= 1e-9, "worst relative gap {worst:e}");
        checked += 1;
    }
}

#[test]
fn unequal_blocks_match_brute_force() {
    let mut rng = Rng::new(77);
    for (n0, n1) in [(1, 3), (2, 3), (3, 1), (2, 2)] {
        let b = random_block(&mut rng, n0, n1);
        let oracle = brute_force_solutions(&b, 1e-3).expect("generic spectrum is simple");
        let got: Vec<ComplexMatrix> = solve_spectral(&b, &pol()).unwrap().into_iter().map(|s| s.x).collect();
        assert!(match_sets(&got, &oracle).unwrap() <= 1e-9);
    }
}

#[test]
fn outputs_are_spectral_and_sorted() {
    let mut rng = Rng::new(3);
    for _ in 0..10 {
        let b = random_block(&mut rng, 2, 3);
        let sols = solve_spectral(&b, &pol()).unwrap();
        assert!(sols.windows(2).all(|w| w[0].norm_x <= w[1].norm_x));
        for s in &sols {
            assert!(is_spectral(&b, &graph_subspace(&s.x), &pol()).unwrap());
            assert_eq!(s.is_isolated, Some(true));
        }
    }
}

/// `defect = ‖(I+XX*)^{-1/2} R (I+X*X)^{-1/2}‖_F`, so the two quantities
/// differ by at most the factor `1 + ‖X‖²`. Away from the band
/// `[tol/(1+‖X‖²), tol·(1+‖X‖²)]` the paired verdicts must agree; inside it
/// a single shared threshold cannot decide both consistently.
#[test]
fn residual_and_invariance_agree() {
    let mut rng = Rng::new(99);
    let (mut in_band, mut disagreements) = (0, 0);
    for trial in 0..300 {
        let n0 = 1 + trial % 3;
        let n1 = 1 + (trial / 3) % 3;
        let b = random_block(&mut rng, n0, n1);
        let sols = solve_spectral(&b, &pol()).unwrap();
        let x = if trial % 2 == 0 || sols.is_empty() {
            random_matrix(&mut rng, n1, n0)
        } else {
            let s = &sols[rng.index(0, sols.len())];
            let eps = 10f64.powf(rng.uniform(-14.0, -2.0));
            &s.x + &random_matrix(&mut rng, n1, n0).scale(eps)
        };
        let c = invariance_check(&b, &x, &pol()).unwrap();
        let kappa = 1.0 + x.op_norm().powi(2);
        let slack = 1e-15 * (1.0 + b.norm()) * kappa;
        assert!(c.invariance_defect <= c.residual * (1.0 + 1e-10) + slack);
        assert!(c.residual <= kappa * c.invariance_defect * (1.0 + 1e-10) + slack);
        let band = c.residual > c.tolerance / kappa && c.residual <= c.tolerance * kappa;
        if band {
            in_band += 1;
        } else if !c.agree() {
            disagreements += 1;
        }
    }
    assert_eq!(disagreements, 0);
    println!("{in_band} of 300 samples inside the ambiguity band");
}

#[test]
fn conjugation_covariance() {
    let mut rng = Rng::new(12);
    for _ in 0..10 {
        let b = random_block(&mut rng, 3, 2);
        let u0 = random_unitary(&mut rng, 3);
        let u1 = random_unitary(&mut rng, 2);
        let c = b.conjugate(&u0, &u1);
        let original = solve_spectral(&b, &pol()).unwrap();
        let moved = solve_spectral(&c, &pol()).unwrap();
        assert_eq!(original.len(), moved.len());
        for (a, m) in original.iter().zip(&moved) {
            assert!((a.norm_x - m.norm_x).abs() <= 1e-9 * (1.0 + a.norm_x));
        }
        let mapped: Vec<ComplexMatrix> = original.iter().map(|s| &(&u1 * &s.x) * &u0.adjoint()).collect();
        let got: Vec<ComplexMatrix> = moved.into_iter().map(|s| s.x).collect();
        assert!(match_sets(&got, &mapped).unwrap() <= 1e-9);
    }
}

/// Every solution the corpus exposes: spectral ones plus the contractive
/// families (lattice and samples) around them.
fn corpus_solutions() -> Vec<(String, BlockOperator, Vec<ComplexMatrix>)> {
    builtin_corpus()
        .iter()
        .map(|spec| {
            let inst = build(spec).unwrap();
            let mut xs: Vec<ComplexMatrix> = inst.known_solutions.clone();
            for s in solve_spectral(&inst.b, &pol()).unwrap() {
                if s.is_contractive {
                    let fam =
                        enumerate_contractive(&inst.b, &s.x, &pol(), EnumerationMode::Sample { count: 8, seed: 5 })
                            .unwrap();
                    xs.extend(fam.members.into_iter().map(|m| m.y));
                }
                xs.push(s.x);
            }
            (spec.description(), inst.b, xs)
        })
        .collect()
}

#[test]
fn isolation_dichotomy_on_corpus() {
    let mut non_spectral = 0;
    for (name, b, xs) in corpus_solutions() {
        for x in xs {
            let sol = RiccatiSolution::classify(&b, &x, &pol()).unwrap();
            let witness = isolation_witness(&b, &sol, 1e-3, &pol()).unwrap();
            assert_eq!(witness.is_none(), sol.is_spectral, "{name}");
            if let Some((y, dist)) = witness {
                non_spectral += 1;
                assert!(dist > 0.0 && dist <= 1e-2, "{name}: witness at {dist:e}");
                assert!(residual(&b, &y).unwrap() <= 1e-9 * (1.0 + b.norm()) * (1.0 + y.op_norm()).powi(2));
            }
        }
    }
    assert!(non_spectral > 0, "corpus exercises the non-spectral branch");
}

#[test]
fn too_many_clusters_is_refused() {
    let d: Vec<f64> = (0..25).map(|i| i as f64).collect();
    let n0 = 12;
    let b = BlockOperator::new(
        ComplexMatrix::from_real_diagonal(&d[..n0]),
        ComplexMatrix::from_real_diagonal(&d[n0..]),
        ComplexMatrix::zeros(n0, 25 - n0),
        &pol(),
    )
    .unwrap();
    assert!(matches!(solve_spectral(&b, &pol()), Err(Error::TooManyClusters { clusters: 25, cap: 20 })));
}

#[test]
fn classify_rejects_non_solutions() {
    let b = build(&riccati::instances::InstanceSpec::Involution { k: 2 }).unwrap().b;
    let r = RiccatiSolution::classify(&b, &ComplexMatrix::zeros(2, 2), &pol());
    assert!(matches!(r, Err(Error::NotASolution { .. })));
}
