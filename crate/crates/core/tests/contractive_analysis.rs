mod common;

use common::pol;
use riccati::contractive::{
    admissible_kernel, commuting_pair_kernel, dual_map, enumerate_contractive, lifted_invariance, uniqueness,
    ContractiveFamily, EnumerationMode, UniquenessCriterion,
};
use riccati::instances::{build, builtin_corpus, Instance, InstanceSpec};
use riccati::riccati::{residual, residual_tolerance, solve_spectral};
use riccati::{ComplexMatrix, Error};

const SAMPLED: EnumerationMode = EnumerationMode::Sample { count: 20, seed: 17 };

/// Each corpus instance with the families around its contractive spectral
/// solutions.
fn corpus_families() -> Vec<(Instance, Vec<ContractiveFamily>)> {
    builtin_corpus()
        .iter()
        .map(|spec| {
            let inst = build(spec).unwrap();
            let families = solve_spectral(&inst.b, &pol())
                .unwrap()
                .into_iter()
                .filter(|s| s.is_contractive)
                .map(|s| enumerate_contractive(&inst.b, &s.x, &pol(), SAMPLED).unwrap())
                .collect();
            (inst, families)
        })
        .collect()
}

fn column_norm(m: &ComplexMatrix, j: usize) -> f64 {
    m.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn family_members_are_contractive_solutions() {
    for (inst, families) in corpus_families() {
        for fam in &families {
            for m in &fam.members {
                assert!(m.y.op_norm() <= 1.0 + 1e-10);
                assert!(m.residual <= residual_tolerance(&inst.b, &m.y, &pol()));
                assert_eq!(residual(&inst.b, &m.y).unwrap(), m.residual);
            }
        }
    }
}

#[test]
fn bijection_recovers_subspaces() {
    for (inst, families) in corpus_families() {
        for fam in &families {
            for (i, m) in fam.members.iter().enumerate() {
                let (l, checks) = commuting_pair_kernel(&fam.base_x, &m.y, &pol()).unwrap();
                assert!(l.span_eq(&m.l, 1e-9), "{}", inst.spec.description());
                assert!(checks.max_defect() <= 1e-9);
                for other in &fam.members[i + 1..] {
                    assert!((&m.y - &other.y).frobenius() > 1e-6);
                }
            }
        }
    }
}

#[test]
fn sign_structure_and_unit_norm_confinement() {
    for (_, families) in corpus_families() {
        for fam in &families {
            let x = &fam.base_x;
            for m in &fam.members {
                let plus = &m.y + x;
                let minus = &m.y - x;
                if !m.l.is_zero() {
                    let on_l = &plus * m.l.basis();
                    let xu = x * m.l.basis();
                    let yu = &m.y * m.l.basis();
                    for j in 0..m.l.dim() {
                        assert!(column_norm(&on_l, j) <= 1e-10);
                        assert!((column_norm(&xu, j) - 1.0).abs() <= 1e-10);
                        assert!((column_norm(&yu, j) - 1.0).abs() <= 1e-10);
                    }
                }
                let rest = m.l.ortho_complement();
                if !rest.is_zero() {
                    let off_l = &minus * rest.basis();
                    for j in 0..rest.dim() {
                        assert!(column_norm(&off_l, j) <= 1e-10);
                    }
                }
            }
        }
    }
}

/// `unique` is decided by the largest admissible reducing subspace. The
/// kernel condition `Ker(I − X*X) ∩ Ker(XVX − V*) = {0}` is sufficient;
/// whether it is also necessary is tallied, not assumed.
#[test]
fn uniqueness_matches_enumeration() {
    let (mut checked, mut kernel_agrees) = (0, 0);
    for (inst, families) in corpus_families() {
        for fam in &families {
            let v = uniqueness(&inst.b, &fam.base_x, &pol()).unwrap();
            let lattice = enumerate_contractive(&inst.b, &fam.base_x, &pol(), EnumerationMode::Lattice).unwrap();
            assert_eq!(v.unique, fam.members.len() == 1, "{}", inst.spec.description());
            assert_eq!(v.unique, lattice.members.len() == 1);
            if v.kernel_condition || v.strict_contraction || v.dissipative {
                assert!(v.unique);
            }
            checked += 1;
            kernel_agrees += usize::from(v.kernel_condition == v.unique);
        }
    }
    println!("kernel condition agrees with uniqueness on {kernel_agrees} of {checked} corpus solutions");
}

#[test]
fn corpus_covers_each_verdict() {
    let mut seen = Vec::new();
    for (inst, families) in corpus_families() {
        for fam in &families {
            seen.push(uniqueness(&inst.b, &fam.base_x, &pol()).unwrap().criterion);
        }
    }
    for c in [UniquenessCriterion::StrictContraction, UniquenessCriterion::Dissipative, UniquenessCriterion::None] {
        assert!(seen.contains(&c), "{c:?} missing from corpus");
    }
}

#[test]
fn dual_and_lifted_checks_on_families() {
    for (inst, families) in corpus_families() {
        for fam in &families {
            for m in &fam.members {
                let (l_star, checks) = dual_map(&inst.b, &fam.base_x, &m.l, &pol()).unwrap();
                assert_eq!(l_star.dim(), m.l.dim());
                assert!(checks.max_defect() <= 1e-10, "{checks:?}");
                let (a, b) = lifted_invariance(&inst.b, &fam.base_x, &m.l, &pol()).unwrap();
                assert!(a <= 1e-10 && b <= 1e-10);
            }
        }
    }
}

#[test]
fn sampling_exposes_the_involution_continuum() {
    let inst = build(&InstanceSpec::Involution { k: 2 }).unwrap();
    let i = ComplexMatrix::identity(2);
    let lattice = enumerate_contractive(&inst.b, &i, &pol(), EnumerationMode::Lattice).unwrap();
    let sampled = enumerate_contractive(&inst.b, &i, &pol(), SAMPLED).unwrap();
    assert!(lattice.lattice_only && !lattice.complete);
    assert!(sampled.members.len() > lattice.members.len());
    let ak = admissible_kernel(&inst.b, &i, &pol()).unwrap();
    assert_eq!(ak.l_max.dim(), 2);
}

#[test]
fn non_spectral_base_is_refused() {
    let inst = build(&InstanceSpec::Involution { k: 2 }).unwrap();
    let y = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
    assert!(matches!(
        enumerate_contractive(&inst.b, &y, &pol(), EnumerationMode::Lattice),
        Err(Error::NotSpectral)
    ));
}
