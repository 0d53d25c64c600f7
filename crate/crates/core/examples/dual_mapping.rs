//! The correspondence `L ↦ X L` between admissible subspaces of `H0` and
//! those of the dual problem in `H1`, plus the lifted subspace
//! `{u ⊕ Xu : u ∈ L}` that is invariant for both `A` and `B`.
//!
//! cargo run --example dual_mapping [seed]

use riccati::contractive::{admissible_kernel, dual_map, lifted_invariance, sample_admissible};
use riccati::instances::{build, InstanceSpec};
use riccati::random::Rng;
use riccati::riccati::solve_spectral;
use riccati::{Result, TolerancePolicy};

fn main() -> Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let pol = TolerancePolicy::default();
    let inst = build(&InstanceSpec::ConstructedNonunique { seed })?;
    println!("{} (n0 = {}, n1 = {})", inst.spec.description(), inst.b.n0, inst.b.n1);
    let mut rng = Rng::new(seed);
    for s in solve_spectral(&inst.b, &pol)?.into_iter().filter(|s| s.is_contractive) {
        let ak = admissible_kernel(&inst.b, &s.x, &pol)?;
        println!("‖X‖ = {:.4}, dim l_max = {}", s.norm_x, ak.l_max.dim());
        for _ in 0..3 {
            let l = sample_admissible(&inst.b, &s.x, &ak, &pol, &mut rng)?;
            let (l_star, checks) = dual_map(&inst.b, &s.x, &l, &pol)?;
            let (a, b) = lifted_invariance(&inst.b, &s.x, &l, &pol)?;
            println!(
                "  dim L = {} → dim L* = {}: dual defect {:.1e}, lifted A/B defects {:.1e}/{:.1e}",
                l.dim(),
                l_star.dim(),
                checks.max_defect(),
                a,
                b
            );
        }
    }
    Ok(())
}
