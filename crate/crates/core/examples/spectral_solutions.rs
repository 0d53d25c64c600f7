//! All solutions of `A1 X − X A0 − X V X + V* = 0` whose graphs are spectral
//! subspaces of the block operator, for a seeded random instance.
//!
//! cargo run --example spectral_solutions [seed]

use riccati::instances::{build, InstanceSpec};
use riccati::riccati::{invariance_check, isolation_witness, solve_spectral};
use riccati::{Result, TolerancePolicy};

fn main() -> Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let pol = TolerancePolicy::default();
    let inst = build(&InstanceSpec::Random { n0: 2, n1: 3, seed, gap: None })?;
    let b = &inst.b;
    println!("{}, ‖B‖ = {:.4}", inst.spec.description(), b.norm());

    let sols = solve_spectral(b, &pol)?;
    println!("{} spectral solutions", sols.len());
    for s in &sols {
        let check = invariance_check(b, &s.x, &pol)?;
        println!(
            "  clusters {:?} at {:?}: ‖X‖ = {:.4}, residual {:.1e}, defect {:.1e}, contractive {}",
            s.selected_spectrum,
            s.selected_values.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            s.norm_x,
            s.residual,
            check.invariance_defect,
            s.is_contractive
        );
        assert!(isolation_witness(b, s, 1e-3, &pol)?.is_none());
    }
    Ok(())
}
