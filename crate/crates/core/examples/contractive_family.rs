//! Contractive solutions around `X = I` for `X² = I` on `C^k`: the lattice of
//! minimal reducing components and random draws from the continuum.
//!
//! cargo run --example contractive_family [k]

use riccati::contractive::{admissible_kernel, commuting_pair_kernel, enumerate_contractive, EnumerationMode};
use riccati::instances::{build, InstanceSpec};
use riccati::riccati::RiccatiSolution;
use riccati::{ComplexMatrix, Result, TolerancePolicy};

fn main() -> Result<()> {
    let k = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let pol = TolerancePolicy::default();
    let inst = build(&InstanceSpec::Involution { k })?;
    let x = ComplexMatrix::identity(k);

    let ak = admissible_kernel(&inst.b, &x, &pol)?;
    println!(
        "dim k = {}, dim l_max = {}, {} minimal components, commutant dim {}",
        ak.k.dim(),
        ak.l_max.dim(),
        ak.minimal_components.len(),
        ak.commutant_dim
    );

    let lattice = enumerate_contractive(&inst.b, &x, &pol, EnumerationMode::Lattice)?;
    println!("lattice: {} members (complete: {})", lattice.members.len(), lattice.complete);
    let sampled = enumerate_contractive(&inst.b, &x, &pol, EnumerationMode::Sample { count: 6, seed: 1 })?;
    println!("with samples: {} members", sampled.members.len());
    for m in &sampled.members {
        let sol = RiccatiSolution::classify(&inst.b, &m.y, &pol)?;
        let (back, _) = commuting_pair_kernel(&x, &m.y, &pol)?;
        println!(
            "  dim L = {}  residual {:.1e}  ‖Y‖ = {:.6}  spectral {}  recovered L {}",
            m.l.dim(),
            m.residual,
            m.y.op_norm(),
            sol.is_spectral,
            back.span_eq(&m.l, 1e-9)
        );
    }
    Ok(())
}
