//! Uniqueness verdicts for every contractive spectral solution in the
//! built-in corpus, next to the size of the enumerated family.
//!
//! cargo run --example uniqueness_criteria

use riccati::contractive::{enumerate_contractive, uniqueness, EnumerationMode};
use riccati::instances::{build, builtin_corpus};
use riccati::riccati::solve_spectral;
use riccati::{Result, TolerancePolicy};

fn main() -> Result<()> {
    let pol = TolerancePolicy::default();
    for spec in builtin_corpus() {
        let inst = build(&spec)?;
        println!("{}", spec.description());
        for s in solve_spectral(&inst.b, &pol)?.into_iter().filter(|s| s.is_contractive) {
            let v = uniqueness(&inst.b, &s.x, &pol)?;
            let fam = enumerate_contractive(&inst.b, &s.x, &pol, EnumerationMode::Sample { count: 20, seed: 0 })?;
            println!(
                "  ‖X‖ = {:.4}: unique {:5}  via {:18}  kernel condition {:5}  family size {}",
                s.norm_x,
                v.unique,
                format!("{:?}", v.criterion),
                v.kernel_condition,
                fam.members.len()
            );
        }
    }
    Ok(())
}
