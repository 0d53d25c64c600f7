//! Canonical decomposition of a pair of subspaces: four corners, principal
//! angles and the unitary `W`, then the reconstruction check.
//!
//! cargo run --example halmos_decomposition

use riccati::geometry::{halmos_decompose, reconstruct};
use riccati::{ComplexMatrix, Result, Subspace, TolerancePolicy};

fn main() -> Result<()> {
    let pol = TolerancePolicy::default();
    // P = span{e0, e1, e2}. Q shares e2, contains e4, and is tilted by 0.2 and
    // 0.7 against e0 and e1.
    let (a, b) = (0.2_f64, 0.7_f64);
    #[rustfmt::skip]
    let q = ComplexMatrix::from_real(6, 4, &[
        a.cos(), 0.0,     0.0, 0.0,
        0.0,     b.cos(), 0.0, 0.0,
        0.0,     0.0,     1.0, 0.0,
        a.sin(), 0.0,     0.0, 0.0,
        0.0,     0.0,     0.0, 1.0,
        0.0,     b.sin(), 0.0, 0.0,
    ]);
    let p = Subspace::coordinate(6, 0..3);
    let q = Subspace::from_spanning(&q, &pol)?;

    let d = halmos_decompose(&p, &q, &pol)?;
    println!("dim M00 = {}  (P^⊥ ∩ Q^⊥)", d.m00.dim());
    println!("dim M01 = {}  (P^⊥ ∩ Q)", d.m01.dim());
    println!("dim M10 = {}  (P ∩ Q^⊥)", d.m10.dim());
    println!("dim M11 = {}  (P ∩ Q)", d.m11.dim());
    println!("angles  = {:?}", d.theta);
    println!("W condition = {:.3}", d.w_condition);

    let (pp, qq) = reconstruct(&d);
    println!("reconstruction error P: {:.2e}", (&pp - &p.project()).frobenius());
    println!("reconstruction error Q: {:.2e}", (&qq - &q.project()).frobenius());
    println!(
        "‖P − Q‖ = {:.6} (decomposition) vs {:.6} (direct)",
        d.projection_distance(),
        (p.project() - q.project()).op_norm()
    );
    Ok(())
}
