//! An operator `X: H0 → H1` as a graph subspace, and back.
//!
//! cargo run --example graph_subspace

use riccati::graph::{analyze_graph, graph_complement, graph_projection, graph_subspace, norm_identities};
use riccati::{ComplexMatrix, Result, Subspace, TolerancePolicy};

fn main() -> Result<()> {
    let pol = TolerancePolicy::default();
    // Rank one, so both Ker X and Ker X* are nontrivial.
    let x = ComplexMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 0.0]);
    let h0 = Subspace::coordinate(4, 0..2);
    let g = graph_subspace(&x);

    let report = analyze_graph(&h0, &g, &pol)?;
    println!("is graph: {} ({})", report.is_graph, report.reason.as_str());
    println!("‖X‖ = {:.6}, ‖P − Q‖ = {:.6}", report.norm_x, report.dist);
    println!("dim Ker X = {}, dim Ker X* = {}", report.ker_x.dim(), report.coker_x.dim());
    let recovered = report.x.expect("graph");
    println!("extraction error: {:.2e}", (&recovered - &x).frobenius());

    let (dist, back) = norm_identities(&x);
    println!("‖X‖/√(1+‖X‖²) = {dist:.6}, inverted back to {back:.6}");

    let q = graph_projection(2, &x);
    println!("projection formula vs basis projection: {:.2e}", (&q - &g.project()).frobenius());
    let c = graph_complement(2, &x)?;
    println!("complement dim {} (graph of −X* over H1)", c.dim());

    // A subspace meeting H0^⊥ is not a graph.
    let bad = Subspace::coordinate(4, [0, 2]);
    let r = analyze_graph(&h0, &bad, &pol)?;
    println!("span{{e0, e2}}: is graph {} ({})", r.is_graph, r.reason.as_str());
    Ok(())
}
