//! The diagonal multiplication example: `X = f(Λ)` on finer grids, with
//! `‖X‖ → ∞` and `‖P − Q‖ → 1`.
//!
//! cargo run --example unbounded_refinement [n,n,...]

use riccati::instances::{refinement_csv, refinement_study};
use riccati::Result;

fn main() -> Result<()> {
    let ns: Vec<usize> = std::env::args()
        .nth(1)
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_else(|| vec![2, 8, 32, 128, 512]);
    let rows = refinement_study(&ns)?;
    print!("{}", refinement_csv(&rows));
    for r in &rows {
        eprintln!(
            "n = {:4}: residual {:.1e}, ‖X‖/(2(n+1)) = {:.4}, 1 − dist = {:.2e}",
            r.n,
            r.residual,
            r.norm_x / (2.0 * (r.n + 1) as f64),
            1.0 - r.dist
        );
    }
    Ok(())
}
