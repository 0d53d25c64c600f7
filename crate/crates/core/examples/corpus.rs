//! Freezes the built-in corpus into one JSON file:
//! `[{"spec", "b", "known_solutions"}, …]`.
//!
//! cargo run --example corpus [path]

use riccati::instances::{build, builtin_corpus};
use riccati::json::to_canonical_string;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "corpus.json".into());
    let instances = builtin_corpus().iter().map(build).collect::<Result<Vec<_>, _>>()?;
    std::fs::write(&path, to_canonical_string(&instances)? + "\n")?;
    println!("wrote {} instances to {path}", instances.len());
    Ok(())
}
