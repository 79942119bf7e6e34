//! Seeded search for octonionic squares with distinct squared entries and a
//! small constant, then a fully-magic search in Euler's family.
//!
//! Usage: cargo run --example random_search [seed]

use octomagic::magic::Layout;
use octomagic::search::{random_search_collect, Predicate, Sampler, SearchConfig};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(9476);
    let cfg = SearchConfig {
        lo: -12,
        hi: 12,
        predicates: vec![Predicate::SquaresDistinct],
        iterations: 200_000,
        seed,
        workers: 4,
        quotient_symmetry: true,
        ..SearchConfig::default()
    };
    let (found, summary) = random_search_collect(&cfg).unwrap();
    println!("seed {seed}: {} candidates in {} iterations", found.len(), summary.iterations);
    println!("best constants over the run: {:?}", summary.best_history.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    if let Some(best) = found.iter().min_by_key(|c| c.constant) {
        println!("{}", serde_json::to_string(best).unwrap());
    }

    let euler = SearchConfig {
        dim: 4,
        layout: Layout::Euler4,
        sampler: Sampler::EulerSolutions,
        lo: -5,
        hi: 5,
        predicates: vec![Predicate::FullyMagic, Predicate::EntriesDistinct],
        iterations: 5000,
        seed,
        ..SearchConfig::default()
    };
    let (found, _) = random_search_collect(&euler).unwrap();
    println!("\n{} fully magic 4x4 squares with distinct entries", found.len());
    if let Some(best) = found.iter().min_by_key(|c| c.constant) {
        println!("smallest constant {}:\n{}", best.constant, best.matrix().unwrap());
    }
}
