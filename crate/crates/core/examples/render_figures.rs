//! Writes the quaternionic and octonionic pattern figures as SVG.
//!
//! Usage: cargo run --example render_figures [output dir]

use std::path::PathBuf;

use octomagic::render::{render_pattern, RenderSpec};
use octomagic::{build_symbolic, BasisTable, Convention};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    for dim in [4, 8] {
        let sym = build_symbolic(&BasisTable::new(dim, Convention::Classic).unwrap());
        let spec = RenderSpec::for_dim(dim).unwrap().with_convention(Convention::Classic);
        let path = dir.join(format!("patterns_{dim}.svg"));
        std::fs::write(&path, render_pattern(&sym, &spec).unwrap()).unwrap();
        println!("{} ({} distinct subsquares)", path.display(), sym.distinct_count());
    }
}
