//! At dimension 16 the norm stops being multiplicative and the square loses
//! its orthogonal rows.

use octomagic::algebra::find_norm_multiplicativity_counterexample;
use octomagic::magic::gram_report;
use octomagic::{build_matrix, BasisTable, Convention};

fn main() {
    let seed = 8;
    for dim in [8, 16] {
        let table = BasisTable::new(dim, Convention::Classic).unwrap();
        match find_norm_multiplicativity_counterexample(&table, seed, 100_000) {
            None => println!("dim {dim}: no counterexample (seed {seed})"),
            Some((x, y)) => {
                let xy = table.multiply(&x, &y).unwrap();
                println!("dim {dim}: x = {x}\n        y = {y}");
                println!("N(x)N(y) = {}, N(xy) = {}", x.norm() * y.norm(), xy.norm());
                let report = gram_report(&build_matrix(&x, &y, &table).unwrap());
                println!("MM^T diagonal: {}, largest off-diagonal entry {}", report.is_orthogonal, report.off_diagonal_max_abs);
            }
        }
    }
}
