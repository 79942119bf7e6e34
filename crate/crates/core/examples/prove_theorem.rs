//! Symbolic proof that the rows A(e_i P) form a semi-magic square of squares,
//! and where it breaks at dimension 16.

use octomagic::{build_symbolic, prove_theorem, BasisTable, Convention};

fn main() {
    let table = BasisTable::new(4, Convention::Classic).unwrap();
    println!("quaternionic pattern matrix:");
    for row in build_symbolic(&table).rows() {
        println!("  {}", row.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("  "));
    }
    for dim in [4, 8, 16] {
        for conv in Convention::ALL {
            let report = prove_theorem(&BasisTable::new(dim, conv).unwrap()).unwrap();
            print!("{report}");
        }
    }
}
