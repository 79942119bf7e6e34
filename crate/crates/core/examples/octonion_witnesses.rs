//! The two octonionic semi-magic squares of squares with constants 9476 and 43617.

use octomagic::magic::{diagonal_sums, gram_report};
use octomagic::{build_matrix, classify, BasisTable, Convention, Hyper};

fn show(name: &str, a: Hyper, p: Hyper) {
    let table = BasisTable::new(8, Convention::Classic).unwrap();
    let m = build_matrix(&a, &p, &table).unwrap();
    println!("{name}: A = {a}, P = {p}");
    println!("{m}");
    let report = gram_report(&m);
    let (main, anti) = diagonal_sums(&m);
    println!("MM^T = {} I: {}", report.constant, report.is_orthogonal);
    println!("diagonal square-sums: main {main}, anti {anti}");
    println!("{}\n", classify(&m));
}

fn main() {
    show(
        "9476",
        Hyper::from_ints(&[8, -2, -4, 8, -4, -1, -5, -4]).unwrap(),
        Hyper::from_halves(&[5, 7, -1, -3, -7, 1, 7, 1]).unwrap(),
    );
    show(
        "43617",
        Hyper::from_ints(&[-2, -3, 7, -1, 2, -11, 2, -5]).unwrap(),
        Hyper::from_ints(&[-7, 4, -4, -9, 1, 2, -5, 3]).unwrap(),
    );
}
