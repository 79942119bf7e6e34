//! Row permutations that put the magic constant on both diagonals.

use octomagic::euler::euler_example;
use octomagic::search::diagonalize_rows;
use octomagic::{build_matrix, classify, BasisTable, Convention, Hyper};

fn main() {
    let euler = euler_example();
    println!("Euler's example: {:?}", diagonalize_rows(&euler).unwrap());

    let table = BasisTable::new(8, Convention::Classic).unwrap();
    let a = Hyper::from_ints(&[8, -2, -4, 8, -4, -1, -5, -4]).unwrap();
    let p = Hyper::from_halves(&[5, 7, -1, -3, -7, 1, 7, 1]).unwrap();
    let m = build_matrix(&a, &p, &table).unwrap();
    match diagonalize_rows(&m).unwrap() {
        Some(perm) => println!("9476 square: {perm:?}, {}", classify(&m.permute_rows(&perm))),
        None => println!("9476 square: none of the 40320 row orders works"),
    }

    let a = Hyper::from_ints(&[0, -2, 3, 2, -3, -1, -1, 2]).unwrap();
    let p = Hyper::from_ints(&[-4, 0, 2, 2, 0, -2, -2, 0]).unwrap();
    let m = build_matrix(&a, &p, &table).unwrap();
    println!("\nA = {a}, P = {p}\n{m}\n{}", classify(&m));
}
