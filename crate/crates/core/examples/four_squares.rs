//! Euler's four-squares identity as the norm of a quaternion product.

use octomagic::algebra::cd_multiply;
use octomagic::polynomial::{a_var, p_var, Poly};
use octomagic::{BasisTable, Convention, Hyper};

fn main() {
    let a: Vec<Poly> = (0..4).map(|i| Poly::var(a_var(i))).collect();
    let p: Vec<Poly> = (0..4).map(|i| Poly::var(p_var(i))).collect();
    let prod = cd_multiply(&a, &p, Convention::Classic);
    for (k, c) in prod.iter().enumerate() {
        println!("(AP)_{k} = {c}");
    }
    let norm = |v: &[Poly]| v.iter().fold(Poly::zero(), |acc, x| acc + x.clone() * x.clone());
    println!("N(A)N(P) == N(AP): {}", norm(&a) * norm(&p) == norm(&prod));

    let table = BasisTable::new(4, Convention::Classic).unwrap();
    let x = Hyper::from_ints(&[1, 2, 3, 4]).unwrap();
    let y = Hyper::from_halves(&[5, -7, 1, 3]).unwrap();
    let xy = table.multiply(&x, &y).unwrap();
    println!("{x} * {y} = {xy}");
    println!("{} * {} = {}", x.norm(), y.norm(), xy.norm());
}
