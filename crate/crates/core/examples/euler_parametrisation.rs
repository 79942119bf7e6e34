//! Euler's 4x4 family: the printed example, the side conditions, and the
//! transformation relating it to quaternion multiplication.

use octomagic::euler::{
    euler4_build, euler4_conditions, euler4_match_quaternion, euler4_solve, euler_example, EulerParams, EulerSolution,
    EULER_TABLE,
};
use octomagic::{classify, BasisTable, Convention, HalfRational};

fn main() {
    for row in EULER_TABLE {
        println!("{}", row.join("  "));
    }
    let example = euler_example();
    println!("\n{example}");
    println!("{}", classify(&example));

    let pqrs = [2, 1, 1, -2].map(HalfRational::from);
    let (b, d) = (HalfRational::from(1), HalfRational::from(-1));
    let EulerSolution::Ratio { a, c } = euler4_solve(pqrs, b, d).unwrap() else { unreachable!() };
    let params = EulerParams { abcd: [HalfRational::from(a), b, HalfRational::from(c), d], pqrs };
    let m = euler4_build(&params);
    println!("\nsolved a = {a}, c = {c}: {:?}", euler4_conditions(&params));
    println!("{m}\n{}", classify(&m));

    let broken = EulerParams::from_ints([1, 2, 3, 4], [1, 1, 1, 1]);
    println!("\npr + qs != 0: {}", classify(&euler4_build(&broken)));

    let found = euler4_match_quaternion(&BasisTable::new(4, Convention::Classic).unwrap()).unwrap();
    println!("\nEuler's table from A(e_i P): {found}");
}
