//! Magic squares of squares built from double multiplication `A (e_i P)` in
//! the Cayley-Dickson algebras.
//!
//! For quaternions and octonions the square with rows `A (e_i P)` has
//! orthogonal rows and columns, each with square-sum `N(A) N(P)`. The
//! modules cover exact arithmetic ([`scalar`], [`algebra`]), symbolic
//! proofs ([`polynomial`], [`magic`]), Euler's 4x4 family ([`euler`]),
//! parameter search ([`search`]) and SVG figures ([`render`]).
//!
//! ```
//! use octomagic::{build_matrix, classify, BasisTable, Convention, Hyper};
//!
//! let table = BasisTable::new(8, Convention::Classic).unwrap();
//! let a = Hyper::from_ints(&[8, -2, -4, 8, -4, -1, -5, -4]).unwrap();
//! let p = Hyper::from_halves(&[5, 7, -1, -3, -7, 1, 7, 1]).unwrap();
//! let m = build_matrix(&a, &p, &table).unwrap();
//! assert_eq!(classify(&m).constant.to_string(), "9476");
//! ```
//!
//! Runnable walkthroughs live in `examples/`.

pub mod algebra;
pub mod cli;
pub mod euler;
pub mod magic;
pub mod polynomial;
pub mod render;
pub mod scalar;
pub mod search;

pub use algebra::{BasisTable, Convention, Hyper};
pub use magic::{build_matrix, build_symbolic, classify, prove_theorem, Classification, SquareKind, SquareMatrix};
pub use scalar::HalfRational;
