//! Exact Cayley-Dickson algebras of dimension 1, 2, 4, 8 and 16.
//!
//! Basis elements are indexed from 0 with `e0 = 1`. A [`BasisTable`] stores
//! the signed structure constants `e_i e_j = ±e_k` generated by recursive
//! doubling under a chosen [`Convention`]; all products go through the table.
//! [`cd_multiply`] performs the doubling directly on coordinate slices and is
//! kept as an independent route for cross-checking the table.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::HalfRational;

pub const SUPPORTED_DIMS: [usize; 5] = [1, 2, 4, 8, 16];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unsupported dimension {0} (expected one of 1, 2, 4, 8, 16)")]
    UnsupportedDim(usize),
    #[error("unknown Cayley-Dickson convention {0:?} (expected \"classic\" or \"mirrored\")")]
    UnknownConvention(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndex { index: usize, dim: usize },
}

/// Minimal commutative-ring interface shared by exact scalars, machine
/// integers and symbolic polynomials.
pub trait Ring:
    Clone + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Ring for HalfRational {
    fn zero() -> Self {
        HalfRational::ZERO
    }
    fn one() -> Self {
        HalfRational::ONE
    }
}

impl Ring for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
}

/// Doubling rule used to build `2n`-dimensional products from `n`-dimensional ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `(a,b)(c,d) = (ac - conj(d) b, d a + b conj(c))`
    #[default]
    Classic,
    /// `(a,b)(c,d) = (ac - d conj(b), conj(a) d + c b)`
    Mirrored,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::Classic, Convention::Mirrored];

    pub fn tag(&self) -> &'static str {
        match self {
            Convention::Classic => "classic",
            Convention::Mirrored => "mirrored",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Convention {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classic" => Ok(Convention::Classic),
            "mirrored" => Ok(Convention::Mirrored),
            other => Err(AlgebraError::UnknownConvention(other.to_string())),
        }
    }
}

fn check_dim(dim: usize) -> Result<(), AlgebraError> {
    if SUPPORTED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(AlgebraError::UnsupportedDim(dim))
    }
}

fn conj_slice<T: Ring>(x: &[T]) -> Vec<T> {
    x.iter()
        .enumerate()
        .map(|(i, v)| if i == 0 { v.clone() } else { -v.clone() })
        .collect()
}

fn add_slices<T: Ring>(x: Vec<T>, y: Vec<T>) -> Vec<T> {
    x.into_iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub_slices<T: Ring>(x: Vec<T>, y: Vec<T>) -> Vec<T> {
    x.into_iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Product by explicit recursive doubling, without a structure table.
///
/// Slices must have equal power-of-two length.
pub fn cd_multiply<T: Ring>(x: &[T], y: &[T], convention: Convention) -> Vec<T> {
    assert_eq!(x.len(), y.len(), "cd_multiply operands differ in length");
    let n = x.len();
    if n == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let m = |u: &[T], v: &[T]| cd_multiply(u, v, convention);
    let (lo, hi) = match convention {
        Convention::Classic => (
            sub_slices(m(a, c), m(&conj_slice(d), b)),
            add_slices(m(d, a), m(b, &conj_slice(c))),
        ),
        Convention::Mirrored => (
            sub_slices(m(a, c), m(d, &conj_slice(b))),
            add_slices(m(&conj_slice(a), d), m(c, b)),
        ),
    };
    let mut out = lo;
    out.extend(hi);
    out
}

/// `e_i e_j = sign * e_target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisProduct {
    pub target: usize,
    pub sign: i8,
}

/// Signed structure constants of one Cayley-Dickson algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisTable {
    dim: usize,
    convention: Convention,
    entries: Vec<BasisProduct>,
}

/// Generates the structure table for `dim` under `convention`.
pub fn cd_basis_table(dim: usize, convention: Convention) -> Result<BasisTable, AlgebraError> {
    check_dim(dim)?;
    let unit = |i: usize| {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        v
    };
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let prod = cd_multiply(&unit(i), &unit(j), convention);
            let mut nonzero = prod.iter().enumerate().filter(|(_, v)| **v != 0);
            let (target, &value) = nonzero.next().expect("basis product vanished");
            assert!(nonzero.next().is_none() && value.abs() == 1, "basis product is not a signed unit");
            entries.push(BasisProduct { target, sign: value as i8 });
        }
    }
    Ok(BasisTable { dim, convention, entries })
}

impl BasisTable {
    pub fn new(dim: usize, convention: Convention) -> Result<Self, AlgebraError> {
        cd_basis_table(dim, convention)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> BasisProduct {
        self.entries[i * self.dim + j]
    }

    /// Bilinear product of coordinate slices over any [`Ring`].
    pub fn product<T: Ring>(&self, x: &[T], y: &[T]) -> Vec<T> {
        assert!(x.len() == self.dim && y.len() == self.dim, "operand length differs from table dim");
        let mut out = vec![T::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let BasisProduct { target, sign } = self.get(i, j);
                let term = xi.clone() * yj.clone();
                let slot = &mut out[target];
                *slot = if sign > 0 { slot.clone() + term } else { slot.clone() - term };
            }
        }
        out
    }

    /// `e_i * y`, a signed permutation of the coordinates of `y`.
    pub fn left_basis_product<T: Ring>(&self, i: usize, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (j, yj) in y.iter().enumerate() {
            let BasisProduct { target, sign } = self.get(i, j);
            out[target] = if sign > 0 { yj.clone() } else { -yj.clone() };
        }
        out
    }

    pub fn multiply(&self, x: &Hyper, y: &Hyper) -> Result<Hyper, AlgebraError> {
        self.check_operand(x)?;
        self.check_operand(y)?;
        Ok(Hyper { coords: self.product(&x.coords, &y.coords) })
    }

    fn check_operand(&self, x: &Hyper) -> Result<(), AlgebraError> {
        if x.dim() != self.dim {
            return Err(AlgebraError::DimMismatch { left: x.dim(), right: self.dim });
        }
        Ok(())
    }

    /// True when every row and every column of the table hits each index once.
    pub fn is_signed_latin_square(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                row[self.get(i, j).target] = true;
                col[self.get(j, i).target] = true;
            }
            row.into_iter().chain(col).all(|seen| seen)
        })
    }
}

/// Element of a Cayley-Dickson algebra as exact coordinates; index 0 is the real unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<HalfRational>", into = "Vec<HalfRational>")]
pub struct Hyper {
    coords: Vec<HalfRational>,
}

impl TryFrom<Vec<HalfRational>> for Hyper {
    type Error = AlgebraError;
    fn try_from(coords: Vec<HalfRational>) -> Result<Self, Self::Error> {
        Hyper::new(coords)
    }
}

impl From<Hyper> for Vec<HalfRational> {
    fn from(h: Hyper) -> Self {
        h.coords
    }
}

impl Hyper {
    pub fn new(coords: Vec<HalfRational>) -> Result<Self, AlgebraError> {
        check_dim(coords.len())?;
        Ok(Self { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self, AlgebraError> {
        Self::new(coords.iter().map(|&c| HalfRational::from(c)).collect())
    }

    /// Coordinates `n_i / 2`.
    pub fn from_halves(numerators: &[i64]) -> Result<Self, AlgebraError> {
        Self::new(numerators.iter().map(|&c| HalfRational::halves(c as i128)).collect())
    }

    pub fn zero(dim: usize) -> Result<Self, AlgebraError> {
        Self::new(vec![HalfRational::ZERO; dim])
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self, AlgebraError> {
        if index >= dim {
            return Err(AlgebraError::BasisIndex { index, dim });
        }
        let mut h = Self::zero(dim)?;
        h.coords[index] = HalfRational::ONE;
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[HalfRational] {
        &self.coords
    }

    pub fn conjugate(&self) -> Hyper {
        Hyper { coords: conj_slice(&self.coords) }
    }

    /// Sum of squared coordinates.
    pub fn norm(&self) -> HalfRational {
        self.coords.iter().map(|c| c.square()).sum()
    }

    pub fn dot(&self, other: &Hyper) -> Result<HalfRational, AlgebraError> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(self.coords.iter().zip(&other.coords).map(|(a, b)| *a * *b).sum())
    }

    pub fn scale(&self, factor: HalfRational) -> Hyper {
        Hyper { coords: self.coords.iter().map(|c| *c * factor).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(HalfRational::is_zero)
    }
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Neg for &Hyper {
    type Output = Hyper;
    fn neg(self) -> Hyper {
        Hyper { coords: self.coords.iter().map(|c| -*c).collect() }
    }
}

/// Randomized search for `x, y` with `N(x) N(y) != N(xy)`.
///
/// Coordinates are drawn from `-3..=3`. A hit is re-checked with the
/// table-free product before it is returned. Composition algebras
/// (`dim <= 8`) never produce one.
pub fn find_norm_multiplicativity_counterexample(
    table: &BasisTable,
    seed: u64,
    budget: u64,
) -> Option<(Hyper, Hyper)> {
    let dim = table.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<i64> { (0..dim).map(|_| rng.gen_range(-3..=3)).collect() };
    for _ in 0..budget {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let prod = table.product(&x, &y);
        let n = |v: &[i64]| v.iter().map(|c| c * c).sum::<i64>();
        if n(&x) * n(&y) == n(&prod) {
            continue;
        }
        let reverified = cd_multiply(&x, &y, table.convention());
        if reverified == prod && n(&x) * n(&y) != n(&reverified) {
            return Some((
                Hyper::from_ints(&x).expect("dim checked by table"),
                Hyper::from_ints(&y).expect("dim checked by table"),
            ));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn q(v: &[i64]) -> Hyper {
        Hyper::from_ints(v).unwrap()
    }

    #[test]
    fn hamilton_anchor_at_dim_four() {
        let t = cd_basis_table(4, Convention::default()).unwrap();
        assert_eq!(t.get(1, 2), BasisProduct { target: 3, sign: 1 });
        assert_eq!(t.get(2, 3), BasisProduct { target: 1, sign: 1 });
        assert_eq!(t.get(3, 1), BasisProduct { target: 2, sign: 1 });
        assert_eq!(t.get(2, 1), BasisProduct { target: 3, sign: -1 });
    }

    #[test]
    fn complex_unit_squares_to_minus_one() {
        let t = cd_basis_table(2, Convention::Classic).unwrap();
        assert_eq!(t.get(1, 1), BasisProduct { target: 0, sign: -1 });
    }

    #[test]
    fn table_invariants_all_dims_and_conventions() {
        for conv in Convention::ALL {
            for dim in SUPPORTED_DIMS {
                let t = cd_basis_table(dim, conv).unwrap();
                for j in 0..dim {
                    assert_eq!(t.get(0, j), BasisProduct { target: j, sign: 1 });
                    assert_eq!(t.get(j, 0), BasisProduct { target: j, sign: 1 });
                }
                for i in 1..dim {
                    assert_eq!(t.get(i, i), BasisProduct { target: 0, sign: -1 });
                    for j in 1..dim {
                        if i != j {
                            let (a, b) = (t.get(i, j), t.get(j, i));
                            assert_eq!(a.target, b.target);
                            assert_eq!(a.sign, -b.sign, "{conv} dim {dim} ({i},{j})");
                        }
                    }
                }
                assert!(t.is_signed_latin_square());
            }
        }
    }

    #[test]
    fn unsupported_inputs() {
        assert_eq!(cd_basis_table(3, Convention::Classic), Err(AlgebraError::UnsupportedDim(3)));
        assert_eq!(cd_basis_table(32, Convention::Classic), Err(AlgebraError::UnsupportedDim(32)));
        assert!("sage".parse::<Convention>().is_err());
        assert!(Hyper::from_ints(&[1, 2, 3]).is_err());
    }

    #[test]
    fn quaternion_product_matches_four_squares_expansion() {
        let t = cd_basis_table(4, Convention::default()).unwrap();
        assert_eq!(t.multiply(&q(&[1, 2, 3, 4]), &q(&[5, 6, 7, 8])).unwrap(), q(&[-60, 12, 30, 24]));
    }

    #[test]
    fn multiply_dim_mismatch() {
        let t = cd_basis_table(4, Convention::default()).unwrap();
        assert_eq!(
            t.multiply(&q(&[1, 2]), &q(&[1, 2, 3, 4])),
            Err(AlgebraError::DimMismatch { left: 2, right: 4 })
        );
    }

    #[test]
    fn identity_and_conjugation() {
        let t = cd_basis_table(8, Convention::default()).unwrap();
        let a0 = q(&[8, -2, -4, 8, -4, -1, -5, -4]);
        let e0 = Hyper::basis(8, 0).unwrap();
        assert_eq!(t.multiply(&a0, &e0).unwrap(), a0);
        assert_eq!(e0.conjugate(), e0);
        assert_eq!(q(&[1, 2, 3, 4]).conjugate(), q(&[1, -2, -3, -4]));
        let mut expected = vec![0; 8];
        expected[0] = 206;
        assert_eq!(t.multiply(&a0, &a0.conjugate()).unwrap(), q(&expected));
    }

    #[test]
    fn witness_norms() {
        let t = cd_basis_table(8, Convention::default()).unwrap();
        let a0 = q(&[8, -2, -4, 8, -4, -1, -5, -4]);
        let p0 = Hyper::from_halves(&[5, 7, -1, -3, -7, 1, 7, 1]).unwrap();
        assert_eq!(a0.norm(), HalfRational::from(206));
        assert_eq!(p0.norm(), HalfRational::from(46));
        assert_eq!(Hyper::basis(8, 0).unwrap().norm(), HalfRational::ONE);
        assert_eq!(t.multiply(&a0, &p0).unwrap().norm(), HalfRational::from(9476));
    }

    #[test]
    fn octonions_have_no_counterexample() {
        let t = cd_basis_table(8, Convention::default()).unwrap();
        assert_eq!(find_norm_multiplicativity_counterexample(&t, 7, 1000), None);
    }

    #[test]
    fn sedenion_counterexample_is_found_and_genuine() {
        let t = cd_basis_table(16, Convention::default()).unwrap();
        let (x, y) = find_norm_multiplicativity_counterexample(&t, 1, 100_000).expect("sedenions are not a composition algebra");
        assert_ne!(x.norm() * y.norm(), t.multiply(&x, &y).unwrap().norm());
    }

    #[test]
    fn identity_is_never_a_counterexample() {
        let t = cd_basis_table(16, Convention::default()).unwrap();
        let e0 = Hyper::basis(16, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let y = q(&(0..16).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>());
            assert_eq!(t.multiply(&e0, &y).unwrap().norm(), y.norm());
        }
    }

    #[test]
    fn alternativity_fails_for_sedenions() {
        let t = cd_basis_table(16, Convention::default()).unwrap();
        let mut found = None;
        'outer: for i in 1..16 {
            for j in (i + 1)..16 {
                for k in 1..16 {
                    for l in (k + 1)..16 {
                        let mut xv = vec![0i64; 16];
                        xv[i] = 1;
                        xv[j] = 1;
                        let mut yv = vec![0i64; 16];
                        yv[k] = 1;
                        yv[l] = 1;
                        let lhs = t.product(&xv, &t.product(&xv, &yv));
                        let rhs = t.product(&t.product(&xv, &xv), &yv);
                        if lhs != rhs {
                            found = Some((i, j, k, l));
                            break 'outer;
                        }
                    }
                }
            }
        }
        assert!(found.is_some(), "no alternativity counterexample among basis sums");
    }

    fn small_vec(dim: usize) -> impl Strategy<Value = Vec<HalfRational>> {
        prop::collection::vec((-9i128..=9, 0u32..=1).prop_map(|(n, k)| HalfRational::new(n, k).unwrap()), dim)
    }

    fn dim_and_pair() -> impl Strategy<Value = (usize, Vec<HalfRational>, Vec<HalfRational>, Vec<HalfRational>)> {
        prop::sample::select(vec![1usize, 2, 4, 8, 16])
            .prop_flat_map(|d| (Just(d), small_vec(d), small_vec(d), small_vec(d)))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative_up_to_octonions(d in prop::sample::select(vec![1usize, 2, 4, 8]), seed in any::<u64>(), conv in prop::sample::select(Convention::ALL.to_vec())) {
            let t = cd_basis_table(d, conv).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = || Hyper::new((0..d).map(|_| HalfRational::new(rng.gen_range(-20..=20), rng.gen_range(0..=1)).unwrap()).collect()).unwrap();
            let (x, y) = (draw(), draw());
            prop_assert_eq!(t.multiply(&x, &y).unwrap().norm(), x.norm() * y.norm());
        }

        #[test]
        fn table_product_agrees_with_recursive_doubling((d, x, y, _z) in dim_and_pair(), conv in prop::sample::select(Convention::ALL.to_vec())) {
            let t = cd_basis_table(d, conv).unwrap();
            prop_assert_eq!(t.product(&x, &y), cd_multiply(&x, &y, conv));
        }

        #[test]
        fn conjugation_is_an_anti_automorphism((d, x, y, _z) in dim_and_pair(), conv in prop::sample::select(Convention::ALL.to_vec())) {
            let t = cd_basis_table(d, conv).unwrap();
            let (x, y) = (Hyper::new(x).unwrap(), Hyper::new(y).unwrap());
            let lhs = t.multiply(&x, &y).unwrap().conjugate();
            let rhs = t.multiply(&y.conjugate(), &x.conjugate()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(x.conjugate().conjugate(), x);
        }

        #[test]
        fn x_times_conjugate_is_real_norm((d, x, _y, _z) in dim_and_pair()) {
            prop_assume!(d <= 8);
            let t = cd_basis_table(d, Convention::Classic).unwrap();
            let x = Hyper::new(x).unwrap();
            let mut expected = vec![HalfRational::ZERO; d];
            expected[0] = x.norm();
            let prod = t.multiply(&x, &x.conjugate()).unwrap();
            prop_assert_eq!(prod.coords(), &expected[..]);
        }

        #[test]
        fn left_alternative_up_to_octonions((d, x, y, _z) in dim_and_pair()) {
            prop_assume!(d <= 8);
            let t = cd_basis_table(d, Convention::Classic).unwrap();
            prop_assert_eq!(t.product(&x, &t.product(&x, &y)), t.product(&t.product(&x, &x), &y));
        }

        #[test]
        fn unit_left_multiplication_preserves_dot_products(
            d in prop::sample::select(vec![4usize, 8]),
            signs in prop::collection::vec(prop::bool::ANY, 4),
            offset in 0usize..5,
            y in small_vec(8),
            z in small_vec(8),
        ) {
            // unit element with four coordinates of +-1/2
            let t = cd_basis_table(d, Convention::Classic).unwrap();
            let mut u = vec![HalfRational::ZERO; d];
            for (k, s) in signs.iter().enumerate() {
                let idx = (offset + k) % d;
                u[idx] = if *s { HalfRational::HALF } else { -HalfRational::HALF };
            }
            let u = Hyper::new(u).unwrap();
            prop_assert_eq!(u.norm(), HalfRational::ONE);
            let y = Hyper::new(y[..d].to_vec()).unwrap();
            let z = Hyper::new(z[..d].to_vec()).unwrap();
            let uy = t.multiply(&u, &y).unwrap();
            let uz = t.multiply(&u, &z).unwrap();
            prop_assert_eq!(uy.dot(&uz).unwrap(), y.dot(&z).unwrap());
        }
    }
}
