//! Sparse multivariate polynomials with integer coefficients.
//!
//! Just enough algebra to expand the symbolic matrix and its Gram products:
//! add, negate, multiply, compare and evaluate. Variables live in one fixed
//! namespace of 32 indices; `0..16` hold the coordinates of `A`, `16..32`
//! those of `P`. Printed names follow the usual letters, `a..h` and `p..w`,
//! with `a8..a15` / `p8..p15` for the upper sedenion coordinates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::algebra::Ring;
use crate::scalar::HalfRational;

pub const VAR_COUNT: usize = 32;
pub const MAX_DEGREE: u32 = 8;
/// First index of the `P` block.
pub const P_OFFSET: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("total degree {0} exceeds the bound {MAX_DEGREE}")]
    DegreeBound(u32),
    #[error("coefficient overflow")]
    Overflow,
    #[error("variable index {0} outside 0..{VAR_COUNT}")]
    VariableOutOfRange(usize),
}

pub fn a_var(i: usize) -> usize {
    assert!(i < P_OFFSET);
    i
}

pub fn p_var(j: usize) -> usize {
    assert!(j < P_OFFSET);
    P_OFFSET + j
}

pub fn var_name(v: usize) -> String {
    const A_NAMES: &[u8] = b"abcdefgh";
    const P_NAMES: &[u8] = b"pqrstuvw";
    match v {
        0..=7 => (A_NAMES[v] as char).to_string(),
        8..=15 => format!("a{v}"),
        16..=23 => (P_NAMES[v - 16] as char).to_string(),
        _ => format!("p{}", v - 16),
    }
}

/// Product of variable powers, stored sorted by variable index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    powers: Vec<(u8, u8)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: usize) -> Result<Self, PolyError> {
        if v >= VAR_COUNT {
            return Err(PolyError::VariableOutOfRange(v));
        }
        Ok(Self { powers: vec![(v as u8, 1)] })
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn powers(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.powers.iter().map(|&(v, e)| (v as usize, e as u32))
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.powers
            .iter()
            .find(|&&(w, _)| w as usize == v)
            .map_or(0, |&(_, e)| e as u32)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        let degree = self.degree() + other.degree();
        if degree > MAX_DEGREE {
            return Err(PolyError::DegreeBound(degree));
        }
        let mut powers = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (a, b) = (self.powers[i], other.powers[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    powers.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    powers.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    powers.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        powers.extend_from_slice(&self.powers[i..]);
        powers.extend_from_slice(&other.powers[j..]);
        Ok(Self { powers })
    }

    pub fn eval(&self, point: &[HalfRational]) -> HalfRational {
        self.powers().fold(HalfRational::ONE, |acc, (v, e)| {
            (0..e).fold(acc, |acc, _| acc * point[v])
        })
    }
}

/// Graded lexicographic: total degree first, then the exponent of the lowest
/// variable index where the two differ.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.powers.get(i), other.powers.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => {
                        if va != vb {
                            // the side holding the smaller variable is larger
                            return vb.cmp(&va);
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return f.write_str("1");
        }
        // single-letter names concatenate; indexed names need a separator
        let sep = if self.powers().any(|(v, _)| var_name(v).len() > 1) { "*" } else { "" };
        for (i, (v, e)) in self.powers().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            f.write_str(&var_name(v))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in canonical form: no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, i128>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i128) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(v: usize) -> Self {
        Self::monomial(Monomial::var(v).expect("variable index in range"), 1)
    }

    pub fn monomial(m: Monomial, c: i128) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i128)> {
        self.terms.iter().rev().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &Monomial) -> i128 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn accumulate(&mut self, m: Monomial, c: i128) -> Result<(), PolyError> {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                if c != 0 {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().checked_add(c).ok_or(PolyError::Overflow)?;
                if sum == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn checked_neg(&self) -> Result<Self, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| c.checked_neg().map(|c| (m.clone(), c)).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { terms })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.checked_mul(*cb).ok_or(PolyError::Overflow)?;
                out.accumulate(ma.checked_mul(mb)?, c)?;
            }
        }
        Ok(out)
    }

    /// Evaluates at `point`, which must cover every variable that occurs.
    pub fn eval(&self, point: &[HalfRational]) -> HalfRational {
        self.terms
            .iter()
            .map(|(m, c)| HalfRational::from_int(*c) * m.eval(point))
            .sum()
    }
}

pub fn poly_add(p: &Poly, q: &Poly) -> Result<Poly, PolyError> {
    p.checked_add(q)
}

pub fn poly_mul(p: &Poly, q: &Poly) -> Result<Poly, PolyError> {
    p.checked_mul(q)
}

pub fn poly_eq(p: &Poly, q: &Poly) -> bool {
    p == q
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        self.checked_add(&rhs).expect("polynomial coefficient overflow")
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.checked_neg().expect("polynomial coefficient overflow")
    }
}

/// Panics if the degree bound or coefficient range is exceeded; use
/// [`Poly::checked_mul`] to handle that as an error.
impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self.checked_mul(&rhs).expect("polynomial product out of bounds")
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (k, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != 1 {
                    write!(f, "{mag}")?;
                }
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}
