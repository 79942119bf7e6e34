//! Euler's 4x4 parametrised magic square of squares.
//!
//! The table is transcribed from its printed form and parsed at runtime.
//! [`euler4_match_quaternion`] reconciles it with the quaternionic matrix
//! `A (e_i P)` so a transcription error cannot hide on both sides.

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BasisTable, Convention, Hyper};
use crate::magic::{build_symbolic, Layout, Provenance, SquareMatrix, SymbolicMatrix, TermPattern};
use crate::scalar::HalfRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("side condition pr + qs = 0 violated (pr + qs = {0})")]
    ProductCondition(HalfRational),
    #[error("Euler's table is defined for quaternions; got a dim {0} table")]
    NotQuaternion(usize),
    #[error("no row/column signed permutation with variable sign changes maps A(e_i P) onto Euler's table under the {0} convention")]
    NoMatch(Convention),
}

/// Cells in the printed notation: `a,b,c,d` from `A`, `p,q,r,s` from `P`.
pub const EULER_TABLE: [[&str; 4]; 4] = [
    ["+ap+bq+cr+ds", "+ar-bs-cp+dq", "-as-br+cq+dp", "+aq-bp+cs-dr"],
    ["-aq+bp+cs-dr", "+as+br+cq+dp", "+ar-bs+cp-dq", "+ap+bq-cr-ds"],
    ["+ar+bs-cp-dq", "-ap+bq-cr+ds", "+aq+bp+cs+dr", "+as-br-cq+dp"],
    ["-as+br-cq+dp", "-aq-bp+cs+dr", "-ap+bq+cr-ds", "+ar+bs+cp+dq"],
];

/// Euler's printed numeric example, constant 8515.
pub const EULER_EXAMPLE: [[i64; 4]; 4] = [
    [68, -29, 41, -37],
    [-17, 31, 79, 32],
    [59, 28, -23, 61],
    [-11, -77, 8, 49],
];

fn parse_cell(cell: &str) -> TermPattern {
    let bytes = cell.as_bytes();
    assert_eq!(bytes.len(), 12, "malformed cell {cell}");
    let mut terms = vec![(usize::MAX, 0i8); 4];
    for chunk in bytes.chunks(3) {
        let sign = if chunk[0] == b'+' { 1 } else { -1 };
        let k = b"abcd".iter().position(|&c| c == chunk[1]).expect("a-variable");
        let j = b"pqrs".iter().position(|&c| c == chunk[2]).expect("p-variable");
        terms[j] = (k, sign);
    }
    TermPattern::new(terms)
}

/// Euler's table as symbolic patterns.
pub fn euler_symbolic() -> &'static SymbolicMatrix {
    static TABLE: OnceLock<SymbolicMatrix> = OnceLock::new();
    TABLE.get_or_init(|| {
        SymbolicMatrix::new(EULER_TABLE.iter().map(|row| row.iter().map(|c| parse_cell(c)).collect()).collect())
    })
}

pub fn euler_example() -> SquareMatrix {
    SquareMatrix::from_ints(&EULER_EXAMPLE).expect("4x4")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerParams {
    pub abcd: [HalfRational; 4],
    pub pqrs: [HalfRational; 4],
}

impl EulerParams {
    pub fn from_ints(abcd: [i64; 4], pqrs: [i64; 4]) -> Self {
        Self { abcd: abcd.map(HalfRational::from), pqrs: pqrs.map(HalfRational::from) }
    }

    /// Takes the first four coordinates of each; callers check dimensions.
    pub fn from_hypers(a: &Hyper, p: &Hyper) -> Self {
        let four = |h: &Hyper| [h.coords()[0], h.coords()[1], h.coords()[2], h.coords()[3]];
        Self { abcd: four(a), pqrs: four(p) }
    }

    pub fn a(&self) -> Hyper {
        Hyper::new(self.abcd.to_vec()).expect("dim 4")
    }

    pub fn p(&self) -> Hyper {
        Hyper::new(self.pqrs.to_vec()).expect("dim 4")
    }

    pub fn constant(&self) -> HalfRational {
        self.a().norm() * self.p().norm()
    }
}

/// Evaluates Euler's table.
pub fn euler4_build(params: &EulerParams) -> SquareMatrix {
    let (a, p) = (params.a(), params.p());
    let mut m = euler_symbolic().eval(&a, &p).expect("dim 4");
    m.provenance = Some(Provenance { a, p, convention: Convention::default(), layout: Layout::Euler4 });
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerConditions {
    /// `pr + qs = 0`.
    pub product_condition: bool,
    /// `a [b(pq+rs) + d(ps+qr)] + c [d(pq+rs) + b(ps+qr)] = 0`.
    pub ratio_condition: bool,
    /// Both brackets vanish, so the ratio condition holds for every `a, c`.
    pub degenerate: bool,
}

impl EulerConditions {
    pub fn both(&self) -> bool {
        self.product_condition && self.ratio_condition
    }
}

struct Brackets {
    /// `b(pq+rs) + d(ps+qr)`
    a_coeff: HalfRational,
    /// `d(pq+rs) + b(ps+qr)`
    c_coeff: HalfRational,
}

fn brackets(pqrs: &[HalfRational; 4], b: HalfRational, d: HalfRational) -> Brackets {
    let [p, q, r, s] = *pqrs;
    let u = p * q + r * s;
    let v = p * s + q * r;
    Brackets { a_coeff: b * u + d * v, c_coeff: d * u + b * v }
}

pub fn euler4_conditions(params: &EulerParams) -> EulerConditions {
    let [a, b, c, d] = params.abcd;
    let [p, q, r, s] = params.pqrs;
    let br = brackets(&params.pqrs, b, d);
    EulerConditions {
        product_condition: (p * r + q * s).is_zero(),
        ratio_condition: (a * br.a_coeff + c * br.c_coeff).is_zero(),
        degenerate: br.a_coeff.is_zero() && br.c_coeff.is_zero(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerSolution {
    /// `a / c` in lowest terms, `c > 0` (or `c = 0, a = 1`).
    Ratio { a: i128, c: i128 },
    /// Numerator and denominator both vanish: any `a, c` work.
    Degenerate,
}

/// Solves `a / c = (-d(pq+rs) - b(ps+qr)) / (b(pq+rs) + d(ps+qr))`.
pub fn euler4_solve(
    pqrs: [HalfRational; 4],
    b: HalfRational,
    d: HalfRational,
) -> Result<EulerSolution, EulerError> {
    let [p, q, r, s] = pqrs;
    let pr_qs = p * r + q * s;
    if !pr_qs.is_zero() {
        return Err(EulerError::ProductCondition(pr_qs));
    }
    let br = brackets(&pqrs, b, d);
    let (num, den) = (-br.c_coeff, br.a_coeff);
    if num.is_zero() && den.is_zero() {
        return Ok(EulerSolution::Degenerate);
    }
    // clear the common power-of-two denominator
    let k = num.log2_denominator().max(den.log2_denominator());
    let lift = |x: HalfRational| (x * HalfRational::from_int(1i128 << k)).to_integer().expect("cleared denominator");
    let (mut a, mut c) = (lift(num), lift(den));
    let g = num_integer::gcd(a, c);
    a /= g;
    c /= g;
    if c < 0 || (c == 0 && a < 0) {
        a = -a;
        c = -c;
    }
    Ok(EulerSolution::Ratio { a, c })
}

/// Draws a non-degenerate solution of both side conditions with free
/// parameters in `lo..=hi`.
pub fn sample_solution<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> EulerParams {
    loop {
        let mut draw = || rng.gen_range(lo..=hi) as i128;
        let (p, q, t, b, d) = (draw(), draw(), draw(), draw(), draw());
        let g = num_integer::gcd(p, q);
        if g == 0 || t == 0 {
            continue;
        }
        // (r, s) orthogonal to (p, q)
        let (r, s) = (t * q / g, -t * p / g);
        let pqrs = [p, q, r, s].map(HalfRational::from_int);
        let (b, d) = (HalfRational::from_int(b), HalfRational::from_int(d));
        if let Ok(EulerSolution::Ratio { a, c }) = euler4_solve(pqrs, b, d) {
            return EulerParams { abcd: [HalfRational::from_int(a), b, HalfRational::from_int(c), d], pqrs };
        }
    }
}

/// `E[r][c](a, p) = row_signs[r] col_signs[c] Q[row_perm[r]][col_perm[c]](a_signs * a, p_signs * p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerMatch {
    pub row_perm: [usize; 4],
    pub row_signs: [i8; 4],
    pub col_perm: [usize; 4],
    pub col_signs: [i8; 4],
    pub a_signs: [i8; 4],
    pub p_signs: [i8; 4],
}

impl EulerMatch {
    pub fn identity() -> Self {
        Self {
            row_perm: [0, 1, 2, 3],
            row_signs: [1; 4],
            col_perm: [0, 1, 2, 3],
            col_signs: [1; 4],
            a_signs: [1; 4],
            p_signs: [1; 4],
        }
    }

    pub fn apply(&self, q: &SymbolicMatrix) -> SymbolicMatrix {
        let flipped = flip_variables(q, &self.a_signs, &self.p_signs);
        SymbolicMatrix::new(
            (0..4)
                .map(|r| {
                    (0..4)
                        .map(|c| {
                            let t = flipped.get(self.row_perm[r], self.col_perm[c]);
                            if self.row_signs[r] * self.col_signs[c] > 0 { t.clone() } else { t.negated() }
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

impl fmt::Display for EulerMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs = |s: &[i8; 4]| s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect::<String>();
        write!(
            f,
            "rows {:?} signs {}, columns {:?} signs {}, variable signs a:{} p:{}",
            self.row_perm,
            signs(&self.row_signs),
            self.col_perm,
            signs(&self.col_signs),
            signs(&self.a_signs),
            signs(&self.p_signs)
        )
    }
}

fn flip_variables(q: &SymbolicMatrix, a_signs: &[i8; 4], p_signs: &[i8; 4]) -> SymbolicMatrix {
    SymbolicMatrix::new(
        q.rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| {
                        TermPattern::new(
                            t.terms().iter().enumerate().map(|(j, &(k, s))| (k, s * a_signs[k] * p_signs[j])).collect(),
                        )
                    })
                    .collect()
            })
            .collect(),
    )
}

fn sign_vector(bits: u32) -> [i8; 4] {
    std::array::from_fn(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
}

/// Finds a transformation taking the quaternionic `A (e_i P)` patterns onto
/// Euler's table: row and column permutations with signs, plus sign changes
/// of individual variables. Fewest variable flips win; ties go to the first
/// permutation pair in lexicographic order.
pub fn euler4_match_quaternion(table: &BasisTable) -> Result<EulerMatch, EulerError> {
    if table.dim() != 4 {
        return Err(EulerError::NotQuaternion(table.dim()));
    }
    let q = build_symbolic(table);
    let target = euler_symbolic();
    let skeleton = |t: &TermPattern| t.terms().iter().map(|&(k, _)| k).collect::<Vec<_>>();

    let perms = permutations4();
    let aligned: Vec<([usize; 4], [usize; 4])> = perms
        .iter()
        .flat_map(|rp| perms.iter().map(move |cp| (*rp, *cp)))
        .filter(|(rp, cp)| {
            (0..4).all(|r| (0..4).all(|c| skeleton(q.get(rp[r], cp[c])) == skeleton(target.get(r, c))))
        })
        .collect();

    let mut var_flips: Vec<u32> = (0..256).collect();
    var_flips.sort_by_key(|bits| bits.count_ones());
    for bits in var_flips {
        let (a_signs, p_signs) = (sign_vector(bits & 0xf), sign_vector(bits >> 4));
        let flipped = flip_variables(&q, &a_signs, &p_signs);
        for &(row_perm, col_perm) in &aligned {
            let relation = |r: usize, c: usize| -> Option<i8> {
                let t = flipped.get(row_perm[r], col_perm[c]);
                let e = target.get(r, c);
                if t == e {
                    Some(1)
                } else if &t.negated() == e {
                    Some(-1)
                } else {
                    None
                }
            };
            let Some(col_signs) = (0..4).map(|c| relation(0, c)).collect::<Option<Vec<_>>>() else { continue };
            let Some(row_signs) = (0..4).map(|r| relation(r, 0).map(|s| s * col_signs[0])).collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let consistent = (0..4).all(|r| (0..4).all(|c| relation(r, c) == Some(row_signs[r] * col_signs[c])));
            if consistent {
                return Ok(EulerMatch {
                    row_perm,
                    row_signs: row_signs.try_into().expect("4"),
                    col_perm,
                    col_signs: col_signs.try_into().expect("4"),
                    a_signs,
                    p_signs,
                });
            }
        }
    }
    Err(EulerError::NoMatch(table.convention()))
}

/// All 24 permutations of `0..4` in lexicographic order.
fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cd_basis_table;
    use crate::magic::{classify, diagonal_sums, gram_report, prove_patterns, SquareKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h(v: i64) -> HalfRational {
        HalfRational::from(v)
    }

    #[test]
    fn transcription_is_well_formed() {
        let sym = euler_symbolic();
        assert!(sym.rows().iter().flatten().all(TermPattern::is_bijection));
        assert_eq!(sym.distinct_count(), 16);
    }

    #[test]
    fn table_is_symbolically_semimagic() {
        let report = prove_patterns(euler_symbolic(), None).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn only_ap_terms_survive() {
        let m = euler4_build(&EulerParams::from_ints([1, 0, 0, 0], [1, 0, 0, 0]));
        let expected = SquareMatrix::from_ints(&[[1, 0, 0, 0], [0, 0, 0, 1], [0, -1, 0, 0], [0, 0, -1, 0]]).unwrap();
        assert!(m.same_entries(&expected));
    }

    #[test]
    fn small_solution_is_fully_magic() {
        let params = EulerParams::from_ints([1, 1, 1, -1], [2, 1, 1, -2]);
        let cond = euler4_conditions(&params);
        assert!(cond.product_condition && cond.ratio_condition && !cond.degenerate);
        let m = euler4_build(&params);
        let c = classify(&m);
        assert_eq!(c.kind, SquareKind::FullyMagic);
        assert_eq!(c.constant, h(40));
        assert_eq!(diagonal_sums(&m), (h(40), h(40)));
    }

    #[test]
    fn degenerate_conditions() {
        let cond = euler4_conditions(&EulerParams::from_ints([3, 5, 7, 2], [1, 1, 1, -1]));
        assert!(cond.product_condition && cond.ratio_condition && cond.degenerate);
        assert_eq!(euler4_solve([1, 1, 1, -1].map(h), h(4), h(-3)), Ok(EulerSolution::Degenerate));
    }

    #[test]
    fn solve_cases() {
        assert_eq!(euler4_solve([2, 1, 1, -2].map(h), h(1), h(-1)), Ok(EulerSolution::Ratio { a: 1, c: 1 }));
        assert!(matches!(euler4_solve([1, 2, 3, 4].map(h), h(1), h(1)), Err(EulerError::ProductCondition(_))));
    }

    #[test]
    fn solve_with_half_integers() {
        let pqrs = [HalfRational::halves(2), HalfRational::halves(1), HalfRational::halves(1), HalfRational::halves(-2)];
        let sol = euler4_solve(pqrs, HalfRational::halves(3), h(1)).unwrap();
        let EulerSolution::Ratio { a, c } = sol else { panic!("degenerate") };
        let params = EulerParams { abcd: [h(a as i64), HalfRational::halves(3), h(c as i64), h(1)], pqrs };
        assert!(euler4_conditions(&params).both());
    }

    #[test]
    fn printed_example_is_fully_magic() {
        let c = classify(&euler_example());
        assert_eq!(c.kind, SquareKind::FullyMagic);
        assert_eq!(c.constant, h(8515));
        assert!(c.entries_distinct);
        assert_eq!(diagonal_sums(&euler_example()), (h(8515), h(8515)));
    }

    #[test]
    fn solutions_force_both_diagonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let params = sample_solution(&mut rng, -9, 9);
            let m = euler4_build(&params);
            let (main, anti) = diagonal_sums(&m);
            assert_eq!(main, params.constant());
            assert_eq!(anti, params.constant());
            assert_eq!(gram_report(&m).constant, params.constant());
        }
    }

    #[test]
    fn quaternion_reconciliation() {
        let t = cd_basis_table(4, Convention::Classic).unwrap();
        let m = euler4_match_quaternion(&t).unwrap();
        assert_eq!(&m.apply(&build_symbolic(&t)), euler_symbolic());
        assert_ne!(&EulerMatch::identity().apply(&build_symbolic(&t)), euler_symbolic());
        assert_ne!(&build_symbolic(&t), euler_symbolic());
    }

    #[test]
    fn reconciliation_rejects_octonions() {
        let t = cd_basis_table(8, Convention::Classic).unwrap();
        assert_eq!(euler4_match_quaternion(&t), Err(EulerError::NotQuaternion(8)));
    }

    #[test]
    fn params_json_shape() {
        let params = EulerParams::from_ints([1, 1, 1, -1], [2, 1, 1, -2]);
        let json = serde_json::to_string(&params).unwrap();
        assert_eq!(json, r#"{"abcd":["1","1","1","-1"],"pqrs":["2","1","1","-2"]}"#);
        let back: EulerParams = serde_json::from_str(r#"{"abcd":[1,1,1,-1],"pqrs":["2","1","1","-2"]}"#).unwrap();
        assert_eq!(back, params);
    }
}
