//! Squares of squares from double multiplication.
//!
//! Row `i` of the matrix built from `A` and `P` holds the coordinates of
//! `A (e_i P)`. In a composition algebra (dimension up to 8) the rows are
//! pairwise orthogonal with common squared length `N(A) N(P)`; this module
//! builds the matrix numerically and symbolically, checks those properties
//! exactly, and proves them as polynomial identities.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, BasisTable, Convention, Hyper};
use crate::euler::{self, EulerParams};
use crate::polynomial::{a_var, p_var, Poly, PolyError};
use crate::scalar::HalfRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagicError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("declared dim {declared} does not match {actual} rows")]
    DeclaredDim { declared: usize, actual: usize },
    #[error("{layout} layout requires dimension {required}, got {actual}")]
    LayoutDim { layout: Layout, required: usize, actual: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
}

/// How rows and columns of the built matrix are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Row `i` = coordinates of `A (e_i P)` in natural order.
    #[default]
    Natural,
    /// Euler's printed 4x4 parametrisation in `(a,b,c,d)`, `(p,q,r,s)`.
    Euler4,
}

impl Layout {
    fn is_natural(&self) -> bool {
        *self == Layout::Natural
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Natural => "natural",
            Layout::Euler4 => "euler4",
        })
    }
}

/// The parameters a matrix was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub a: Hyper,
    pub p: Hyper,
    pub convention: Convention,
    pub layout: Layout,
}

impl Provenance {
    /// Rebuilds the matrix these parameters describe.
    pub fn rebuild(&self) -> Result<SquareMatrix, MagicError> {
        match self.layout {
            Layout::Natural => {
                let table = BasisTable::new(self.a.dim(), self.convention)?;
                build_matrix(&self.a, &self.p, &table)
            }
            Layout::Euler4 => {
                for h in [&self.a, &self.p] {
                    if h.dim() != 4 {
                        return Err(MagicError::LayoutDim { layout: Layout::Euler4, required: 4, actual: h.dim() });
                    }
                }
                let params = EulerParams::from_hypers(&self.a, &self.p);
                let mut m = euler::euler4_build(&params);
                m.provenance = Some(self.clone());
                Ok(m)
            }
        }
    }

    /// `N(A) N(P)`.
    pub fn expected_constant(&self) -> HalfRational {
        self.a.norm() * self.p.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    entries: Vec<Vec<HalfRational>>,
    pub provenance: Option<Provenance>,
}

impl SquareMatrix {
    pub fn new(entries: Vec<Vec<HalfRational>>) -> Result<Self, MagicError> {
        let dim = entries.len();
        if let Some((row, r)) = entries.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(MagicError::NotSquare { row, len: r.len(), dim });
        }
        Ok(Self { entries, provenance: None })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MagicError> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| HalfRational::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { HalfRational::ONE } else { HalfRational::ZERO }).collect())
            .collect();
        Self { entries, provenance: None }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<HalfRational>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> HalfRational {
        self.entries[i][j]
    }

    pub fn values(&self) -> impl Iterator<Item = HalfRational> + '_ {
        self.entries.iter().flatten().copied()
    }

    /// Rows reordered so that new row `k` is old row `perm[k]`. Drops provenance.
    pub fn permute_rows(&self, perm: &[usize]) -> SquareMatrix {
        SquareMatrix { entries: perm.iter().map(|&i| self.entries[i].clone()).collect(), provenance: None }
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.dim();
        SquareMatrix {
            entries: (0..n).map(|j| (0..n).map(|i| self.entries[i][j]).collect()).collect(),
            provenance: None,
        }
    }

    pub fn scale(&self, factor: HalfRational) -> SquareMatrix {
        SquareMatrix {
            entries: self.entries.iter().map(|r| r.iter().map(|v| *v * factor).collect()).collect(),
            provenance: None,
        }
    }

    /// Same entries, ignoring provenance.
    pub fn same_entries(&self, other: &SquareMatrix) -> bool {
        self.entries == other.entries
    }

    /// `M M^T`.
    pub fn gram(&self) -> Vec<Vec<HalfRational>> {
        let n = self.dim();
        let row = |i: usize, k: usize| self.entries[i].iter().zip(&self.entries[k]).map(|(x, y)| *x * *y).sum();
        (0..n).map(|i| (0..n).map(|k| row(i, k)).collect()).collect()
    }

    /// `M^T M`.
    pub fn cogram(&self) -> Vec<Vec<HalfRational>> {
        self.transpose().gram()
    }

    pub fn to_document(&self) -> MatrixDocument {
        let prov = self.provenance.as_ref();
        MatrixDocument {
            dim: self.dim(),
            a: prov.map(|p| p.a.clone()),
            p: prov.map(|p| p.p.clone()),
            convention: prov.map(|p| p.convention),
            layout: prov.map(|p| p.layout).unwrap_or_default(),
            entries: self.entries.clone(),
            constant: gram_report(self).constant,
        }
    }
}

/// Fixed-width grid with explicit minus signs.
impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.entries.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "| {} |", line.join(" | "))?;
        }
        Ok(())
    }
}

/// Row `i` is the coordinate vector of `A (e_i P)`.
pub fn build_matrix(a: &Hyper, p: &Hyper, table: &BasisTable) -> Result<SquareMatrix, MagicError> {
    let dim = table.dim();
    if a.dim() != dim || p.dim() != dim {
        return Err(AlgebraError::DimMismatch { left: a.dim().max(p.dim()), right: dim }.into());
    }
    let entries = (0..dim)
        .map(|i| {
            let ei_p = table.left_basis_product(i, p.coords());
            table.product(a.coords(), &ei_p)
        })
        .collect();
    Ok(SquareMatrix {
        entries,
        provenance: Some(Provenance {
            a: a.clone(),
            p: p.clone(),
            convention: table.convention(),
            layout: Layout::Natural,
        }),
    })
}

/// Symbolic matrix entry `sum_j sign_j * a_{k_j} * p_j`; `terms[j] = (k_j, sign_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermPattern {
    terms: Vec<(usize, i8)>,
}

impl TermPattern {
    pub fn new(terms: Vec<(usize, i8)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(usize, i8)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(a_index, sign)` paired with `p_index`.
    pub fn a_index(&self, p_index: usize) -> usize {
        self.terms[p_index].0
    }

    pub fn sign(&self, p_index: usize) -> i8 {
        self.terms[p_index].1
    }

    /// Each `a` coordinate is used exactly once.
    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.terms.len()];
        for &(k, s) in &self.terms {
            if k >= seen.len() || seen[k] || s.abs() != 1 {
                return false;
            }
            seen[k] = true;
        }
        true
    }

    pub fn negated(&self) -> TermPattern {
        TermPattern { terms: self.terms.iter().map(|&(k, s)| (k, -s)).collect() }
    }

    pub fn eval(&self, a: &[HalfRational], p: &[HalfRational]) -> HalfRational {
        self.terms
            .iter()
            .enumerate()
            .map(|(j, &(k, s))| {
                let t = a[k] * p[j];
                if s > 0 { t } else { -t }
            })
            .sum()
    }

    pub fn to_poly(&self) -> Poly {
        self.terms.iter().enumerate().fold(Poly::zero(), |acc, (j, &(k, s))| {
            let term = Poly::var(a_var(k)) * Poly::var(p_var(j));
            if s > 0 { acc + term } else { acc - term }
        })
    }
}

impl fmt::Display for TermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, &(k, s)) in self.terms.iter().enumerate() {
            let v = |x| crate::polynomial::var_name(x);
            write!(f, "{}{}{}", if s > 0 { '+' } else { '-' }, v(a_var(k)), v(p_var(j)))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    patterns: Vec<Vec<TermPattern>>,
}

impl SymbolicMatrix {
    pub fn new(patterns: Vec<Vec<TermPattern>>) -> Self {
        Self { patterns }
    }

    pub fn dim(&self) -> usize {
        self.patterns.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &TermPattern {
        &self.patterns[i][j]
    }

    pub fn rows(&self) -> &[Vec<TermPattern>] {
        &self.patterns
    }

    pub fn eval(&self, a: &Hyper, p: &Hyper) -> Result<SquareMatrix, MagicError> {
        let n = self.dim();
        if a.dim() != n || p.dim() != n {
            return Err(MagicError::DimMismatch(a.dim().max(p.dim()), n));
        }
        SquareMatrix::new(
            self.patterns
                .iter()
                .map(|r| r.iter().map(|t| t.eval(a.coords(), p.coords())).collect())
                .collect(),
        )
    }

    pub fn to_polys(&self) -> Vec<Vec<Poly>> {
        self.patterns.iter().map(|r| r.iter().map(TermPattern::to_poly).collect()).collect()
    }

    /// Number of pairwise-distinct entry patterns.
    pub fn distinct_count(&self) -> usize {
        self.patterns.iter().flatten().collect::<HashSet<_>>().len()
    }
}

/// Symbolic form of [`build_matrix`], read off the structure constants.
///
/// `A (e_i P) = sum_{k,j} s(i,j) s(k,t(i,j)) a_k p_j e_{t(k,t(i,j))}`, so the
/// entry in column `m` collects, for every `j`, the unique `k` with
/// `t(k, t(i,j)) = m`.
pub fn build_symbolic(table: &BasisTable) -> SymbolicMatrix {
    let n = table.dim();
    // inverse lookup: for column u and target m, the k with t(k,u) = m
    let mut left_solver = vec![vec![(0usize, 0i8); n]; n];
    for k in 0..n {
        for u in 0..n {
            let bp = table.get(k, u);
            left_solver[u][bp.target] = (k, bp.sign);
        }
    }
    let patterns = (0..n)
        .map(|i| {
            (0..n)
                .map(|m| {
                    let terms = (0..n)
                        .map(|j| {
                            let inner = table.get(i, j);
                            let (k, outer_sign) = left_solver[inner.target][m];
                            (k, inner.sign * outer_sign)
                        })
                        .collect();
                    TermPattern { terms }
                })
                .collect()
        })
        .collect();
    SymbolicMatrix { patterns }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramReport {
    /// `(M M^T)[0][0]`.
    pub constant: HalfRational,
    pub off_diagonal_max_abs: HalfRational,
    pub is_orthogonal: bool,
    pub row_sums_of_squares: Vec<HalfRational>,
    pub column_sums_of_squares: Vec<HalfRational>,
}

/// Exact `M M^T` and `M^T M`; orthogonal when both equal `c I`.
pub fn gram_report(m: &SquareMatrix) -> GramReport {
    let gram = m.gram();
    let cogram = m.cogram();
    let n = m.dim();
    let constant = if n == 0 { HalfRational::ZERO } else { gram[0][0] };
    let mut off_max = HalfRational::ZERO;
    let mut orthogonal = true;
    for g in [&gram, &cogram] {
        for i in 0..n {
            for k in 0..n {
                let v = g[i][k];
                if i == k {
                    orthogonal &= v == constant;
                } else {
                    off_max = off_max.max(v.abs());
                    orthogonal &= v.is_zero();
                }
            }
        }
    }
    GramReport {
        constant,
        off_diagonal_max_abs: off_max,
        is_orthogonal: orthogonal,
        row_sums_of_squares: (0..n).map(|i| gram[i][i]).collect(),
        column_sums_of_squares: (0..n).map(|i| cogram[i][i]).collect(),
    }
}

/// `(sum_i M[i][i]^2, sum_i M[i][n-1-i]^2)`.
pub fn diagonal_sums(m: &SquareMatrix) -> (HalfRational, HalfRational) {
    let n = m.dim();
    let main = (0..n).map(|i| m.get(i, i).square()).sum();
    let anti = (0..n).map(|i| m.get(i, n - 1 - i).square()).sum();
    (main, anti)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareKind {
    NotSemimagic,
    Semimagic,
    FullyMagic,
}

impl fmt::Display for SquareKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareKind::NotSemimagic => "not_semimagic",
            SquareKind::Semimagic => "semimagic",
            SquareKind::FullyMagic => "fully_magic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: SquareKind,
    pub constant: HalfRational,
    pub entries_distinct: bool,
    pub squares_distinct: bool,
    pub entries_integral: bool,
}

impl Classification {
    pub fn is_semimagic(&self) -> bool {
        self.kind != SquareKind::NotSemimagic
    }

    pub fn is_fully_magic(&self) -> bool {
        self.kind == SquareKind::FullyMagic
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (constant {}, entries_distinct={}, squares_distinct={}, entries_integral={})",
            self.kind, self.constant, self.entries_distinct, self.squares_distinct, self.entries_integral
        )
    }
}

/// Semimagic: `M M^T = M^T M = c I` with `c != 0`. Fully magic additionally
/// needs both diagonal square-sums equal to `c`.
pub fn classify(m: &SquareMatrix) -> Classification {
    let report = gram_report(m);
    let c = report.constant;
    let semimagic = report.is_orthogonal && !c.is_zero();
    let kind = if !semimagic {
        SquareKind::NotSemimagic
    } else {
        let (main, anti) = diagonal_sums(m);
        if main == c && anti == c {
            SquareKind::FullyMagic
        } else {
            SquareKind::Semimagic
        }
    };
    let total = m.dim() * m.dim();
    Classification {
        kind,
        constant: c,
        entries_distinct: m.values().collect::<HashSet<_>>().len() == total,
        squares_distinct: m.values().map(|v| v.abs()).collect::<HashSet<_>>().len() == total,
        entries_integral: m.values().all(|v| v.is_integer()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obligation {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub dim: usize,
    pub convention: Option<Convention>,
    pub obligations: Vec<Obligation>,
    /// First nonzero off-diagonal Gram polynomial, as `(kind, i, k, poly)`.
    #[serde(skip)]
    pub gram_witness: Option<(&'static str, usize, usize, Poly)>,
}

impl ProofReport {
    pub fn passed(&self) -> bool {
        self.obligations.iter().all(|o| o.passed)
    }

    pub fn obligation(&self, name: &str) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.name == name)
    }
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.convention {
            Some(c) => writeln!(f, "symbolic proof, dim {} ({c} convention)", self.dim)?,
            None => writeln!(f, "symbolic proof, dim {}", self.dim)?,
        }
        for o in &self.obligations {
            writeln!(f, "  [{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)?;
        }
        Ok(())
    }
}

pub const OBLIGATION_ORTHOGONAL: &str = "off-diagonal Gram entries vanish";
pub const OBLIGATION_CONSTANT: &str = "diagonal Gram entries equal N(A)N(P)";
pub const OBLIGATION_DISTINCT: &str = "entries pairwise distinct";

fn gram_polys(m: &[Vec<Poly>], transpose: bool) -> Result<Vec<Vec<Poly>>, MagicError> {
    let n = m.len();
    let at = |i: usize, j: usize| if transpose { &m[j][i] } else { &m[i][j] };
    let mut out = vec![vec![Poly::zero(); n]; n];
    for i in 0..n {
        for k in i..n {
            let mut acc = Poly::zero();
            for j in 0..n {
                acc = acc.checked_add(&at(i, j).checked_mul(at(k, j))?)?;
            }
            out[k][i] = acc.clone();
            out[i][k] = acc;
        }
    }
    Ok(out)
}

/// Checks the three symbolic obligations on any bilinear pattern matrix.
pub fn prove_patterns(sym: &SymbolicMatrix, convention: Option<Convention>) -> Result<ProofReport, MagicError> {
    let n = sym.dim();
    let polys = sym.to_polys();
    let sum_squares = |var: fn(usize) -> usize| (0..n).fold(Poly::zero(), |acc, i| acc + Poly::var(var(i)) * Poly::var(var(i)));
    let norm_product = sum_squares(a_var).checked_mul(&sum_squares(p_var))?;

    let mut witness = None;
    let mut nonzero_off = 0usize;
    let mut bad_diag = 0usize;
    for (label, transpose) in [("MM^T", false), ("M^TM", true)] {
        let g = gram_polys(&polys, transpose)?;
        for i in 0..n {
            for k in 0..n {
                if i == k {
                    bad_diag += usize::from(g[i][i] != norm_product);
                } else if !g[i][k].is_zero() {
                    nonzero_off += 1;
                    if witness.is_none() {
                        witness = Some((label, i, k, g[i][k].clone()));
                    }
                }
            }
        }
    }

    let distinct = polys.iter().flatten().collect::<HashSet<_>>().len();
    let ortho_detail = match &witness {
        None => format!("all {} off-diagonal entries of MM^T and M^TM are the zero polynomial", 2 * n * (n - 1)),
        Some((label, i, k, poly)) => format!(
            "{nonzero_off} nonzero off-diagonal entries; e.g. {label}[{i}][{k}] = {poly}"
        ),
    };
    let obligations = vec![
        Obligation { name: OBLIGATION_ORTHOGONAL, passed: witness.is_none(), detail: ortho_detail },
        Obligation {
            name: OBLIGATION_CONSTANT,
            passed: bad_diag == 0,
            detail: if bad_diag == 0 {
                format!("every diagonal entry is ({})({})", sum_squares(a_var), sum_squares(p_var))
            } else {
                format!("{bad_diag} diagonal entries differ from the norm product")
            },
        },
        Obligation {
            name: OBLIGATION_DISTINCT,
            passed: distinct == n * n,
            detail: format!("{distinct} distinct polynomials among {} entries", n * n),
        },
    ];
    Ok(ProofReport { dim: n, convention, obligations, gram_witness: witness })
}

/// Symbolic proof that `A (e_i P)` rows form a semi-magic square of squares.
pub fn prove_theorem(table: &BasisTable) -> Result<ProofReport, MagicError> {
    prove_patterns(&build_symbolic(table), Some(table.convention()))
}

/// On-disk matrix form. Scalars are strings (`"n"` or `"n/2"`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub dim: usize,
    #[serde(rename = "A", default)]
    pub a: Option<Hyper>,
    #[serde(rename = "P", default)]
    pub p: Option<Hyper>,
    #[serde(default)]
    pub convention: Option<Convention>,
    #[serde(default, skip_serializing_if = "Layout::is_natural")]
    pub layout: Layout,
    pub entries: Vec<Vec<HalfRational>>,
    pub constant: HalfRational,
}

impl MatrixDocument {
    pub fn to_matrix(&self) -> Result<SquareMatrix, MagicError> {
        if self.entries.len() != self.dim {
            return Err(MagicError::DeclaredDim { declared: self.dim, actual: self.entries.len() });
        }
        let mut m = SquareMatrix::new(self.entries.clone())?;
        if let (Some(a), Some(p)) = (&self.a, &self.p) {
            m.provenance = Some(Provenance {
                a: a.clone(),
                p: p.clone(),
                convention: self.convention.unwrap_or_default(),
                layout: self.layout,
            });
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub classification: Classification,
    /// Set when the stored convention does not reproduce the entries:
    /// the enumerated convention with the fewest mismatching entries.
    pub closest_convention: Option<(Convention, usize)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        writeln!(f, "classification: {}", self.classification)?;
        if let Some((conv, miss)) = self.closest_convention {
            writeln!(f, "closest convention: {conv} ({miss} mismatching entries)")?;
        }
        Ok(())
    }
}

fn mismatches(a: &SquareMatrix, b: &SquareMatrix) -> usize {
    a.values().zip(b.values()).filter(|(x, y)| x != y).count()
}

/// Recomputes a stored matrix from its provenance (when present) and checks
/// the stored constant and the square-of-squares properties.
pub fn verify_document(doc: &MatrixDocument) -> Result<VerifyReport, MagicError> {
    let m = doc.to_matrix()?;
    let report = gram_report(&m);
    let mut checks = vec![Check {
        name: "stored constant".into(),
        passed: report.constant == doc.constant,
        detail: format!("stored {}, recomputed {}", doc.constant, report.constant),
    }];
    let mut closest = None;
    if let Some(prov) = &m.provenance {
        let rebuilt = prov.rebuild()?;
        let agree = rebuilt.same_entries(&m);
        checks.push(Check {
            name: "entries reproduce from provenance".into(),
            passed: agree,
            detail: if agree {
                format!("{} entries match ({} convention, {} layout)", m.dim() * m.dim(), prov.convention, prov.layout)
            } else {
                format!("{} of {} entries differ", mismatches(&rebuilt, &m), m.dim() * m.dim())
            },
        });
        if !agree && prov.layout == Layout::Natural {
            closest = Convention::ALL
                .iter()
                .filter_map(|&conv| {
                    let table = BasisTable::new(prov.a.dim(), conv).ok()?;
                    let alt = build_matrix(&prov.a, &prov.p, &table).ok()?;
                    Some((conv, mismatches(&alt, &m)))
                })
                .min_by_key(|&(_, miss)| miss);
        }
        if m.dim() <= 8 {
            let expected = prov.expected_constant();
            checks.push(Check {
                name: "orthogonal with constant N(A)N(P)".into(),
                passed: report.is_orthogonal && report.constant == expected,
                detail: format!(
                    "orthogonal={}, constant {}, N(A)N(P) = {} * {} = {}",
                    report.is_orthogonal,
                    report.constant,
                    prov.a.norm(),
                    prov.p.norm(),
                    expected
                ),
            });
        }
    }
    Ok(VerifyReport { checks, classification: classify(&m), closest_convention: closest })
}
