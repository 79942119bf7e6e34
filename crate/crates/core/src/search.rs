//! Parameter search over `(A, P)` for squares with prescribed properties.
//!
//! Coordinates are sampled on an integer lattice; in half-integer mode one
//! lattice unit is `1/2`. Each sample goes through a cheap integer filter
//! first and is then re-verified exactly with [`crate::magic::classify`]
//! before it is emitted as a [`Candidate`].
//!
//! Random search is deterministic for a fixed seed and worker count: worker
//! `w` draws from ChaCha stream `w` of the seed and covers its share of the
//! iteration budget. Results from all workers funnel through one aggregator,
//! which drops duplicates and feeds the caller's sink.

use std::collections::HashSet;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::mpsc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BasisTable, Convention, Hyper};
use crate::euler::{euler_symbolic, sample_solution};
use crate::magic::{classify, Classification, Layout, MagicError, Provenance, SquareKind, SquareMatrix};
use crate::scalar::HalfRational;

/// Largest accepted magnitude of a lattice coordinate; keeps the integer
/// filter far away from `i128` overflow.
pub const MAX_LATTICE_COORD: i64 = 1 << 20;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("search region has {points} lattice points, above the cap of {cap}")]
    RegionTooLarge { points: u128, cap: u128 },
    #[error("matrix is not semimagic; diagonalization needs MM^T = cI")]
    NotSemimagic,
    #[error(transparent)]
    Magic(#[from] MagicError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed candidate log line {line}: {source}")]
    Log { line: usize, source: serde_json::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Semimagic,
    EntriesDistinct,
    SquaresDistinct,
    EntriesIntegral,
    FullyMagic,
}

impl Predicate {
    pub const ALL: [Predicate; 5] = [
        Predicate::Semimagic,
        Predicate::EntriesDistinct,
        Predicate::SquaresDistinct,
        Predicate::EntriesIntegral,
        Predicate::FullyMagic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Predicate::Semimagic => "semimagic",
            Predicate::EntriesDistinct => "entries_distinct",
            Predicate::SquaresDistinct => "squares_distinct",
            Predicate::EntriesIntegral => "entries_integral",
            Predicate::FullyMagic => "fully_magic",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = SearchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SearchError::InvalidConfig(format!("unknown predicate {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Every coordinate uniform on its lattice range.
    #[default]
    Uniform,
    /// Dim 4 only: draws `p, q, b, d` and a multiplier, completes `r, s`
    /// and `a, c` so both of Euler's side conditions hold.
    EulerSolutions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub dim: usize,
    pub convention: Convention,
    pub layout: Layout,
    /// Lattice range shared by all coordinates.
    pub lo: i64,
    pub hi: i64,
    /// Per-coordinate ranges (`A` first, then `P`), overriding `lo..=hi`.
    pub bounds: Option<Vec<(i64, i64)>>,
    /// One lattice unit is `1/2` instead of `1`.
    pub half_integer: bool,
    pub predicates: Vec<Predicate>,
    pub iterations: u64,
    pub max_duration: Option<Duration>,
    pub seed: u64,
    pub workers: usize,
    pub sampler: Sampler,
    /// Skip `(A, P)` unless the first nonzero coordinate of `A` is positive
    /// and both lattice vectors are primitive (coordinate gcd 1).
    pub quotient_symmetry: bool,
    /// Let `fully_magic` be met by some row permutation of the matrix.
    pub permute_rows: bool,
    /// Stamp candidates with wall-clock seconds (breaks byte-determinism).
    pub record_wall_clock: bool,
    pub max_lattice_points: u128,
    pub progress: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            dim: 8,
            convention: Convention::default(),
            layout: Layout::Natural,
            lo: -32,
            hi: 32,
            bounds: None,
            half_integer: false,
            predicates: vec![Predicate::Semimagic, Predicate::EntriesDistinct],
            iterations: 100_000,
            max_duration: None,
            seed: 0,
            workers: 1,
            sampler: Sampler::Uniform,
            quotient_symmetry: false,
            permute_rows: false,
            record_wall_clock: false,
            max_lattice_points: 100_000_000,
            progress: false,
        }
    }
}

impl SearchConfig {
    fn invalid(msg: impl Into<String>) -> SearchError {
        SearchError::InvalidConfig(msg.into())
    }

    /// Range of each of the `2 * dim` lattice coordinates.
    pub fn coordinate_bounds(&self) -> Vec<(i64, i64)> {
        self.bounds.clone().unwrap_or_else(|| vec![(self.lo, self.hi); 2 * self.dim])
    }

    fn validate_shape(&self) -> Result<(), SearchError> {
        BasisTable::new(self.dim, self.convention).map_err(|e| Self::invalid(e.to_string()))?;
        if self.layout == Layout::Euler4 && self.dim != 4 {
            return Err(Self::invalid("euler4 layout needs dim 4"));
        }
        if self.sampler == Sampler::EulerSolutions && (self.dim != 4 || self.layout != Layout::Euler4) {
            return Err(Self::invalid("the euler sampler needs dim 4 and the euler4 layout"));
        }
        if self.sampler == Sampler::EulerSolutions && self.half_integer {
            return Err(Self::invalid("the euler sampler draws integers only"));
        }
        let bounds = self.coordinate_bounds();
        if bounds.len() != 2 * self.dim {
            return Err(Self::invalid(format!("expected {} coordinate ranges, got {}", 2 * self.dim, bounds.len())));
        }
        if bounds.iter().any(|&(lo, hi)| lo.abs().max(hi.abs()) > MAX_LATTICE_COORD) {
            return Err(Self::invalid(format!("lattice coordinates are limited to ±{MAX_LATTICE_COORD}")));
        }
        Ok(())
    }

    /// Checks everything random search needs.
    pub fn validate(&self) -> Result<(), SearchError> {
        self.validate_shape()?;
        if self.coordinate_bounds().iter().any(|&(lo, hi)| lo > hi) {
            return Err(Self::invalid("range has lo > hi"));
        }
        if self.iterations == 0 && self.max_duration.is_none() {
            return Err(Self::invalid("budget must be positive"));
        }
        if self.max_duration == Some(Duration::ZERO) {
            return Err(Self::invalid("time budget must be positive"));
        }
        if self.workers == 0 {
            return Err(Self::invalid("need at least one worker"));
        }
        Ok(())
    }

    fn lattice_to_hyper(&self, lattice: &[i64]) -> Hyper {
        let coords = lattice
            .iter()
            .map(|&v| if self.half_integer { HalfRational::halves(v as i128) } else { HalfRational::from(v) })
            .collect();
        Hyper::new(coords).expect("validated dim")
    }
}

/// One discovered square, replayable from `(A, P)` alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub dim: usize,
    pub convention: Convention,
    #[serde(default, skip_serializing_if = "is_natural")]
    pub layout: Layout,
    #[serde(rename = "A")]
    pub a: Hyper,
    #[serde(rename = "P")]
    pub p: Hyper,
    pub constant: HalfRational,
    pub classification: Classification,
    /// Row order that makes the square fully magic, when one was searched for and found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_permutation: Option<Vec<usize>>,
    pub seed: u64,
    pub worker: usize,
    pub iteration: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

fn is_natural(layout: &Layout) -> bool {
    *layout == Layout::Natural
}

impl Candidate {
    pub fn provenance(&self) -> Provenance {
        Provenance { a: self.a.clone(), p: self.p.clone(), convention: self.convention, layout: self.layout }
    }

    pub fn matrix(&self) -> Result<SquareMatrix, MagicError> {
        self.provenance().rebuild()
    }

    /// Rebuilds the square from `(A, P)` and compares every stored flag.
    pub fn reverify(&self) -> Result<bool, MagicError> {
        let m = self.matrix()?;
        let class = classify(&m);
        let mut ok = class == self.classification && class.constant == self.constant && m.dim() == self.dim;
        if let Some(perm) = &self.row_permutation {
            ok &= is_permutation(perm, m.dim()) && classify(&m.permute_rows(perm)).is_fully_magic();
        }
        Ok(ok)
    }

    /// Whether the stored data meets every predicate.
    pub fn satisfies(&self, predicates: &[Predicate]) -> bool {
        let c = &self.classification;
        predicates.iter().all(|p| match p {
            Predicate::Semimagic => c.is_semimagic(),
            Predicate::EntriesDistinct => c.entries_distinct,
            Predicate::SquaresDistinct => c.squares_distinct,
            Predicate::EntriesIntegral => c.entries_integral,
            Predicate::FullyMagic => c.is_fully_magic() || self.row_permutation.is_some(),
        })
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n && perm.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchSummary {
    pub iterations: u64,
    pub emitted: u64,
    pub best_constant: Option<HalfRational>,
    /// Best constant after each improvement, in discovery order.
    pub best_history: Vec<HalfRational>,
}

impl SearchSummary {
    fn record(&mut self, c: &Candidate) {
        self.emitted += 1;
        if self.best_constant.is_none_or(|b| c.constant < b) {
            self.best_constant = Some(c.constant);
            self.best_history.push(c.constant);
        }
    }
}

/// Searches every row order for one whose two diagonals both carry the
/// magic constant. Returns the lexicographically first such permutation.
pub fn diagonalize_rows(m: &SquareMatrix) -> Result<Option<Vec<usize>>, SearchError> {
    let class = classify(m);
    if !class.is_semimagic() {
        return Err(SearchError::NotSemimagic);
    }
    let n = m.dim();
    let sq: Vec<Vec<HalfRational>> = m.entries().iter().map(|r| r.iter().map(HalfRational::square).collect()).collect();
    let c = class.constant;

    struct Dfs<'a> {
        sq: &'a [Vec<HalfRational>],
        c: HalfRational,
        n: usize,
        used: Vec<bool>,
        perm: Vec<usize>,
    }

    impl Dfs<'_> {
        fn go(&mut self, main: HalfRational, anti: HalfRational) -> bool {
            let pos = self.perm.len();
            if pos == self.n {
                return main == self.c && anti == self.c;
            }
            for row in 0..self.n {
                if self.used[row] {
                    continue;
                }
                let (m2, a2) = (main + self.sq[row][pos], anti + self.sq[row][self.n - 1 - pos]);
                if m2 > self.c || a2 > self.c {
                    continue;
                }
                self.used[row] = true;
                self.perm.push(row);
                if self.go(m2, a2) {
                    return true;
                }
                self.perm.pop();
                self.used[row] = false;
            }
            false
        }
    }

    let mut dfs = Dfs { sq: &sq, c, n, used: vec![false; n], perm: Vec::with_capacity(n) };
    Ok(dfs.go(HalfRational::ZERO, HalfRational::ZERO).then_some(dfs.perm))
}

/// Integer image of the matrix, scaled by the lattice denominator squared.
struct LatticeBuilder {
    table: BasisTable,
    layout: Layout,
}

impl LatticeBuilder {
    fn build(&self, a: &[i64], p: &[i64]) -> Vec<Vec<i128>> {
        let a: Vec<i128> = a.iter().map(|&v| v as i128).collect();
        let p: Vec<i128> = p.iter().map(|&v| v as i128).collect();
        match self.layout {
            Layout::Natural => (0..self.table.dim())
                .map(|i| self.table.product(&a, &self.table.left_basis_product(i, &p)))
                .collect(),
            Layout::Euler4 => euler_symbolic()
                .rows()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|t| t.terms().iter().enumerate().map(|(j, &(k, s))| s as i128 * a[k] * p[j]).sum())
                        .collect()
                })
                .collect(),
        }
    }
}

struct Evaluator<'a> {
    cfg: &'a SearchConfig,
    builder: LatticeBuilder,
}

impl<'a> Evaluator<'a> {
    fn new(cfg: &'a SearchConfig) -> Self {
        let table = BasisTable::new(cfg.dim, cfg.convention).expect("validated config");
        Self { cfg, builder: LatticeBuilder { table, layout: cfg.layout } }
    }

    fn wants(&self, p: Predicate) -> bool {
        self.cfg.predicates.contains(&p)
    }

    /// Necessary conditions on the integer image; never rejects a true hit.
    fn prefilter(&self, m: &[Vec<i128>]) -> bool {
        let n = m.len();
        if self.wants(Predicate::EntriesIntegral) && self.cfg.half_integer && m.iter().flatten().any(|v| v % 4 != 0) {
            return false;
        }
        if self.wants(Predicate::FullyMagic) && !self.cfg.permute_rows {
            let c: i128 = m[0].iter().map(|v| v * v).sum();
            let main: i128 = (0..n).map(|i| m[i][i] * m[i][i]).sum();
            let anti: i128 = (0..n).map(|i| m[i][n - 1 - i] * m[i][n - 1 - i]).sum();
            if main != c || anti != c {
                return false;
            }
        }
        if self.wants(Predicate::EntriesDistinct) {
            let mut seen = HashSet::with_capacity(n * n);
            if !m.iter().flatten().all(|v| seen.insert(*v)) {
                return false;
            }
        }
        if self.wants(Predicate::SquaresDistinct) {
            let mut seen = HashSet::with_capacity(n * n);
            if !m.iter().flatten().all(|v| seen.insert(v.abs())) {
                return false;
            }
        }
        true
    }

    fn evaluate(&self, a_lat: &[i64], p_lat: &[i64], worker: usize, iteration: u64) -> Option<Candidate> {
        if !self.prefilter(&self.builder.build(a_lat, p_lat)) {
            return None;
        }
        let (a, p) = (self.cfg.lattice_to_hyper(a_lat), self.cfg.lattice_to_hyper(p_lat));
        let prov = Provenance { a, p, convention: self.cfg.convention, layout: self.cfg.layout };
        let m = prov.rebuild().expect("validated config");
        let classification = classify(&m);
        let row_permutation = if self.cfg.permute_rows
            && self.wants(Predicate::FullyMagic)
            && classification.kind == SquareKind::Semimagic
        {
            diagonalize_rows(&m).ok().flatten()
        } else {
            None
        };
        let candidate = Candidate {
            dim: self.cfg.dim,
            convention: self.cfg.convention,
            layout: self.cfg.layout,
            a: prov.a,
            p: prov.p,
            constant: classification.constant,
            classification,
            row_permutation,
            seed: self.cfg.seed,
            worker,
            iteration,
            timestamp: self
                .cfg
                .record_wall_clock
                .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
        };
        candidate.satisfies(&self.cfg.predicates).then_some(candidate)
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
}

fn passes_quotient(a: &[i64], p: &[i64]) -> bool {
    let leading_positive = a.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0);
    leading_positive && gcd_all(a) == 1 && gcd_all(p) == 1
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

fn worker_share(total: u64, workers: usize, w: usize) -> u64 {
    let workers = workers as u64;
    total / workers + u64::from((w as u64) < total % workers)
}

/// Deterministic candidate stream of one worker.
pub fn run_worker(cfg: &SearchConfig, worker: usize, mut emit: impl FnMut(Candidate)) -> Result<u64, SearchError> {
    cfg.validate()?;
    let eval = Evaluator::new(cfg);
    let bounds = cfg.coordinate_bounds();
    let mut rng = worker_rng(cfg.seed, worker);
    let budget = if cfg.iterations == 0 { u64::MAX } else { worker_share(cfg.iterations, cfg.workers, worker) };
    let deadline = cfg.max_duration.map(|d| Instant::now() + d);
    let mut seen = HashSet::new();
    let mut best: Option<HalfRational> = None;
    let dim = cfg.dim;
    let mut lattice = vec![0i64; 2 * dim];
    let mut done = 0u64;
    while done < budget {
        if done.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let iteration = done;
        done += 1;
        match cfg.sampler {
            Sampler::Uniform => {
                for (slot, &(lo, hi)) in lattice.iter_mut().zip(&bounds) {
                    *slot = rng.gen_range(lo..=hi);
                }
            }
            Sampler::EulerSolutions => {
                let params = sample_solution(&mut rng, cfg.lo, cfg.hi);
                for (slot, v) in lattice.iter_mut().zip(params.abcd.iter().chain(&params.pqrs)) {
                    *slot = v.to_integer().expect("integral euler sample") as i64;
                }
            }
        }
        let (a, p) = lattice.split_at(dim);
        if cfg.quotient_symmetry && !passes_quotient(a, p) {
            continue;
        }
        if !seen.insert(lattice.clone()) {
            continue;
        }
        if let Some(c) = eval.evaluate(a, p, worker, iteration) {
            if best.is_none_or(|b| c.constant < b) {
                best = Some(c.constant);
            }
            emit(c);
        }
        if cfg.progress && done.is_multiple_of(1 << 18) {
            let best = best.map_or_else(|| "none".to_string(), |b| b.to_string());
            eprintln!("search: seed {} worker {worker}: {done} iterations, best constant {best}", cfg.seed);
        }
    }
    Ok(done)
}

/// Randomized search. Candidates reach `sink` in discovery order; with one
/// worker the sequence depends only on the configuration.
pub fn random_search(cfg: &SearchConfig, mut sink: impl FnMut(&Candidate)) -> Result<SearchSummary, SearchError> {
    cfg.validate()?;
    let mut summary = SearchSummary::default();
    if cfg.workers == 1 {
        summary.iterations = run_worker(cfg, 0, |c| {
            summary.record(&c);
            sink(&c);
        })?;
        return Ok(summary);
    }

    let mut seen: HashSet<(Hyper, Hyper)> = HashSet::new();
    let iterations = std::thread::scope(|scope| -> Result<u64, SearchError> {
        let (tx, rx) = mpsc::channel::<Candidate>();
        let handles: Vec<_> = (0..cfg.workers)
            .map(|w| {
                let tx = tx.clone();
                scope.spawn(move || run_worker(cfg, w, |c| tx.send(c).expect("aggregator alive")))
            })
            .collect();
        drop(tx);
        for c in rx {
            if seen.insert((c.a.clone(), c.p.clone())) {
                summary.record(&c);
                sink(&c);
            }
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .sum::<Result<u64, _>>()
    })?;
    summary.iterations = iterations;
    Ok(summary)
}

/// Collecting form of [`random_search`].
pub fn random_search_collect(cfg: &SearchConfig) -> Result<(Vec<Candidate>, SearchSummary), SearchError> {
    let mut out = Vec::new();
    let summary = random_search(cfg, |c| out.push(c.clone()))?;
    Ok((out, summary))
}

/// Visits every lattice point of the region once, in lexicographic order.
/// A region with an empty coordinate range yields nothing.
pub fn exhaustive_search(cfg: &SearchConfig, mut sink: impl FnMut(&Candidate)) -> Result<SearchSummary, SearchError> {
    cfg.validate_shape()?;
    if cfg.sampler != Sampler::Uniform {
        return Err(SearchError::InvalidConfig("exhaustive search enumerates the lattice directly".into()));
    }
    let bounds = cfg.coordinate_bounds();
    let mut summary = SearchSummary::default();
    if bounds.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(summary);
    }
    let points = bounds
        .iter()
        .try_fold(1u128, |acc, &(lo, hi)| acc.checked_mul((hi - lo + 1) as u128))
        .unwrap_or(u128::MAX);
    if points > cfg.max_lattice_points {
        return Err(SearchError::RegionTooLarge { points, cap: cfg.max_lattice_points });
    }
    let eval = Evaluator::new(cfg);
    let dim = cfg.dim;
    let mut lattice: Vec<i64> = bounds.iter().map(|&(lo, _)| lo).collect();
    let mut index = 0u64;
    loop {
        let (a, p) = lattice.split_at(dim);
        if !cfg.quotient_symmetry || passes_quotient(a, p) {
            if let Some(c) = eval.evaluate(a, p, 0, index) {
                summary.record(&c);
                sink(&c);
            }
        }
        index += 1;
        // odometer, last coordinate fastest
        let mut k = lattice.len();
        loop {
            if k == 0 {
                summary.iterations = index;
                return Ok(summary);
            }
            k -= 1;
            if lattice[k] < bounds[k].1 {
                lattice[k] += 1;
                break;
            }
            lattice[k] = bounds[k].0;
        }
    }
}

/// Append-only JSONL candidate log.
pub struct CandidateLog {
    out: BufWriter<File>,
}

impl CandidateLog {
    pub fn append(path: impl AsRef<Path>) -> Result<Self, SearchError> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self { out: BufWriter::new(file) })
    }

    pub fn write(&mut self, c: &Candidate) -> Result<(), SearchError> {
        let line = serde_json::to_string(c).expect("candidate serializes");
        writeln!(self.out, "{line}")?;
        self.out.flush()?;
        Ok(())
    }
}

pub fn read_candidates(path: impl AsRef<Path>) -> Result<Vec<Candidate>, SearchError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| SearchError::Log { line: i + 1, source })?);
    }
    Ok(out)
}
