//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
//! A criterion that passes its checks but overruns its time budget fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use octomagic::algebra::{cd_multiply, find_norm_multiplicativity_counterexample};
use octomagic::euler::{
    euler4_build, euler4_conditions, euler4_match_quaternion, euler_example, euler_symbolic, sample_solution,
    EulerParams,
};
use octomagic::magic::{build_symbolic, diagonal_sums, gram_report, OBLIGATION_ORTHOGONAL};
use octomagic::polynomial::{a_var, p_var, Poly};
use octomagic::render::{render_pattern, RenderSpec};
use octomagic::search::{random_search, random_search_collect, Candidate, Predicate, SearchConfig};
use octomagic::{build_matrix, classify, prove_theorem, BasisTable, Convention, HalfRational, Hyper, SquareMatrix};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hr(n: i64) -> HalfRational {
    HalfRational::from(n)
}

fn identity(n: usize, c: HalfRational) -> Vec<Vec<HalfRational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { c } else { HalfRational::ZERO }).collect()).collect()
}

fn four_squares() -> Outcome {
    let a: Vec<Poly> = (0..4).map(|i| Poly::var(a_var(i))).collect();
    let b: Vec<Poly> = (0..4).map(|i| Poly::var(p_var(i))).collect();
    let prod = cd_multiply(&a, &b, Convention::Classic);
    // the displayed bilinear forms, as (a index, b index, sign)
    let displayed: [[(usize, usize, i128); 4]; 4] = [
        [(0, 0, 1), (1, 1, -1), (2, 2, -1), (3, 3, -1)],
        [(0, 1, 1), (1, 0, 1), (2, 3, 1), (3, 2, -1)],
        [(0, 2, 1), (1, 3, -1), (2, 0, 1), (3, 1, 1)],
        [(0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, 1)],
    ];
    for (k, form) in displayed.iter().enumerate() {
        let expected = form
            .iter()
            .fold(Poly::zero(), |acc, &(i, j, s)| acc + Poly::constant(s) * a[i].clone() * b[j].clone());
        ensure(prod[k] == expected, || format!("component {k}: got {}, displayed {expected}", prod[k]))?;
    }
    let norm = |v: &[Poly]| v.iter().fold(Poly::zero(), |acc, x| acc + x.clone() * x.clone());
    ensure(norm(&a) * norm(&b) == norm(&prod), || "symbolic norm identity fails".into())?;

    let table = BasisTable::new(4, Convention::Classic).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut draw = || {
        Hyper::new((0..4).map(|_| HalfRational::new(rng.gen_range(-1000..=1000), rng.gen_range(0..=1)).unwrap()).collect())
            .unwrap()
    };
    for i in 0..10_000 {
        let (x, y) = (draw(), draw());
        let xy = table.multiply(&x, &y).unwrap();
        ensure(x.norm() * y.norm() == xy.norm(), || format!("pair {i}: {x} * {y}"))?;
    }
    Ok("4 components match term-for-term; 10^4 exact random pairs multiplicative".into())
}

const PRINTED_9476: [[i64; 8]; 8] = [
    [43, 16, -19, 8, -22, 47, 38, -53],
    [-30, 11, 30, 5, 25, -32, 75, -16],
    [9, -4, -7, -52, -46, -57, -6, -35],
    [-8, -67, 48, 21, -5, 10, -17, -42],
    [54, -11, 14, 49, -31, -36, 17, 36],
    [44, 41, 60, -21, 33, -2, -25, -10],
    [7, -26, 29, -54, -24, 37, 32, 45],
    [-41, 46, 35, 22, -60, 15, -12, 1],
];

fn witness_9476() -> Outcome {
    let table = BasisTable::new(8, Convention::Classic).unwrap();
    let a0 = Hyper::from_ints(&[8, -2, -4, 8, -4, -1, -5, -4]).unwrap();
    let p0 = Hyper::from_halves(&[5, 7, -1, -3, -7, 1, 7, 1]).unwrap();
    let m = build_matrix(&a0, &p0, &table).unwrap();
    let c = hr(9476);
    ensure(m.values().all(|v| v.is_integer()), || "non-integer entry".into())?;
    ensure(m.gram() == identity(8, c), || "MM^T != 9476 I".into())?;
    ensure(m.cogram() == identity(8, c), || "M^TM != 9476 I".into())?;
    let class = classify(&m);
    ensure(class.entries_distinct, || "entries not distinct".into())?;
    let (main, _) = diagonal_sums(&m);
    ensure(main != c, || "main diagonal carries the constant".into())?;
    ensure(!class.is_fully_magic() && class.is_semimagic(), || format!("classified {class}"))?;
    let stretch = m.same_entries(&SquareMatrix::from_ints(&PRINTED_9476).unwrap());
    Ok(format!(
        "semimagic, 64 distinct entries, main diagonal {main}; printed table reproduced entry-for-entry: {}",
        if stretch { "yes" } else { "no" }
    ))
}

fn witness_43617() -> Outcome {
    let table = BasisTable::new(8, Convention::Classic).unwrap();
    let a1 = Hyper::from_ints(&[-2, -3, 7, -1, 2, -11, 2, -5]).unwrap();
    let p1 = Hyper::from_ints(&[-7, 4, -4, -9, 1, 2, -5, 3]).unwrap();
    let class = classify(&build_matrix(&a1, &p1, &table).unwrap());
    ensure(class.constant == hr(43617), || format!("constant {}", class.constant))?;
    ensure(class.squares_distinct, || "squares not distinct".into())?;
    ensure(class.is_semimagic(), || format!("classified {class}"))?;
    Ok(format!("{class}"))
}

fn euler_example_magic() -> Outcome {
    let class = classify(&euler_example());
    ensure(class.is_fully_magic() && class.constant == hr(8515), || format!("classified {class}"))?;
    Ok(format!("{class}"))
}

fn theorem() -> Outcome {
    let mut detail = Vec::new();
    for dim in [4, 8] {
        let report = prove_theorem(&BasisTable::new(dim, Convention::Classic).unwrap()).unwrap();
        ensure(report.passed() && report.obligations.len() == 3, || format!("dim {dim}:\n{report}"))?;
        detail.push(format!("dim {dim} all 3 obligations pass"));
    }
    let report = prove_theorem(&BasisTable::new(16, Convention::Classic).unwrap()).unwrap();
    let ortho = report.obligation(OBLIGATION_ORTHOGONAL).unwrap();
    ensure(!ortho.passed, || "dim 16 orthogonality unexpectedly holds".into())?;
    let (label, i, k, poly) = report.gram_witness.clone().ok_or("no Gram witness at dim 16")?;
    ensure(!poly.is_zero(), || "witness polynomial is zero".into())?;
    detail.push(format!("dim 16 fails with {label}[{i}][{k}] having {} terms", poly.num_terms()));
    Ok(detail.join("; "))
}

fn euler_side_conditions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..100 {
        let params = sample_solution(&mut rng, -9, 9);
        let cond = euler4_conditions(&params);
        ensure(cond.both() && !cond.degenerate, || format!("sample {i} does not solve the conditions"))?;
        let class = classify(&euler4_build(&params));
        ensure(class.is_fully_magic(), || format!("solution {i} {params:?} classified {class}"))?;
    }
    let mut violating = 0;
    while violating < 100 {
        let mut draw = || std::array::from_fn(|_| rng.gen_range(-9..=9));
        let params = EulerParams::from_ints(draw(), draw());
        if euler4_conditions(&params).product_condition || params.a().is_zero() || params.p().is_zero() {
            continue;
        }
        violating += 1;
        let class = classify(&euler4_build(&params));
        ensure(class.is_semimagic() && !class.is_fully_magic(), || format!("{params:?} classified {class}"))?;
    }
    Ok("100 solutions fully magic; 100 violations semimagic only".into())
}

fn reconciliation() -> Outcome {
    let table = BasisTable::new(4, Convention::Classic).unwrap();
    let found = euler4_match_quaternion(&table).map_err(|e| e.to_string())?;
    let mapped = found.apply(&build_symbolic(&table));
    ensure(&mapped == euler_symbolic(), || "transformation does not reproduce the table".into())?;
    Ok(found.to_string())
}

fn sedenions() -> Outcome {
    let table = BasisTable::new(16, Convention::Classic).unwrap();
    let (x, y) = find_norm_multiplicativity_counterexample(&table, 8, 1_000_000).ok_or("no counterexample")?;
    let direct = Hyper::new(cd_multiply(x.coords(), y.coords(), Convention::Classic)).unwrap();
    ensure(x.norm() * y.norm() != direct.norm(), || "counterexample does not re-verify".into())?;
    let report = gram_report(&build_matrix(&x, &y, &table).unwrap());
    ensure(!report.is_orthogonal && !report.off_diagonal_max_abs.is_zero(), || "16x16 Gram is diagonal".into())?;
    Ok(format!(
        "N(x)N(y) = {}, N(xy) = {}, max off-diagonal Gram entry {}",
        x.norm() * y.norm(),
        direct.norm(),
        report.off_diagonal_max_abs
    ))
}

fn jsonl(cfg: &SearchConfig) -> String {
    let mut out = String::new();
    random_search(cfg, |c: &Candidate| {
        out.push_str(&serde_json::to_string(c).unwrap());
        out.push('\n');
    })
    .unwrap();
    out
}

fn search_harness() -> Outcome {
    let det = SearchConfig { dim: 8, lo: -32, hi: 32, iterations: 2000, seed: 2024, ..SearchConfig::default() };
    let (first, second) = (jsonl(&det), jsonl(&det));
    ensure(!first.is_empty() && first == second, || "single-worker runs differ or are empty".into())?;

    let a2 = [16, -4, -8, 16, -8, -2, -10, -8];
    let p2 = [5, 7, -1, -3, -7, 1, 7, 1];
    let mut bounds: Vec<(i64, i64)> = a2.iter().chain(&p2).map(|&v| (v - 1, v + 1)).collect();
    for b in &mut bounds[2..8] {
        *b = (b.0 + 1, b.1 - 1);
    }
    for b in &mut bounds[10..16] {
        *b = (b.0 + 1, b.1 - 1);
    }
    let region = SearchConfig {
        half_integer: true,
        bounds: Some(bounds),
        predicates: vec![Predicate::Semimagic, Predicate::EntriesDistinct],
        iterations: 5000,
        seed: 1,
        ..SearchConfig::default()
    };
    let (hits, _) = random_search_collect(&region).unwrap();
    let hit = hits.iter().any(|c| c.constant == hr(9476) && c.a.coords()[0] == hr(8) && c.reverify().unwrap());
    ensure(hit, || format!("9476 witness not among {} candidates", hits.len()))?;

    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).min(8);
    let magic = SearchConfig {
        dim: 8,
        lo: -4,
        hi: 4,
        predicates: vec![Predicate::FullyMagic],
        iterations: 1_000_000,
        seed: 32,
        workers,
        ..SearchConfig::default()
    };
    let (found, summary) = random_search_collect(&magic).unwrap();
    ensure(found.is_empty(), || {
        let distinct = SearchConfig { predicates: vec![Predicate::FullyMagic, Predicate::EntriesDistinct], ..magic.clone() };
        let (with_distinct, _) = random_search_collect(&distinct).unwrap();
        let w = &found[0];
        let values: HashSet<_> = w.matrix().unwrap().values().collect();
        format!(
            "{} fully magic 8x8 squares emitted, all re-verified: {}; e.g. A={} P={} constant {} with only {} distinct entries; \
             adding entries_distinct leaves {}",
            found.len(),
            found.iter().all(|c| c.reverify().unwrap()),
            w.a,
            w.p,
            w.constant,
            values.len(),
            with_distinct.len()
        )
    })?;
    Ok(format!(
        "{} identical bytes twice; 9476 hit among {} candidates; {} fully-magic iterations on {workers} workers, none found",
        first.len(),
        hits.len(),
        summary.iterations
    ))
}

fn renderer() -> Outcome {
    let table = BasisTable::new(8, Convention::Classic).unwrap();
    let spec = RenderSpec::for_dim(8).unwrap().with_convention(Convention::Classic);
    let svg = render_pattern(&build_symbolic(&table), &spec).map_err(|e| e.to_string())?;
    let again = render_pattern(&build_symbolic(&table), &spec).map_err(|e| e.to_string())?;
    ensure(svg == again, || "output not byte-deterministic".into())?;
    let blocks: Vec<&str> = svg.split(r#"<g class="subsquare""#).skip(1).collect();
    ensure(blocks.len() == 64, || format!("{} subsquares", blocks.len()))?;
    let mut patterns = HashSet::new();
    for (i, block) in blocks.iter().enumerate() {
        let block = block.split("</g>").next().unwrap();
        let cells: Vec<&str> = block.lines().filter(|l| l.contains(r#"class="cell "#)).collect();
        ensure(cells.len() == 9, || format!("subsquare {i} has {} cells", cells.len()))?;
        let greys = cells.iter().filter(|l| l.contains("cell grey")).count();
        ensure(greys == 1, || format!("subsquare {i} has {greys} grey cells"))?;
        let fills: Vec<&str> = cells.iter().map(|l| l.split("fill=\"").nth(1).unwrap().split('"').next().unwrap()).collect();
        patterns.insert(fills);
    }
    ensure(patterns.len() == 64, || format!("{} distinct patterns", patterns.len()))?;
    Ok(format!("64 subsquares x 9 cells, one grey each, 64 distinct patterns, {} bytes", svg.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("four-squares identity", Duration::from_secs(1), four_squares),
        ("9476 witness", Duration::from_secs(1), witness_9476),
        ("43617 witness", Duration::from_secs(1), witness_43617),
        ("Euler example", Duration::from_secs(1), euler_example_magic),
        ("theorem proof", Duration::from_secs(30), theorem),
        ("Euler side conditions", Duration::from_secs(5), euler_side_conditions),
        ("reconciliation with Euler's table", Duration::from_secs(10), reconciliation),
        ("sedenion failure", Duration::from_secs(30), sedenions),
        ("search harness", Duration::from_secs(300), search_harness),
        ("renderer", Duration::from_secs(1), renderer),
    ];
    let mut failed = 0;
    for (n, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(_) if elapsed > budget => ("FAIL", format!("over budget of {budget:?}")),
            Ok(detail) => ("PASS", detail),
            Err(e) => ("FAIL", e),
        };
        failed += usize::from(verdict == "FAIL");
        println!("criterion {:>2} {verdict} [{elapsed:.2?}] {name}: {detail}", n + 1);
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
