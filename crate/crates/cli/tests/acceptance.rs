//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per
//! criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use markov_growth::action::{
    convergence_report, free_group_action, operator_contract_check, random_permutation,
    spherical_averages, Exponent, FiniteAction, FiniteSpace, Observable,
};
use markov_growth::codings::{
    build_finite_group_shortlex, build_free_group, build_free_semigroup, format_word,
    verify_bijectivity_default, FailureReason, FiniteGroupTable, GroupOracle, Verdict,
};
use markov_growth::counting::{enumerate_arc_paths, sphere_sizes, DEFAULT_PATH_CAP};
use markov_growth::exact::rational_to_f64;
use markov_growth::regularity::{
    descriptor_of_pair, descriptor_of_spheres, Analyzer, RegularDescriptor, RegularityOptions,
    ResidueClass,
};
use markov_growth::{count_table, verify_cut_convolution, Arc, LabelledGraph};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn graph(dim: usize, arcs: &[(usize, usize, usize)], symbols: &[&str]) -> LabelledGraph {
    LabelledGraph::new(
        (0..dim).map(|i| format!("v{i}")).collect(),
        symbols.iter().map(|s| s.to_string()).collect(),
        arcs.iter()
            .map(|&(tail, head, label)| Arc { tail, head, label })
            .collect(),
        Some(0),
    )
    .unwrap()
}

/// Up to `max_dim` vertices over `{a, b}`; each ordered pair gets 0, 1 or
/// 2 parallel arcs.
fn random_graph(rng: &mut ChaCha8Rng, max_dim: usize) -> LabelledGraph {
    let dim = rng.gen_range(1..=max_dim);
    let mut arcs = Vec::new();
    for u in 0..dim {
        for v in 0..dim {
            let m = match rng.gen_range(0..10) {
                0..=5 => 0,
                6..=8 => 1,
                _ => 2,
            };
            for _ in 0..m {
                arcs.push((u, v, rng.gen_range(0..2)));
            }
        }
    }
    graph(dim, &arcs, &["a", "b"])
}

/// Random measure-preserving action of `{a, b}`: two weight blocks, maps
/// permuting inside blocks.
fn random_action(rng: &mut ChaCha8Rng, max_points: usize) -> FiniteAction {
    let n = rng.gen_range(1..=max_points);
    let split = rng.gen_range(0..=n);
    let heavy: i64 = rng.gen_range(1..4);
    let total = split as i64 * heavy + (n - split) as i64;
    let weights = (0..n)
        .map(|i| BigRational::new(BigInt::from(if i < split { heavy } else { 1 }), BigInt::from(total)))
        .collect();
    let space = FiniteSpace::new((0..n).map(|i| format!("x{i}")).collect(), weights).unwrap();
    let block_perm = |rng: &mut ChaCha8Rng| {
        let mut lo: Vec<usize> = (0..split).collect();
        let mut hi: Vec<usize> = (split..n).collect();
        lo.shuffle(rng);
        hi.shuffle(rng);
        lo.into_iter().chain(hi).collect::<Vec<_>>()
    };
    let maps = vec![block_perm(rng), block_perm(rng)];
    FiniteAction::new(space, vec!["a".into(), "b".into()], maps).unwrap()
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn rel_err(x: &BigRational, y: f64) -> f64 {
    ((rational_to_f64(x) - y) / y).abs()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let graphs = 1000;
    let mut checks = 0usize;
    for _ in 0..graphs {
        let g = random_graph(&mut rng, 5);
        let t = count_table(&g, 8);
        for u in 0..g.vertex_count() {
            for n in 0..=8 {
                let paths = enumerate_arc_paths(&g, u, None, n, DEFAULT_PATH_CAP).map_err(|e| e.to_string())?;
                let mut per_end = vec![0usize; g.vertex_count()];
                for p in &paths {
                    per_end[p.last().map_or(u, |&i| g.arcs()[i].head)] += 1;
                }
                for (v, &k) in per_end.iter().enumerate() {
                    ensure!(
                        t.pair(u, v, n) == &BigUint::from(k),
                        "pair ({u}, {v}) at n = {n}: {} paths, count {}",
                        k,
                        t.pair(u, v, n)
                    );
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{graphs} graphs, {checks} exact comparisons"))
}

fn criterion_2() -> Outcome {
    for k in 1..=3u32 {
        let s = sphere_sizes(&build_free_semigroup(k as usize).unwrap(), 60).unwrap();
        for (n, x) in s.iter().enumerate() {
            ensure!(*x == BigUint::from(k).pow(n as u32), "free semigroup k = {k}, n = {n}: {x}");
        }
    }
    let f2 = sphere_sizes(&build_free_group(2).unwrap(), 200).unwrap();
    let s = &f2;
    ensure!(s[0] == BigUint::from(1u32), "F2 sphere 0 = {}", s[0]);
    for (n, x) in s.iter().enumerate().skip(1) {
        let expected = BigUint::from(4u32) * BigUint::from(3u32).pow(n as u32 - 1);
        ensure!(*x == expected, "F2 n = {n}: {x}");
    }
    let z = sphere_sizes(&build_free_group(1).unwrap(), 200).unwrap();
    for (n, x) in z.iter().enumerate() {
        ensure!(*x == BigUint::from(if n == 0 { 1u32 } else { 2 }), "Z n = {n}: {x}");
    }
    let z6 = build_finite_group_shortlex(&FiniteGroupTable::cyclic(6).unwrap()).unwrap();
    let s = sphere_sizes(&z6.graph, 60).unwrap();
    for (n, x) in s.iter().enumerate() {
        let expected = [1u32, 2, 2, 1].get(n).copied().unwrap_or(0);
        ensure!(*x == BigUint::from(expected), "Z/6 n = {n}: {x}");
    }
    Ok(format!(
        "k^n for k = 1..3 to n = 60, F2 to n = 200 ({} digits), Z to 200, Z/6 to 60",
        f2[200].to_string().len()
    ))
}

/// Random graph whose condensation has at least two components: blocks of
/// one or two vertices in a chain-ordered DAG.
fn random_condensable(rng: &mut ChaCha8Rng) -> LabelledGraph {
    loop {
        let mut arcs = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut dim = 0;
        for _ in 0..rng.gen_range(2..=4) {
            let size = if dim + 2 <= 6 && rng.gen_bool(0.4) { 2 } else { 1 };
            if dim + size > 6 {
                break;
            }
            let vs: Vec<usize> = (dim..dim + size).collect();
            dim += size;
            if size == 2 {
                arcs.push((vs[0], vs[1], rng.gen_range(0..2)));
                arcs.push((vs[1], vs[0], rng.gen_range(0..2)));
            }
            for &v in &vs {
                for _ in 0..rng.gen_range(0..=2) {
                    arcs.push((v, v, rng.gen_range(0..2)));
                }
            }
            blocks.push(vs);
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                for _ in 0..rng.gen_range(0..=2) {
                    let u = *blocks[i].choose(rng).unwrap();
                    let v = *blocks[j].choose(rng).unwrap();
                    arcs.push((u, v, rng.gen_range(0..2)));
                }
            }
        }
        let g = graph(dim, &arcs, &["a", "b"]);
        if g.strongly_connected_components().len() >= 2 {
            return g;
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut partitions, mut checks) = (0usize, 0usize);
    for _ in 0..200 {
        let g = random_condensable(&mut rng);
        let dim = g.vertex_count();
        for mask in 1u32..(1 << dim) - 1 {
            let admissible = g
                .arcs()
                .iter()
                .all(|a| !(mask >> a.tail & 1 == 0 && mask >> a.head & 1 == 1));
            if !admissible {
                continue;
            }
            partitions += 1;
            let first: Vec<usize> = (0..dim).filter(|v| mask >> v & 1 == 1).collect();
            for &u in &first {
                for v in (0..dim).filter(|v| mask >> v & 1 == 0) {
                    let ok = verify_cut_convolution(&g, &first, u, v, 30).map_err(|e| e.to_string())?;
                    ensure!(ok, "partition {first:?}, pair ({u}, {v})");
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("200 graphs, {partitions} admissible partitions, {checks} pairs, n <= 30"))
}

fn geometric(c: usize, range: usize) -> RegularDescriptor {
    let g = graph(1, &vec![(0, 0, 0); c], &["a"]);
    descriptor_of_pair(&g, 0, 0, &RegularityOptions { range, ..Default::default() }).unwrap()
}

fn check_constants(name: &str, d: &RegularDescriptor, a: f64, b: u32, c: f64) -> Result<(), String> {
    ensure!(d.q() == 1, "{name}: period {}", d.q());
    match &d.classes()[0] {
        ResidueClass::Asymptotic { a: da, b: db, c: dc } => {
            ensure!(
                rel_err(da, a) <= 1e-9 && *db == b && rel_err(dc, c) <= 1e-9,
                "{name}: got ({}, {db}, {}), expected ({a}, {b}, {c})",
                rational_to_f64(da),
                rational_to_f64(dc)
            );
            Ok(())
        }
        other => Err(format!("{name}: {other:?}")),
    }
}

fn criterion_4() -> Outcome {
    let opts = RegularityOptions::default();
    let range = 400;
    let conv = geometric(2, range).convolve(&geometric(1, range), &opts).map_err(|e| e.to_string())?;
    check_constants("2^n * 1", &conv, 2.0, 0, 2.0)?;
    ensure!(conv.classes()[0] == ResidueClass::Asymptotic { a: int(2), b: 0, c: int(2) }, "2^n * 1 not exact");
    for n in 0..range {
        let expected = (BigUint::from(1u32) << (n + 1)) - 1u32;
        ensure!(conv.terms().integer(n) == Some(expected), "2^n * 1 term {n}");
    }
    let ones = geometric(1, range).convolve(&geometric(1, range), &opts).map_err(|e| e.to_string())?;
    check_constants("1 * 1", &ones, 1.0, 1, 1.0)?;
    for n in 0..range {
        ensure!(ones.terms().integer(n) == Some(BigUint::from(n + 1)), "1 * 1 term {n}");
    }
    let dom = geometric(2, range).sum(&geometric(3, range), &opts);
    check_constants("2^n + 3^n", &dom, 1.0, 0, 3.0)?;
    let eq = geometric(2, range).sum(&geometric(2, range), &opts);
    check_constants("2^n + 2^n", &eq, 2.0, 0, 2.0)?;
    Ok("2^n*1 = (2,0,2), 1*1 = (1,1,1), 2^n+3^n = (1,0,3), 2^n+2^n = (2,0,2); terms exact".into())
}

/// Strongly connected blocks with known growth rates.
struct Block {
    radius: f64,
    size: usize,
    arcs: &'static [(usize, usize)],
}

const BLOCKS: [Block; 8] = [
    Block { radius: 1.0, size: 1, arcs: &[(0, 0)] },
    Block { radius: std::f64::consts::SQRT_2, size: 2, arcs: &[(0, 1), (0, 1), (1, 0)] },
    Block { radius: 1.618_033_988_749_895, size: 2, arcs: &[(0, 0), (0, 1), (1, 0)] },
    Block { radius: 2.0, size: 1, arcs: &[(0, 0), (0, 0)] },
    Block { radius: 2.414_213_562_373_095, size: 2, arcs: &[(0, 0), (0, 0), (0, 1), (1, 0)] },
    Block { radius: 3.0, size: 1, arcs: &[(0, 0), (0, 0), (0, 0)] },
    Block { radius: 3.302_775_637_731_995, size: 2, arcs: &[(0, 0), (0, 0), (0, 0), (0, 1), (1, 0)] },
    Block { radius: 4.0, size: 1, arcs: &[(0, 0), (0, 0), (0, 0), (0, 0)] },
];

/// Chain of 2 or 3 blocks with pairwise radius gaps of at least 0.2.
fn separated_graph(rng: &mut ChaCha8Rng) -> (LabelledGraph, Vec<f64>) {
    loop {
        let k = rng.gen_range(2..=3);
        let mut picks: Vec<usize> = (0..BLOCKS.len()).collect();
        picks.shuffle(rng);
        picks.truncate(k);
        let radii: Vec<f64> = picks.iter().map(|&i| BLOCKS[i].radius).collect();
        let separated = radii
            .iter()
            .enumerate()
            .all(|(i, x)| radii[i + 1..].iter().all(|y| (x - y).abs() >= 0.2));
        let dim: usize = picks.iter().map(|&i| BLOCKS[i].size).sum();
        if !separated || dim > 6 {
            continue;
        }
        let mut arcs = Vec::new();
        let mut offsets = Vec::new();
        let mut at = 0;
        for &i in &picks {
            offsets.push(at);
            for &(u, v) in BLOCKS[i].arcs {
                arcs.push((at + u, at + v, 0));
            }
            at += BLOCKS[i].size;
        }
        for j in 1..k {
            for _ in 0..rng.gen_range(1..=2) {
                let u = offsets[j - 1] + rng.gen_range(0..BLOCKS[picks[j - 1]].size);
                let v = offsets[j] + rng.gen_range(0..BLOCKS[picks[j]].size);
                arcs.push((u, v, 0));
            }
        }
        return (graph(dim, &arcs, &["a"]), radii);
    }
}

/// Below this both deviations sit at the resolution of `f64` constants.
const RESOLUTION_FLOOR: f64 = 1e-9;

fn criterion_5() -> Outcome {
    let mut b = markov_growth::GraphBuilder::new();
    for s in ["a", "b", "c", "x", "y", "z"] {
        b.symbol(s).unwrap();
    }
    b.vertex("u").unwrap();
    b.vertex("v").unwrap();
    b.start("u");
    for (t, h, l) in [("u", "u", "a"), ("u", "u", "b"), ("u", "v", "c"), ("v", "v", "x"), ("v", "v", "y"), ("v", "v", "z")] {
        b.arc(t, h, l).unwrap();
    }
    let lp = b.build().unwrap();
    let opts = RegularityOptions::default();
    let d = descriptor_of_pair(&lp, 0, 1, &opts).map_err(|e| e.to_string())?;
    check_constants("loop pair", &d, 1.0, 0, 3.0)?;
    let dev_lp = d.deviation_at(200).map_err(|e| e.to_string())?.unwrap_or(f64::INFINITY);
    ensure!(dev_lp <= 1e-30, "loop pair deviation at 200: {dev_lp:e}");

    let f2 = descriptor_of_spheres(&build_free_group(2).unwrap(), &opts).map_err(|e| e.to_string())?;
    let report = f2.validate(1, 200, 0.0).map_err(|e| e.to_string())?;
    ensure!(report.max_deviation() == 0.0, "F2 deviation {:e}", report.max_deviation());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut classes, mut worst, mut resolved) = (0usize, 0.0f64, 0usize);
    for trial in 0..20 {
        let (g, radii) = separated_graph(&mut rng);
        let mut an = Analyzer::new(&g, opts.clone());
        let mut ds = vec![("spheres".to_string(), an.spheres().map_err(|e| e.to_string())?)];
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                ds.push((format!("{u}->{v}"), an.pair(u, v).map_err(|e| e.to_string())?));
            }
        }
        for (name, d) in &ds {
            let q = d.q();
            for (r, cls) in d.classes().iter().enumerate() {
                if !cls.is_asymptotic() {
                    continue;
                }
                let n200 = 200 - (200 + q - r) % q;
                let n100 = 100 - (100 + q - r) % q;
                let at = |n| d.deviation_at(n).map_err(|e| e.to_string()).map(|x| x.unwrap_or(f64::INFINITY));
                let (d200, d100) = (at(n200)?, at(n100)?);
                ensure!(
                    d200 <= 0.05 && (d200 < d100 || d100 <= RESOLUTION_FLOOR),
                    "graph {trial} (radii {radii:?}) {name} residue {r}: deviation {d200:e} at {n200}, {d100:e} at {n100}"
                );
                classes += 1;
                resolved += usize::from(d200 >= d100);
                worst = worst.max(d200);
            }
        }
    }
    Ok(format!(
        "loop pair {dev_lp:e} at 200, F2 0 on [1, 200], 20 graphs / {classes} classes worst {worst:e} at 200 ({resolved} below {RESOLUTION_FLOOR:e} at both n)"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut checks, mut slack, mut norm, mut mean) = (0usize, f64::INFINITY, 0.0f64, 0.0f64);
    for trial in 0..100 {
        let g = random_graph(&mut rng, 5);
        let act = random_action(&mut rng, 8);
        let report = operator_contract_check(&act, &g, 16, 1, rng.gen()).map_err(|e| e.to_string())?;
        ensure!(report.pass(), "triple {trial}: {:?}", report.violations.first());
        checks += report.checks;
        slack = slack.min(report.min_contraction_slack);
        norm = norm.max(report.max_normalization_error);
        mean = mean.max(report.max_mean_error);
    }
    Ok(format!(
        "100 triples, {checks} checks; max |s_n(1) - 1| {norm:e}, min contraction slack {slack:e}, max mean error {mean:e}"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let trials = 250;
    for trial in 0..trials {
        let g = random_graph(&mut rng, 4);
        let act = random_action(&mut rng, 8);
        let phi = Observable::random(&mut rng, act.space().len(), -1.0, 1.0).into_values();
        let series = spherical_averages(&act, &g, &phi, 6).map_err(|e| e.to_string())?;
        for n in 0..=6 {
            let paths = enumerate_arc_paths(&g, 0, None, n, DEFAULT_PATH_CAP).map_err(|e| e.to_string())?;
            for x in 0..phi.len() {
                let expected = if paths.is_empty() {
                    0.0
                } else {
                    let total: f64 = paths
                        .iter()
                        .map(|p| {
                            let y = p.iter().rev().fold(x, |y, &e| {
                                act.map(g.symbol_name(g.arcs()[e].label)).unwrap()[y]
                            });
                            phi[y]
                        })
                        .sum();
                    total / paths.len() as f64
                };
                let err = (series.s(n)[x] - expected).abs();
                worst = worst.max(err);
                ensure!(err <= 1e-12, "trial {trial}, n = {n}, x = {x}: error {err:e}");
            }
        }
    }
    Ok(format!("{trials} trials, max abs error {worst:e}"))
}

fn criterion_8() -> Outcome {
    let g = build_free_group(2).unwrap();
    let mut summary = Vec::new();
    for seed in [11u64, 12] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let maps = vec![random_permutation(&mut rng, 64), random_permutation(&mut rng, 64)];
        let space = FiniteSpace::uniform((0..64).map(|i| format!("p{i}")).collect()).unwrap();
        let act = free_group_action(space, maps).map_err(|e| e.to_string())?;
        for k in 0..5 {
            let phi = Observable::random(&mut rng, 64, -1.0, 1.0).into_values();
            let series = spherical_averages(&act, &g, &phi, 4096).map_err(|e| e.to_string())?;
            let report = convergence_report(&series, act.space(), Exponent::Finite(1.0), 64, 2.0)
                .map_err(|e| e.to_string())?;
            let d: Vec<f64> = report.steps.iter().map(|s| s.difference).collect();
            ensure!(
                report.steps.first().map(|s| s.from) == Some(64) && report.steps.last().map(|s| s.from) == Some(2048),
                "ladder rungs {:?}",
                report.steps.iter().map(|s| s.from).collect::<Vec<_>>()
            );
            let (first, last) = (d[0], d[d.len() - 1]);
            ensure!(
                d.iter().all(|x| x.is_finite()) && last <= first / 4.0 && last <= 0.05,
                "seed {seed}, phi {k}: ladder {d:?}"
            );
            summary.push(last / first);
        }
    }
    let worst = summary.iter().cloned().fold(0.0, f64::max);
    Ok(format!("2 actions x 5 observables, worst d_last / d_first = {worst:.4}"))
}

fn criterion_9() -> Outcome {
    let mut passed = Vec::new();
    let mut run = |name: String, g: &LabelledGraph, oracle: &GroupOracle, n: usize| -> Result<(), String> {
        let r = verify_bijectivity_default(g, oracle, n).map_err(|e| e.to_string())?;
        ensure!(r.pass(), "{name}: {r}");
        passed.push(format!("{name}<={n}"));
        Ok(())
    };
    for k in 1..=3 {
        run(format!("free_semigroup:{k}"), &build_free_semigroup(k).unwrap(), &GroupOracle::FreeSemigroup(k), 7)?;
        run(format!("free_group:{k}"), &build_free_group(k).unwrap(), &GroupOracle::FreeGroup(k), 7)?;
    }
    let mut groups: Vec<(String, FiniteGroupTable)> = [1usize, 2, 3, 6, 7, 12]
        .iter()
        .map(|&n| (format!("cyclic:{n}"), FiniteGroupTable::cyclic(n).unwrap()))
        .collect();
    groups.push((
        "S3".into(),
        FiniteGroupTable::from_permutations(&[("s", vec![1, 0, 2]), ("t", vec![0, 2, 1])]).unwrap(),
    ));
    groups.push((
        "Klein".into(),
        FiniteGroupTable::from_permutations(&[("s", vec![1, 0, 2, 3]), ("t", vec![0, 1, 3, 2])]).unwrap(),
    ));
    for (name, t) in groups {
        let coding = build_finite_group_shortlex(&t).map_err(|e| e.to_string())?;
        let diameter = coding.group.distances().iter().flatten().copied().max().unwrap_or(0);
        run(name, &coding.graph, &GroupOracle::FiniteGroup(coding.group.clone()), diameter + 2)?;
    }

    let f2 = build_free_group(2).unwrap();
    let (a, inv_a) = (f2.vertex_index("a").unwrap(), f2.vertex_index("A").unwrap());
    let bad = f2
        .with_arc(Arc { tail: a, head: inv_a, label: f2.symbol_index("A").unwrap() })
        .unwrap();
    let r = verify_bijectivity_default(&bad, &GroupOracle::FreeGroup(2), 7).map_err(|e| e.to_string())?;
    match &r.verdict {
        Verdict::Fail { n: 2, word, reason: FailureReason::NormMismatch { norm: 0 } } if format_word(word) == "a.A" => {}
        other => return Err(format!("corrupted automaton: {other:?}")),
    }
    Ok(format!("{}; corrupted automaton: {r}", passed.join(" ")))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_markov-growth");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    std::fs::write(
        path("loops.graph"),
        "alphabet a b c x y z\nstart u\nvertex u\nvertex v\nedge u u a\nedge u u b\nedge u v c\nedge v v x\nedge v v y\nedge v v z\n",
    )
    .map_err(|e| e.to_string())?;
    let points: Vec<String> = (0..16).map(|i| format!("p{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut action = format!("points {}\n", points.join(" "));
    for s in ["a", "b"] {
        let p = random_permutation(&mut rng, 16);
        let inv = markov_growth::action::inverse_permutation(&p);
        let name = |m: &[usize]| m.iter().map(|&i| points[i].clone()).collect::<Vec<_>>().join(" ");
        action += &format!("map {s} {}\nmap {} {}\n", name(&p), s.to_uppercase(), name(&inv));
    }
    std::fs::write(path("act.txt"), action).map_err(|e| e.to_string())?;

    let runs: Vec<(Vec<String>, Vec<&str>)> = vec![
        (
            vec!["count", "--builtin", "free_group:2", "--nmax", "60", "--out", "{}count.csv"],
            vec!["count.csv"],
        ),
        (
            vec!["analyze", "--graph", "{}loops.graph", "--pairs", "u,v", "--out", "{}analyze.csv"],
            vec!["analyze.csv"],
        ),
        (
            vec!["simulate", "--builtin", "free_group:2", "--action", "{}act.txt", "--Nmax", "512", "--seed", "3", "--out", "{}sim"],
            vec!["sim_series.csv", "sim_ladder.csv"],
        ),
        (vec!["verify", "--builtin", "cyclic:6", "--out", "{}verify.txt"], vec!["verify.txt"]),
    ]
    .into_iter()
    .map(|(args, files)| {
        let prefix = format!("{}/", dir.path().to_string_lossy());
        (args.into_iter().map(|a| a.replace("{}", &prefix)).collect(), files)
    })
    .collect();

    let mut compared = 0usize;
    for (args, files) in &runs {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
            ensure!(
                out.status.success(),
                "{args:?} exited with {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            );
            let mut bytes = vec![out.stdout];
            for f in files {
                bytes.push(std::fs::read(path(f)).map_err(|e| format!("{f}: {e}"))?);
                std::fs::remove_file(path(f)).map_err(|e| e.to_string())?;
            }
            outputs.push(bytes);
        }
        ensure!(outputs[0] == outputs[1], "{} differs between runs", args[0]);
        compared += outputs[0].len();
    }
    Ok(format!("count, analyze, simulate, verify each run twice; {compared} outputs byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (k, f) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {k}: PASS ({secs:.2} s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {k}: FAIL ({secs:.2} s) {why}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
