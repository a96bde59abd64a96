mod common;

use common::{arb_graph, SYMBOLS};
use markov_growth::action::{
    lp_norm, operator_contract_check, spherical_averages, spherical_averages_exact, Exponent,
    FiniteAction, FiniteSpace,
};
use markov_growth::counting::{enumerate_arc_paths, DEFAULT_PATH_CAP};
use markov_growth::exact::rational_to_f64;
use markov_growth::LabelledGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Points split into two blocks of equal weight inside each block; the
/// maps permute within blocks so the measure is preserved.
fn arb_action(max_points: usize) -> impl Strategy<Value = FiniteAction> {
    (1..=max_points, 1u32..4).prop_flat_map(|(n, heavy)| {
        (0..=n).prop_flat_map(move |split| {
            let block = |lo: usize, hi: usize| Just((lo..hi).collect::<Vec<usize>>()).prop_shuffle();
            (
                block(0, split),
                block(split, n),
                block(0, split),
                block(split, n),
            )
                .prop_map(move |(a1, a2, b1, b2)| {
                    let total = (split as i64) * heavy as i64 + (n - split) as i64;
                    let weights = (0..n)
                        .map(|i| {
                            let w = if i < split { heavy as i64 } else { 1 };
                            BigRational::new(BigInt::from(w), BigInt::from(total))
                        })
                        .collect();
                    let space =
                        FiniteSpace::new((0..n).map(|i| format!("x{i}")).collect(), weights).unwrap();
                    let a: Vec<usize> = a1.into_iter().chain(a2).collect();
                    let b: Vec<usize> = b1.into_iter().chain(b2).collect();
                    FiniteAction::new(space, SYMBOLS.iter().map(|s| s.to_string()).collect(), vec![a, b])
                        .unwrap()
                })
        })
    })
}

/// Average of `phi ∘ T_{e_1} ∘ ... ∘ T_{e_n}` over all paths `e_1 ... e_n`
/// from the start, by explicit enumeration.
fn brute_force(act: &FiniteAction, g: &LabelledGraph, phi: &[f64], n: usize) -> Vec<f64> {
    let paths = enumerate_arc_paths(g, 0, None, n, DEFAULT_PATH_CAP).unwrap();
    let mut out = vec![0.0; phi.len()];
    if paths.is_empty() {
        return out;
    }
    for (x, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for p in &paths {
            let mut y = x;
            for &e in p.iter().rev() {
                y = act.map(g.symbol_name(g.arcs()[e].label)).unwrap()[y];
            }
            acc += phi[y];
        }
        *slot = acc / paths.len() as f64;
    }
    out
}

fn phi_for(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dynamic_programme_matches_enumeration(
        g in arb_graph(4),
        (act, phi) in arb_action(8).prop_flat_map(|a| { let n = a.space().len(); (Just(a), phi_for(n)) }),
    ) {
        let series = spherical_averages(&act, &g, &phi, 6).unwrap();
        for n in 0..=6 {
            let expected = brute_force(&act, &g, &phi, n);
            for (x, y) in series.s(n).iter().zip(&expected) {
                prop_assert!((x - y).abs() <= 1e-12, "n = {}: {} vs {}", n, x, y);
            }
        }
    }

    #[test]
    fn averages_are_means_of_translates(
        g in arb_graph(4),
        (act, phi) in arb_action(8).prop_flat_map(|a| { let n = a.space().len(); (Just(a), phi_for(n)) }),
    ) {
        let n_max = 20;
        let series = spherical_averages(&act, &g, &phi, n_max).unwrap();
        let space = act.space();
        let (lo, hi) = phi.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let mean = space.mean(&phi);
        for n in 0..=n_max {
            let s = series.s(n);
            if series.is_empty_sphere(n) {
                prop_assert!(s.iter().all(|&v| v == 0.0));
                continue;
            }
            prop_assert!(s.iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12));
            prop_assert!((space.mean(s) - mean).abs() <= 1e-10);
            for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
                prop_assert!(lp_norm(space, s, p).unwrap() <= lp_norm(space, &phi, p).unwrap() + 1e-12);
            }
        }
        for big_n in 1..=n_max {
            for x in 0..phi.len() {
                let direct: f64 = (0..big_n).map(|n| series.s(n)[x]).sum::<f64>() / big_n as f64;
                prop_assert!((series.c(big_n)[x] - direct).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn exact_mode_agrees(g in arb_graph(3), act in arb_action(5), seed in any::<u32>()) {
        let phi_q: Vec<BigRational> = (0..act.space().len())
            .map(|i| BigRational::new(BigInt::from((seed as i64 >> i) % 7 - 3), BigInt::from(4)))
            .collect();
        let phi: Vec<f64> = phi_q.iter().map(rational_to_f64).collect();
        let exact = spherical_averages_exact(&act, &g, &phi_q, 8).unwrap();
        let float = spherical_averages(&act, &g, &phi, 8).unwrap();
        for n in 0..=8 {
            for (q, f) in exact[n].iter().zip(float.s(n).iter()) {
                prop_assert!((rational_to_f64(q) - f).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn contract_holds(g in arb_graph(5), act in arb_action(8), seed in any::<u64>()) {
        let report = operator_contract_check(&act, &g, 12, 3, seed).unwrap();
        prop_assert!(report.pass(), "{:?}", report.violations);
        prop_assert!(report.max_normalization_error <= 1e-12);
    }
}
