use markov_growth::action::{FiniteAction, FiniteSpace};
use markov_growth::codings::{build_free_group, FiniteGroupTable};
use markov_growth::{Arc, LabelledGraph};
use markov_growth_io::{
    parse_action, parse_graph, parse_group_table, serialize_action, serialize_graph,
    serialize_group_table,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const GOLDEN_F2: &str = include_str!("data/free_group_2.graph");

fn arb_names(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::btree_set("[a-zA-Z_][a-zA-Z0-9_.]{0,5}", 1..=max)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_shuffle()
}

fn arb_graph() -> impl Strategy<Value = LabelledGraph> {
    (arb_names(5), arb_names(3)).prop_flat_map(|(vs, syms)| {
        let (nv, ns) = (vs.len(), syms.len());
        (
            Just(vs),
            Just(syms),
            prop::collection::vec((0..nv, 0..nv, 0..ns), 0..12),
            prop::option::of(0..nv),
        )
            .prop_map(|(vs, syms, arcs, start)| {
                let arcs = arcs
                    .into_iter()
                    .map(|(tail, head, label)| Arc { tail, head, label })
                    .collect();
                LabelledGraph::new(vs, syms, arcs, start).unwrap()
            })
    })
}

fn line_of(text: &str, g: &LabelledGraph) -> Option<usize> {
    parse_action(text, g).unwrap_err().line
}

proptest! {
    #[test]
    fn graphs_round_trip(g in arb_graph()) {
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_graph(&back), text);
    }

    #[test]
    fn actions_round_trip(
        perms in (1usize..7).prop_flat_map(|n| prop::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 2)),
    ) {
        let g = parse_graph("alphabet a b\nvertex s\nstart s\nedge s s a\nedge s s b\n").unwrap();
        let n = perms[0].len();
        let space = FiniteSpace::uniform((0..n).map(|i| format!("p{i}")).collect()).unwrap();
        let act = FiniteAction::new(space, vec!["a".into(), "b".into()], perms).unwrap();
        let text = serialize_action(&act);
        prop_assert_eq!(parse_action(&text, &g).unwrap(), act);
    }

    #[test]
    fn cyclic_tables_round_trip(n in 1usize..12) {
        let t = FiniteGroupTable::cyclic(n).unwrap();
        prop_assert_eq!(parse_group_table(&serialize_group_table(&t)).unwrap(), t);
    }
}

#[test]
fn free_group_golden_file() {
    let g = build_free_group(2).unwrap();
    assert_eq!(serialize_graph(&g), GOLDEN_F2);
    assert_eq!(parse_graph(GOLDEN_F2).unwrap(), g);
}

#[test]
fn weighted_actions_round_trip() {
    let g = parse_graph("alphabet a\nvertex s\nstart s\nedge s s a\n").unwrap();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let space = FiniteSpace::new(
        vec!["x".into(), "y".into(), "z".into()],
        vec![half, quarter.clone(), quarter],
    )
    .unwrap();
    let act = FiniteAction::new(space, vec!["a".into()], vec![vec![0, 2, 1]]).unwrap();
    let text = serialize_action(&act);
    assert!(text.contains("1/2"), "{text}");
    assert_eq!(parse_action(&text, &g).unwrap(), act);
}

#[test]
fn graph_errors_carry_lines() {
    let cases = [
        ("alphabet a\nalphabet b\n", 2),
        ("vertex q\nedge q q a\n", 2),
        ("alphabet a\nvertex q\nedge q r a\n", 3),
        ("alphabet a\nvertex q\nedge q q b\n", 3),
        ("alphabet a\nvertex q\nvertex q\n", 3),
        ("alphabet a\nvertex q\nfrobnicate\n", 3),
        ("alphabet a\nvertex q\nedge q q\n", 3),
    ];
    for (text, line) in cases {
        let err = parse_graph(text).unwrap_err();
        assert_eq!(err.line, Some(line), "{text:?}: {err}");
    }
    assert!(parse_graph("# nothing\n").is_err());
    assert!(parse_graph("alphabet a\nvertex q\nstart r\n").is_err());
}

#[test]
fn action_errors_carry_lines() {
    let g = parse_graph("alphabet a b\nvertex s\nstart s\nedge s s a\nedge s s b\n").unwrap();
    assert_eq!(line_of("points x y\nmap a y x\nmap a x y\n", &g), Some(3));
    assert_eq!(line_of("points x y\nmap a x x\nmap b x y\n", &g), Some(2));
    assert_eq!(line_of("points x y\nmap a x q\nmap b x y\n", &g), Some(2));
    assert_eq!(line_of("points x y\nmap c x y\n", &g), Some(2));
    assert_eq!(
        line_of("points x y\nweights 1/2 1/2\nmap a y x\nmap b x y\nweights 1 0\n", &g),
        Some(5)
    );
    let weighted = "points x y z\nweights 1/2 1/4 1/4\nmap a y x z\nmap b x y z\n";
    assert_eq!(line_of(weighted, &g), Some(3));
    assert!(parse_action("points x y\nmap a y x\n", &g).is_err());
}
