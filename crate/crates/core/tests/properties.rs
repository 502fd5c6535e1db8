use lhom::decomposition::{ensure_valid, make_nice, TreeDecomposition};
use lhom::formats::{parse_graph, parse_lists, parse_td, write_graph, write_lists, write_td};
use lhom::graph::Graph;
use lhom::homcount::{count_brute, count_dp, count_dp_with, DpOptions, ListAssignment};
use proptest::prelude::*;

fn graph_strategy(max_n: usize, loops: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(any::<bool>(), n * (n + 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u..n {
                    if bits[k] && (loops || u != v) {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn lists_strategy(n: usize, hn: usize) -> impl Strategy<Value = ListAssignment> {
    proptest::collection::vec(proptest::collection::vec(any::<bool>(), hn), n)
        .prop_map(|rows| ListAssignment::new(rows.into_iter().map(|r| (0..r.len()).filter(|&i| r[i]).collect()).collect()))
}

fn instance() -> impl Strategy<Value = (Graph, Graph, ListAssignment, Vec<usize>)> {
    (graph_strategy(7, true), graph_strategy(4, true)).prop_flat_map(|(g, h)| {
        let n = g.vertex_count();
        let hn = h.vertex_count();
        (Just(g), Just(h), lists_strategy(n, hn), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dp_agrees_with_enumeration((g, h, l, order) in instance()) {
        let td = TreeDecomposition::from_elimination_order(&g, &order).unwrap();
        ensure_valid(&g, &td).unwrap();
        let nice = make_nice(&td).unwrap();
        prop_assert!(nice.check().is_ok());
        prop_assert!(nice.width() <= td.width());
        let brute = count_brute(&g, &l, &h).unwrap();
        prop_assert_eq!(count_dp(&g, &l, &td, &h).unwrap(), brute.clone());
        let (two, _) = count_dp_with(&g, &l, &td, &h, DpOptions { threads: 2 }).unwrap();
        prop_assert_eq!(two, brute);
    }

    #[test]
    fn disjoint_union_multiplies((a, b) in (graph_strategy(4, false), graph_strategy(4, false)), h in graph_strategy(3, true)) {
        let hn = h.vertex_count();
        let count = |g: &Graph| count_brute(g, &ListAssignment::full(g.vertex_count(), hn), &h).unwrap();
        prop_assert_eq!(count(&a.disjoint_union(&b)), count(&a) * count(&b));
    }

    #[test]
    fn formats_round_trip((g, h, l, order) in instance()) {
        let text = write_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g.clone());
        let n = g.vertex_count();
        let td = TreeDecomposition::from_elimination_order(&g, &order).unwrap();
        let td_text = write_td(&td, n);
        let (back, m) = parse_td(&td_text).unwrap();
        prop_assert_eq!(m, n);
        prop_assert_eq!(write_td(&back, m), td_text);
        let hn = h.vertex_count();
        prop_assert_eq!(parse_lists(&write_lists(&l, hn), n, hn).unwrap(), l);
    }
}
