//! Counts checked against values derived by hand and against a local enumerator.

use lhom::analysis::irr;
use lhom::decomposition::TreeDecomposition;
use lhom::graph::Graph;
use lhom::homcount::{count_brute, count_dp, ListAssignment};
use lhom::reductions::{
    csp_to_lhom, lhom_p4_to_independent_sets, list_coloring_to_coloring, sat_to_csp, CnfFormula, GroupingParameters,
};
use num_bigint::BigUint;
use num_rational::BigRational;

/// Plain odometer over all maps; shares no code with the library counters.
fn enumerate(g: &Graph, lists: &[Vec<usize>], h: &Graph) -> u64 {
    let n = g.vertex_count();
    if lists.iter().any(Vec::is_empty) {
        return 0;
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut idx = vec![0usize; n];
    let mut total = 0;
    loop {
        let f = |v: usize| lists[v][idx[v]];
        if edges.iter().all(|&(u, v)| h.has_edge(f(u), f(v))) {
            total += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            idx[i] += 1;
            if idx[i] < lists[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn grid(r: usize, c: usize) -> Graph {
    let mut g = Graph::new(r * c);
    for i in 0..r {
        for j in 0..c {
            if i + 1 < r {
                g.add_edge(i * c + j, (i + 1) * c + j).unwrap();
            }
            if j + 1 < c {
                g.add_edge(i * c + j, i * c + j + 1).unwrap();
            }
        }
    }
    g
}

fn both(g: &Graph, l: &ListAssignment, h: &Graph) -> (BigUint, BigUint) {
    let td = TreeDecomposition::min_degree(g);
    (count_dp(g, l, &td, h).unwrap(), count_brute(g, l, h).unwrap())
}

#[test]
fn frozen_homomorphism_counts() {
    let cases: Vec<(&str, Graph, Graph, u64)> = vec![
        ("C5 to K3", Graph::cycle(5), Graph::complete(3), 30),
        ("P5 to K3", Graph::path(5), Graph::complete(3), 48),
        ("K4 to K4", Graph::complete(4), Graph::complete(4), 24),
        ("P3 to P4", Graph::path(3), Graph::path(4), 10),
        ("3x3 grid to K3", grid(3, 3), Graph::complete(3), 246),
        ("C5 to P4", Graph::cycle(5), Graph::path(4), 0),
        ("K2 to reflexive K2", Graph::complete(2), Graph::reflexive_complete(2), 4),
    ];
    for (name, g, h, want) in cases {
        let l = ListAssignment::full(g.vertex_count(), h.vertex_count());
        let (dp, brute) = both(&g, &l, &h);
        assert_eq!(dp, BigUint::from(want), "{name}");
        assert_eq!(brute, BigUint::from(want), "{name}");
        assert_eq!(enumerate(&g, l.lists(), &h), want, "{name}");
    }
}

#[test]
fn lists_restrict_counts() {
    let g = Graph::path(3);
    let h = Graph::path(4);
    let l = ListAssignment::new(vec![vec![0], vec![1], vec![0, 2, 3]]);
    let (dp, brute) = both(&g, &l, &h);
    assert_eq!(dp, BigUint::from(2u32));
    assert_eq!(brute, dp);
    let empty = ListAssignment::new(vec![vec![0], vec![], vec![2]]);
    assert_eq!(both(&g, &empty, &h).0, BigUint::from(0u32));
}

#[test]
fn frozen_irr_values() {
    let mut pendant_k33 = Graph::complete_bipartite(3, 3);
    let v = pendant_k33.add_vertex();
    pendant_k33.add_edge(0, v).unwrap();
    for (name, h, want) in [
        ("P4", Graph::path(4), 2),
        ("P6", Graph::path(6), 3),
        ("K3", Graph::complete(3), 3),
        ("C6", Graph::cycle(6), 3),
        ("K23", Graph::complete_bipartite(2, 3), 1),
        ("K33 with a pendant", pendant_k33, 2),
    ] {
        assert_eq!(irr(&h).unwrap().value, want, "{name}");
    }
}

#[test]
fn model_count_through_the_chain() {
    let params = GroupingParameters::search(2, &BigRational::new(1.into(), 2.into())).unwrap();
    let p4 = Graph::path(4);
    for (f, want) in [
        (CnfFormula::new(2, vec![vec![1, 2]]).unwrap(), 3u32),
        (CnfFormula::new(3, vec![vec![1, -2], vec![2, 3]]).unwrap(), 4),
        (CnfFormula::new(2, vec![vec![1], vec![-1]]).unwrap(), 0),
    ] {
        assert_eq!(f.count_brute().unwrap(), BigUint::from(want));
        let sat = sat_to_csp(&f, &params).unwrap();
        let res = csp_to_lhom(&sat.csp, &p4, None, None, 1).unwrap();
        let got = res.count.parse::<BigUint>().unwrap() * &sat.multiplier;
        assert_eq!(got, BigUint::from(want), "{f:?}");
    }
}

#[test]
fn independent_set_and_coloring_pipelines() {
    let g = Graph::path(3);
    let l = ListAssignment::full(3, 4);
    assert_eq!(lhom_p4_to_independent_sets(&g, &l).unwrap().count, BigUint::from(10u32));
    assert_eq!(lhom_p4_to_independent_sets(&Graph::cycle(5), &ListAssignment::full(5, 4)).unwrap().count, BigUint::from(0u32));

    let c5 = Graph::cycle(5);
    let red = list_coloring_to_coloring(&c5, &ListAssignment::full(5, 3), 3, None, false).unwrap();
    assert_eq!(red.list_count(3).unwrap(), BigUint::from(30u32));
    let l = ListAssignment::new(vec![vec![0], vec![1, 2], vec![0, 1, 2], vec![0, 2], vec![1, 2]]);
    let red = list_coloring_to_coloring(&c5, &l, 3, None, false).unwrap();
    assert_eq!(red.list_count(3).unwrap(), BigUint::from(enumerate(&c5, l.lists(), &Graph::complete(3))));
}
