//! Seeded instance generators. All randomness goes through ChaCha8 so runs replay exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::TreeDecomposition;
use crate::gadgets::check_target;
use crate::graph::Graph;
use crate::homcount::ListAssignment;
use crate::reductions::CnfFormula;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph(rng: &mut Rand, n: usize, p_edge: f64, p_loop: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        if rng.gen_bool(p_loop) {
            g.add_edge(u, u).expect("in range");
        }
        for v in u + 1..n {
            if rng.gen_bool(p_edge) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// Each target vertex enters each list with probability `p`.
pub fn lists(rng: &mut Rand, n: usize, hn: usize, p: f64) -> ListAssignment {
    ListAssignment::new((0..n).map(|_| (0..hn).filter(|_| rng.gen_bool(p)).collect()).collect())
}

/// Decomposition from a uniformly random elimination order.
pub fn elimination_td(rng: &mut Rand, g: &Graph) -> TreeDecomposition {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(rng);
    TreeDecomposition::from_elimination_order(g, &order).expect("order is a permutation")
}

/// Path decomposition from a vertex order: bag `i` holds vertex `i` and
/// every earlier vertex with a neighbor at position `i` or later.
pub fn path_td(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = order.len();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let last: Vec<usize> = (0..n).map(|v| g.neighbors(v).iter().map(|&w| pos[w]).max().unwrap_or(0).max(pos[v])).collect();
    let bags = (0..n)
        .map(|i| {
            let mut bag: Vec<usize> = order[..i].iter().copied().filter(|&u| last[u] >= i).collect();
            bag.push(order[i]);
            bag
        })
        .collect();
    TreeDecomposition::path(bags)
}

pub fn random_path_td(rng: &mut Rand, g: &Graph) -> TreeDecomposition {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(rng);
    path_td(g, &order)
}

/// A random subgraph of a `k`-tree on `n >= k + 1` vertices with its width-`k` decomposition.
pub fn partial_ktree(rng: &mut Rand, n: usize, k: usize, p_keep: f64) -> (Graph, TreeDecomposition) {
    let mut g = Graph::new(n);
    let mut bags: Vec<Vec<usize>> = vec![(0..=k).collect()];
    let mut edges = Vec::new();
    let mut cliques: Vec<Vec<usize>> = vec![(0..=k).collect()];
    for u in 0..=k {
        for v in u + 1..=k {
            if rng.gen_bool(p_keep) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    for v in k + 1..n {
        let parent = rng.gen_range(0..bags.len());
        let mut base = cliques[parent].clone();
        base.shuffle(rng);
        base.truncate(k);
        for &u in &base {
            if rng.gen_bool(p_keep) {
                g.add_edge(u, v).expect("in range");
            }
        }
        let mut bag = base.clone();
        bag.push(v);
        bags.push(bag.clone());
        cliques.push(bag);
        edges.push((parent, bags.len() - 1));
    }
    (g, TreeDecomposition::new(bags, edges))
}

/// A connected bipartite irredundant target with an induced `P4`.
pub fn valid_target(rng: &mut Rand, min: usize, max: usize) -> Graph {
    loop {
        let n = rng.gen_range(min..=max);
        let split = rng.gen_range(2..=n - 2);
        let mut g = Graph::new(n);
        for u in 0..split {
            for v in split..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        if check_target(&g).is_ok() {
            return g;
        }
    }
}

/// A formula with clauses of `width` distinct variables (fewer if `n` is smaller).
pub fn cnf(rng: &mut Rand, n: usize, m: usize, width: usize) -> CnfFormula {
    let vars: Vec<i64> = (1..=n as i64).collect();
    let clauses = (0..m)
        .map(|_| {
            vars.choose_multiple(rng, width.min(n))
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses).expect("literals in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::ensure_valid;

    #[test]
    fn generated_decompositions_are_valid() {
        let mut r = rng(7);
        for _ in 0..50 {
            let n = r.gen_range(1..=8);
            let g = graph(&mut r, n, 0.4, 0.2);
            ensure_valid(&g, &elimination_td(&mut r, &g)).unwrap();
            let p = random_path_td(&mut r, &g);
            ensure_valid(&g, &p).unwrap();
            assert!(p.is_path());
            let (g, td) = partial_ktree(&mut r, 8, 3, 0.7);
            ensure_valid(&g, &td).unwrap();
            assert_eq!(td.width(), 3);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a = graph(&mut rng(3), 6, 0.5, 0.5);
        let b = graph(&mut rng(3), 6, 0.5, 0.5);
        assert_eq!(a, b);
    }
}
