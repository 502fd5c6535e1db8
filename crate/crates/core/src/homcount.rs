//! Exact list-homomorphism counting: a brute-force oracle and the weighted
//! dynamic program over nice tree decompositions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::analysis::{neighborhood_classes, NeighborhoodClasses};
use crate::decomposition::{ensure_valid, make_nice, NiceKind, NiceTreeDecomposition, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{components_and_bipartition, ComponentSides, Graph};

/// Default refusal threshold for enumeration, as a product of list sizes.
pub const DEFAULT_BRUTE_GUARD: u128 = 100_000_000;

/// A list of allowed target vertices for every instance vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ListAssignment {
    lists: Vec<Vec<usize>>,
}

impl ListAssignment {
    /// Sorts and deduplicates every list.
    pub fn new(lists: Vec<Vec<usize>>) -> Self {
        let lists = lists
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        ListAssignment { lists }
    }

    /// Every vertex may go anywhere in a target on `h_vertices` vertices.
    pub fn full(g_vertices: usize, h_vertices: usize) -> Self {
        ListAssignment { lists: vec![(0..h_vertices).collect(); g_vertices] }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn get(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn set(&mut self, v: usize, mut list: Vec<usize>) {
        list.sort_unstable();
        list.dedup();
        self.lists[v] = list;
    }

    pub fn push(&mut self, list: Vec<usize>) {
        self.lists.push(Vec::new());
        let v = self.lists.len() - 1;
        self.set(v, list);
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    /// Checks the shape against an instance and a target.
    pub fn check(&self, g: &Graph, h: &Graph) -> Result<()> {
        if self.lists.len() != g.vertex_count() {
            return Err(Error::input(format!(
                "list assignment covers {} vertices, instance has {}",
                self.lists.len(),
                g.vertex_count()
            )));
        }
        for (v, l) in self.lists.iter().enumerate() {
            if let Some(&u) = l.iter().find(|&&u| u >= h.vertex_count()) {
                return Err(Error::input(format!("list of vertex {} mentions target vertex {}", v + 1, u + 1)));
            }
        }
        Ok(())
    }

    fn search_space(&self) -> u128 {
        self.lists.iter().fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128))
    }
}

/// Counts list homomorphisms by enumeration.
pub fn count_brute(g: &Graph, l: &ListAssignment, h: &Graph) -> Result<BigUint> {
    count_brute_with_guard(g, l, h, DEFAULT_BRUTE_GUARD)
}

pub fn count_brute_with_guard(g: &Graph, l: &ListAssignment, h: &Graph, guard: u128) -> Result<BigUint> {
    l.check(g, h)?;
    if l.lists.iter().any(Vec::is_empty) {
        return Ok(BigUint::zero());
    }
    let space = l.search_space();
    if space > guard {
        return Err(Error::SizeGuard(format!("enumeration space {space} exceeds the guard {guard}")));
    }
    let n = g.vertex_count();
    let mut f = vec![0usize; n];
    let mut count: u128 = 0;
    brute_rec(g, l, h, 0, &mut f, &mut count);
    Ok(BigUint::from(count))
}

fn brute_rec(g: &Graph, l: &ListAssignment, h: &Graph, v: usize, f: &mut [usize], count: &mut u128) {
    if v == g.vertex_count() {
        *count += 1;
        return;
    }
    'cand: for &u in l.get(v) {
        for &w in g.neighbors(v) {
            if w <= v && !h.has_edge(u, if w == v { u } else { f[w] }) {
                continue 'cand;
            }
        }
        f[v] = u;
        brute_rec(g, l, h, v + 1, f, count);
    }
}

/// Compressed lists: one representative per neighborhood class, weighted by
/// how many list entries it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedLists {
    pub lists: Vec<Vec<(usize, u64)>>,
}

impl WeightedLists {
    pub fn max_list_len(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn compress(l: &ListAssignment, classes: &NeighborhoodClasses) -> WeightedLists {
    let lists = l
        .lists
        .iter()
        .map(|list| {
            let mut w: Vec<(usize, u64)> = Vec::new();
            for &u in list {
                let rep = classes.representative(classes.class_of[u]);
                match w.iter_mut().find(|(r, _)| *r == rep) {
                    Some(e) => e.1 += 1,
                    None => w.push((rep, 1)),
                }
            }
            w.sort_unstable();
            w
        })
        .collect();
    WeightedLists { lists }
}

/// Weighted enumeration: sum over compressed solutions of the product of weights.
pub fn count_weighted_brute(g: &Graph, wl: &WeightedLists, h: &Graph) -> BigUint {
    fn rec(g: &Graph, wl: &WeightedLists, h: &Graph, v: usize, f: &mut [usize]) -> BigUint {
        if v == g.vertex_count() {
            return BigUint::one();
        }
        let mut total = BigUint::zero();
        'cand: for &(u, w) in &wl.lists[v] {
            for &x in g.neighbors(v) {
                if x <= v && !h.has_edge(u, if x == v { u } else { f[x] }) {
                    continue 'cand;
                }
            }
            f[v] = u;
            total += rec(g, wl, h, v + 1, f) * BigUint::from(w);
        }
        total
    }
    let mut f = vec![0; g.vertex_count()];
    rec(g, wl, h, 0, &mut f)
}

/// The two orientations of a connected bipartite instance component into a
/// connected bipartite target component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientations {
    Split(ListAssignment, ListAssignment),
    /// The instance component is not bipartite, so nothing maps into a loop-free bipartite target.
    Zero,
}

/// Restricts lists of `component` (given with its sides) to `(a, b)` and `(b, a)`.
/// Lists of vertices outside the component are left untouched.
pub fn split_orientations(
    l: &ListAssignment,
    component: &ComponentSides,
    target_sides: (&[usize], &[usize]),
) -> Orientations {
    let (x, y) = match component {
        ComponentSides::Bipartite { x, y } => (x, y),
        ComponentSides::NonBipartite { .. } => return Orientations::Zero,
    };
    let restrict = |list: &[usize], side: &[usize]| -> Vec<usize> {
        list.iter().copied().filter(|u| side.binary_search(u).is_ok()).collect()
    };
    let (a, b) = target_sides;
    let mut l1 = l.clone();
    let mut l2 = l.clone();
    for &v in x {
        l1.lists[v] = restrict(l.get(v), a);
        l2.lists[v] = restrict(l.get(v), b);
    }
    for &v in y {
        l1.lists[v] = restrict(l.get(v), b);
        l2.lists[v] = restrict(l.get(v), a);
    }
    Orientations::Split(l1, l2)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Largest number of states held by any table.
    pub max_table: usize,
    /// Largest compressed list over all runs.
    pub max_list: usize,
    pub tables_built: usize,
}

impl DpStats {
    fn absorb(&mut self, other: DpStats) {
        self.max_table = self.max_table.max(other.max_table);
        self.max_list = self.max_list.max(other.max_list);
        self.tables_built += other.tables_built;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpOptions {
    /// Worker threads for join subtrees; 1 runs sequentially.
    pub threads: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { threads: 1 }
    }
}

/// Counts list homomorphisms with the irr-base dynamic program.
pub fn count_dp(g: &Graph, l: &ListAssignment, td: &TreeDecomposition, h: &Graph) -> Result<BigUint> {
    count_dp_with(g, l, td, h, DpOptions::default()).map(|(c, _)| c)
}

pub fn count_dp_with(
    g: &Graph,
    l: &ListAssignment,
    td: &TreeDecomposition,
    h: &Graph,
    opts: DpOptions,
) -> Result<(BigUint, DpStats)> {
    l.check(g, h)?;
    ensure_valid(g, td)?;
    let classes = neighborhood_classes(h);
    let (g_comps, g_bip) = components_and_bipartition(g);
    let (_, h_bip) = components_and_bipartition(h);
    let mut stats = DpStats::default();
    let mut total = BigUint::one();
    for (ci, comp) in g_comps.iter().enumerate() {
        let mut keep = vec![false; g.vertex_count()];
        for &v in comp {
            keep[v] = true;
        }
        let nice = make_nice(&td.restrict(&keep))?;
        let g_sides = &g_bip.components[ci];
        let mut sum = BigUint::zero();
        for h_sides in &h_bip.components {
            let h_vertices = h_sides.vertices();
            let mut restricted = l.clone();
            for &v in comp {
                restricted.lists[v] =
                    l.get(v).iter().copied().filter(|u| h_vertices.binary_search(u).is_ok()).collect();
            }
            if comp.iter().any(|&v| restricted.get(v).is_empty()) {
                continue;
            }
            let instances = match h_sides {
                ComponentSides::Bipartite { x, y } => match split_orientations(&restricted, g_sides, (x, y)) {
                    Orientations::Zero => Vec::new(),
                    Orientations::Split(l1, l2) => vec![l1, l2],
                },
                ComponentSides::NonBipartite { .. } => vec![restricted],
            };
            for inst in instances {
                if comp.iter().any(|&v| inst.get(v).is_empty()) {
                    continue;
                }
                let wl = compress(&inst, &classes);
                let (c, s) = run_dp(g, &wl, &nice, h, opts);
                stats.absorb(s);
                sum += c;
            }
        }
        if sum.is_zero() {
            return Ok((sum, stats));
        }
        total *= sum;
    }
    Ok((total, stats))
}

type Table = FxHashMap<Vec<usize>, BigUint>;

fn unit_table() -> Table {
    std::iter::once((Vec::new(), BigUint::one())).collect()
}

struct DpContext<'a> {
    g: &'a Graph,
    wl: &'a WeightedLists,
    h: &'a Graph,
    nice: &'a NiceTreeDecomposition,
    /// Row-major adjacency matrix of `h`.
    h_adj: Vec<bool>,
}

impl DpContext<'_> {
    fn weight(&self, v: usize, u: usize) -> u64 {
        self.wl.lists[v].iter().find(|(r, _)| *r == u).map_or(0, |e| e.1)
    }

    fn apply(&self, node: usize, child: Table) -> Table {
        let nd = &self.nice.nodes[node];
        let mut out = Table::with_capacity_and_hasher(child.len(), Default::default());
        match nd.kind {
            NiceKind::Introduce(v) => {
                let pos = nd.bag.binary_search(&v).expect("introduced vertex is in the bag");
                let looped = self.g.has_loop(v);
                // positions in the child key of bag neighbors of v
                let nbrs: Vec<usize> = nd
                    .bag
                    .iter()
                    .enumerate()
                    .filter(|&(i, &w)| i != pos && self.g.has_edge(v, w))
                    .map(|(i, _)| if i < pos { i } else { i - 1 })
                    .collect();
                let hn = self.h.vertex_count();
                for (key, val) in child {
                    for &(u, _) in &self.wl.lists[v] {
                        if looped && !self.h_adj[u * hn + u] {
                            continue;
                        }
                        if nbrs.iter().any(|&i| !self.h_adj[u * hn + key[i]]) {
                            continue;
                        }
                        let mut k = Vec::with_capacity(key.len() + 1);
                        k.extend_from_slice(&key[..pos]);
                        k.push(u);
                        k.extend_from_slice(&key[pos..]);
                        out.insert(k, val.clone());
                    }
                }
            }
            NiceKind::Forget(v) => {
                let child_bag = &self.nice.nodes[nd.children[0]].bag;
                let pos = child_bag.binary_search(&v).expect("forgotten vertex is in the child bag");
                for (mut key, val) in child {
                    let u = key.remove(pos);
                    let w = self.weight(v, u);
                    *out.entry(key).or_insert_with(BigUint::zero) += val * w;
                }
            }
            NiceKind::Leaf | NiceKind::Join => unreachable!("chain nodes only"),
        }
        out
    }

    fn join(left: Table, right: Table) -> Table {
        let (small, large) = if left.len() <= right.len() { (left, right) } else { (right, left) };
        small
            .into_iter()
            .filter_map(|(k, v)| large.get(&k).map(|w| (k, v * w)))
            .collect()
    }

    /// Evaluates the subtree at `node`, walking chains iteratively.
    fn eval(&self, node: usize, parallel: bool, stats: &mut DpStats) -> Table {
        let mut chain = Vec::new();
        let mut cur = node;
        loop {
            match self.nice.nodes[cur].kind {
                NiceKind::Introduce(_) | NiceKind::Forget(_) => {
                    chain.push(cur);
                    cur = self.nice.nodes[cur].children[0];
                }
                _ => break,
            }
        }
        let mut table = match self.nice.nodes[cur].kind {
            NiceKind::Leaf => unit_table(),
            NiceKind::Join => {
                let (c0, c1) = (self.nice.nodes[cur].children[0], self.nice.nodes[cur].children[1]);
                let (t0, t1) = if parallel {
                    let (mut s0, mut s1) = (DpStats::default(), DpStats::default());
                    let (t0, t1) = rayon::join(|| self.eval(c0, true, &mut s0), || self.eval(c1, true, &mut s1));
                    stats.absorb(s0);
                    stats.absorb(s1);
                    (t0, t1)
                } else {
                    (self.eval(c0, false, stats), self.eval(c1, false, stats))
                };
                Self::join(t0, t1)
            }
            _ => unreachable!(),
        };
        stats.max_table = stats.max_table.max(table.len());
        stats.tables_built += 1;
        for &n in chain.iter().rev() {
            table = self.apply(n, table);
            stats.max_table = stats.max_table.max(table.len());
            stats.tables_built += 1;
        }
        table
    }

    /// Sequential post-order evaluation without recursion.
    fn eval_sequential(&self, stats: &mut DpStats) -> Table {
        let mut tables: Vec<Option<Table>> = vec![None; self.nice.nodes.len()];
        for node in self.nice.post_order() {
            let nd = &self.nice.nodes[node];
            let table = match nd.kind {
                NiceKind::Leaf => unit_table(),
                NiceKind::Join => {
                    let t0 = tables[nd.children[0]].take().expect("child evaluated");
                    let t1 = tables[nd.children[1]].take().expect("child evaluated");
                    Self::join(t0, t1)
                }
                _ => {
                    let child = tables[nd.children[0]].take().expect("child evaluated");
                    self.apply(node, child)
                }
            };
            stats.max_table = stats.max_table.max(table.len());
            stats.tables_built += 1;
            tables[node] = Some(table);
        }
        tables[self.nice.root].take().expect("root evaluated")
    }
}

/// One pool per thread count, built on first use.
fn pool(threads: usize) -> Option<Arc<rayon::ThreadPool>> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().ok()?;
    if let Some(p) = pools.get(&threads) {
        return Some(p.clone());
    }
    let p = Arc::new(rayon::ThreadPoolBuilder::new().num_threads(threads).stack_size(64 << 20).build().ok()?);
    pools.insert(threads, p.clone());
    Some(p)
}

fn run_dp(g: &Graph, wl: &WeightedLists, nice: &NiceTreeDecomposition, h: &Graph, opts: DpOptions) -> (BigUint, DpStats) {
    let hn = h.vertex_count();
    let mut h_adj = vec![false; hn * hn];
    for (u, v) in h.edges() {
        h_adj[u * hn + v] = true;
        h_adj[v * hn + u] = true;
    }
    let ctx = DpContext { g, wl, h, nice, h_adj };
    let mut stats = DpStats { max_list: wl.max_list_len(), ..DpStats::default() };
    let table = match (opts.threads > 1).then(|| pool(opts.threads)).flatten() {
        Some(p) => p.install(|| ctx.eval(nice.root, true, &mut stats)),
        None => ctx.eval_sequential(&mut stats),
    };
    let count = table.get(&Vec::new()).cloned().unwrap_or_else(BigUint::zero);
    (count, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4_like(h: &Graph, g: &Graph, l: &ListAssignment) -> (BigUint, BigUint) {
        let td = TreeDecomposition::single_bag(g.vertex_count());
        (count_brute(g, l, h).unwrap(), count_dp(g, l, &td, h).unwrap())
    }

    #[test]
    fn k2_into_k3() {
        let (b, d) = p4_like(&Graph::complete(3), &Graph::path(2), &ListAssignment::full(2, 3));
        assert_eq!(b, BigUint::from(6u32));
        assert_eq!(d, b);
    }

    #[test]
    fn pinned_endpoint() {
        let l = ListAssignment::new(vec![vec![0], vec![0, 1, 2, 3]]);
        let (b, d) = p4_like(&Graph::path(4), &Graph::path(2), &l);
        assert_eq!(b, BigUint::one());
        assert_eq!(d, b);
    }

    #[test]
    fn c4_into_p4() {
        let (b, d) = p4_like(&Graph::path(4), &Graph::cycle(4), &ListAssignment::full(4, 4));
        assert_eq!(b, BigUint::from(14u32));
        assert_eq!(d, b);
    }

    #[test]
    fn orientation_split() {
        let l = ListAssignment::full(2, 4);
        let g_sides = ComponentSides::Bipartite { x: vec![0], y: vec![1] };
        match split_orientations(&l, &g_sides, (&[0, 2], &[1, 3])) {
            Orientations::Split(l1, l2) => {
                assert_eq!(l1.lists(), &[vec![0, 2], vec![1, 3]]);
                assert_eq!(l2.lists(), &[vec![1, 3], vec![0, 2]]);
            }
            Orientations::Zero => panic!("bipartite instance"),
        }
    }

    #[test]
    fn compression_weights() {
        let h = Graph::complete_bipartite(2, 3);
        let classes = neighborhood_classes(&h);
        let wl = compress(&ListAssignment::new(vec![vec![2, 3, 4]]), &classes);
        assert_eq!(wl.lists, vec![vec![(2, 3)]]);
    }

    #[test]
    fn guard_refuses() {
        let g = Graph::new(30);
        let l = ListAssignment::full(30, 3);
        assert!(matches!(count_brute(&g, &l, &Graph::complete(3)), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn threads_agree() {
        let g = Graph::cycle(6);
        let order: Vec<usize> = (0..6).collect();
        let td = TreeDecomposition::from_elimination_order(&g, &order).unwrap();
        let l = ListAssignment::full(6, 5);
        let h = Graph::cycle(5);
        let a = count_dp_with(&g, &l, &td, &h, DpOptions { threads: 1 }).unwrap().0;
        let b = count_dp_with(&g, &l, &td, &h, DpOptions { threads: 3 }).unwrap().0;
        assert_eq!(a, b);
        assert_eq!(a, count_brute(&g, &l, &h).unwrap());
    }
}
