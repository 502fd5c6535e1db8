//! Tree decompositions: validation, nice normal form, splicing of gadget
//! copies, and Gaifman graphs of structures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::structures::Structure;

/// Bags plus an undirected bag tree. Path decompositions are the special
/// case where the tree is a path.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    /// Each bag is kept sorted and duplicate-free.
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags.into_iter().map(canonical_bag).collect();
        TreeDecomposition { bags, tree_edges }
    }

    /// The width-(n-1) fallback: one bag holding every vertex.
    pub fn single_bag(n: usize) -> Self {
        TreeDecomposition { bags: vec![(0..n).collect()], tree_edges: Vec::new() }
    }

    /// Path decomposition whose bags are given in path order.
    pub fn path(bags: Vec<Vec<usize>>) -> Self {
        let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(bags, edges)
    }

    /// Decomposition induced by an elimination ordering of `g`.
    ///
    /// Every vertex of `g` must occur exactly once in `order`.
    pub fn from_elimination_order(g: &Graph, order: &[usize]) -> Result<Self> {
        let n = g.vertex_count();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::input("elimination order is not a permutation of the vertices"));
            }
            pos[v] = i;
        }
        if order.len() != n {
            return Err(Error::input("elimination order is not a permutation of the vertices"));
        }
        let mut fill: Vec<BTreeSet<usize>> =
            (0..n).map(|v| g.neighbors(v).iter().copied().filter(|&w| w != v).collect()).collect();
        let mut bags = Vec::with_capacity(n);
        let mut later_sets = Vec::with_capacity(n);
        for &v in order {
            let later: Vec<usize> = fill[v].iter().copied().filter(|&w| pos[w] > pos[v]).collect();
            for (i, &a) in later.iter().enumerate() {
                for &b in &later[i + 1..] {
                    fill[a].insert(b);
                    fill[b].insert(a);
                }
            }
            let mut bag = later.clone();
            bag.push(v);
            bags.push(bag);
            later_sets.push(later);
        }
        let mut edges = Vec::new();
        let mut roots = Vec::new();
        for (i, later) in later_sets.iter().enumerate() {
            match later.iter().map(|&w| pos[w]).min() {
                Some(p) => edges.push((i, p)),
                None => roots.push(i),
            }
        }
        for w in roots.windows(2) {
            edges.push((w[0], w[1]));
        }
        Ok(TreeDecomposition::new(bags, edges))
    }

    /// Greedy min-degree elimination; ties go to the smallest vertex.
    pub fn min_degree(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut fill: Vec<BTreeSet<usize>> =
            (0..n).map(|v| g.neighbors(v).iter().copied().filter(|&w| w != v).collect()).collect();
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n).filter(|&v| !done[v]).min_by_key(|&v| (fill[v].len(), v)).expect("vertex left");
            let nb: Vec<usize> = fill[v].iter().copied().collect();
            for (i, &a) in nb.iter().enumerate() {
                fill[a].remove(&v);
                for &b in &nb[i + 1..] {
                    fill[a].insert(b);
                    fill[b].insert(a);
                }
            }
            done[v] = true;
            order.push(v);
        }
        Self::from_elimination_order(g, &order).expect("order is a permutation")
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    /// Largest vertex index mentioned plus one.
    pub fn vertex_bound(&self) -> usize {
        self.bags.iter().flatten().map(|&v| v + 1).max().unwrap_or(0)
    }

    /// Same tree with every bag intersected with `keep`.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        let bags = self
            .bags
            .iter()
            .map(|b| b.iter().copied().filter(|&v| keep.get(v).copied().unwrap_or(false)).collect())
            .collect();
        TreeDecomposition { bags, tree_edges: self.tree_edges.clone() }
    }

    /// Replaces every vertex by its images under `map`.
    pub fn map_vertices(&self, map: impl Fn(usize) -> Vec<usize>) -> Self {
        let bags = self.bags.iter().map(|b| b.iter().flat_map(|&v| map(v)).collect()).collect();
        TreeDecomposition::new(bags, self.tree_edges.clone())
    }

    pub fn is_path(&self) -> bool {
        let mut deg = vec![0usize; self.bags.len()];
        for &(i, j) in &self.tree_edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.iter().all(|&d| d <= 2) && self.tree_structure_ok().is_ok()
    }

    /// Bag indices in path order when the tree is a path.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if !self.is_path() {
            return None;
        }
        if self.bags.is_empty() {
            return Some(Vec::new());
        }
        let adj = self.adjacency();
        let start = (0..self.bags.len()).find(|&i| adj[i].len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(i, j) in &self.tree_edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    fn check_indices(&self, n: usize) -> Result<()> {
        for (i, bag) in self.bags.iter().enumerate() {
            if let Some(&v) = bag.iter().find(|&&v| v >= n) {
                return Err(Error::input(format!("bag {i} mentions vertex {v}, graph has {n} vertices")));
            }
        }
        for &(i, j) in &self.tree_edges {
            if i >= self.bags.len() || j >= self.bags.len() {
                return Err(Error::input(format!("tree edge ({i}, {j}) refers to a missing bag")));
            }
        }
        Ok(())
    }

    fn tree_structure_ok(&self) -> std::result::Result<(), String> {
        let k = self.bags.len();
        if k == 0 {
            return Ok(());
        }
        if self.tree_edges.len() != k - 1 {
            return Err(format!("{} bags but {} tree edges", k, self.tree_edges.len()));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err("bag tree is disconnected".into())
        }
    }

    fn occurrence_violations(&self) -> Vec<Violation> {
        if self.tree_structure_ok().is_err() {
            return self.occurrence_violations_search();
        }
        // In a forest, the bags holding v form (holders - shared edges) pieces.
        let n = self.vertex_bound();
        let mut holders = vec![0usize; n];
        for bag in &self.bags {
            for &v in bag {
                holders[v] += 1;
            }
        }
        let mut shared = vec![0usize; n];
        for &(i, j) in &self.tree_edges {
            let (a, b) = (&self.bags[i], &self.bags[j]);
            let (mut x, mut y) = (0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        shared[a[x]] += 1;
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
        if (0..n).all(|v| holders[v] == 0 || holders[v] == shared[v] + 1) {
            return Vec::new();
        }
        self.occurrence_violations_search()
    }

    fn occurrence_violations_search(&self) -> Vec<Violation> {
        let adj = self.adjacency();
        let mut holders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                holders.entry(v).or_default().push(i);
            }
        }
        let mut out = Vec::new();
        for (v, bags) in holders {
            let inside: BTreeSet<usize> = bags.iter().copied().collect();
            let mut pieces = 0;
            let mut seen = BTreeSet::new();
            for &b in &bags {
                if seen.contains(&b) {
                    continue;
                }
                pieces += 1;
                let mut stack = vec![b];
                seen.insert(b);
                while let Some(u) = stack.pop() {
                    for &w in &adj[u] {
                        if inside.contains(&w) && seen.insert(w) {
                            stack.push(w);
                        }
                    }
                }
            }
            if pieces > 1 {
                out.push(Violation::OccurrenceDisconnected { vertex: v, pieces, bags });
            }
        }
        out
    }
}

fn canonical_bag(mut bag: Vec<usize>) -> Vec<usize> {
    bag.sort_unstable();
    bag.dedup();
    bag
}

/// One failed decomposition axiom, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotATree { reason: String },
    VertexUncovered { vertex: usize },
    EdgeUncovered { u: usize, v: usize },
    OccurrenceDisconnected { vertex: usize, pieces: usize, bags: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree { reason } => write!(f, "not a tree: {reason}"),
            Violation::VertexUncovered { vertex } => write!(f, "vertex {} is in no bag", vertex + 1),
            Violation::EdgeUncovered { u, v } => write!(f, "edge {} {} is in no bag", u + 1, v + 1),
            Violation::OccurrenceDisconnected { vertex, pieces, .. } => {
                write!(f, "bags containing vertex {} form {pieces} pieces", vertex + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub width: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three decomposition axioms plus tree shape.
///
/// Out-of-range vertices or bag indices are an input error rather than a violation.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Result<ValidationReport> {
    td.check_indices(g.vertex_count())?;
    let mut violations = Vec::new();
    if let Err(reason) = td.tree_structure_ok() {
        violations.push(Violation::NotATree { reason });
    }
    let mut covered = vec![false; g.vertex_count()];
    for bag in &td.bags {
        for &v in bag {
            covered[v] = true;
        }
    }
    for (v, &c) in covered.iter().enumerate() {
        if !c {
            violations.push(Violation::VertexUncovered { vertex: v });
        }
    }
    let mut holders = vec![Vec::new(); g.vertex_count()];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            holders[v].push(i);
        }
    }
    for (u, v) in g.edges() {
        if u == v || !covered[u] || !covered[v] {
            continue;
        }
        let ok = holders[u].iter().any(|&b| td.bags[b].binary_search(&v).is_ok());
        if !ok {
            violations.push(Violation::EdgeUncovered { u, v });
        }
    }
    violations.extend(td.occurrence_violations());
    Ok(ValidationReport { violations, width: td.width() })
}

/// Validates and turns a report with violations into an input error.
pub fn ensure_valid(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    let report = validate(g, td)?;
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::input(format!("invalid tree decomposition: {v}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition stored as an arena; the root bag is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Checks the local node-type invariants; returns the first failure.
    pub fn check(&self) -> std::result::Result<(), String> {
        if !self.nodes[self.root].bag.is_empty() {
            return Err("root bag is not empty".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let child_bag = |k: usize| &self.nodes[node.children[k]].bag;
            let ok = match node.kind {
                NiceKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                NiceKind::Introduce(v) => {
                    node.children.len() == 1 && {
                        let mut expect = child_bag(0).clone();
                        !expect.contains(&v) && {
                            expect.push(v);
                            expect.sort_unstable();
                            expect == node.bag
                        }
                    }
                }
                NiceKind::Forget(v) => {
                    node.children.len() == 1 && {
                        let mut expect = node.bag.clone();
                        !expect.contains(&v) && {
                            expect.push(v);
                            expect.sort_unstable();
                            expect == *child_bag(0)
                        }
                    }
                }
                NiceKind::Join => {
                    node.children.len() == 2 && *child_bag(0) == node.bag && *child_bag(1) == node.bag
                }
            };
            if !ok {
                return Err(format!("node {i} ({:?}) breaks its invariant", node.kind));
            }
        }
        Ok(())
    }

    /// The underlying plain decomposition (one bag per node).
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let mut edges = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                edges.push((i, c));
            }
        }
        TreeDecomposition { bags, tree_edges: edges }
    }

    /// Node indices with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((u, done)) = stack.pop() {
            if done {
                order.push(u);
            } else {
                stack.push((u, true));
                for &c in self.nodes[u].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Chain from `node` (with bag `from`) to a node with bag `to`: forgets first, then introduces.
    fn morph(&mut self, mut node: usize, from: &[usize], to: &[usize]) -> usize {
        let mut bag: Vec<usize> = from.to_vec();
        for &v in from {
            if to.binary_search(&v).is_err() {
                bag.retain(|&w| w != v);
                node = self.push(NiceKind::Forget(v), bag.clone(), vec![node]);
            }
        }
        for &v in to {
            if from.binary_search(&v).is_err() {
                let pos = bag.binary_search(&v).unwrap_err();
                bag.insert(pos, v);
                node = self.push(NiceKind::Introduce(v), bag.clone(), vec![node]);
            }
        }
        node
    }
}

/// Converts a decomposition into nice form with the same width, rooted at bag 0.
///
/// Vertices are introduced and forgotten in ascending order along each chain.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    td.check_indices(td.vertex_bound())?;
    if let Err(reason) = td.tree_structure_ok() {
        return Err(Error::input(format!("cannot normalize: {reason}")));
    }
    if let Some(v) = td.occurrence_violations().first() {
        return Err(Error::input(format!("cannot normalize: {v}")));
    }
    let mut b = NiceBuilder { nodes: Vec::new() };
    if td.bags.is_empty() {
        let root = b.push(NiceKind::Leaf, Vec::new(), Vec::new());
        return Ok(NiceTreeDecomposition { nodes: b.nodes, root });
    }
    let adj = td.adjacency();
    let k = td.bags.len();
    let mut parent = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in adj[u].iter().rev() {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let mut result = vec![usize::MAX; k];
    for &t in order.iter().rev() {
        let bag = &td.bags[t];
        let children: Vec<usize> = adj[t].iter().copied().filter(|&c| parent[c] == t).collect();
        let mut parts = Vec::new();
        if children.is_empty() {
            let leaf = b.push(NiceKind::Leaf, Vec::new(), Vec::new());
            parts.push(b.morph(leaf, &[], bag));
        }
        for c in children {
            parts.push(b.morph(result[c], &td.bags[c], bag));
        }
        let mut cur = parts[0];
        for &p in &parts[1..] {
            cur = b.push(NiceKind::Join, bag.clone(), vec![cur, p]);
        }
        result[t] = cur;
    }
    let root = b.morph(result[0], &td.bags[0], &[]);
    Ok(NiceTreeDecomposition { nodes: b.nodes, root })
}

/// Gadget copies to splice next to the first bag holding `anchor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub anchor: Vec<usize>,
    /// Non-interface vertices of each copy; one new bag per copy.
    pub copies: Vec<Vec<usize>>,
}

/// How gadget copies enter a decomposition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Splice {
    /// Pendant bags `anchor ∪ copy` hanging off the host bag.
    #[default]
    Pendant,
    /// Bags `X' ∪ copy` spliced in after the host `X'` when the input is a path.
    KeepPath,
}

/// Adds one bag per gadget copy next to the first bag `X'` containing the anchor.
///
/// With [`Splice::Pendant`] the width is at most `max(t, |anchor| + |copy| - 1)`.
/// With [`Splice::KeepPath`] path decompositions stay paths of width at most `t + |copy|`.
pub fn td_for_augmented_instance(
    td: &TreeDecomposition,
    insertions: &[Insertion],
    splice: Splice,
) -> Result<TreeDecomposition> {
    let mut out = td.clone();
    let path = splice == Splice::KeepPath && td.is_path();
    for ins in insertions {
        let host = out
            .bags
            .iter()
            .position(|b| ins.anchor.iter().all(|v| b.binary_search(v).is_ok()))
            .ok_or_else(|| {
                Error::Construction(format!("no bag contains the anchor {:?}", ins.anchor))
            })?;
        let copies: Vec<&Vec<usize>> = ins.copies.iter().filter(|c| !c.is_empty()).collect();
        if copies.is_empty() {
            continue;
        }
        if !path {
            for copy in copies {
                let bag = ins.anchor.iter().chain(copy.iter()).copied().collect();
                out.bags.push(canonical_bag(bag));
                out.tree_edges.push((host, out.bags.len() - 1));
            }
            continue;
        }
        let succ = out.path_order().and_then(|order| {
            let i = order.iter().position(|&b| b == host)?;
            order.get(i + 1).copied()
        });
        let succ_edge = succ.and_then(|s| {
            out.tree_edges.iter().position(|&(i, j)| (i, j) == (host, s) || (i, j) == (s, host))
        });
        let mut prev = host;
        for copy in copies {
            let mut bag = out.bags[host].clone();
            bag.extend(copy.iter().copied());
            out.bags.push(canonical_bag(bag));
            let id = out.bags.len() - 1;
            out.tree_edges.push((prev, id));
            prev = id;
        }
        if let (Some(e), Some(s)) = (succ_edge, succ) {
            out.tree_edges[e] = (prev, s);
        }
    }
    Ok(out)
}

/// Gaifman graph: distinct elements are adjacent when they share a tuple.
pub fn gaifman(s: &Structure) -> Graph {
    let mut g = Graph::new(s.universe());
    for rel in s.relations().values() {
        for t in &rel.tuples {
            for (i, &u) in t.iter().enumerate() {
                for &v in &t[i + 1..] {
                    if u != v {
                        g.add_edge(u, v).expect("tuple entries are in range");
                    }
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_is_valid() {
        let g = Graph::complete(4);
        let r = validate(&g, &TreeDecomposition::single_bag(4)).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.width, 3);
    }

    #[test]
    fn path_p3() {
        let g = Graph::path(3);
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2]]);
        let r = validate(&g, &td).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.width, 1);
    }

    #[test]
    fn uncovered_edge() {
        let g = Graph::path(3);
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![2]]);
        let r = validate(&g, &td).unwrap();
        assert_eq!(r.violations, vec![Violation::EdgeUncovered { u: 1, v: 2 }]);
    }

    #[test]
    fn malformed_indices_are_input_errors() {
        let g = Graph::path(2);
        let td = TreeDecomposition::path(vec![vec![0, 5]]);
        assert!(matches!(validate(&g, &td), Err(Error::Input(_))));
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![(0, 3)]);
        assert!(matches!(validate(&g, &td), Err(Error::Input(_))));
    }

    #[test]
    fn disconnected_occurrence() {
        let g = Graph::path(3);
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2], vec![0]]);
        let r = validate(&g, &td).unwrap();
        assert!(matches!(r.violations[0], Violation::OccurrenceDisconnected { vertex: 0, pieces: 2, .. }));
    }

    #[test]
    fn nice_single_bag() {
        let td = TreeDecomposition::single_bag(2);
        let nice = make_nice(&td).unwrap();
        nice.check().unwrap();
        let kinds: Vec<NiceKind> = nice.post_order().iter().map(|&i| nice.nodes[i].kind).collect();
        assert_eq!(
            kinds,
            vec![
                NiceKind::Leaf,
                NiceKind::Introduce(0),
                NiceKind::Introduce(1),
                NiceKind::Forget(0),
                NiceKind::Forget(1)
            ]
        );
    }

    #[test]
    fn nice_path_p4() {
        let g = Graph::path(4);
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        let nice = make_nice(&td).unwrap();
        nice.check().unwrap();
        assert_eq!(nice.width(), 1);
        assert!(validate(&g, &nice.to_tree_decomposition()).unwrap().is_valid());
    }

    #[test]
    fn splicing() {
        let g = Graph::cycle(4);
        let td = TreeDecomposition::path(vec![vec![0, 1, 2], vec![0, 2, 3]]);
        assert_eq!(td_for_augmented_instance(&td, &[], Splice::KeepPath).unwrap(), td);
        let ins = Insertion { anchor: vec![2, 3], copies: vec![vec![4, 5], vec![6, 7]] };
        let out = td_for_augmented_instance(&td, &[ins], Splice::KeepPath).unwrap();
        assert!(out.is_path());
        let mut g2 = g.clone();
        for _ in 0..4 {
            g2.add_vertex();
        }
        for (a, b) in [(2, 4), (4, 5), (5, 3), (2, 6), (6, 7), (7, 3)] {
            g2.add_edge(a, b).unwrap();
        }
        assert!(validate(&g2, &out).unwrap().is_valid());
        assert_eq!(out.width(), td.width() + 2);
        let missing = Insertion { anchor: vec![1, 3], copies: vec![vec![4]] };
        assert!(matches!(td_for_augmented_instance(&td, &[missing], Splice::KeepPath), Err(Error::Construction(_))));
    }

    #[test]
    fn pendant_copies_on_trees() {
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 3], vec![1, 4], vec![2, 5]], vec![(0, 1), (0, 2), (0, 3)]);
        let ins = Insertion { anchor: vec![3], copies: vec![vec![6, 7, 8]] };
        let out = td_for_augmented_instance(&td, &[ins], Splice::KeepPath).unwrap();
        assert_eq!(out.bags.last().unwrap(), &vec![3, 6, 7, 8]);
        assert_eq!(out.tree_edges.last(), Some(&(1, 4)));
        assert_eq!(out.width(), 3);
    }

    #[test]
    fn elimination_orders_give_valid_decompositions() {
        let g = Graph::cycle(6);
        let td = TreeDecomposition::from_elimination_order(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(validate(&g, &td).unwrap().is_valid());
        assert_eq!(td.width(), 2);
    }
}
