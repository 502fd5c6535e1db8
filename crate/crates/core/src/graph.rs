//! Undirected graphs with optional loops.
//!
//! Vertices are dense indices `0..n`. A loop at `v` is stored as the pair
//! `(v, v)` and puts `v` into its own neighborhood.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n], edges: BTreeSet::new() }
    }

    /// Builds a graph from an edge list; `(v, v)` is a loop. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        let key = (u.min(v), u.max(v));
        if self.edges.insert(key) {
            insert_sorted(&mut self.adj[u], v);
            if u != v {
                insert_sorted(&mut self.adj[v], u);
            }
        }
        Ok(())
    }

    /// Appends an isolated vertex and returns its index.
    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    pub fn has_any_loop(&self) -> bool {
        (0..self.n).any(|v| self.has_loop(v))
    }

    /// Sorted neighbors of `v`, including `v` itself when it carries a loop.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Number of incident edges; a loop counts once.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighborhood(&self, v: usize) -> Result<BTreeSet<usize>> {
        self.check(v)?;
        Ok(self.adj[v].iter().copied().collect())
    }

    /// Union of the neighborhoods of `set`.
    pub fn neighborhood_of_set(&self, set: &[usize]) -> BTreeSet<usize> {
        set.iter().flat_map(|&v| self.adj[v].iter().copied()).collect()
    }

    /// BFS distances from `src`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path length, or `None` when `u` and `v` are disconnected.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.bfs_distances(u)[v])
    }

    /// Minimum distance between two vertex sets.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Option<usize> {
        a.iter()
            .filter_map(|&u| {
                let d = self.bfs_distances(u);
                b.iter().filter_map(|&v| d[v]).min()
            })
            .min()
    }

    /// Lexicographically least shortest path from any vertex of `from` to any vertex of `to`.
    ///
    /// Paths are compared as vertex sequences among all shortest ones.
    pub fn least_shortest_path(&self, from: &[usize], to: &[usize]) -> Option<Vec<usize>> {
        let target: BTreeSet<usize> = to.iter().copied().collect();
        let len = self.set_distance(from, to)?;
        // distance to the target set, used to extend greedily along shortest paths
        let mut dist_to = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &t in &target {
            dist_to[t] = Some(0);
            queue.push_back(t);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist_to[u].unwrap();
            for &w in &self.adj[u] {
                if dist_to[w].is_none() {
                    dist_to[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        let start = *from.iter().filter(|&&u| dist_to[u] == Some(len)).min()?;
        let mut path = vec![start];
        let mut cur = start;
        while dist_to[cur] != Some(0) {
            let need = dist_to[cur].unwrap() - 1;
            cur = *self.adj[cur].iter().find(|&&w| dist_to[w] == Some(need))?;
            path.push(cur);
        }
        Some(path)
    }

    /// Connected components, each sorted, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_bipartite(&self) -> bool {
        components_and_bipartition(self)
            .1
            .components
            .iter()
            .all(|c| matches!(c, ComponentSides::Bipartite { .. }))
    }

    /// Subgraph induced by `vertices`, relabelled to `0..k` in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] != usize::MAX && index[w] >= i {
                    g.add_edge(i, index[w]).expect("indices in range");
                }
            }
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        let off = self.n;
        for _ in 0..other.n {
            g.add_vertex();
        }
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off).expect("indices in range");
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).expect("valid cycle");
        }
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("valid clique");
            }
        }
        g
    }

    /// Clique with a loop on every vertex.
    pub fn reflexive_complete(n: usize) -> Graph {
        let mut g = Graph::complete(n);
        for v in 0..n {
            g.add_edge(v, v).expect("valid loop");
        }
        g
    }

    /// `K_{s,t}` with sides `0..s` and `s..s+t`.
    pub fn complete_bipartite(s: usize, t: usize) -> Graph {
        let mut g = Graph::new(s + t);
        for u in 0..s {
            for v in s..s + t {
                g.add_edge(u, v).expect("valid biclique");
            }
        }
        g
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::input(format!("vertex {v} out of range for a graph on {} vertices", self.n)))
        }
    }
}

fn insert_sorted(list: &mut Vec<usize>, v: usize) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

/// Two-coloring of one connected component, or the marker for a nonbipartite one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentSides {
    /// `x` holds the smallest vertex of the component.
    Bipartite { x: Vec<usize>, y: Vec<usize> },
    NonBipartite { vertices: Vec<usize> },
}

impl ComponentSides {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            ComponentSides::Bipartite { x, y } => {
                let mut all: Vec<usize> = x.iter().chain(y).copied().collect();
                all.sort_unstable();
                all
            }
            ComponentSides::NonBipartite { vertices } => vertices.clone(),
        }
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self, ComponentSides::Bipartite { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub components: Vec<ComponentSides>,
    /// Index into `components` for every vertex.
    pub component_of: Vec<usize>,
}

impl Bipartition {
    /// Side of `v` (0 for X, 1 for Y) when its component is bipartite.
    pub fn side(&self, v: usize) -> Option<usize> {
        match &self.components[self.component_of[v]] {
            ComponentSides::Bipartite { x, .. } => Some(if x.binary_search(&v).is_ok() { 0 } else { 1 }),
            ComponentSides::NonBipartite { .. } => None,
        }
    }
}

/// Components (ordered by smallest vertex) together with their two-colorings.
pub fn components_and_bipartition(g: &Graph) -> (Vec<Vec<usize>>, Bipartition) {
    let comps = g.components();
    let mut component_of = vec![0; g.vertex_count()];
    let mut color = vec![usize::MAX; g.vertex_count()];
    let mut sides = Vec::with_capacity(comps.len());
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            component_of[v] = ci;
        }
        let mut ok = true;
        color[comp[0]] = 0;
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if color[w] == usize::MAX {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    ok = false;
                }
            }
        }
        if ok {
            let (x, y): (Vec<usize>, Vec<usize>) = comp.iter().partition(|&&v| color[v] == 0);
            sides.push(ComponentSides::Bipartite { x, y });
        } else {
            sides.push(ComponentSides::NonBipartite { vertices: comp.clone() });
        }
    }
    (comps, Bipartition { components: sides, component_of })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p4_neighborhoods() {
        let p4 = Graph::path(4);
        assert_eq!(p4.neighborhood(1).unwrap(), BTreeSet::from([0, 2]));
        let mut looped = Graph::new(1);
        looped.add_edge(0, 0).unwrap();
        assert_eq!(looped.neighborhood(0).unwrap(), BTreeSet::from([0]));
        assert_eq!(looped.degree(0), 1);
        assert!(p4.neighborhood(4).is_err());
    }

    #[test]
    fn distances() {
        let p4 = Graph::path(4);
        assert_eq!(p4.distance(0, 3).unwrap(), Some(3));
        assert_eq!(Graph::cycle(6).distance(0, 3).unwrap(), Some(3));
        let two = Graph::new(2);
        assert_eq!(two.distance(0, 1).unwrap(), None);
        assert_eq!(two.distance(1, 1).unwrap(), Some(0));
    }

    #[test]
    fn bipartitions() {
        let (comps, bip) = components_and_bipartition(&Graph::path(4));
        assert_eq!(comps.len(), 1);
        assert_eq!(bip.components[0], ComponentSides::Bipartite { x: vec![0, 2], y: vec![1, 3] });
        let (_, bip) = components_and_bipartition(&Graph::complete(3));
        assert!(!bip.components[0].is_bipartite());
        let g = Graph::path(4).disjoint_union(&Graph::path(2));
        let (comps, bip) = components_and_bipartition(&g);
        assert_eq!(comps, vec![vec![0, 1, 2, 3], vec![4, 5]]);
        assert!(bip.components.iter().all(|c| c.is_bipartite()));
        let mut looped = Graph::path(2);
        looped.add_edge(1, 1).unwrap();
        assert!(!looped.is_bipartite());
    }

    #[test]
    fn least_path_prefers_small_labels() {
        let g = Graph::cycle(6);
        assert_eq!(g.least_shortest_path(&[0], &[3]), Some(vec![0, 1, 2, 3]));
        assert_eq!(g.least_shortest_path(&[0, 1], &[4]), Some(vec![0, 5, 4]));
    }
}
