//! Static analysis of a target graph: neighborhood classes, irr, the
//! associated bipartite graph, and the graph of induced four-vertex paths.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{components_and_bipartition, ComponentSides, Graph};

/// Partition of the vertices by open neighborhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodClasses {
    /// Sorted classes, ordered by their minimum (the representative).
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl NeighborhoodClasses {
    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn neighborhood_classes(h: &Graph) -> NeighborhoodClasses {
    let mut by_nbhd: BTreeMap<&[usize], usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; h.vertex_count()];
    for v in 0..h.vertex_count() {
        let id = *by_nbhd.entry(h.neighbors(v)).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(v);
        class_of[v] = id;
    }
    NeighborhoodClasses { classes, class_of }
}

/// True when all open neighborhoods are pairwise distinct.
pub fn is_irredundant(h: &Graph, set: &[usize]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    set.iter().all(|&v| seen.insert(h.neighbors(v)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentIrr {
    pub vertices: Vec<usize>,
    pub bipartite: bool,
    pub value: usize,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrCertificate {
    pub value: usize,
    pub witness: Vec<usize>,
    pub components: Vec<ComponentIrr>,
}

/// Maximum irredundant set size per component (one-sided for bipartite
/// loop-free components), maximized over components.
pub fn irr(h: &Graph) -> Result<IrrCertificate> {
    if h.vertex_count() == 0 {
        return Err(Error::input("irr is undefined for the empty graph"));
    }
    let (_, bip) = components_and_bipartition(h);
    let mut components = Vec::new();
    for sides in &bip.components {
        let reps = |vs: &[usize]| -> Vec<usize> {
            let mut seen = BTreeMap::new();
            for &v in vs {
                seen.entry(h.neighbors(v)).or_insert(v);
            }
            let mut r: Vec<usize> = seen.into_values().collect();
            r.sort_unstable();
            r
        };
        let c = match sides {
            ComponentSides::Bipartite { x, y } => {
                let (rx, ry) = (reps(x), reps(y));
                let witness = if ry.len() > rx.len() { ry } else { rx };
                ComponentIrr { vertices: sides.vertices(), bipartite: true, value: witness.len(), witness }
            }
            ComponentSides::NonBipartite { vertices } => {
                let witness = reps(vertices);
                ComponentIrr { vertices: vertices.clone(), bipartite: false, value: witness.len(), witness }
            }
        };
        components.push(c);
    }
    let best = components.iter().max_by_key(|c| (c.value, std::cmp::Reverse(c.vertices[0]))).unwrap();
    Ok(IrrCertificate { value: best.value, witness: best.witness.clone(), components })
}

/// The doubled graph: `v'` is `v` and `v''` is `v + n`.
pub fn associated_bipartite(h: &Graph) -> Graph {
    let n = h.vertex_count();
    let mut out = Graph::new(2 * n);
    for (u, v) in h.edges() {
        out.add_edge(u, v + n).expect("in range");
        out.add_edge(v, u + n).expect("in range");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    ReflexiveClique,
    Biclique,
    Hard,
}

pub fn classify_components(h: &Graph) -> Vec<(Vec<usize>, ComponentKind)> {
    let (_, bip) = components_and_bipartition(h);
    bip.components
        .iter()
        .map(|sides| {
            let kind = match sides {
                ComponentSides::Bipartite { x, y } => {
                    if x.iter().all(|&u| y.iter().all(|&v| h.has_edge(u, v))) {
                        ComponentKind::Biclique
                    } else {
                        ComponentKind::Hard
                    }
                }
                ComponentSides::NonBipartite { vertices } => {
                    if vertices.iter().all(|&u| vertices.iter().all(|&v| h.has_edge(u, v))) {
                        ComponentKind::ReflexiveClique
                    } else {
                        ComponentKind::Hard
                    }
                }
            };
            (sides.vertices(), kind)
        })
        .collect()
}

/// True when `(a, b, c, d)` is an induced path `a-b-c-d` in `h`.
pub fn is_induced_p4(h: &Graph, p: [usize; 4]) -> bool {
    let [a, b, c, d] = p;
    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
    distinct
        && h.has_edge(a, b)
        && h.has_edge(b, c)
        && h.has_edge(c, d)
        && !h.has_edge(a, c)
        && !h.has_edge(b, d)
        && !h.has_edge(a, d)
        && [a, b, c, d].iter().all(|&v| !h.has_loop(v))
}

/// Every induced P4 as an ordered path, in the orientation with the smaller endpoint first.
pub fn induced_p4s(h: &Graph) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for b in 0..h.vertex_count() {
        for &c in h.neighbors(b) {
            if c == b {
                continue;
            }
            for &a in h.neighbors(b) {
                for &d in h.neighbors(c) {
                    let p = [a, b, c, d];
                    if a < d && is_induced_p4(h, p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P4Structure {
    /// Induced P4s as ordered paths.
    pub paths: Vec<[usize; 4]>,
    /// Adjacency including the loop at every vertex.
    pub adjacency: Vec<Vec<usize>>,
    /// Whether the target is connected, bipartite and irredundant.
    pub applicable: bool,
    pub connected: bool,
}

impl P4Structure {
    /// Shortest hop sequence between two P4 indices.
    pub fn shortest_route(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.paths.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut route = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    route.push(cur);
                }
                route.reverse();
                return Some(route);
            }
            for &w in &self.adjacency[u] {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    pub fn index_of_set(&self, p: [usize; 4]) -> Option<usize> {
        let mut key = p;
        key.sort_unstable();
        self.paths.iter().position(|q| {
            let mut k = *q;
            k.sort_unstable();
            k == key
        })
    }
}

pub fn p4_structure(h: &Graph) -> P4Structure {
    let (comps, bip) = components_and_bipartition(h);
    let bipartite = bip.components.iter().all(ComponentSides::is_bipartite);
    let applicable = bipartite
        && comps.len() == 1
        && is_irredundant(h, &(0..h.vertex_count()).collect::<Vec<_>>());
    let paths = if bipartite { induced_p4s(h) } else { Vec::new() };
    let side = |v: usize| bip.side(v).unwrap_or(0);
    let mut adjacency = vec![Vec::new(); paths.len()];
    for i in 0..paths.len() {
        for j in 0..paths.len() {
            let mut shared = [0usize; 2];
            for &v in &paths[i] {
                if paths[j].contains(&v) {
                    shared[side(v)] += 1;
                }
            }
            if shared[0] >= 2 || shared[1] >= 2 {
                adjacency[i].push(j);
            }
        }
    }
    let connected = paths.is_empty() || {
        let mut seen = vec![false; paths.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    P4Structure { paths, adjacency, applicable, connected }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub vertices: usize,
    pub edges: usize,
    pub irr: usize,
    pub irr_witness: Vec<usize>,
    pub neighborhood_classes: Vec<Vec<usize>>,
    pub components: Vec<ComponentReport>,
    pub associated_bipartite_edges: Vec<(usize, usize)>,
    pub p4_count: usize,
    pub p4_structure_applicable: bool,
    pub p4_structure_connected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub vertices: Vec<usize>,
    pub kind: ComponentKind,
    pub irr: usize,
}

/// Full report with 1-based vertex labels, serialized with a fixed field order.
pub fn analyze(h: &Graph) -> Result<AnalysisReport> {
    let cert = irr(h)?;
    let one = |vs: &[usize]| vs.iter().map(|v| v + 1).collect::<Vec<_>>();
    let kinds = classify_components(h);
    let components = kinds
        .iter()
        .zip(&cert.components)
        .map(|((vs, kind), c)| ComponentReport { vertices: one(vs), kind: *kind, irr: c.value })
        .collect();
    let p4 = p4_structure(h);
    Ok(AnalysisReport {
        vertices: h.vertex_count(),
        edges: h.edge_count(),
        irr: cert.value,
        irr_witness: one(&cert.witness),
        neighborhood_classes: neighborhood_classes(h).classes.iter().map(|c| one(c)).collect(),
        components,
        associated_bipartite_edges: associated_bipartite(h).edges().map(|(u, v)| (u + 1, v + 1)).collect(),
        p4_count: p4.paths.len(),
        p4_structure_applicable: p4.applicable,
        p4_structure_connected: p4.connected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn looped(g: &Graph) -> Graph {
        let mut g = g.clone();
        for v in 0..g.vertex_count() {
            g.add_edge(v, v).unwrap();
        }
        g
    }

    #[test]
    fn classes() {
        assert_eq!(neighborhood_classes(&Graph::complete_bipartite(2, 3)).len(), 2);
        assert_eq!(neighborhood_classes(&looped(&Graph::complete(4))).len(), 1);
        assert_eq!(neighborhood_classes(&Graph::path(4)).len(), 4);
    }

    #[test]
    fn irr_values() {
        assert_eq!(irr(&Graph::path(4)).unwrap().value, 2);
        for q in 3..=5 {
            assert_eq!(irr(&Graph::complete(q)).unwrap().value, q);
        }
        assert_eq!(irr(&Graph::complete_bipartite(3, 2)).unwrap().value, 1);
        assert_eq!(irr(&looped(&Graph::complete(3))).unwrap().value, 1);
        assert!(irr(&Graph::new(0)).is_err());
    }

    #[test]
    fn doubling() {
        let mut l = Graph::new(1);
        l.add_edge(0, 0).unwrap();
        assert_eq!(associated_bipartite(&l).edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let k2 = associated_bipartite(&Graph::complete(2));
        assert_eq!(k2.edges().collect::<Vec<_>>(), vec![(0, 3), (1, 2)]);
        let k3 = associated_bipartite(&Graph::complete(3));
        assert!(k3.is_connected() && k3.is_bipartite() && (0..6).all(|v| k3.degree(v) == 2));
    }

    #[test]
    fn p4_graphs() {
        let s = p4_structure(&Graph::path(4));
        assert_eq!(s.paths, vec![[0, 1, 2, 3]]);
        assert_eq!(s.adjacency, vec![vec![0]]);
        assert!(s.applicable && s.connected);
        assert!(p4_structure(&Graph::complete_bipartite(2, 2)).paths.is_empty());
        let p6 = p4_structure(&Graph::path(6));
        assert_eq!(p6.paths.len(), 3);
        assert!(p6.connected);
    }

    #[test]
    fn kinds() {
        assert_eq!(classify_components(&Graph::path(2))[0].1, ComponentKind::Biclique);
        assert_eq!(classify_components(&looped(&Graph::new(1)))[0].1, ComponentKind::ReflexiveClique);
        assert_eq!(classify_components(&Graph::path(4))[0].1, ComponentKind::Hard);
    }
}
