//! Reduction pipeline: #SAT to #CSP, #CSP to list homomorphisms, the lifts
//! between general and bipartite targets, pathwidth padding, and the two
//! non-list corollaries.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::analysis::{associated_bipartite, irr, neighborhood_classes};
use crate::decomposition::{ensure_valid, gaifman, TreeDecomposition};
use crate::error::{Error, Result};
use crate::gadgets::{realize_relation_over_s, P4Anchor};
use crate::graph::{components_and_bipartition, ComponentSides, Graph};
use crate::homcount::{count_dp, ListAssignment};
use crate::realization::{structure_to_instance, symbol_of, Evaluator, Lab, Peel};
use crate::structures::{all_homomorphisms, count_structure_dp, graph_as_structure, CspInstance, Relation, Structure};

/// A CNF formula with variables `1..=variables` and DIMACS-style literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub variables: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(variables: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for c in &clauses {
            if c.is_empty() {
                return Err(Error::input("empty clause"));
            }
            if let Some(l) = c.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > variables) {
                return Err(Error::input(format!("literal {l} out of range")));
            }
        }
        Ok(CnfFormula { variables, clauses })
    }

    pub fn width(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// 0-based variables that occur in no clause.
    pub fn free_variables(&self) -> Vec<usize> {
        let used: BTreeSet<usize> = self.clauses.iter().flatten().map(|l| l.unsigned_abs() as usize - 1).collect();
        (0..self.variables).filter(|v| !used.contains(v)).collect()
    }

    /// Satisfies `clause` under `value` (indexed by 0-based variable).
    fn satisfied(clause: &[i64], value: impl Fn(usize) -> bool) -> bool {
        clause.iter().any(|&l| value(l.unsigned_abs() as usize - 1) == (l > 0))
    }

    /// Model count by enumeration.
    pub fn count_brute(&self) -> Result<BigUint> {
        if self.variables > 26 {
            return Err(Error::SizeGuard(format!("{} variables are too many to enumerate", self.variables)));
        }
        let mut count = 0u64;
        for m in 0u64..1 << self.variables {
            if self.clauses.iter().all(|c| Self::satisfied(c, |v| m >> v & 1 == 1)) {
                count += 1;
            }
        }
        Ok(BigUint::from(count))
    }
}

/// Grouping of `t` Boolean variables into `p` variables over a domain of size `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupingParameters {
    pub p: usize,
    pub t: usize,
    pub delta: BigRational,
    pub q: usize,
}

fn rpow(x: &BigRational, n: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..n {
        out *= x;
    }
    out
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GroupingParameters {
    /// Checks `(q - eps)^p <= (2 - delta)^t <= 2^t <= q^p` exactly.
    pub fn check(&self, eps: &BigRational) -> Result<()> {
        let q = rat(self.q as i64);
        let two = rat(2);
        if self.p == 0 || self.t == 0 || self.q < 2 {
            return Err(Error::precondition("grouping needs p, t >= 1 and q >= 2"));
        }
        if *eps <= BigRational::zero() || *eps >= q {
            return Err(Error::precondition("epsilon must lie strictly between 0 and q"));
        }
        if self.delta <= BigRational::zero() || self.delta >= two {
            return Err(Error::precondition("delta must lie strictly between 0 and 2"));
        }
        let ok = rpow(&(&q - eps), self.p) <= rpow(&(&two - &self.delta), self.t)
            && BigUint::from(2u32).pow(self.t as u32) <= BigUint::from(self.q).pow(self.p as u32);
        if !ok {
            return Err(Error::precondition(format!(
                "grouping inequality fails for p = {}, t = {}, delta = {}",
                self.p, self.t, self.delta
            )));
        }
        Ok(())
    }

    /// Least `p`, then least `t`, both at most 64, with `delta = 2^-k` for the least workable `k`.
    pub fn search(q: usize, eps: &BigRational) -> Result<Self> {
        for p in 1..=64 {
            for t in 1..=64 {
                for k in 1..=64u32 {
                    let delta = BigRational::new(BigInt::one(), BigInt::from(2u32).pow(k));
                    let cand = GroupingParameters { p, t, delta, q };
                    if cand.check(eps).is_ok() {
                        return Ok(cand);
                    }
                    if BigUint::from(2u32).pow(t as u32) > BigUint::from(q).pow(p as u32) {
                        break;
                    }
                }
            }
        }
        Err(Error::precondition(format!("no grouping parameters with p, t <= 64 for q = {q} and epsilon = {eps}")))
    }
}

/// A CSP whose count times `multiplier` is the formula's model count.
#[derive(Clone, Debug)]
pub struct SatCsp {
    pub csp: CspInstance,
    pub multiplier: BigUint,
    /// 0-based formula variables per group, most significant first.
    pub groups: Vec<Vec<usize>>,
    pub params: GroupingParameters,
}

/// Base-`q` digits of `value`, most significant first, padded to `p` digits.
pub fn encode(value: u64, q: usize, p: usize) -> Vec<usize> {
    let mut digits = vec![0; p];
    let mut v = value;
    for d in digits.iter_mut().rev() {
        *d = (v % q as u64) as usize;
        v /= q as u64;
    }
    digits
}

pub fn sat_to_csp(f: &CnfFormula, params: &GroupingParameters) -> Result<SatCsp> {
    if BigUint::from(2u32).pow(params.t as u32) > BigUint::from(params.q).pow(params.p as u32) {
        return Err(Error::precondition("2^t exceeds q^p"));
    }
    if params.t > 20 {
        return Err(Error::SizeGuard("groups of more than 20 variables".into()));
    }
    let free = f.free_variables();
    let used: Vec<usize> = (0..f.variables).filter(|v| !free.contains(v)).collect();
    let groups: Vec<Vec<usize>> = used.chunks(params.t).map(<[usize]>::to_vec).collect();
    let mut group_of = vec![usize::MAX; f.variables];
    for (i, g) in groups.iter().enumerate() {
        for &v in g {
            group_of[v] = i;
        }
    }
    let (p, q) = (params.p, params.q);
    let mut csp = CspInstance::new(groups.len() * p, q);
    for clause in &f.clauses {
        let touched: BTreeSet<usize> = clause.iter().map(|l| group_of[l.unsigned_abs() as usize - 1]).collect();
        let touched: Vec<usize> = touched.into_iter().collect();
        let scope: Vec<usize> = touched.iter().flat_map(|&g| (g * p..(g + 1) * p).collect::<Vec<_>>()).collect();
        let mut allowed = BTreeSet::new();
        let sizes: Vec<usize> = touched.iter().map(|&g| groups[g].len()).collect();
        let total_bits: usize = sizes.iter().sum();
        for m in 0u64..1 << total_bits {
            let mut value = vec![false; f.variables];
            let mut offset = 0;
            let mut parts = Vec::with_capacity(touched.len());
            for (k, &g) in touched.iter().enumerate() {
                let bits = (m >> offset) & ((1 << sizes[k]) - 1);
                offset += sizes[k];
                for (j, &v) in groups[g].iter().enumerate() {
                    value[v] = bits >> (sizes[k] - 1 - j) & 1 == 1;
                }
                parts.push(bits);
            }
            if CnfFormula::satisfied(clause, |v| value[v]) {
                allowed.insert(parts.iter().flat_map(|&b| encode(b, q, p)).collect::<Vec<_>>());
            }
        }
        csp.add_constraint(scope, allowed)?;
    }
    Ok(SatCsp { csp, multiplier: BigUint::from(2u32).pow(free.len() as u32), groups, params: params.clone() })
}

/// Outcome of evaluating a CSP through realized relations.
#[derive(Clone, Debug, Serialize)]
pub struct CspToLhom {
    pub count: String,
    /// Domain value `i` is the target vertex `set[i]`.
    pub set: Vec<usize>,
    pub realized: usize,
    pub oracle_calls: usize,
    pub max_width: usize,
    pub fully_nested: bool,
}

fn one_sided_irredundant(h: &Graph, s: &[usize]) -> bool {
    let (_, bip) = components_and_bipartition(h);
    let Some(&first) = s.first() else { return false };
    let comp = bip.component_of[first];
    let side = bip.side(first);
    let nbhds: BTreeSet<&[usize]> = s.iter().map(|&v| h.neighbors(v)).collect();
    side.is_some()
        && nbhds.len() == s.len()
        && s.iter().all(|&v| bip.component_of[v] == comp && bip.side(v) == side)
}

/// Counts satisfying valuations of `c` by realizing its relations over `h` and counting list homomorphisms.
///
/// With `peel` absent, targets whose set lies on the anchor's `{a, c}` are
/// evaluated all the way down to graph instances, others keep deep relations explicit.
pub fn csp_to_lhom(
    c: &CspInstance,
    h: &Graph,
    set: Option<&[usize]>,
    peel: Option<Peel>,
    threads: usize,
) -> Result<CspToLhom> {
    let q = c.domain;
    if q == 0 {
        return Err(Error::precondition("empty domain"));
    }
    let set: Vec<usize> = match set {
        Some(s) => {
            if s.len() != q || s.iter().any(|&v| v >= h.vertex_count()) || !one_sided_irredundant(h, s) {
                return Err(Error::precondition("S must be a one-sided irredundant set of size q"));
            }
            s.to_vec()
        }
        None => {
            let cert = irr(h)?;
            let comp = cert
                .components
                .iter()
                .find(|k| k.bipartite && k.value >= q.max(2))
                .ok_or_else(|| Error::precondition(format!("no bipartite component with irr >= {}", q.max(2))))?;
            comp.witness[..q].to_vec()
        }
    };
    let (_, bip) = components_and_bipartition(h);
    let comp = &bip.components[bip.component_of[set[0]]];
    if !matches!(comp, ComponentSides::Bipartite { .. }) {
        return Err(Error::precondition("S must lie in a bipartite component"));
    }
    // one vertex per neighborhood class of the component, keeping S
    let classes = neighborhood_classes(h);
    let mut chosen: BTreeSet<usize> = set.iter().copied().collect();
    let covered: BTreeSet<usize> = set.iter().map(|&v| classes.class_of[v]).collect();
    let mut seen = covered;
    for v in comp.vertices() {
        if seen.insert(classes.class_of[v]) {
            chosen.insert(v);
        }
    }
    let order: Vec<usize> = chosen.into_iter().collect();
    let local = |v: usize| order.binary_search(&v).expect("vertex of the chosen set");
    let sub = h.induced_subgraph(&order);
    let mut lab = Lab::new(sub.clone());
    let anchor = P4Anchor::first(&sub)?;
    let s_local: Vec<usize> = set.iter().map(|&v| local(v)).collect();
    let mut s_sorted = s_local.clone();
    s_sorted.sort_unstable();

    let mut inst = Structure::new(c.variables);
    for v in 0..c.variables {
        inst.restrict(v, s_sorted.clone());
    }
    let mut ids: Vec<(Relation, usize)> = Vec::new();
    for con in &c.constraints {
        let rel = Relation { arity: con.scope.len(), tuples: con.allowed.clone() };
        let id = match ids.iter().find(|(r, _)| *r == rel) {
            Some((_, id)) => *id,
            None => {
                let mapped = Relation::from_tuples(rel.arity, rel.tuples.iter().map(|t| t.iter().map(|&x| s_local[x]).collect()));
                let id = realize_relation_over_s(&mut lab, &anchor, &s_sorted, rel.arity, 0, &mapped)?;
                ids.push((rel, id));
                id
            }
        };
        let sym = symbol_of(id);
        inst.declare(&sym, con.scope.len())?;
        inst.add_tuple(&sym, con.scope.clone())?;
    }
    let td = TreeDecomposition::min_degree(&gaifman(&inst));
    let peel = match peel {
        Some(p) => p,
        None if s_sorted.iter().all(|&v| v == anchor.a || v == anchor.c) => Peel::All,
        None => Peel::SimpleOnly,
    };
    let target = lab.full_target();
    let base = |s: &Structure, td: &TreeDecomposition| match peel {
        Peel::All => {
            let (g, l) = structure_to_instance(s, sub.vertex_count())?;
            let lists: Vec<Vec<usize>> = l.lists().iter().map(|li| li.iter().map(|&x| order[x]).collect()).collect();
            count_dp(&g, &ListAssignment::new(lists), td, h)
        }
        Peel::SimpleOnly => count_structure_dp(s, &target, td),
    };
    let mut eval = Evaluator::new(&lab, &base, peel);
    eval.threads = threads;
    let count = eval.count(&inst, &td)?;
    Ok(CspToLhom {
        count: count.to_string(),
        set,
        realized: lab.len(),
        oracle_calls: eval.oracle_calls.load(std::sync::atomic::Ordering::Relaxed),
        max_width: eval.max_width.load(std::sync::atomic::Ordering::Relaxed),
        fully_nested: peel == Peel::All,
    })
}

/// `(G*, L*)` over `H*`: `v'` is `v`, `v''` is `v + n`, and likewise in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteLift {
    pub graph: Graph,
    pub lists: ListAssignment,
    pub target: Graph,
}

pub fn bipartite_lift(g: &Graph, l: &ListAssignment, h: &Graph) -> Result<BipartiteLift> {
    l.check(g, h)?;
    let n = g.vertex_count();
    let m = h.vertex_count();
    let mut lists = l.lists().to_vec();
    for v in 0..n {
        lists.push(l.get(v).iter().map(|&x| x + m).collect());
    }
    Ok(BipartiteLift { graph: associated_bipartite(g), lists: ListAssignment::new(lists), target: associated_bipartite(h) })
}

/// Homomorphisms of the lift that send `v''` to the double of the image of `v'`.
pub fn count_clean_brute(lift: &BipartiteLift, guard: u128) -> Result<BigUint> {
    let n = lift.graph.vertex_count() / 2;
    let m = lift.target.vertex_count() / 2;
    let mut inst = graph_as_structure(&lift.graph);
    for (v, list) in lift.lists.lists().iter().enumerate() {
        inst.restrict(v, list.clone());
    }
    let homs = all_homomorphisms(&inst, &graph_as_structure(&lift.target), guard)?;
    let clean = homs.iter().filter(|f| (0..n).all(|v| f[v] < m && f[v + n] == f[v] + m)).count();
    Ok(BigUint::from(clean))
}

/// Projects lists over `H*` of a consistent instance back to `H`.
pub fn consistent_project(g: &Graph, l: &ListAssignment, h: &Graph) -> Result<ListAssignment> {
    let m = h.vertex_count();
    l.check(g, &associated_bipartite(h))?;
    let (comps, bip) = components_and_bipartition(g);
    if comps.len() > 1 {
        return Err(Error::precondition("inconsistent instance: the graph is disconnected"));
    }
    let mut side_of_h = [BTreeSet::new(), BTreeSet::new()];
    for v in 0..g.vertex_count() {
        let side = bip.side(v).ok_or_else(|| Error::precondition("inconsistent instance: the graph is not bipartite"))?;
        for &x in l.get(v) {
            side_of_h[side].insert(usize::from(x >= m));
        }
    }
    if side_of_h[0].len() > 1 || side_of_h[1].len() > 1 || (!side_of_h[0].is_disjoint(&side_of_h[1])) {
        return Err(Error::precondition("inconsistent instance: lists do not respect one orientation"));
    }
    Ok(ListAssignment::new(l.lists().iter().map(|li| li.iter().map(|&x| x % m).collect()).collect()))
}

/// A padded graph with one list assignment per choice of image for the attachment vertex.
#[derive(Clone, Debug)]
pub struct Padding {
    pub graph: Graph,
    pub decomposition: TreeDecomposition,
    pub width: usize,
    pub vertex: usize,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    /// `(a, L_a)` for every usable `a` in the list of the attachment vertex.
    pub family: Vec<(usize, ListAssignment)>,
}

impl Padding {
    /// Sum of the padded counts, equal to the original count.
    pub fn recombine(&self, h: &Graph) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for (_, l) in &self.family {
            total += count_dp(&self.graph, l, &self.decomposition, h)?;
        }
        Ok(total)
    }
}

/// Attaches `K_{t,t}` at a vertex of the last bag of a path decomposition of width `t`.
pub fn pad_pathwidth(g: &Graph, l: &ListAssignment, td: &TreeDecomposition, h: &Graph) -> Result<Padding> {
    l.check(g, h)?;
    ensure_valid(g, td)?;
    let order = td.path_order().ok_or_else(|| Error::precondition("decomposition is not a path"))?;
    let t = td.width();
    if t == 0 {
        return Err(Error::precondition("padding needs width at least 1"));
    }
    let n = g.vertex_count();
    let last = &td.bags[*order.last().expect("nonempty path")];
    let v = *last.first().ok_or_else(|| Error::precondition("last bag is empty"))?;
    let mut graph = g.clone();
    let mut side_a = vec![v];
    for _ in 1..t {
        side_a.push(graph.add_vertex());
    }
    let side_b: Vec<usize> = (0..t).map(|_| graph.add_vertex()).collect();
    for &a in &side_a {
        for &b in &side_b {
            graph.add_edge(a, b)?;
        }
    }
    let mut bags: Vec<Vec<usize>> = order.iter().map(|&i| td.bags[i].clone()).collect();
    for &b in &side_b {
        let mut bag = side_a.clone();
        bag.push(b);
        bags.push(bag);
    }
    let decomposition = TreeDecomposition::path(bags);
    ensure_valid(&graph, &decomposition)?;
    if decomposition.width() != t || graph.vertex_count() != n + 2 * t - 1 {
        return Err(Error::internal("padding changed the declared width"));
    }
    let mut family = Vec::new();
    for &a in l.get(v) {
        let Some(&a2) = h.neighbors(a).first() else {
            if g.neighbors(v).is_empty() {
                return Err(Error::precondition("isolated attachment vertex may map to an isolated target vertex"));
            }
            continue;
        };
        let mut lists = l.lists().to_vec();
        for &x in &side_a {
            if x >= n {
                lists.push(Vec::new());
            }
        }
        for _ in &side_b {
            lists.push(Vec::new());
        }
        for &x in &side_a {
            lists[x] = vec![a];
        }
        for &x in &side_b {
            lists[x] = vec![a2];
        }
        family.push((a, ListAssignment::new(lists)));
    }
    Ok(Padding { graph, decomposition, width: t, vertex: v, side_a, side_b, family })
}

/// Target whose homomorphisms are independent sets: vertex 0 is "in", vertex 1 is "out".
pub fn independent_set_target() -> Graph {
    Graph::from_edges(2, &[(0, 1), (1, 1)]).expect("valid target")
}

/// Applies the first pruning rule that fits, or returns `None`.
///
/// Lists are over `P4 = 0-1-2-3`; the returned instance drops one vertex.
pub fn prune_once(g: &Graph, l: &ListAssignment) -> Option<(Graph, ListAssignment)> {
    let v = (0..g.vertex_count()).find(|&v| l.get(v).len() == 1)?;
    let only = l.get(v)[0];
    let mut lists = l.lists().to_vec();
    let banned = match only {
        0 => Some(3),
        3 => Some(0),
        _ => None,
    };
    if let Some(x) = banned {
        for &w in g.neighbors(v) {
            lists[w].retain(|&y| y != x);
        }
    }
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&w| w != v).collect();
    let sub = g.induced_subgraph(&keep);
    let l2 = ListAssignment::new(keep.iter().map(|&w| lists[w].clone()).collect());
    Some((sub, l2))
}

/// Per-component, per-orientation pruned instances and their independent-set counts.
#[derive(Clone, Debug)]
pub struct IndependentSetReduction {
    pub count: BigUint,
    pub pieces: Vec<Vec<(Graph, ListAssignment, BigUint)>>,
}

/// Counts list homomorphisms to `P4 = 0-1-2-3` through independent sets.
pub fn lhom_p4_to_independent_sets(g: &Graph, l: &ListAssignment) -> Result<IndependentSetReduction> {
    let p4 = Graph::path(4);
    l.check(g, &p4)?;
    let (comps, bip) = components_and_bipartition(g);
    if !bip.components.iter().all(ComponentSides::is_bipartite) {
        return Ok(IndependentSetReduction { count: BigUint::zero(), pieces: Vec::new() });
    }
    let target = independent_set_target();
    let mut total = BigUint::one();
    let mut pieces = Vec::new();
    for comp in &comps {
        let sub = g.induced_subgraph(comp);
        let mut sum = BigUint::zero();
        let mut parts = Vec::new();
        for orient in [[0usize, 2], [1, 3]] {
            let other = if orient[0] == 0 { [1usize, 3] } else { [0, 2] };
            let lists: Vec<Vec<usize>> = comp
                .iter()
                .map(|&v| {
                    let keep = if bip.side(v) == Some(0) { orient } else { other };
                    l.get(v).iter().copied().filter(|x| keep.contains(x)).collect()
                })
                .collect();
            let (mut cg, mut cl) = (sub.clone(), ListAssignment::new(lists));
            let mut empty = cl.lists().iter().any(Vec::is_empty);
            while !empty {
                match prune_once(&cg, &cl) {
                    Some((g2, l2)) => {
                        cg = g2;
                        cl = l2;
                        empty = cl.lists().iter().any(Vec::is_empty);
                    }
                    None => break,
                }
            }
            let c = if empty {
                BigUint::zero()
            } else {
                let td = TreeDecomposition::min_degree(&cg);
                count_dp(&cg, &ListAssignment::full(cg.vertex_count(), 2), &td, &target)?
            };
            sum += &c;
            parts.push((cg, cl, c));
        }
        total *= sum;
        pieces.push(parts);
    }
    Ok(IndependentSetReduction { count: total, pieces })
}

/// Non-list instance whose `K_q`-colorings divided by `divisor` count the list colorings.
#[derive(Clone, Debug)]
pub struct ColoringReduction {
    pub graph: Graph,
    pub decomposition: TreeDecomposition,
    pub clique: Vec<usize>,
    pub divisor: BigUint,
}

impl ColoringReduction {
    pub fn list_count(&self, q: usize) -> Result<BigUint> {
        let total = count_dp(&self.graph, &ListAssignment::full(self.graph.vertex_count(), q), &self.decomposition, &Graph::complete(q))?;
        if !(&total % &self.divisor).is_zero() {
            return Err(Error::internal("coloring count is not divisible by the scale factor"));
        }
        Ok(total / &self.divisor)
    }
}

fn factorial(q: usize) -> BigUint {
    (1..=q).map(BigUint::from).product()
}

/// Adds a `q`-clique that encodes the lists; with `pad` also attaches a biclique
/// of side `tw + q` so that the width of the result is exactly `tw + q`.
pub fn list_coloring_to_coloring(
    g: &Graph,
    l: &ListAssignment,
    q: usize,
    td: Option<&TreeDecomposition>,
    pad: bool,
) -> Result<ColoringReduction> {
    if q < 3 {
        return Err(Error::precondition("q must be at least 3"));
    }
    let kq = Graph::complete(q);
    l.check(g, &kq)?;
    let n = g.vertex_count();
    let td = match td {
        Some(t) => {
            ensure_valid(g, t)?;
            t.clone()
        }
        None => TreeDecomposition::min_degree(g),
    };
    let mut graph = g.clone();
    let clique: Vec<usize> = (0..q).map(|_| graph.add_vertex()).collect();
    for i in 0..q {
        for j in i + 1..q {
            graph.add_edge(clique[i], clique[j])?;
        }
    }
    for v in 0..n {
        for (i, &x) in clique.iter().enumerate() {
            if !l.get(v).contains(&i) {
                graph.add_edge(v, x)?;
            }
        }
    }
    let mut bags: Vec<Vec<usize>> = td.bags.iter().map(|b| b.iter().copied().chain(clique.iter().copied()).collect()).collect();
    if bags.is_empty() {
        bags.push(clique.clone());
    }
    let mut edges = td.tree_edges.clone();
    let mut divisor = factorial(q);
    if pad {
        let s = td.width().max(0) + q;
        let v = clique[0];
        let mut side_a = vec![v];
        for _ in 1..s {
            side_a.push(graph.add_vertex());
        }
        let side_b: Vec<usize> = (0..s).map(|_| graph.add_vertex()).collect();
        for &a in &side_a {
            for &b in &side_b {
                graph.add_edge(a, b)?;
            }
        }
        let start = bags.len();
        for (k, &b) in side_b.iter().enumerate() {
            let mut bag = side_a.clone();
            bag.push(b);
            bags.push(bag);
            edges.push((if k == 0 { 0 } else { start + k - 1 }, start + k));
        }
        let biclique = Graph::complete_bipartite(s, s);
        let mut lists = ListAssignment::full(2 * s, q);
        lists.set(0, vec![0]);
        let f = count_dp(&biclique, &lists, &TreeDecomposition::single_bag(2 * s), &kq)?;
        divisor *= f;
    }
    let decomposition = TreeDecomposition::new(bags, edges);
    ensure_valid(&graph, &decomposition)?;
    Ok(ColoringReduction { graph, decomposition, clique, divisor })
}

/// Tensor product: `(i, j)` is vertex `i * |V(h2)| + j`.
pub fn direct_product(h1: &Graph, h2: &Graph) -> Graph {
    let m = h2.vertex_count();
    let mut out = Graph::new(h1.vertex_count() * m);
    for (a, b) in h1.edges() {
        for (c, d) in h2.edges() {
            out.add_edge(a * m + c, b * m + d).expect("in range");
            out.add_edge(a * m + d, b * m + c).expect("in range");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcount::count_brute;

    #[test]
    fn small_formulas() {
        let params = GroupingParameters::search(2, &BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!((params.p, params.t), (1, 1));
        let f = CnfFormula::new(2, vec![vec![1, -2]]).unwrap();
        let sc = sat_to_csp(&f, &params).unwrap();
        assert_eq!(sc.csp.count_brute().unwrap(), BigUint::from(3u32));
        let unsat = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(sat_to_csp(&unsat, &params).unwrap().csp.count_brute().unwrap().is_zero());
    }

    #[test]
    fn grouping_for_three() {
        let eps = BigRational::new(1.into(), 2.into());
        let params = GroupingParameters::search(3, &eps).unwrap();
        assert!(params.check(&eps).is_ok());
        let f = CnfFormula::new(4, vec![vec![1, -2, 3], vec![-1, 4], vec![2, 3, -4]]).unwrap();
        let sc = sat_to_csp(&f, &params).unwrap();
        assert_eq!(sc.csp.count_brute().unwrap() * &sc.multiplier, f.count_brute().unwrap());
    }

    #[test]
    fn csp_on_p4_and_p6() {
        let mut c = CspInstance::new(2, 2);
        c.add_constraint(vec![0, 1], [vec![0, 1], vec![1, 0]].into_iter().collect()).unwrap();
        let out = csp_to_lhom(&c, &Graph::path(4), None, None, 1).unwrap();
        assert_eq!(out.count, "2");
        let empty = CspInstance::new(3, 3);
        assert_eq!(csp_to_lhom(&empty, &Graph::path(6), None, None, 1).unwrap().count, "27");
        let mut c3 = CspInstance::new(3, 3);
        c3.add_constraint(vec![0, 1], [vec![0, 1], vec![1, 2], vec![2, 2]].into_iter().collect()).unwrap();
        c3.add_constraint(vec![2], [vec![1]].into_iter().collect()).unwrap();
        assert_eq!(csp_to_lhom(&c3, &Graph::path(6), None, None, 1).unwrap().count, c3.count_brute().unwrap().to_string());
    }

    #[test]
    fn clean_lift_on_k3() {
        let g = Graph::complete(2);
        let h = Graph::complete(3);
        let l = ListAssignment::full(2, 3);
        let lift = bipartite_lift(&g, &l, &h).unwrap();
        assert_eq!(count_clean_brute(&lift, 1 << 20).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn projection_rejects_mixed_lists() {
        let g = Graph::complete(2);
        let h = Graph::complete(3);
        let bad = ListAssignment::new(vec![vec![0, 3], vec![4]]);
        assert!(consistent_project(&g, &bad, &h).is_err());
        let good = ListAssignment::new(vec![vec![0, 1], vec![4, 5]]);
        let proj = consistent_project(&g, &good, &h).unwrap();
        let hs = associated_bipartite(&h);
        assert_eq!(count_brute(&g, &good, &hs).unwrap(), count_brute(&g, &proj, &h).unwrap());
    }

    #[test]
    fn padding_on_p4() {
        let g = Graph::path(3);
        let h = Graph::path(4);
        let l = ListAssignment::full(3, 4);
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2]]);
        let pad = pad_pathwidth(&g, &l, &td, &h).unwrap();
        assert_eq!(pad.graph.vertex_count(), 3 + 2 - 1);
        assert_eq!(pad.recombine(&h).unwrap(), count_brute(&g, &l, &h).unwrap());
    }

    #[test]
    fn independent_sets_on_c4() {
        let g = Graph::cycle(4);
        let l = ListAssignment::full(4, 4);
        let r = lhom_p4_to_independent_sets(&g, &l).unwrap();
        assert_eq!(r.count, count_brute(&g, &l, &Graph::path(4)).unwrap());
        assert!(lhom_p4_to_independent_sets(&Graph::cycle(3), &ListAssignment::full(3, 4)).unwrap().count.is_zero());
    }

    #[test]
    fn coloring_single_vertex() {
        let g = Graph::new(1);
        let l = ListAssignment::new(vec![vec![0]]);
        let red = list_coloring_to_coloring(&g, &l, 3, None, false).unwrap();
        assert_eq!(red.divisor, BigUint::from(6u32));
        assert_eq!(red.list_count(3).unwrap(), BigUint::one());
        let padded = list_coloring_to_coloring(&g, &l, 3, None, true).unwrap();
        assert_eq!(padded.list_count(3).unwrap(), BigUint::one());
    }

    #[test]
    fn product_of_edges() {
        let p = direct_product(&Graph::complete(2), &Graph::complete(2));
        assert_eq!(p.edge_count(), 2);
        assert!(p.has_edge(0, 3) && p.has_edge(1, 2));
    }
}
