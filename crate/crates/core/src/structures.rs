//! Relational structures, homomorphism counting between them, interface
//! extension counts, and CSP instances.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::decomposition::{ensure_valid, gaifman, make_nice, NiceKind, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ordered `(symbol, arity)` pairs.
pub type Signature = Vec<(String, usize)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation { arity, tuples: BTreeSet::new() }
    }

    pub fn from_tuples(arity: usize, tuples: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let tuples: BTreeSet<Vec<usize>> = tuples.into_iter().collect();
        debug_assert!(tuples.iter().all(|t| t.len() == arity));
        Relation { arity, tuples }
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Image of `x` for a binary relation.
    pub fn image(&self, x: usize) -> BTreeSet<usize> {
        self.tuples.iter().filter(|t| t[0] == x).map(|t| t[1]).collect()
    }

    /// Relational composition `{(u, v) | (u, w) in self, (w, v) in other}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut out = BTreeSet::new();
        for s in &self.tuples {
            for t in &other.tuples {
                if s[1] == t[0] {
                    out.insert(vec![s[0], t[1]]);
                }
            }
        }
        Relation { arity: 2, tuples: out }
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        Relation { arity: self.arity, tuples: self.tuples.intersection(&other.tuples).cloned().collect() }
    }
}

/// A finite structure. Instance structures may carry lists, which act as unary
/// constraints on their images.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Structure {
    universe: usize,
    relations: BTreeMap<String, Relation>,
    lists: BTreeMap<usize, Vec<usize>>,
}

impl Structure {
    pub fn new(universe: usize) -> Self {
        Structure { universe, relations: BTreeMap::new(), lists: BTreeMap::new() }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn add_element(&mut self) -> usize {
        self.universe += 1;
        self.universe - 1
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn relation(&self, symbol: &str) -> Option<&Relation> {
        self.relations.get(symbol)
    }

    pub fn signature(&self) -> Signature {
        self.relations.iter().map(|(s, r)| (s.clone(), r.arity)).collect()
    }

    pub fn lists(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.lists
    }

    pub fn list(&self, e: usize) -> Option<&[usize]> {
        self.lists.get(&e).map(Vec::as_slice)
    }

    /// Declares a symbol; redeclaring with the same arity is a no-op.
    pub fn declare(&mut self, symbol: &str, arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::input(format!("symbol {symbol} has arity 0")));
        }
        match self.relations.get(symbol) {
            Some(r) if r.arity != arity => {
                Err(Error::input(format!("symbol {symbol} declared with arities {} and {arity}", r.arity)))
            }
            Some(_) => Ok(()),
            None => {
                self.relations.insert(symbol.to_string(), Relation::new(arity));
                Ok(())
            }
        }
    }

    pub fn set_relation(&mut self, symbol: &str, rel: Relation) -> Result<()> {
        if let Some(t) = rel.tuples.iter().find(|t| t.iter().any(|&e| e >= self.universe)) {
            return Err(Error::input(format!("tuple {t:?} of {symbol} leaves the universe")));
        }
        self.relations.insert(symbol.to_string(), rel);
        Ok(())
    }

    pub fn add_tuple(&mut self, symbol: &str, tuple: Vec<usize>) -> Result<()> {
        let universe = self.universe;
        let rel = self
            .relations
            .get_mut(symbol)
            .ok_or_else(|| Error::input(format!("undeclared symbol {symbol}")))?;
        if tuple.len() != rel.arity {
            return Err(Error::input(format!(
                "tuple of length {} for symbol {symbol} of arity {}",
                tuple.len(),
                rel.arity
            )));
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= universe) {
            return Err(Error::input(format!("element {e} out of range for universe {universe}")));
        }
        rel.tuples.insert(tuple);
        Ok(())
    }

    /// Restricts the image of `e`; repeated calls intersect.
    pub fn restrict(&mut self, e: usize, mut list: Vec<usize>) {
        list.sort_unstable();
        list.dedup();
        match self.lists.get_mut(&e) {
            Some(old) => old.retain(|u| list.binary_search(u).is_ok()),
            None => {
                self.lists.insert(e, list);
            }
        }
    }

    /// Encoding size: signature plus universe plus total tuple length.
    pub fn encoding_size(&self) -> usize {
        self.relations.len() + self.universe + self.relations.values().map(|r| r.len() * r.arity).sum::<usize>()
    }

    /// Fails unless every symbol of `self` exists in `target` with the same arity.
    pub fn check_against(&self, target: &Structure) -> Result<()> {
        for (s, r) in &self.relations {
            match target.relations.get(s) {
                Some(t) if t.arity == r.arity => {}
                Some(t) => {
                    return Err(Error::input(format!(
                        "signature mismatch: {s} has arity {} but {} in the target",
                        r.arity, t.arity
                    )))
                }
                None if r.is_empty() => {}
                None => return Err(Error::input(format!("signature mismatch: target lacks symbol {s}"))),
            }
        }
        for (e, l) in &self.lists {
            if *e >= self.universe || l.iter().any(|&u| u >= target.universe) {
                return Err(Error::input(format!("list of element {e} is out of range")));
            }
        }
        Ok(())
    }
}

/// The graph as a structure with one symmetric binary symbol `E`.
pub fn graph_as_structure(h: &Graph) -> Structure {
    let mut s = Structure::new(h.vertex_count());
    let mut rel = Relation::new(2);
    for (u, v) in h.edges() {
        rel.tuples.insert(vec![u, v]);
        rel.tuples.insert(vec![v, u]);
    }
    s.relations.insert("E".into(), rel);
    s
}

/// Backtracking enumerator of homomorphisms, interface elements first.
struct Enumerator<'a> {
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    /// Tuples to check once the element at this depth is assigned.
    checks: Vec<Vec<(&'a HashSet<Vec<usize>>, &'a [usize])>>,
    image: Vec<usize>,
}

impl<'a> Enumerator<'a> {
    fn new(
        j: &'a Structure,
        target: &Structure,
        target_sets: &'a BTreeMap<String, HashSet<Vec<usize>>>,
        first: &[usize],
        guard: u128,
    ) -> Result<Self> {
        j.check_against(target)?;
        let n = j.universe;
        let mut candidates: Vec<Vec<usize>> = (0..n)
            .map(|e| match j.lists.get(&e) {
                Some(l) => l.clone(),
                None => (0..target.universe).collect(),
            })
            .collect();
        for (s, r) in &j.relations {
            if r.is_empty() {
                continue;
            }
            let projections: Vec<BTreeSet<usize>> = (0..r.arity)
                .map(|pos| {
                    target.relations.get(s).map_or(BTreeSet::new(), |tr| tr.tuples.iter().map(|u| u[pos]).collect())
                })
                .collect();
            for t in &r.tuples {
                for (pos, &e) in t.iter().enumerate() {
                    candidates[e].retain(|u| projections[pos].contains(u));
                }
            }
        }
        let space = candidates.iter().fold(1u128, |a, c| a.saturating_mul(c.len().max(1) as u128));
        if space > guard {
            return Err(Error::SizeGuard(format!("enumeration space {space} exceeds the guard {guard}")));
        }
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        for &e in first {
            if !placed[e] {
                placed[e] = true;
                order.push(e);
            }
        }
        let mut tuple_lists: Vec<(&'a str, &'a [usize])> = Vec::new();
        for (s, r) in &j.relations {
            for t in &r.tuples {
                tuple_lists.push((s.as_str(), t.as_slice()));
            }
        }
        while order.len() < n {
            let best = (0..n)
                .filter(|&e| !placed[e])
                .max_by_key(|&e| {
                    let links = tuple_lists
                        .iter()
                        .filter(|(_, t)| t.contains(&e) && t.iter().any(|&f| placed[f]))
                        .count();
                    (links, std::cmp::Reverse(candidates[e].len()), std::cmp::Reverse(e))
                })
                .unwrap();
            placed[best] = true;
            order.push(best);
        }
        let mut depth_of = vec![0; n];
        for (d, &e) in order.iter().enumerate() {
            depth_of[e] = d;
        }
        let mut checks = vec![Vec::new(); n];
        for (s, t) in tuple_lists {
            let d = t.iter().map(|&e| depth_of[e]).max().unwrap();
            checks[d].push((&target_sets[s], t));
        }
        Ok(Enumerator { order, candidates, checks, image: vec![0; n] })
    }

    /// Calls `leaf` with the current image at every complete homomorphism;
    /// `prefix` is invoked when the first `cut` elements are fixed and returns a
    /// slot index passed back to `leaf`.
    fn run(&mut self, cut: usize, mut on_prefix: impl FnMut(&[usize], &[usize]) -> usize, counts: &mut Vec<u128>) {
        let mut slot = usize::MAX;
        self.rec(0, cut, &mut on_prefix, &mut slot, counts);
    }

    fn rec(
        &mut self,
        depth: usize,
        cut: usize,
        on_prefix: &mut impl FnMut(&[usize], &[usize]) -> usize,
        slot: &mut usize,
        counts: &mut Vec<u128>,
    ) {
        if depth == cut {
            *slot = on_prefix(&self.order, &self.image);
            if counts.len() <= *slot {
                counts.resize(*slot + 1, 0);
            }
        }
        if depth == self.order.len() {
            counts[*slot] += 1;
            return;
        }
        let e = self.order[depth];
        for i in 0..self.candidates[e].len() {
            let u = self.candidates[e][i];
            self.image[e] = u;
            let ok = self.checks[depth].iter().all(|(set, t)| {
                let img: Vec<usize> = t.iter().map(|&x| self.image[x]).collect();
                set.contains(&img)
            });
            if ok {
                self.rec(depth + 1, cut, on_prefix, slot, counts);
            }
        }
    }
}

fn target_sets(target: &Structure) -> BTreeMap<String, HashSet<Vec<usize>>> {
    target
        .relations
        .iter()
        .map(|(s, r)| (s.clone(), r.tuples.iter().cloned().collect()))
        .collect()
}

/// Homomorphism count between structures by enumeration.
pub fn count_structure_brute(inst: &Structure, target: &Structure) -> Result<BigUint> {
    count_structure_brute_with_guard(inst, target, crate::homcount::DEFAULT_BRUTE_GUARD)
}

pub fn count_structure_brute_with_guard(inst: &Structure, target: &Structure, guard: u128) -> Result<BigUint> {
    let counts = extension_counts_with_guard(inst, &[], target, guard)?;
    Ok(counts.get(&Vec::new()).cloned().unwrap_or_else(BigUint::zero))
}

/// Sparse map from interface images to homomorphism counts.
pub type ExtensionCounts = BTreeMap<Vec<usize>, BigUint>;

pub fn lookup(counts: &ExtensionCounts, y: &[usize]) -> BigUint {
    counts.get(y).cloned().unwrap_or_else(BigUint::zero)
}

/// For every interface image `y`, the number of homomorphisms mapping `x_i` to `y_i`.
/// Zero entries are omitted.
pub fn extension_counts(j: &Structure, x: &[usize], target: &Structure) -> Result<ExtensionCounts> {
    extension_counts_with_guard(j, x, target, crate::homcount::DEFAULT_BRUTE_GUARD)
}

pub fn extension_counts_with_guard(j: &Structure, x: &[usize], target: &Structure, guard: u128) -> Result<ExtensionCounts> {
    if let Some(&e) = x.iter().find(|&&e| e >= j.universe) {
        return Err(Error::input(format!("interface element {e} out of range")));
    }
    let sets = target_sets(target);
    let mut en = Enumerator::new(j, target, &sets, x, guard)?;
    let cut = {
        let mut seen = BTreeSet::new();
        x.iter().filter(|e| seen.insert(**e)).count()
    };
    let mut keys: Vec<Vec<usize>> = Vec::new();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut counts = Vec::new();
    en.run(
        cut,
        |_, image| {
            let key: Vec<usize> = x.iter().map(|&e| image[e]).collect();
            *index.entry(key.clone()).or_insert_with(|| {
                keys.push(key);
                keys.len() - 1
            })
        },
        &mut counts,
    );
    let mut out = ExtensionCounts::new();
    for (slot, key) in keys.into_iter().enumerate() {
        let c = counts.get(slot).copied().unwrap_or(0);
        if c > 0 {
            out.insert(key, BigUint::from(c));
        }
    }
    Ok(out)
}

/// Every homomorphism as an image vector indexed by element.
pub fn all_homomorphisms(inst: &Structure, target: &Structure, guard: u128) -> Result<Vec<Vec<usize>>> {
    let sets = target_sets(target);
    let mut en = Enumerator::new(inst, target, &sets, &[], guard)?;
    let mut out = Vec::new();
    let mut counts = Vec::new();
    en.run(
        inst.universe,
        |_, image| {
            out.push(image.to_vec());
            0
        },
        &mut counts,
    );
    Ok(out)
}

/// Homomorphism count between structures by dynamic programming over a
/// tree decomposition of the instance's Gaifman graph.
pub fn count_structure_dp(inst: &Structure, target: &Structure, td: &TreeDecomposition) -> Result<BigUint> {
    inst.check_against(target)?;
    ensure_valid(&gaifman(inst), td)?;
    let n = inst.universe;
    let sets = target_sets(target);
    let mut candidates: Vec<Vec<usize>> = (0..n)
        .map(|e| inst.lists.get(&e).cloned().unwrap_or_else(|| (0..target.universe).collect()))
        .collect();
    let mut touching: Vec<Vec<(&HashSet<Vec<usize>>, &[usize])>> = vec![Vec::new(); n];
    for (sym, r) in &inst.relations {
        if r.is_empty() {
            continue;
        }
        let Some(tr) = target.relations.get(sym) else { return Ok(BigUint::zero()) };
        for pos in 0..r.arity {
            let proj: BTreeSet<usize> = tr.tuples.iter().map(|u| u[pos]).collect();
            for t in &r.tuples {
                candidates[t[pos]].retain(|u| proj.contains(u));
            }
        }
        for t in &r.tuples {
            let mut seen = BTreeSet::new();
            for &e in t {
                if seen.insert(e) {
                    touching[e].push((&sets[sym], t.as_slice()));
                }
            }
        }
    }
    if candidates.iter().any(Vec::is_empty) {
        return Ok(BigUint::zero());
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    let nice = make_nice(td)?;
    let mut tables: Vec<Option<HashMap<Vec<usize>, BigUint>>> = vec![None; nice.nodes.len()];
    for u in nice.post_order() {
        let node = &nice.nodes[u];
        let table = match node.kind {
            NiceKind::Leaf => HashMap::from([(Vec::new(), BigUint::one())]),
            NiceKind::Introduce(v) => {
                let child = tables[node.children[0]].take().expect("child table");
                let pos = node.bag.binary_search(&v).expect("introduced vertex in bag");
                let checks: Vec<_> = touching[v]
                    .iter()
                    .filter(|(_, t)| t.iter().all(|e| node.bag.binary_search(e).is_ok()))
                    .collect();
                let mut out = HashMap::with_capacity(child.len() * candidates[v].len());
                for (key, val) in child {
                    for &c in &candidates[v] {
                        let mut k = key.clone();
                        k.insert(pos, c);
                        let ok = checks.iter().all(|(set, t)| {
                            let img: Vec<usize> = t.iter().map(|e| k[node.bag.binary_search(e).unwrap()]).collect();
                            set.contains(&img)
                        });
                        if ok {
                            out.insert(k, val.clone());
                        }
                    }
                }
                out
            }
            NiceKind::Forget(v) => {
                let child_node = &nice.nodes[node.children[0]];
                let pos = child_node.bag.binary_search(&v).expect("forgotten vertex in child bag");
                let child = tables[node.children[0]].take().expect("child table");
                let mut out: HashMap<Vec<usize>, BigUint> = HashMap::new();
                for (mut key, val) in child {
                    key.remove(pos);
                    *out.entry(key).or_default() += val;
                }
                out
            }
            NiceKind::Join => {
                let left = tables[node.children[0]].take().expect("child table");
                let right = tables[node.children[1]].take().expect("child table");
                let (small, large) = if left.len() <= right.len() { (left, right) } else { (right, left) };
                small.into_iter().filter_map(|(k, v)| large.get(&k).map(|w| (k, v * w))).collect()
            }
        };
        tables[u] = Some(table);
    }
    let root = tables[nice.root].take().expect("root table");
    Ok(root.into_values().sum())
}

/// One constraint: the scope's values must form an allowed tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub allowed: BTreeSet<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspInstance {
    pub variables: usize,
    pub domain: usize,
    pub constraints: Vec<Constraint>,
}

impl CspInstance {
    pub fn new(variables: usize, domain: usize) -> Self {
        CspInstance { variables, domain, constraints: Vec::new() }
    }

    pub fn add_constraint(&mut self, scope: Vec<usize>, allowed: BTreeSet<Vec<usize>>) -> Result<()> {
        if scope.is_empty() {
            return Err(Error::input("constraint with empty scope"));
        }
        if let Some(&v) = scope.iter().find(|&&v| v >= self.variables) {
            return Err(Error::input(format!("constraint mentions variable {v} of {}", self.variables)));
        }
        if allowed.iter().any(|t| t.len() != scope.len() || t.iter().any(|&x| x >= self.domain)) {
            return Err(Error::input("allowed tuple does not match the scope or domain"));
        }
        self.constraints.push(Constraint { scope, allowed });
        Ok(())
    }

    pub fn max_arity(&self) -> usize {
        self.constraints.iter().map(|c| c.scope.len()).max().unwrap_or(0)
    }

    /// Distinct allowed-tuple relations, in first-use order.
    pub fn distinct_relations(&self) -> Vec<Relation> {
        let mut out: Vec<Relation> = Vec::new();
        for c in &self.constraints {
            let r = Relation { arity: c.scope.len(), tuples: c.allowed.clone() };
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    /// Satisfying valuations by enumeration.
    pub fn count_brute(&self) -> Result<BigUint> {
        let space = (self.domain as u128).checked_pow(self.variables as u32).unwrap_or(u128::MAX);
        if space > crate::homcount::DEFAULT_BRUTE_GUARD {
            return Err(Error::SizeGuard(format!("{space} valuations exceed the guard")));
        }
        let mut count = BigUint::zero();
        let mut val = vec![0usize; self.variables];
        loop {
            let ok = self.constraints.iter().all(|c| {
                let t: Vec<usize> = c.scope.iter().map(|&v| val[v]).collect();
                c.allowed.contains(&t)
            });
            if ok {
                count += BigUint::one();
            }
            let mut i = 0;
            while i < self.variables {
                val[i] += 1;
                if val[i] < self.domain {
                    break;
                }
                val[i] = 0;
                i += 1;
            }
            if i == self.variables {
                break;
            }
        }
        if self.domain == 0 && self.variables > 0 {
            return Ok(BigUint::zero());
        }
        Ok(count)
    }
}

/// Symbol used for the `i`-th distinct constraint relation.
pub fn constraint_symbol(i: usize) -> String {
    format!("C{i}")
}

/// The instance and target structures of a CSP (one symbol per distinct relation).
pub fn csp_to_lhom_structure(c: &CspInstance) -> (Structure, Structure) {
    let rels = c.distinct_relations();
    let mut inst = Structure::new(c.variables);
    let mut target = Structure::new(c.domain);
    for (i, r) in rels.iter().enumerate() {
        let sym = constraint_symbol(i);
        target.relations.insert(sym.clone(), r.clone());
        inst.relations.insert(sym, Relation::new(r.arity));
    }
    for con in &c.constraints {
        let r = Relation { arity: con.scope.len(), tuples: con.allowed.clone() };
        let i = rels.iter().position(|x| *x == r).expect("relation collected");
        inst.relations.get_mut(&constraint_symbol(i)).unwrap().tuples.insert(con.scope.clone());
    }
    (inst, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_structure() {
        let k2 = graph_as_structure(&Graph::complete(2));
        assert_eq!(k2.relation("E").unwrap().tuples, BTreeSet::from([vec![0, 1], vec![1, 0]]));
        let mut l = Graph::new(1);
        l.add_edge(0, 0).unwrap();
        assert_eq!(graph_as_structure(&l).relation("E").unwrap().tuples, BTreeSet::from([vec![0, 0]]));
    }

    #[test]
    fn counts_without_relations() {
        let inst = Structure::new(3);
        let target = Structure::new(4);
        assert_eq!(count_structure_brute(&inst, &target).unwrap(), BigUint::from(64u32));
        let ec = extension_counts(&Structure::new(1), &[0], &target).unwrap();
        assert_eq!(ec.len(), 4);
        assert!(ec.values().all(|c| c.is_one()));
    }

    #[test]
    fn neq_csp() {
        let mut c = CspInstance::new(2, 3);
        let neq: BTreeSet<Vec<usize>> = (0..3).flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| vec![a, b])).collect();
        c.add_constraint(vec![0, 1], neq).unwrap();
        assert_eq!(c.count_brute().unwrap(), BigUint::from(6u32));
        let (i, t) = csp_to_lhom_structure(&c);
        assert_eq!(count_structure_brute(&i, &t).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn signature_mismatch() {
        let mut i = Structure::new(2);
        i.declare("R", 2).unwrap();
        i.add_tuple("R", vec![0, 1]).unwrap();
        let mut t = Structure::new(2);
        t.declare("R", 3).unwrap();
        assert!(count_structure_brute(&i, &t).is_err());
        assert!(count_structure_brute(&i, &Structure::new(2)).is_err());
    }

    #[test]
    fn structure_dp_matches_brute() {
        let mut target = Structure::new(3);
        target.declare("T", 3).unwrap();
        target.declare("E", 2).unwrap();
        for t in [[0, 1, 2], [1, 1, 0], [2, 0, 0], [2, 2, 1], [0, 0, 0]] {
            target.add_tuple("T", t.to_vec()).unwrap();
        }
        for (a, b) in [(0, 1), (1, 0), (1, 2), (2, 2)] {
            target.add_tuple("E", vec![a, b]).unwrap();
        }
        let mut inst = Structure::new(6);
        inst.declare("T", 3).unwrap();
        inst.declare("E", 2).unwrap();
        inst.add_tuple("T", vec![0, 1, 2]).unwrap();
        inst.add_tuple("T", vec![2, 3, 4]).unwrap();
        inst.add_tuple("E", vec![4, 5]).unwrap();
        inst.add_tuple("E", vec![1, 0]).unwrap();
        inst.restrict(3, vec![0, 1]);
        let td = TreeDecomposition::min_degree(&gaifman(&inst));
        let brute = count_structure_brute(&inst, &target).unwrap();
        assert_eq!(count_structure_dp(&inst, &target, &td).unwrap(), brute);
        let free = Structure::new(2);
        let td = TreeDecomposition::min_degree(&gaifman(&free));
        assert_eq!(count_structure_dp(&free, &Structure::new(3), &td).unwrap(), BigUint::from(9u32));
    }
}
