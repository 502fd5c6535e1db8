//! Realized relations: gadgets certified against a target, and the oracle
//! reduction that eliminates them from an instance by interpolation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::decomposition::{td_for_augmented_instance, Insertion, Splice, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homcount::{count_dp, ListAssignment};
use crate::structures::{
    count_structure_dp, extension_counts, graph_as_structure, lookup, ExtensionCounts, Relation, Structure,
};

/// Symbol of the target's edge relation.
pub const EDGE: &str = "E";

/// Square system `sum_i a_i^j x_i = b_j` for `j = 1..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationSystem {
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
}

/// Solves the system exactly via Lagrange basis polynomials.
pub fn interpolate(sys: &InterpolationSystem) -> Result<Vec<BigRational>> {
    let k = sys.a.len();
    if sys.b.len() != k {
        return Err(Error::input("interpolation needs as many equations as unknowns"));
    }
    if sys.a.iter().any(Zero::is_zero) {
        return Err(Error::input("interpolation points must be nonzero"));
    }
    let distinct: BTreeSet<&BigInt> = sys.a.iter().collect();
    if distinct.len() != k {
        return Err(Error::input("interpolation points must be distinct"));
    }
    // master polynomial prod (t - a_m), coefficients from the constant term up
    let mut master = vec![BigInt::one()];
    for a in &sys.a {
        let mut next = vec![BigInt::zero(); master.len() + 1];
        for (i, c) in master.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * a;
        }
        master = next;
    }
    let mut out = Vec::with_capacity(k);
    for (i, ai) in sys.a.iter().enumerate() {
        // synthetic division by (t - a_i)
        let mut quotient = vec![BigInt::zero(); k];
        let mut carry = BigInt::zero();
        for d in (1..=k).rev() {
            carry = &master[d] + carry * ai;
            quotient[d - 1] = carry.clone();
        }
        let mut denom = BigInt::one();
        for (m, am) in sys.a.iter().enumerate() {
            if m != i {
                denom *= ai - am;
            }
        }
        // z_i = a_i x_i = sum_j quotient[j] b_{j+1} / denom
        let num: BigInt = quotient.iter().zip(&sys.b).map(|(q, b)| q * b).sum();
        out.push(BigRational::new(num, denom * ai));
    }
    Ok(out)
}

/// How a certified gadget answers queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Out-of-relation counts vanish and in-relation counts all equal `factor`.
    Simple { factor: BigUint },
    Interpolation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub mode: Mode,
    pub counts: ExtensionCounts,
    /// Multiset of counts on relation tuples.
    pub in_counts: BTreeMap<BigUint, usize>,
    /// Multiset of nonzero counts off the relation.
    pub out_counts: BTreeMap<BigUint, usize>,
}

impl Certificate {
    /// Every nonzero count a single gadget copy can contribute.
    pub fn nonzero_values(&self) -> BTreeSet<BigUint> {
        self.in_counts.keys().chain(self.out_counts.keys()).cloned().collect()
    }

    /// True when `w` only has prime factors shared with the in-relation counts.
    pub fn is_positive_value(&self, w: &BigUint) -> bool {
        let p: BigUint = self.in_counts.keys().product();
        let mut w = w.clone();
        loop {
            let g = w.gcd(&p);
            if g.is_one() {
                return w.is_one();
            }
            w /= g;
        }
    }
}

fn multiset_text(m: &BTreeMap<BigUint, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(c, k)| format!("{c}x{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Checks the three interpolation conditions for `relation` over tuples of
/// length `arity` on a universe of `universe` elements.
pub fn certify_counts(counts: &ExtensionCounts, relation: &Relation, universe: usize) -> Result<Certificate> {
    let mut in_counts: BTreeMap<BigUint, usize> = BTreeMap::new();
    for t in &relation.tuples {
        let c = lookup(counts, t);
        if c.is_zero() {
            return Err(Error::Construction(format!("condition 1 fails: tuple {t:?} of the relation has count 0")));
        }
        *in_counts.entry(c).or_default() += 1;
    }
    let mut out_counts: BTreeMap<BigUint, usize> = BTreeMap::new();
    for (t, c) in counts {
        if t.iter().any(|&v| v >= universe) {
            return Err(Error::internal("extension count outside the target universe"));
        }
        if relation.contains(t) || c.is_zero() {
            continue;
        }
        if c.is_one() {
            return Err(Error::Construction(format!("condition 2 fails: tuple {t:?} outside the relation has count 1")));
        }
        for f in in_counts.keys() {
            if !c.gcd(f).is_one() {
                return Err(Error::Construction(format!(
                    "condition 3 fails: count {c} of {t:?} shares a prime with in-relation count {f}"
                )));
            }
        }
        *out_counts.entry(c.clone()).or_default() += 1;
    }
    let mode = if out_counts.is_empty() && in_counts.len() <= 1 {
        Mode::Simple { factor: in_counts.keys().next().cloned().unwrap_or_else(BigUint::one) }
    } else {
        Mode::Interpolation
    };
    Ok(Certificate { mode, counts: counts.clone(), in_counts, out_counts })
}

/// Computes extension counts of `(j, x)` in `target` and certifies them for `relation`.
pub fn certify_gadget(j: &Structure, x: &[usize], target: &Structure, relation: &Relation) -> Result<Certificate> {
    if relation.arity != x.len() {
        return Err(Error::input("relation arity differs from the interface length"));
    }
    let counts = extension_counts(j, x, target)?;
    certify_counts(&counts, relation, target.universe())
}

/// How a realized relation was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    EdgeStep { from: Vec<usize>, to: Vec<usize> },
    Intersect(usize, usize),
    Compose(usize, usize),
    Gadget(String),
}

#[derive(Clone, Debug)]
pub struct RealizedRelation {
    pub id: usize,
    pub symbol: String,
    pub relation: Relation,
    pub gadget: Structure,
    pub interface: Vec<usize>,
    pub certificate: Certificate,
    pub step: Step,
    pub deps: Vec<usize>,
    /// Longest chain of gadget substitutions down to plain edges.
    pub depth: usize,
}

impl RealizedRelation {
    /// Text form: relation tuples, gadget and count multisets (1-based labels).
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "relation {} arity {} tuples {}", self.symbol, self.relation.arity, self.relation.len());
        for t in &self.relation.tuples {
            let one: Vec<String> = t.iter().map(|v| (v + 1).to_string()).collect();
            let _ = writeln!(s, "  {}", one.join(" "));
        }
        let _ = writeln!(s, "step {:?}", self.step);
        let _ = writeln!(s, "gadget elements {} interface {:?}", self.gadget.universe(), self.interface.iter().map(|e| e + 1).collect::<Vec<_>>());
        let _ = writeln!(s, "in-counts {}", multiset_text(&self.certificate.in_counts));
        let _ = writeln!(s, "out-counts {}", multiset_text(&self.certificate.out_counts));
        let mode = match &self.certificate.mode {
            Mode::Simple { factor } => format!("simple (factor {factor})"),
            Mode::Interpolation => "interpolation".to_string(),
        };
        let _ = writeln!(s, "mode {mode}");
        let _ = writeln!(s, "depth {}", self.depth);
        s
    }
}

/// Registry of relations realized over a fixed target graph.
#[derive(Clone, Debug)]
pub struct Lab {
    h: Graph,
    relations: Vec<RealizedRelation>,
    cache: HashMap<String, usize>,
}

pub fn symbol_of(id: usize) -> String {
    format!("R{id}")
}

impl Lab {
    pub fn new(h: Graph) -> Self {
        Lab { h, relations: Vec::new(), cache: HashMap::new() }
    }

    pub fn target_graph(&self) -> &Graph {
        &self.h
    }

    pub fn get(&self, id: usize) -> &RealizedRelation {
        &self.relations[id]
    }

    pub fn relation(&self, id: usize) -> &Relation {
        &self.relations[id].relation
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relations(&self) -> &[RealizedRelation] {
        &self.relations
    }

    pub fn cached(&self, key: &str) -> Option<usize> {
        self.cache.get(key).copied()
    }

    /// Records `id` as the answer for `key` without registering anything new.
    pub fn remember(&mut self, key: &str, id: usize) {
        self.cache.insert(key.to_string(), id);
    }

    /// The target graph plus the given realized relations as explicit symbols.
    pub fn target_for(&self, deps: &[usize]) -> Structure {
        let mut t = graph_as_structure(&self.h);
        for &d in deps {
            t.set_relation(&symbol_of(d), self.relations[d].relation.clone()).expect("relation over the target");
        }
        t
    }

    /// The target with every realized relation.
    pub fn full_target(&self) -> Structure {
        self.target_for(&(0..self.relations.len()).collect::<Vec<_>>())
    }

    /// Certifies `gadget` (over `E` and the symbols of `deps`) and registers it.
    /// With `relation` absent the relation is the support of the counts.
    pub fn register(
        &mut self,
        key: &str,
        gadget: Structure,
        interface: Vec<usize>,
        relation: Option<Relation>,
        step: Step,
        deps: Vec<usize>,
    ) -> Result<usize> {
        if let Some(&id) = self.cache.get(key) {
            return Ok(id);
        }
        let distinct: BTreeSet<&usize> = interface.iter().collect();
        if distinct.len() != interface.len() {
            return Err(Error::internal("gadget interface must list distinct elements"));
        }
        let target = self.target_for(&deps);
        let counts = extension_counts(&gadget, &interface, &target)?;
        let relation = match relation {
            Some(r) => r,
            None => Relation::from_tuples(interface.len(), counts.keys().cloned()),
        };
        let certificate = certify_counts(&counts, &relation, self.h.vertex_count())
            .map_err(|e| Error::Construction(format!("{key}: {e}")))?;
        let depth = 1 + deps.iter().map(|&d| self.relations[d].depth).max().unwrap_or(0);
        let id = self.relations.len();
        self.relations.push(RealizedRelation {
            id,
            symbol: symbol_of(id),
            relation,
            gadget,
            interface,
            certificate,
            step,
            deps,
            depth,
        });
        self.cache.insert(key.to_string(), id);
        Ok(id)
    }

    /// `{(u, v) | u in from, v in to, uv an edge}` via one edge with two lists.
    pub fn edge_step(&mut self, from: &[usize], to: &[usize]) -> Result<usize> {
        let n = self.h.vertex_count();
        if from.iter().chain(to).any(|&v| v >= n) {
            return Err(Error::input("edge step sets leave the target"));
        }
        let (from, to) = (sorted(from), sorted(to));
        let key = format!("edge:{from:?}->{to:?}");
        if let Some(id) = self.cached(&key) {
            return Ok(id);
        }
        let mut j = Structure::new(2);
        j.declare(EDGE, 2)?;
        j.add_tuple(EDGE, vec![0, 1])?;
        j.add_tuple(EDGE, vec![1, 0])?;
        j.restrict(0, from.clone());
        j.restrict(1, to.clone());
        self.register(&key, j, vec![0, 1], None, Step::EdgeStep { from, to }, Vec::new())
    }

    pub fn intersect(&mut self, r1: usize, r2: usize) -> Result<usize> {
        let p = self.relations[r1].relation.arity;
        if self.relations[r2].relation.arity != p {
            return Err(Error::input("intersection of relations with different arities"));
        }
        let key = format!("meet:{r1}:{r2}");
        if let Some(id) = self.cached(&key) {
            return Ok(id);
        }
        let mut j = Structure::new(p);
        let x: Vec<usize> = (0..p).collect();
        for r in [r1, r2] {
            j.declare(&symbol_of(r), p)?;
            j.add_tuple(&symbol_of(r), x.clone())?;
        }
        self.register(&key, j, x, None, Step::Intersect(r1, r2), dedup(vec![r1, r2]))
    }

    pub fn compose(&mut self, r1: usize, r2: usize) -> Result<usize> {
        if self.relations[r1].relation.arity != 2 || self.relations[r2].relation.arity != 2 {
            return Err(Error::input("composition needs binary relations"));
        }
        let key = format!("compose:{r1}:{r2}");
        if let Some(id) = self.cached(&key) {
            return Ok(id);
        }
        let mut j = Structure::new(3);
        j.declare(&symbol_of(r1), 2)?;
        j.declare(&symbol_of(r2), 2)?;
        j.add_tuple(&symbol_of(r1), vec![0, 1])?;
        j.add_tuple(&symbol_of(r2), vec![1, 2])?;
        self.register(&key, j, vec![0, 2], None, Step::Compose(r1, r2), dedup(vec![r1, r2]))
    }

    /// Composes a chain left to right.
    pub fn compose_all(&mut self, ids: &[usize]) -> Result<usize> {
        let mut cur = *ids.first().ok_or_else(|| Error::internal("empty composition"))?;
        for &r in &ids[1..] {
            cur = self.compose(cur, r)?;
        }
        Ok(cur)
    }

    pub fn max_depth(&self) -> usize {
        self.relations.iter().map(|r| r.depth).max().unwrap_or(0)
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn dedup(v: Vec<usize>) -> Vec<usize> {
    sorted(&v)
}

/// All products of `m` factors drawn from `values`.
pub fn value_set(values: &BTreeSet<BigUint>, m: usize) -> BTreeSet<BigUint> {
    let mut cur: BTreeSet<BigUint> = BTreeSet::from([BigUint::one()]);
    for _ in 0..m {
        let mut next = BTreeSet::new();
        for w in &cur {
            for v in values {
                next.insert(w * v);
            }
        }
        cur = next;
    }
    cur
}

/// Replaces every tuple of relation `id` by `k` gadget copies.
pub fn augment(
    lab: &Lab,
    inst: &Structure,
    td: &TreeDecomposition,
    id: usize,
    k: usize,
    splice: Splice,
) -> Result<(Structure, TreeDecomposition)> {
    let rel = lab.get(id);
    let sym = &rel.symbol;
    let tuples: Vec<Vec<usize>> = inst.relation(sym).map(|r| r.tuples.iter().cloned().collect()).unwrap_or_default();
    let mut out = Structure::new(inst.universe());
    for (s, r) in inst.relations() {
        if s != sym {
            out.set_relation(s, r.clone())?;
        }
    }
    for (&e, l) in inst.lists() {
        out.restrict(e, l.clone());
    }
    for (s, r) in rel.gadget.relations() {
        out.declare(s, r.arity)?;
    }
    let mut insertions = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let mut copies = Vec::with_capacity(k);
        for _ in 0..k {
            let mut map = vec![usize::MAX; rel.gadget.universe()];
            for (i, &x) in rel.interface.iter().enumerate() {
                map[x] = t[i];
            }
            let mut fresh = Vec::new();
            for m in map.iter_mut() {
                if *m == usize::MAX {
                    *m = out.add_element();
                    fresh.push(*m);
                }
            }
            for (s, r) in rel.gadget.relations() {
                for gt in &r.tuples {
                    out.add_tuple(s, gt.iter().map(|&e| map[e]).collect())?;
                }
            }
            for (&e, l) in rel.gadget.lists() {
                out.restrict(map[e], l.clone());
            }
            copies.push(fresh);
        }
        let anchor = sorted(t);
        insertions.push(Insertion { anchor, copies });
    }
    let td = td_for_augmented_instance(td, &insertions, splice)?;
    Ok((out, td))
}

/// Counting function for instances over a smaller signature.
pub type StructureOracle<'a> = dyn Fn(&Structure, &TreeDecomposition) -> Result<BigUint> + Sync + 'a;

/// Eliminates relation `id` from `inst` using `oracle` for the remaining signature.
pub fn answer_with_relation(
    lab: &Lab,
    inst: &Structure,
    td: &TreeDecomposition,
    id: usize,
    oracle: &StructureOracle<'_>,
    threads: usize,
    splice: Splice,
) -> Result<BigUint> {
    let rel = lab.get(id);
    let m = inst.relation(&rel.symbol).map_or(0, Relation::len);
    if m == 0 {
        let (plain, td) = augment(lab, inst, td, id, 0, splice)?;
        return oracle(&plain, &td);
    }
    match &rel.certificate.mode {
        Mode::Simple { factor } => {
            let (aug, td2) = augment(lab, inst, td, id, 1, splice)?;
            let total = oracle(&aug, &td2)?;
            let divisor = factor.pow(m as u32);
            let (q, r) = total.div_rem(&divisor);
            if !r.is_zero() {
                return Err(Error::internal("simple gadget count is not divisible by its factor"));
            }
            Ok(q)
        }
        Mode::Interpolation => {
            let values = value_set(&rel.certificate.nonzero_values(), m);
            let a: Vec<BigUint> = values.into_iter().collect();
            let ks: Vec<usize> = (1..=a.len()).collect();
            let eval = |k: &usize| -> Result<BigUint> {
                let (aug, td2) = augment(lab, inst, td, id, *k, splice)?;
                oracle(&aug, &td2)
            };
            let b: Vec<BigUint> = if threads > 1 {
                ks.par_iter().map(eval).collect::<Result<_>>()?
            } else {
                ks.iter().map(eval).collect::<Result<_>>()?
            };
            let sys = InterpolationSystem {
                a: a.iter().map(|x| BigInt::from(x.clone())).collect(),
                b: b.into_iter().map(BigInt::from).collect(),
            };
            let x = interpolate(&sys)?;
            let mut total = BigInt::zero();
            for (w, xw) in a.iter().zip(&x) {
                if !xw.is_integer() || xw.is_negative() {
                    return Err(Error::internal(format!("interpolation produced {xw} for value {w}")));
                }
                if rel.certificate.is_positive_value(w) {
                    total += xw.to_integer();
                }
            }
            total.to_biguint().ok_or_else(|| Error::internal("negative count"))
        }
    }
}

/// Which realized relations the evaluator replaces by their gadgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Peel {
    /// Every realized relation, down to plain graph instances.
    All,
    /// Only relations answered with a single oracle call; the rest stay explicit.
    SimpleOnly,
}

/// Nested evaluation of structures over `E` and realized relations.
pub struct Evaluator<'a> {
    pub lab: &'a Lab,
    pub base: &'a StructureOracle<'a>,
    pub peel: Peel,
    pub threads: usize,
    pub splice: Splice,
    pub oracle_calls: AtomicUsize,
    pub max_width: AtomicUsize,
    pub max_elements: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    pub fn new(lab: &'a Lab, base: &'a StructureOracle<'a>, peel: Peel) -> Self {
        Evaluator {
            lab,
            base,
            peel,
            threads: 1,
            splice: Splice::Pendant,
            oracle_calls: AtomicUsize::new(0),
            max_width: AtomicUsize::new(0),
            max_elements: AtomicUsize::new(0),
        }
    }

    /// Highest-id relation with tuples in `inst` that is to be peeled.
    fn top_relation(&self, inst: &Structure) -> Result<Option<usize>> {
        let mut best = None;
        for (s, r) in inst.relations() {
            if s == EDGE || r.is_empty() {
                continue;
            }
            let id = s
                .strip_prefix('R')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&id| id < self.lab.len())
                .ok_or_else(|| Error::input(format!("unknown relation symbol {s}")))?;
            let peel = match self.peel {
                Peel::All => true,
                Peel::SimpleOnly => matches!(self.lab.get(id).certificate.mode, Mode::Simple { .. }),
            };
            if peel {
                best = best.max(Some(id));
            }
        }
        Ok(best)
    }

    pub fn count(&self, inst: &Structure, td: &TreeDecomposition) -> Result<BigUint> {
        match self.top_relation(inst)? {
            Some(id) => {
                let oracle = |s: &Structure, t: &TreeDecomposition| self.count(s, t);
                answer_with_relation(self.lab, inst, td, id, &oracle, self.threads, self.splice)
            }
            None => {
                self.oracle_calls.fetch_add(1, Ordering::Relaxed);
                self.max_width.fetch_max(td.width(), Ordering::Relaxed);
                self.max_elements.fetch_max(inst.universe(), Ordering::Relaxed);
                (self.base)(inst, td)
            }
        }
    }
}

/// Graph and lists of a structure whose only relation is `E`.
pub fn structure_to_instance(inst: &Structure, target_vertices: usize) -> Result<(Graph, ListAssignment)> {
    let mut g = Graph::new(inst.universe());
    for (s, r) in inst.relations() {
        if s == EDGE {
            for t in &r.tuples {
                g.add_edge(t[0], t[1])?;
            }
        } else if !r.is_empty() {
            return Err(Error::internal(format!("relation {s} left in a graph instance")));
        }
    }
    let mut l = ListAssignment::full(inst.universe(), target_vertices);
    for (&e, list) in inst.lists() {
        l.set(e, list.clone());
    }
    Ok((g, l))
}

/// Nested evaluation with the list-homomorphism dynamic program as the base oracle.
pub fn count_instance(lab: &Lab, inst: &Structure, td: &TreeDecomposition) -> Result<BigUint> {
    let h = lab.target_graph();
    let base = |s: &Structure, td: &TreeDecomposition| {
        let (g, l) = structure_to_instance(s, h.vertex_count())?;
        count_dp(&g, &l, td, h)
    };
    Evaluator::new(lab, &base, Peel::All).count(inst, td)
}

/// Peels single-call gadgets and counts the rest with explicit relations.
pub fn count_instance_explicit(lab: &Lab, inst: &Structure, td: &TreeDecomposition) -> Result<BigUint> {
    let target = lab.full_target();
    let base = |s: &Structure, td: &TreeDecomposition| count_structure_dp(s, &target, td);
    Evaluator::new(lab, &base, Peel::SimpleOnly).count(inst, td)
}

/// One-level check oracle: explicit enumeration over the lab's relations.
pub fn explicit_count(lab: &Lab, inst: &Structure) -> Result<BigUint> {
    crate::structures::count_structure_brute(inst, &lab.full_target())
}

/// Converts a nonnegative integral rational, used by tests and reports.
pub fn rational_to_u64(x: &BigRational) -> Option<u64> {
    if x.is_integer() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(a: &[i64], b: &[i64]) -> InterpolationSystem {
        InterpolationSystem { a: a.iter().map(|&x| BigInt::from(x)).collect(), b: b.iter().map(|&x| BigInt::from(x)).collect() }
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn small_systems() {
        assert_eq!(interpolate(&sys(&[2], &[6])).unwrap(), ints(&[3]));
        assert_eq!(interpolate(&sys(&[1, 2], &[3, 5])).unwrap(), ints(&[1, 1]));
        let a = [3i64, 7, 9];
        let x = [2i64, 0, 5];
        let b: Vec<i64> = (1..=3).map(|j| a.iter().zip(&x).map(|(ai, xi)| ai.pow(j) * xi).sum()).collect();
        assert_eq!(interpolate(&sys(&a, &b)).unwrap(), ints(&x));
    }

    #[test]
    fn bad_points() {
        assert!(interpolate(&sys(&[1, 1], &[0, 0])).is_err());
        assert!(interpolate(&sys(&[0], &[0])).is_err());
    }

    #[test]
    fn edge_steps_on_p4() {
        let mut lab = Lab::new(Graph::path(4));
        let id = lab.edge_step(&[0, 2], &[1, 3]).unwrap();
        let expect = Relation::from_tuples(2, [vec![0, 1], vec![2, 1], vec![2, 3]]);
        assert_eq!(lab.relation(id), &expect);
        assert_eq!(lab.get(id).certificate.mode, Mode::Simple { factor: BigUint::one() });
        let empty = lab.edge_step(&[0], &[2, 3]).unwrap();
        assert!(lab.relation(empty).is_empty());
    }

    #[test]
    fn compose_and_intersect() {
        let mut lab = Lab::new(Graph::path(4));
        let e1 = lab.edge_step(&[0, 2], &[1, 3]).unwrap();
        let e2 = lab.edge_step(&[1, 3], &[0, 2]).unwrap();
        let c = lab.compose(e1, e2).unwrap();
        let all: Relation = Relation::from_tuples(2, [vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]]);
        assert_eq!(lab.relation(c), &all);
        assert_eq!(lab.get(c).certificate.mode, Mode::Interpolation);
        let i = lab.intersect(c, c).unwrap();
        assert_eq!(lab.relation(i), &all);
    }

    #[test]
    fn rejects_count_one_outside() {
        let h = Graph::path(4);
        let mut j = Structure::new(2);
        j.declare(EDGE, 2).unwrap();
        j.add_tuple(EDGE, vec![0, 1]).unwrap();
        let r = Relation::from_tuples(2, [vec![0, 1]]);
        let err = certify_gadget(&j, &[0, 1], &graph_as_structure(&h), &r).unwrap_err();
        assert!(err.to_string().contains("condition 2"));
    }

    #[test]
    fn positivity_classification() {
        let cert = Certificate {
            mode: Mode::Interpolation,
            counts: ExtensionCounts::new(),
            in_counts: BTreeMap::from([(BigUint::from(3u32), 2)]),
            out_counts: BTreeMap::from([(BigUint::from(2u32), 1), (BigUint::from(5u32), 1)]),
        };
        assert!(cert.is_positive_value(&BigUint::from(27u32)));
        assert!(!cert.is_positive_value(&BigUint::from(6u32)));
        assert!(cert.is_positive_value(&BigUint::one()));
    }
}
