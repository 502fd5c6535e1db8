//! Gadget constructions over a connected, bipartite, irredundant target:
//! relations on an induced P4, forcers, indicators and partitioners, and
//! arbitrary relations over a one-sided set.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::analysis::{induced_p4s, is_induced_p4, p4_structure};
use crate::error::{Error, Result};
use crate::graph::{components_and_bipartition, Graph};
use crate::realization::{symbol_of, Lab, Step, EDGE};
use crate::structures::{Relation, Structure};

/// An induced path `a-b-c-d` in the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct P4Anchor {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl P4Anchor {
    pub fn new(h: &Graph, p: [usize; 4]) -> Result<Self> {
        if p.iter().any(|&v| v >= h.vertex_count()) || !is_induced_p4(h, p) {
            return Err(Error::precondition(format!("{:?} is not an induced P4 of the target", p.map(|v| v + 1))));
        }
        Ok(P4Anchor { a: p[0], b: p[1], c: p[2], d: p[3] })
    }

    /// The least induced P4 of `h`.
    pub fn first(h: &Graph) -> Result<Self> {
        let p = *induced_p4s(h).first().ok_or_else(|| Error::precondition("the target has no induced P4"))?;
        P4Anchor::new(h, p)
    }

    pub fn vertices(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn reversed(&self) -> Self {
        P4Anchor { a: self.d, b: self.c, c: self.b, d: self.a }
    }

    fn key(&self) -> String {
        format!("{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

/// True when `r` is an `(x, y, S)`-distinguisher with respect to `(alpha, beta)`.
pub fn is_distinguisher(r: &Relation, x: usize, y: usize, s: &[usize], alpha: usize, beta: usize) -> bool {
    r.arity == 2
        && x != y
        && alpha != beta
        && s.contains(&x)
        && s.contains(&y)
        && r.tuples.iter().all(|t| s.contains(&t[0]) && (t[1] == alpha || t[1] == beta))
        && r.contains(&[x, alpha])
        && !r.contains(&[x, beta])
        && r.contains(&[y, beta])
        && s.iter().all(|&v| r.contains(&[v, alpha]) || r.contains(&[v, beta]))
}

/// True when `r` is an `(x, y, S)`-forcer with respect to `(alpha, beta)`.
pub fn is_forcer(r: &Relation, x: usize, y: usize, s: &[usize], alpha: usize, beta: usize) -> bool {
    is_distinguisher(r, x, y, s, alpha, beta) && !r.contains(&[y, alpha])
}

/// True when `r` is the `(X, Y)`-partitioner with respect to `(alpha, beta)`.
pub fn is_partitioner(r: &Relation, xs: &[usize], ys: &[usize], alpha: usize, beta: usize) -> bool {
    let expect = Relation::from_tuples(
        2,
        xs.iter().map(|&v| vec![v, alpha]).chain(ys.iter().map(|&v| vec![v, beta])),
    );
    r == &expect
}

/// Checks nonempty, pairwise disjoint rows and that each id lies in its row.
pub fn is_indicator(i: &Relation, s: &[usize], ids: &[Vec<usize>]) -> bool {
    if ids.len() != s.len() || i.tuples.iter().any(|t| !s.contains(&t[0])) {
        return false;
    }
    let mut rows: BTreeMap<usize, BTreeSet<&[usize]>> = BTreeMap::new();
    for t in &i.tuples {
        rows.entry(t[0]).or_default().insert(&t[1..]);
    }
    let mut seen: BTreeSet<&[usize]> = BTreeSet::new();
    for (k, &x) in s.iter().enumerate() {
        let Some(row) = rows.get(&x) else { return false };
        if !row.contains(ids[k].as_slice()) {
            return false;
        }
        for w in row {
            if !seen.insert(w) {
                return false;
            }
        }
    }
    true
}

fn one_sided(h: &Graph, s: &[usize]) -> bool {
    let (_, bip) = components_and_bipartition(h);
    let sides: BTreeSet<_> = s.iter().map(|&v| bip.side(v)).collect();
    sides.len() <= 1 && !sides.contains(&None)
}

fn set_key(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(usize::to_string).collect();
    v.join(",")
}

fn sorted_set(s: &[usize]) -> Vec<usize> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Fails unless the lab's target is connected, bipartite and irredundant.
pub fn check_target(h: &Graph) -> Result<()> {
    if h.vertex_count() == 0 || !p4_structure(h).applicable {
        return Err(Error::precondition("the target must be connected, bipartite and irredundant"));
    }
    Ok(())
}

fn check_anchor(lab: &Lab, anchor: &P4Anchor) -> Result<()> {
    P4Anchor::new(lab.target_graph(), anchor.vertices()).map(|_| ())
}

/// `NEQ = {(a, c), (c, a)}` via a five-vertex path.
pub fn neq_gadget(lab: &mut Lab, anchor: &P4Anchor) -> Result<usize> {
    check_anchor(lab, anchor)?;
    let key = format!("neq:{}", anchor.key());
    if let Some(id) = lab.cached(&key) {
        return Ok(id);
    }
    let (a, b, c, d) = (anchor.a, anchor.b, anchor.c, anchor.d);
    let mut j = Structure::new(5);
    j.declare(EDGE, 2)?;
    for i in 0..4 {
        j.add_tuple(EDGE, vec![i, i + 1])?;
        j.add_tuple(EDGE, vec![i + 1, i])?;
    }
    for (e, l) in [(0, [a, c]), (1, [b, d]), (2, [a, c]), (3, [b, d]), (4, [a, c])] {
        j.restrict(e, l.to_vec());
    }
    let rel = Relation::from_tuples(2, [vec![a, c], vec![c, a]]);
    lab.register(&key, j, vec![0, 4], Some(rel), Step::Gadget("neq".into()), Vec::new())
}

fn ac_cube(anchor: &P4Anchor, q: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u64..1 << q).map(move |m| (0..q).map(|i| if m >> i & 1 == 1 { anchor.a } else { anchor.c }).collect())
}

/// `OR_q = {a, c}^q` minus the all-`c` tuple, via a star.
pub fn or_gadget(lab: &mut Lab, anchor: &P4Anchor, q: usize) -> Result<usize> {
    check_anchor(lab, anchor)?;
    if q == 0 {
        return Err(Error::input("OR needs at least one coordinate"));
    }
    let key = format!("or:{}:{q}", anchor.key());
    if let Some(id) = lab.cached(&key) {
        return Ok(id);
    }
    let mut j = Structure::new(q + 1);
    j.declare(EDGE, 2)?;
    for i in 0..q {
        j.add_tuple(EDGE, vec![i, q])?;
        j.add_tuple(EDGE, vec![q, i])?;
        j.restrict(i, vec![anchor.a, anchor.c]);
    }
    j.restrict(q, vec![anchor.b, anchor.d]);
    let rel = Relation::from_tuples(q, ac_cube(anchor, q).filter(|t| t.iter().any(|&v| v == anchor.a)));
    lab.register(&key, j, (0..q).collect(), Some(rel), Step::Gadget(format!("or{q}")), Vec::new())
}

/// `{a, c}^r` minus the single tuple `pattern` (true marks `a`).
pub fn clause_gadget(lab: &mut Lab, anchor: &P4Anchor, pattern: &[bool]) -> Result<usize> {
    let r = pattern.len();
    let Some(j) = pattern.iter().position(|&p| p) else {
        return or_gadget(lab, anchor, r);
    };
    let bits: String = pattern.iter().map(|&p| if p { 'a' } else { 'c' }).collect();
    let key = format!("clause:{}:{bits}", anchor.key());
    if let Some(id) = lab.cached(&key) {
        return Ok(id);
    }
    let mut flipped = pattern.to_vec();
    flipped[j] = false;
    let inner = clause_gadget(lab, anchor, &flipped)?;
    let neq = neq_gadget(lab, anchor)?;
    let mut g = Structure::new(r + 1);
    let mut args: Vec<usize> = (0..r).collect();
    args[j] = r;
    g.declare(&symbol_of(inner), r)?;
    g.add_tuple(&symbol_of(inner), args)?;
    g.declare(&symbol_of(neq), 2)?;
    g.add_tuple(&symbol_of(neq), vec![r, j])?;
    let excluded: Vec<usize> = pattern.iter().map(|&p| if p { anchor.a } else { anchor.c }).collect();
    let rel = Relation::from_tuples(r, ac_cube(anchor, r).filter(|t| *t != excluded));
    let mut deps = vec![inner, neq];
    deps.sort_unstable();
    deps.dedup();
    lab.register(&key, g, (0..r).collect(), Some(rel), Step::Gadget(format!("clause {bits}")), deps)
}

/// Largest arity accepted by [`realize_ac_relation`].
pub const MAX_AC_ARITY: usize = 22;

/// A cover of `{0,1}^q` minus `inside` by subcubes avoiding `inside`.
/// Each cube is a list of fixed coordinates with their values.
pub fn cube_cover(inside: &BTreeSet<u64>, q: usize) -> Vec<Vec<(usize, bool)>> {
    let total = 1usize << q;
    let mut covered = vec![false; total];
    for &m in inside {
        covered[m as usize] = true;
    }
    let members: Vec<u64> = inside.iter().copied().collect();
    let mut cubes = Vec::new();
    for m in 0..total as u64 {
        if covered[m as usize] {
            continue;
        }
        let mut fixed: u64 = (1 << q) - 1;
        for i in 0..q {
            let trial = fixed & !(1 << i);
            if members.iter().all(|&r| (r ^ m) & trial != 0) {
                fixed = trial;
            }
        }
        let free = !fixed & ((1 << q) - 1);
        let mut sub = free;
        loop {
            covered[((m & fixed) | sub) as usize] = true;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        cubes.push((0..q).filter(|i| fixed >> i & 1 == 1).map(|i| (i, m >> i & 1 == 1)).collect());
    }
    cubes
}

/// Any relation over `{a, c}`, as an intersection of clause relations.
pub fn realize_ac_relation(lab: &mut Lab, anchor: &P4Anchor, r: &Relation) -> Result<usize> {
    check_anchor(lab, anchor)?;
    let q = r.arity;
    if r.tuples.iter().flatten().any(|&v| v != anchor.a && v != anchor.c) {
        return Err(Error::precondition("relation leaves {a, c}"));
    }
    if q > MAX_AC_ARITY {
        return Err(Error::SizeGuard(format!("relation over {{a, c}} of arity {q} exceeds {MAX_AC_ARITY}")));
    }
    let tuples: Vec<String> = r
        .tuples
        .iter()
        .map(|t| t.iter().map(|&v| if v == anchor.a { 'a' } else { 'c' }).collect())
        .collect();
    let key = format!("ac:{}:{q}:{}", anchor.key(), tuples.join(" "));
    if let Some(id) = lab.cached(&key) {
        return Ok(id);
    }
    let mut g = Structure::new(q);
    for i in 0..q {
        g.restrict(i, vec![anchor.a, anchor.c]);
    }
    if q == 0 && r.is_empty() {
        return Err(Error::input("an empty relation of arity 0 has no gadget"));
    }
    let masks: BTreeSet<u64> = r
        .tuples
        .iter()
        .map(|t| t.iter().enumerate().filter(|(_, &v)| v == anchor.a).map(|(i, _)| 1u64 << i).sum())
        .collect();
    let mut deps = Vec::new();
    for cube in cube_cover(&masks, q) {
        let pattern: Vec<bool> = cube.iter().map(|&(_, v)| v).collect();
        let id = clause_gadget(lab, anchor, &pattern)?;
        let sym = symbol_of(id);
        g.declare(&sym, pattern.len())?;
        g.add_tuple(&sym, cube.iter().map(|&(i, _)| i).collect())?;
        deps.push(id);
    }
    deps.sort_unstable();
    deps.dedup();
    lab.register(&key, g, (0..q).collect(), Some(r.clone()), Step::Gadget("relation over {a,c}".into()), deps)
}

/// Removes `(v, a)` for every `v` that `r` sends to both `a` and `c`.
pub fn purify(lab: &mut Lab, anchor: &P4Anchor, r: usize) -> Result<usize> {
    check_anchor(lab, anchor)?;
    let rel = lab.relation(r).clone();
    if rel.arity != 2 || rel.tuples.iter().any(|t| t[1] != anchor.a && t[1] != anchor.c) {
        return Err(Error::precondition("purification needs a binary relation into {a, c}"));
    }
    let both: BTreeSet<usize> =
        rel.tuples.iter().filter(|t| t[1] == anchor.a && rel.contains(&[t[0], anchor.c])).map(|t| t[0]).collect();
    if both.is_empty() {
        return Ok(r);
    }
    let key = format!("purify:{}:{r}", anchor.key());
    if let Some(id) = lab.cached(&key) {
        return Ok(id);
    }
    // s, t, t', u1, u2, u3
    let mut j = Structure::new(6);
    j.declare(EDGE, 2)?;
    for (u, v) in [(1, 3), (3, 2), (2, 4), (4, 5)] {
        j.add_tuple(EDGE, vec![u, v])?;
        j.add_tuple(EDGE, vec![v, u])?;
    }
    let sym = symbol_of(r);
    j.declare(&sym, 2)?;
    j.add_tuple(&sym, vec![0, 1])?;
    j.add_tuple(&sym, vec![0, 2])?;
    j.restrict(3, vec![anchor.b, anchor.d]);
    j.restrict(4, vec![anchor.b, anchor.d]);
    j.restrict(5, vec![anchor.a, anchor.c]);
    let out = Relation::from_tuples(2, rel.tuples.iter().filter(|t| !(t[1] == anchor.a && both.contains(&t[0]))).cloned());
    lab.register(&key, j, vec![0, 1], Some(out), Step::Gadget("purification".into()), vec![r])
}

/// Forcers with respect to the four ordered one-sided pairs of an anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FourForcers {
    pub ac: usize,
    pub ca: usize,
    pub bd: usize,
    pub db: usize,
}

/// Turns an `(x, y, S)`-distinguisher with respect to `(a, c)` or `(c, a)` into forcers.
pub fn distinguisher_to_forcer(
    lab: &mut Lab,
    anchor: &P4Anchor,
    r: usize,
    x: usize,
    y: usize,
    s: &[usize],
) -> Result<FourForcers> {
    check_anchor(lab, anchor)?;
    let s = sorted_set(s);
    let (a, b, c, d) = (anchor.a, anchor.b, anchor.c, anchor.d);
    let neq = neq_gadget(lab, anchor)?;
    let rel = lab.relation(r).clone();
    let r0 = if is_distinguisher(&rel, x, y, &s, a, c) {
        r
    } else if is_distinguisher(&rel, x, y, &s, c, a) {
        lab.compose(r, neq)?
    } else {
        return Err(Error::precondition(format!(
            "relation is not an ({}, {}, S)-distinguisher with respect to ({}, {}) or ({}, {})",
            x + 1,
            y + 1,
            a + 1,
            c + 1,
            c + 1,
            a + 1
        )));
    };
    let ac = if lab.relation(r0).contains(&[y, a]) { purify(lab, anchor, r0)? } else { r0 };
    let ca = lab.compose(ac, neq)?;
    let rev = anchor.reversed();
    let neq_rev = neq_gadget(lab, &rev)?;
    let step = lab.edge_step(&[a, c], &[b, d])?;
    let towards_bd = lab.compose(ac, step)?;
    let towards_db = lab.compose(towards_bd, neq_rev)?;
    let db = if lab.relation(towards_db).contains(&[y, d]) { purify(lab, &rev, towards_db)? } else { towards_db };
    let bd = lab.compose(db, neq_rev)?;
    let out = FourForcers { ac, ca, bd, db };
    for (id, alpha, beta) in [(ac, a, c), (ca, c, a), (bd, b, d), (db, d, b)] {
        if !is_forcer(lab.relation(id), x, y, &s, alpha, beta) {
            return Err(Error::internal(format!("output R{id} is not a forcer w.r.t. ({}, {})", alpha + 1, beta + 1)));
        }
    }
    Ok(out)
}

/// Number of anchor-to-anchor hops taken by the last [`forcer_on_p4`] call pattern.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Propagation {
    /// P4 vertex sets visited, as indices into the induced-P4 list.
    pub route: Vec<usize>,
}

/// Turns an `(x, y, S)`-distinguisher with respect to `(alpha, beta)` into a
/// forcer with respect to `(a, c)` of `target`.
#[allow(clippy::too_many_arguments)]
pub fn forcer_on_p4(
    lab: &mut Lab,
    target: &P4Anchor,
    r: usize,
    x: usize,
    y: usize,
    s: &[usize],
    alpha: usize,
    beta: usize,
) -> Result<(usize, Propagation)> {
    let h = lab.target_graph().clone();
    check_target(&h)?;
    check_anchor(lab, target)?;
    let s = sorted_set(s);
    if !is_distinguisher(lab.relation(r), x, y, &s, alpha, beta) {
        return Err(Error::precondition("input is not a distinguisher with respect to the given pair"));
    }
    let common: Vec<usize> = h.neighbors(alpha).iter().copied().filter(|v| h.has_edge(*v, beta)).collect();
    let (start, dist) = if !common.is_empty() {
        let mut found = None;
        'outer: for &bp in &common {
            for dp in 0..h.vertex_count() {
                if is_induced_p4(&h, [alpha, bp, beta, dp]) {
                    found = Some(P4Anchor::new(&h, [alpha, bp, beta, dp])?);
                    break 'outer;
                }
                if is_induced_p4(&h, [dp, alpha, bp, beta]) {
                    found = Some(P4Anchor::new(&h, [beta, bp, alpha, dp])?);
                    break 'outer;
                }
            }
        }
        (found.ok_or_else(|| Error::internal("no induced P4 through a pair with a common neighbor"))?, r)
    } else {
        let p = h.least_shortest_path(&[alpha], &[beta]).ok_or_else(|| Error::precondition("pair is disconnected"))?;
        let k = p.len();
        if k < 5 || k % 2 == 0 {
            return Err(Error::precondition("pair is not one-sided"));
        }
        let mut cur = r;
        // 0-based i steps by two: p_i -> p_{i+2} while p_k stays
        let mut i = 0;
        while i + 4 < k {
            let e1 = lab.edge_step(&[p[i], p[k - 1]], &[p[i + 1], p[k - 2]])?;
            let e2 = lab.edge_step(&[p[i + 1], p[k - 2]], &[p[i + 2], p[k - 1]])?;
            cur = lab.compose(cur, e1)?;
            cur = lab.compose(cur, e2)?;
            i += 2;
        }
        if !is_distinguisher(lab.relation(cur), x, y, &s, p[k - 3], p[k - 1]) {
            return Err(Error::internal("walking along the path did not produce a distinguisher"));
        }
        (P4Anchor::new(&h, [p[k - 1], p[k - 2], p[k - 3], p[k - 4]])?, cur)
    };
    let ps = p4_structure(&h);
    let from = ps.index_of_set(start.vertices()).ok_or_else(|| Error::internal("anchor missing from the P4 list"))?;
    let to = ps.index_of_set(target.vertices()).ok_or_else(|| Error::internal("anchor missing from the P4 list"))?;
    let route = ps.shortest_route(from, to).ok_or_else(|| Error::precondition("P4-structure graph is disconnected"))?;
    let mut anchor = start;
    let mut cur = dist;
    for &next in &route[1..] {
        let four = distinguisher_to_forcer(lab, &anchor, cur, x, y, &s)?;
        let set = ps.paths[next];
        let (pair, f) = if set.contains(&anchor.a) && set.contains(&anchor.c) {
            ((anchor.a, anchor.c), four.ac)
        } else if set.contains(&anchor.b) && set.contains(&anchor.d) {
            ((anchor.b, anchor.d), four.bd)
        } else {
            return Err(Error::internal("consecutive P4s share no one-sided pair"));
        };
        let [w, v1, v2, z] = set;
        anchor = if [w, v2].contains(&pair.0) && [w, v2].contains(&pair.1) {
            P4Anchor::new(&h, [w, v1, v2, z])?
        } else {
            P4Anchor::new(&h, [z, v2, v1, w])?
        };
        cur = f;
    }
    let out = if anchor == *target {
        distinguisher_to_forcer(lab, target, cur, x, y, &s)?.ac
    } else {
        let via = distinguisher_to_forcer(lab, &anchor, cur, x, y, &s)?;
        let back = if anchor == target.reversed() { via.bd } else { return Err(Error::internal("route ended off target")) };
        distinguisher_to_forcer(lab, target, back, x, y, &s)?.ac
    };
    Ok((out, Propagation { route }))
}

fn combinations(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        combinations(items, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Least-size set containing `must` whose neighborhood covers `cover`, ties broken lexicographically.
fn minimal_cover(h: &Graph, must: usize, cover: &[usize]) -> Result<Vec<usize>> {
    let candidates: Vec<usize> = h.neighborhood_of_set(cover).into_iter().filter(|&v| v != must).collect();
    for k in 0..=candidates.len() {
        let mut sets = Vec::new();
        combinations(&candidates, k, 0, &mut Vec::new(), &mut sets);
        for mut t in sets {
            t.push(must);
            t.sort_unstable();
            let n = h.neighborhood_of_set(&t);
            if cover.iter().all(|v| n.contains(v)) {
                return Ok(t);
            }
        }
    }
    Err(Error::internal("no covering set exists"))
}

struct ForcerBuilder {
    anchor: P4Anchor,
    limit: usize,
}

/// An `(x, y, S)`-forcer with respect to `(a, c)` of `anchor`.
pub fn build_forcer(lab: &mut Lab, anchor: &P4Anchor, x: usize, y: usize, s: &[usize]) -> Result<usize> {
    let h = lab.target_graph().clone();
    check_target(&h)?;
    check_anchor(lab, anchor)?;
    let s = sorted_set(s);
    check_pair(&h, x, y, &s)?;
    let diam = (0..h.vertex_count())
        .flat_map(|u| h.bfs_distances(u).into_iter().flatten().max())
        .max()
        .unwrap_or(0);
    let builder = ForcerBuilder { anchor: *anchor, limit: (s.len() + 1) * (diam + 2) };
    builder.forcer(lab, x, y, &s, 0)
}

fn check_pair(h: &Graph, x: usize, y: usize, s: &[usize]) -> Result<()> {
    if x == y || !s.contains(&x) || !s.contains(&y) {
        return Err(Error::precondition("x and y must be distinct elements of S"));
    }
    if s.iter().any(|&v| v >= h.vertex_count()) || !one_sided(h, s) {
        return Err(Error::precondition("S must be a one-sided vertex set"));
    }
    Ok(())
}

impl ForcerBuilder {
    fn forcer(&self, lab: &mut Lab, x: usize, y: usize, s: &[usize], depth: usize) -> Result<usize> {
        let key = format!("forcer:{}:{x}:{y}:{}", self.anchor.key(), set_key(s));
        if let Some(id) = lab.cached(&key) {
            return Ok(id);
        }
        if depth > self.limit {
            return Err(Error::internal(format!("forcer recursion exceeded its depth guard of {}", self.limit)));
        }
        let (d, alpha, beta, swapped) = self.distinguisher(lab, x, y, s, depth)?;
        let id = if swapped {
            let (f, _) = forcer_on_p4(lab, &self.anchor, d, y, x, s, alpha, beta)?;
            distinguisher_to_forcer(lab, &self.anchor, f, x, y, s)?.ac
        } else {
            forcer_on_p4(lab, &self.anchor, d, x, y, s, alpha, beta)?.0
        };
        if !is_forcer(lab.relation(id), x, y, s, self.anchor.a, self.anchor.c) {
            return Err(Error::internal("constructed relation is not a forcer"));
        }
        lab.remember(&key, id);
        Ok(id)
    }

    /// A distinguisher for `(x, y, S)`, or for `(y, x, S)` when the flag is set.
    fn distinguisher(
        &self,
        lab: &mut Lab,
        x: usize,
        y: usize,
        s: &[usize],
        depth: usize,
    ) -> Result<(usize, usize, usize, bool)> {
        let h = lab.target_graph().clone();
        let nx = h.neighborhood(x)?;
        let ny = h.neighborhood(y)?;
        if s.len() == 2 {
            let (x1, y1, n1, n2, swapped) = match ny.difference(&nx).next() {
                Some(_) => (x, y, &nx, &ny, false),
                None => (y, x, &ny, &nx, true),
            };
            let q = *n2.difference(n1).next().ok_or_else(|| Error::precondition("x and y have equal neighborhoods"))?;
            let p = *n1.iter().next().ok_or_else(|| Error::precondition("isolated vertex in S"))?;
            let r = lab.edge_step(&[x1, y1], &[p, q])?;
            return Ok((r, p, q, swapped));
        }
        let s0: Vec<usize> = s.iter().copied().filter(|&v| v != x && v != y).collect();
        let mut from = vec![x, y];
        from.sort_unstable();
        let path = h.least_shortest_path(&from, &s0).ok_or_else(|| Error::precondition("S is not connected in the target"))?;
        let k = path.len();
        let p0 = path[1];
        let mut choice = None;
        'search: for q0 in 0..h.vertex_count() {
            if q0 == p0 {
                continue;
            }
            for (x1, y1) in [(x, y), (y, x)] {
                for (p1, q1) in [(p0, q0), (q0, p0)] {
                    if h.has_edge(x1, p1) && h.has_edge(y1, q1) && !h.has_edge(x1, q1) {
                        choice = Some((x1, y1, p1, q1));
                        break 'search;
                    }
                }
            }
        }
        let (x1, y1, p1, q1) = choice.ok_or_else(|| Error::internal("no pair next to x and y"))?;
        let s0p = minimal_cover(&h, path[k - 2], &s0)?;
        let mut s1 = s0p.clone();
        s1.push(p1);
        s1.push(q1);
        let s1 = sorted_set(&s1);
        let step = lab.edge_step(s, &s1)?;
        let inner = if k == 3 {
            let xs: Vec<usize> = s1.iter().copied().filter(|&v| h.has_edge(x1, v)).collect();
            let ys: Vec<usize> = s1.iter().copied().filter(|&v| !h.has_edge(x1, v)).collect();
            self.partitioner(lab, &xs, &ys, depth + 1)?
        } else {
            self.forcer(lab, p1, q1, &s1, depth + 1)?
        };
        let r = lab.compose(step, inner)?;
        let (a, c) = (self.anchor.a, self.anchor.c);
        if !is_distinguisher(lab.relation(r), x1, y1, s, a, c) {
            return Err(Error::internal("inductive step did not produce a distinguisher"));
        }
        Ok((r, a, c, x1 != x))
    }

    fn partitioner(&self, lab: &mut Lab, xs: &[usize], ys: &[usize], depth: usize) -> Result<usize> {
        let mut s: Vec<usize> = xs.iter().chain(ys).copied().collect();
        s.sort_unstable();
        let (a, c) = (self.anchor.a, self.anchor.c);
        let rel = Relation::from_tuples(2, xs.iter().map(|&v| vec![v, a]).chain(ys.iter().map(|&v| vec![v, c])));
        let id = self.over_set(lab, &s, 1, 1, &rel, depth)?;
        if !is_partitioner(lab.relation(id), xs, ys, a, c) {
            return Err(Error::internal("constructed relation is not a partitioner"));
        }
        Ok(id)
    }

    fn indicator(&self, lab: &mut Lab, s: &[usize], depth: usize) -> Result<Indicator> {
        let m = s.len() * (s.len() - 1);
        let mut g = Structure::new(1 + m);
        let mut deps = Vec::new();
        let mut k = 1;
        for &xi in s {
            for &xj in s {
                if xi == xj {
                    continue;
                }
                let f = self.forcer(lab, xi, xj, s, depth)?;
                g.declare(&symbol_of(f), 2)?;
                g.add_tuple(&symbol_of(f), vec![0, k])?;
                deps.push(f);
                k += 1;
            }
        }
        deps.sort_unstable();
        deps.dedup();
        let key = format!("indicator:{}:{}", self.anchor.key(), set_key(s));
        let id = lab.register(&key, g, (0..=m).collect(), None, Step::Gadget("indicator".into()), deps)?;
        let rel = lab.relation(id);
        let ids: Vec<Vec<usize>> = s
            .iter()
            .map(|&x| rel.tuples.iter().find(|t| t[0] == x).map(|t| t[1..].to_vec()).unwrap_or_default())
            .collect();
        if !is_indicator(rel, s, &ids) {
            return Err(Error::internal("constructed relation is not an indicator"));
        }
        Ok(Indicator { id, set: s.to_vec(), ids })
    }

    fn over_set(&self, lab: &mut Lab, s: &[usize], p: usize, q: usize, r: &Relation, depth: usize) -> Result<usize> {
        let (a, c) = (self.anchor.a, self.anchor.c);
        if r.arity != p + q
            || r.tuples.iter().any(|t| t[..p].iter().any(|v| !s.contains(v)) || t[p..].iter().any(|&v| v != a && v != c))
        {
            return Err(Error::precondition("relation does not lie in S^p x {a, c}^q"));
        }
        if s.iter().all(|&v| v == a || v == c) {
            return realize_ac_relation(lab, &self.anchor, r);
        }
        let tuples: Vec<String> = r.tuples.iter().map(|t| set_key(t)).collect();
        let key = format!("over:{}:{}:{p}:{q}:{}", self.anchor.key(), set_key(s), tuples.join(" "));
        if let Some(id) = lab.cached(&key) {
            return Ok(id);
        }
        let mut g = Structure::new(p + q);
        for l in 0..p {
            g.restrict(l, s.to_vec());
        }
        for l in p..p + q {
            g.restrict(l, vec![a, c]);
        }
        let mut deps = Vec::new();
        if s.len() == 1 || r.is_empty() {
            let inner = Relation::from_tuples(q, r.tuples.iter().map(|t| t[p..].to_vec()));
            if r.is_empty() {
                g.restrict(0, Vec::new());
            } else if q > 0 {
                let id = realize_ac_relation(lab, &self.anchor, &inner)?;
                g.declare(&symbol_of(id), q)?;
                g.add_tuple(&symbol_of(id), (p..p + q).collect())?;
                deps.push(id);
            }
        } else {
            let ind = self.indicator(lab, s, depth)?;
            let m = s.len() * (s.len() - 1);
            let id_of = |v: usize| &ind.ids[s.iter().position(|&u| u == v).unwrap()];
            let translated = Relation::from_tuples(
                p * m + q,
                r.tuples.iter().map(|t| {
                    let mut out: Vec<usize> = t[..p].iter().flat_map(|&v| id_of(v).iter().copied()).collect();
                    out.extend_from_slice(&t[p..]);
                    out
                }),
            );
            let ri = realize_ac_relation(lab, &self.anchor, &translated)?;
            let isym = symbol_of(ind.id);
            let rsym = symbol_of(ri);
            g.declare(&isym, 1 + m)?;
            g.declare(&rsym, p * m + q)?;
            let mut big = Vec::with_capacity(p * m + q);
            for l in 0..p {
                let block: Vec<usize> = (0..m).map(|_| g.add_element()).collect();
                let mut t = vec![l];
                t.extend_from_slice(&block);
                g.add_tuple(&isym, t)?;
                big.extend(block);
            }
            big.extend(p..p + q);
            g.add_tuple(&rsym, big)?;
            deps.push(ind.id);
            deps.push(ri);
        }
        deps.sort_unstable();
        deps.dedup();
        lab.register(&key, g, (0..p + q).collect(), Some(r.clone()), Step::Gadget("relation over S".into()), deps)
    }
}

/// A realized indicator with the chosen codeword of each element of `set`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Indicator {
    pub id: usize,
    pub set: Vec<usize>,
    pub ids: Vec<Vec<usize>>,
}

fn builder_for(lab: &Lab, anchor: &P4Anchor, s: &[usize]) -> Result<ForcerBuilder> {
    let h = lab.target_graph();
    check_target(h)?;
    check_anchor(lab, anchor)?;
    if s.is_empty() || s.iter().any(|&v| v >= h.vertex_count()) || !one_sided(h, s) {
        return Err(Error::precondition("S must be a nonempty one-sided vertex set"));
    }
    let diam = (0..h.vertex_count()).flat_map(|u| h.bfs_distances(u).into_iter().flatten().max()).max().unwrap_or(0);
    Ok(ForcerBuilder { anchor: *anchor, limit: (s.len() + 1) * (diam + 2) })
}

/// The indicator of a one-sided set with at least two elements.
pub fn build_indicator(lab: &mut Lab, anchor: &P4Anchor, s: &[usize]) -> Result<Indicator> {
    let s = sorted_set(s);
    if s.len() < 2 {
        return Err(Error::precondition("an indicator needs at least two elements"));
    }
    builder_for(lab, anchor, &s)?.indicator(lab, &s, 0)
}

/// The `(X, Y)`-partitioner with respect to `(a, c)`.
pub fn build_partitioner(lab: &mut Lab, anchor: &P4Anchor, xs: &[usize], ys: &[usize]) -> Result<usize> {
    let (xs, ys) = (sorted_set(xs), sorted_set(ys));
    if xs.iter().any(|v| ys.contains(v)) {
        return Err(Error::precondition("X and Y must be disjoint"));
    }
    let s: Vec<usize> = sorted_set(&[xs.clone(), ys.clone()].concat());
    builder_for(lab, anchor, &s)?.partitioner(lab, &xs, &ys, 0)
}

/// Any relation `R` contained in `S^p x {a, c}^q`.
pub fn realize_relation_over_s(
    lab: &mut Lab,
    anchor: &P4Anchor,
    s: &[usize],
    p: usize,
    q: usize,
    r: &Relation,
) -> Result<usize> {
    let s = sorted_set(s);
    if p == 0 {
        return Err(Error::precondition("p must be at least 1"));
    }
    builder_for(lab, anchor, &s)?.over_set(lab, &s, p, q, r, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::Mode;
    use crate::structures::lookup;
    use num_bigint::BigUint;

    fn p4_lab() -> (Lab, P4Anchor) {
        let h = Graph::path(4);
        let anchor = P4Anchor::new(&h, [0, 1, 2, 3]).unwrap();
        (Lab::new(h), anchor)
    }

    #[test]
    fn neq_counts_on_p4() {
        let (mut lab, an) = p4_lab();
        let id = neq_gadget(&mut lab, &an).unwrap();
        let cert = &lab.get(id).certificate;
        let n = |t: [usize; 2]| lookup(&cert.counts, &t);
        assert_eq!(n([0, 0]), BigUint::from(2u32));
        assert_eq!(n([0, 2]), BigUint::from(3u32));
        assert_eq!(n([2, 0]), BigUint::from(3u32));
        assert_eq!(n([2, 2]), BigUint::from(5u32));
        assert_eq!(n([1, 3]), BigUint::from(0u32));
    }

    #[test]
    fn or_and_clauses() {
        let (mut lab, an) = p4_lab();
        let one = or_gadget(&mut lab, &an, 1).unwrap();
        assert_eq!(lab.relation(one), &Relation::from_tuples(1, [vec![0]]));
        let cl = clause_gadget(&mut lab, &an, &[true, false]).unwrap();
        assert_eq!(lab.relation(cl).len(), 3);
        assert!(!lab.relation(cl).contains(&[0, 2]));
        assert!(matches!(lab.get(cl).certificate.mode, Mode::Simple { .. }));
    }

    #[test]
    fn cube_cover_is_exact() {
        let inside: BTreeSet<u64> = [0b000, 0b011, 0b101].into_iter().collect();
        let cubes = cube_cover(&inside, 3);
        for m in 0..8u64 {
            let hit = cubes.iter().any(|c| c.iter().all(|&(i, v)| (m >> i & 1 == 1) == v));
            assert_eq!(hit, !inside.contains(&m));
        }
    }

    #[test]
    fn equality_over_ac() {
        let (mut lab, an) = p4_lab();
        let eq = Relation::from_tuples(2, [vec![0, 0], vec![2, 2]]);
        let id = realize_ac_relation(&mut lab, &an, &eq).unwrap();
        assert_eq!(lab.relation(id), &eq);
    }

    #[test]
    fn purification_counts() {
        let (mut lab, an) = p4_lab();
        // b -> {a, c}, d -> {c}
        let e = lab.edge_step(&[1, 3], &[0, 2]).unwrap();
        let pid = purify(&mut lab, &an, e).unwrap();
        let cert = &lab.get(pid).certificate;
        let ins: BTreeSet<u64> = cert.in_counts.keys().map(|c| c.try_into().unwrap()).collect();
        let outs: BTreeSet<u64> = cert.out_counts.keys().map(|c| c.try_into().unwrap()).collect();
        assert!(ins.is_subset(&[2, 6, 8].into_iter().collect()));
        assert!(outs.is_subset(&[5].into_iter().collect()));
        assert_eq!(lab.relation(pid), &Relation::from_tuples(2, [vec![1, 2], vec![3, 2]]));
    }

    #[test]
    fn forcers_on_p6() {
        let h = Graph::path(6);
        let an = P4Anchor::new(&h, [0, 1, 2, 3]).unwrap();
        let mut lab = Lab::new(h);
        for s in [vec![0, 2], vec![0, 4], vec![1, 5], vec![0, 2, 4]] {
            for &x in &s {
                for &y in &s {
                    if x != y {
                        let f = build_forcer(&mut lab, &an, x, y, &s).unwrap();
                        assert!(is_forcer(lab.relation(f), x, y, &s, 0, 2));
                    }
                }
            }
        }
    }

    #[test]
    fn partitioners_on_p6() {
        let h = Graph::path(6);
        let an = P4Anchor::new(&h, [0, 1, 2, 3]).unwrap();
        let mut lab = Lab::new(h);
        let s = [1, 3, 5];
        for mask in 0..8 {
            let xs: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            let ys: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 0).map(|i| s[i]).collect();
            let id = build_partitioner(&mut lab, &an, &xs, &ys).unwrap();
            assert!(is_partitioner(lab.relation(id), &xs, &ys, 0, 2));
        }
    }
}
