//! Seeded end-to-end checks, one per acceptance criterion.
//!
//! Each check compares a fast path against an independent enumeration and
//! reports a single pass or fail line. [`Scale::Quick`] shrinks instance counts
//! for the CLI self-test; [`Scale::Full`] runs the documented sizes.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::analysis::{associated_bipartite, irr};
use crate::decomposition::{gaifman, validate, Splice, TreeDecomposition};
use crate::error::{Error, Result};
use crate::gadgets::{
    build_forcer, build_indicator, build_partitioner, clause_gadget, is_forcer, neq_gadget, or_gadget, purify,
    realize_ac_relation, realize_relation_over_s, P4Anchor,
};
use crate::graph::{components_and_bipartition, Graph};
use crate::homcount::{count_brute, count_dp_with, DpOptions, ListAssignment};
use crate::random::{self, Rand};
use crate::realization::{answer_with_relation, explicit_count, symbol_of, Lab};
use crate::reductions::{
    bipartite_lift, consistent_project, count_clean_brute, csp_to_lhom, direct_product, lhom_p4_to_independent_sets,
    list_coloring_to_coloring, pad_pathwidth, sat_to_csp, GroupingParameters,
};
use crate::structures::{count_structure_dp, lookup, Relation, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

impl Scale {
    fn n(self, full: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Quick => full.div_ceil(10),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub criterion: usize,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {}: {verdict} ({}; {:.1}s)", self.criterion, self.detail, self.elapsed.as_secs_f64())
    }
}

/// Runs `body`, turning errors into failures and enforcing `limit` when given.
fn timed(criterion: usize, limit: Option<Duration>, body: impl FnOnce() -> Result<String>) -> Outcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; exceeded {}s", l.as_secs());
        }
    }
    Outcome { criterion, passed, detail, elapsed }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::internal(msg()))
    }
}

pub fn criterion_1(seed: u64, scale: Scale) -> Outcome {
    timed(1, Some(Duration::from_secs(60)), || {
        let mut r = random::rng(seed);
        let total = scale.n(500);
        for i in 0..total {
            let n = r.gen_range(1..=7);
            let hn = r.gen_range(1..=6);
            let g = random::graph(&mut r, n, 0.4, 0.2);
            let h = random::graph(&mut r, hn, 0.5, 0.3);
            let l = random::lists(&mut r, n, hn, 0.7);
            let td = random::elimination_td(&mut r, &g);
            let threads = 1 + i % 2;
            let (dp, _) = count_dp_with(&g, &l, &td, &h, DpOptions { threads })?;
            let brute = count_brute(&g, &l, &h)?;
            ensure(dp == brute, || format!("instance {i}: dp {dp}, brute {brute}"))?;
        }
        Ok(format!("{total} instances agree"))
    })
}

fn sized_graph(r: &mut Rand, min: usize, max: usize, p_edge: f64, p_loop: f64) -> Graph {
    let n = r.gen_range(min..=max);
    random::graph(r, n, p_edge, p_loop)
}

fn counts_of(lab: &Lab, id: usize) -> impl Fn(&[usize]) -> u64 + '_ {
    move |t: &[usize]| -> u64 { lookup(&lab.get(id).certificate.counts, t).try_into().unwrap_or(u64::MAX) }
}

pub fn criterion_2(_seed: u64, _scale: Scale) -> Outcome {
    timed(2, None, || {
        let h = Graph::path(4);
        let an = P4Anchor::new(&h, [0, 1, 2, 3])?;
        let mut lab = Lab::new(h);
        let neq = neq_gadget(&mut lab, &an)?;
        for x in 0..4 {
            for y in 0..4 {
                let want = match (x, y) {
                    (0, 0) => 2,
                    (0, 2) | (2, 0) => 3,
                    (2, 2) => 5,
                    _ => 0,
                };
                let got = counts_of(&lab, neq)(&[x, y]);
                ensure(got == want, || format!("NEQ count at ({x},{y}) is {got}"))?;
            }
        }
        for q in 1..=4 {
            let id = or_gadget(&mut lab, &an, q)?;
            let n = counts_of(&lab, id);
            for m in 0..4u64.pow(q as u32) {
                let t: Vec<usize> = (0..q).map(|i| (m / 4u64.pow(i as u32) % 4) as usize).collect();
                let want = if t.iter().any(|&v| v == 1 || v == 3) {
                    0
                } else if t.iter().all(|&v| v == 2) {
                    2
                } else {
                    1
                };
                ensure(n(&t) == want, || format!("OR_{q} count at {t:?} is {}", n(&t)))?;
            }
        }
        // b -> {a, c}, d -> {c}: S_ac = {b}, S_c = {d}
        let e = lab.edge_step(&[1, 3], &[0, 2])?;
        // a -> {a}, c -> {a, c}: S_a = {a}, S_ac = {c}
        let ac = realize_ac_relation(&mut lab, &an, &Relation::from_tuples(2, [vec![0, 0], vec![2, 0], vec![2, 2]]))?;
        let mut ins = BTreeSet::new();
        let mut outs = BTreeSet::new();
        for r in [e, ac] {
            let p = purify(&mut lab, &an, r)?;
            ensure(p != r, || "purification was skipped".into())?;
            let cert = &lab.get(p).certificate;
            ins.extend(cert.in_counts.keys().cloned());
            outs.extend(cert.out_counts.keys().cloned());
        }
        let allowed_in: BTreeSet<BigUint> = [2u32, 6, 8].into_iter().map(BigUint::from).collect();
        let allowed_out: BTreeSet<BigUint> = [5u32].into_iter().map(BigUint::from).collect();
        ensure(ins.is_subset(&allowed_in) && outs.is_subset(&allowed_out), || {
            format!("purification counts in {ins:?}, out {outs:?}")
        })?;
        Ok("NEQ, OR_1..OR_4 and purification tables exact".into())
    })
}

pub fn criterion_3(seed: u64, scale: Scale) -> Outcome {
    timed(3, None, || {
        let value = |h: &Graph| irr(h).map(|c| c.value);
        ensure(value(&Graph::path(4))? == 2, || "irr(P4) != 2".into())?;
        for q in 3..=5 {
            ensure(value(&Graph::complete(q))? == q, || format!("irr(K{q}) != {q}"))?;
            ensure(value(&Graph::reflexive_complete(q))? == 1, || format!("irr of reflexive K{q} != 1"))?;
        }
        for s in 1..=4 {
            for t in 1..=4 {
                ensure(value(&Graph::complete_bipartite(s, t))? == 1, || format!("irr(K{s},{t}) != 1"))?;
            }
        }
        let max_n = if scale == Scale::Full { 5 } else { 4 };
        let mut exhaustive = 0;
        for n in 1..=max_n {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
            for mask in 0u64..1 << pairs.len() {
                let edges: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                let h = Graph::from_edges(n, &edges)?;
                let (a, b) = (value(&h)?, value(&associated_bipartite(&h))?);
                ensure(a == b, || format!("irr {a} but irr of the doubled graph {b} for {edges:?}"))?;
                exhaustive += 1;
            }
        }
        let mut r = random::rng(seed);
        let sampled = scale.n(100);
        for _ in 0..sampled {
            let n = r.gen_range(6..=8);
            let h = random::graph(&mut r, n, 0.4, 0.2);
            let (a, b) = (value(&h)?, value(&associated_bipartite(&h))?);
            ensure(a == b, || format!("irr {a} vs {b} on a random graph"))?;
        }
        Ok(format!("fixed values exact; {exhaustive} exhaustive and {sampled} random doubled-graph checks"))
    })
}

fn subdivided_star(legs: usize) -> Graph {
    let mut g = Graph::new(1 + 2 * legs);
    for i in 0..legs {
        g.add_edge(0, 1 + 2 * i).expect("in range");
        g.add_edge(1 + 2 * i, 2 + 2 * i).expect("in range");
    }
    g
}

/// Vertices on the same side as `v`, in increasing order.
fn side_of(h: &Graph, v: usize) -> Vec<usize> {
    let (_, bip) = components_and_bipartition(h);
    let s = bip.side(v);
    (0..h.vertex_count()).filter(|&u| bip.component_of[u] == bip.component_of[v] && bip.side(u) == s).collect()
}

/// Runs every gadget construction once on `h`; returns the lab.
fn exercise_library(h: &Graph, r: &mut Rand) -> Result<Lab> {
    let an = P4Anchor::first(h)?;
    let mut lab = Lab::new(h.clone());
    neq_gadget(&mut lab, &an)?;
    for q in 1..=3 {
        or_gadget(&mut lab, &an, q)?;
    }
    clause_gadget(&mut lab, &an, &[true, false])?;
    clause_gadget(&mut lab, &an, &[false, true, true])?;
    let cube: Vec<Vec<usize>> = [an.a, an.c].iter().flat_map(|&x| [an.a, an.c].map(|y| vec![x, y])).collect();
    let rel = loop {
        let t: Vec<Vec<usize>> = cube.iter().filter(|_| r.gen_bool(0.5)).cloned().collect();
        if !t.is_empty() {
            break Relation::from_tuples(2, t);
        }
    };
    realize_ac_relation(&mut lab, &an, &rel)?;
    let other = side_of(h, an.b);
    let e = lab.edge_step(&other, &[an.a, an.c])?;
    purify(&mut lab, &an, e)?;
    for side in [side_of(h, an.a), other] {
        let mut s = side.clone();
        s.shuffle(r);
        s.truncate(3);
        s.sort_unstable();
        build_forcer(&mut lab, &an, s[0], s[1], &s)?;
        build_forcer(&mut lab, &an, s[1], s[0], &s)?;
        build_partitioner(&mut lab, &an, &s[..1], &s[1..])?;
        build_indicator(&mut lab, &an, &s)?;
        let pairs: Vec<Vec<usize>> = s.iter().flat_map(|&x| s.iter().map(move |&y| vec![x, y])).collect();
        let picked: Vec<Vec<usize>> = pairs.iter().filter(|_| r.gen_bool(0.4)).cloned().collect();
        let rel = Relation::from_tuples(2, if picked.is_empty() { vec![pairs[0].clone()] } else { picked });
        realize_relation_over_s(&mut lab, &an, &s, 2, 0, &rel)?;
    }
    Ok(lab)
}

/// A small instance using relation `id` once or twice, plus an edge and some lists.
fn relation_instance(r: &mut Rand, lab: &Lab, id: usize) -> Structure {
    let k = lab.relation(id).arity;
    let hn = lab.target_graph().vertex_count();
    let u = k + r.gen_range(0..=1);
    let mut s = Structure::new(u);
    let sym = symbol_of(id);
    s.declare(&sym, k).expect("fresh symbol");
    s.declare("E", 2).expect("fresh symbol");
    let copies = if k <= 2 { r.gen_range(1..=2) } else { 1 };
    for c in 0..copies {
        let t: Vec<usize> = if c == 0 { (0..k).collect() } else { (0..k).map(|_| r.gen_range(0..u)).collect() };
        s.add_tuple(&sym, t).expect("in range");
    }
    if r.gen_bool(0.5) {
        let (x, y) = (r.gen_range(0..u), r.gen_range(0..u));
        s.add_tuple("E", vec![x, y]).expect("in range");
        s.add_tuple("E", vec![y, x]).expect("in range");
    }
    if r.gen_bool(0.5) {
        let e = r.gen_range(0..u);
        let l: Vec<usize> = (0..hn).filter(|_| r.gen_bool(0.6)).collect();
        s.restrict(e, l);
    }
    s
}

pub fn criterion_4(seed: u64, scale: Scale) -> Outcome {
    timed(4, Some(Duration::from_secs(300)), || {
        let mut r = random::rng(seed);
        let mut targets = vec![("P4".to_string(), Graph::path(4)), ("P6".into(), Graph::path(6)), ("subdivided star".into(), subdivided_star(3))];
        for i in 0..scale.n(3) {
            targets.push((format!("random target {i}"), random::valid_target(&mut r, 5, 8)));
        }
        let per = if scale == Scale::Full { 3 } else { 1 };
        let mut checked = 0;
        for (name, h) in &targets {
            let lab = exercise_library(h, &mut r)?;
            let full = lab.full_target();
            let oracle = |s: &Structure, td: &TreeDecomposition| count_structure_dp(s, &full, td);
            for id in 0..lab.len() {
                for _ in 0..per {
                    let inst = relation_instance(&mut r, &lab, id);
                    let td = TreeDecomposition::min_degree(&gaifman(&inst));
                    let got = answer_with_relation(&lab, &inst, &td, id, &oracle, 1, Splice::Pendant)?;
                    let want = explicit_count(&lab, &inst)?;
                    ensure(got == want, || format!("{name}, {}: realized {got}, direct {want}", symbol_of(id)))?;
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} relation instances over {} targets", targets.len()))
    })
}

/// One-sided sets of size 2..=4 on each side of the anchor's component.
fn one_sided_sets(h: &Graph, an: &P4Anchor) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for side in [side_of(h, an.a), side_of(h, an.b)] {
        for mask in 1u32..1 << side.len() {
            let k = mask.count_ones();
            if (2..=4).contains(&k) {
                out.push((0..side.len()).filter(|i| mask >> i & 1 == 1).map(|i| side[i]).collect());
            }
        }
    }
    out
}

pub fn criterion_5(seed: u64, scale: Scale) -> Outcome {
    timed(5, None, || {
        let mut r = random::rng(seed);
        let mut targets = vec![Graph::path(6)];
        for _ in 0..scale.n(20) {
            targets.push(random::valid_target(&mut r, 4, 8));
        }
        let mut built = 0;
        for h in &targets {
            let an = P4Anchor::first(h)?;
            let mut lab = Lab::new(h.clone());
            for s in one_sided_sets(h, &an) {
                for &x in &s {
                    for &y in &s {
                        if x == y {
                            continue;
                        }
                        let f = build_forcer(&mut lab, &an, x, y, &s)?;
                        ensure(is_forcer(lab.relation(f), x, y, &s, an.a, an.c), || {
                            format!("relation for ({x},{y},{s:?}) is not a forcer")
                        })?;
                        built += 1;
                    }
                }
            }
        }
        Ok(format!("{built} forcers over {} targets", targets.len()))
    })
}

pub fn criterion_6(seed: u64, scale: Scale) -> Outcome {
    timed(6, Some(Duration::from_secs(120)), || {
        let mut r = random::rng(seed);
        let params = GroupingParameters::search(2, &BigRational::new(1.into(), 2.into()))?;
        let p4 = Graph::path(4);
        let total = scale.n(50);
        for i in 0..total {
            let n = r.gen_range(3..=8);
            let m = r.gen_range(1..=5);
            let f = random::cnf(&mut r, n, m, 3);
            let sat = sat_to_csp(&f, &params)?;
            let res = csp_to_lhom(&sat.csp, &p4, None, None, 1)?;
            let got = res.count.parse::<BigUint>().map_err(|e| Error::internal(e.to_string()))? * &sat.multiplier;
            let want = f.count_brute()?;
            ensure(got == want, || format!("formula {i}: chain {got}, enumeration {want}"))?;
        }
        Ok(format!("{total} formulas with at most 8 variables and 5 clauses"))
    })
}

pub fn criterion_7(seed: u64, scale: Scale) -> Outcome {
    timed(7, None, || {
        let mut r = random::rng(seed);
        let total = scale.n(200);
        for i in 0..total {
            let n = r.gen_range(1..=5);
            let hn = r.gen_range(1..=4);
            let g = random::graph(&mut r, n, 0.5, 0.2);
            let h = random::graph(&mut r, hn, 0.5, 0.3);
            let l = random::lists(&mut r, n, hn, 0.7);
            let clean = count_clean_brute(&bipartite_lift(&g, &l, &h)?, 1 << 30)?;
            let direct = count_brute(&g, &l, &h)?;
            ensure(clean == direct, || format!("lift instance {i}: clean {clean}, direct {direct}"))?;
        }
        for i in 0..total {
            let h = sized_graph(&mut r, 1, 4, 0.5, 0.3);
            let hs = associated_bipartite(&h);
            let m = h.vertex_count();
            let g = loop {
                let g = sized_graph(&mut r, 1, 6, 0.5, 0.0);
                if g.is_connected() && g.is_bipartite() {
                    break g;
                }
            };
            let (_, bip) = components_and_bipartition(&g);
            let flip = r.gen_bool(0.5);
            let lists: Vec<Vec<usize>> = (0..g.vertex_count())
                .map(|v| {
                    let doubled = (bip.side(v) == Some(1)) != flip;
                    (0..m).filter(|_| r.gen_bool(0.7)).map(|x| if doubled { x + m } else { x }).collect()
                })
                .collect();
            let l = ListAssignment::new(lists);
            let proj = consistent_project(&g, &l, &h)?;
            let (lifted, projected) = (count_brute(&g, &l, &hs)?, count_brute(&g, &proj, &h)?);
            ensure(lifted == projected, || format!("projection instance {i}: {lifted} vs {projected}"))?;
        }
        Ok(format!("{total} clean-lift and {total} projection instances"))
    })
}

pub fn criterion_8(seed: u64, scale: Scale) -> Outcome {
    timed(8, None, || {
        let mut r = random::rng(seed);
        let total = scale.n(100);
        let p4 = Graph::path(4);
        for i in 0..total {
            let n = r.gen_range(1..=7);
            let g = random::graph(&mut r, n, 0.35, 0.0);
            let l = random::lists(&mut r, n, 4, 0.7);
            let got = lhom_p4_to_independent_sets(&g, &l)?.count;
            let want = count_brute(&g, &l, &p4)?;
            ensure(got == want, || format!("independent-set instance {i}: {got} vs {want}"))?;
        }
        let k3 = Graph::complete(3);
        for i in 0..total {
            let n = r.gen_range(1..=6);
            let g = random::graph(&mut r, n, 0.4, 0.0);
            let l = random::lists(&mut r, n, 3, 0.7);
            let td = random::elimination_td(&mut r, &g);
            let red = list_coloring_to_coloring(&g, &l, 3, Some(&td), r.gen_bool(0.5))?;
            let (got, want) = (red.list_count(3)?, count_brute(&g, &l, &k3)?);
            ensure(got == want, || format!("coloring instance {i}: {got} vs {want}"))?;
        }
        for i in 0..total {
            let g = sized_graph(&mut r, 1, 5, 0.4, 0.1);
            let h1 = sized_graph(&mut r, 1, 3, 0.6, 0.4);
            let h2 = sized_graph(&mut r, 1, 3, 0.6, 0.4);
            let n = g.vertex_count();
            let c = |h: &Graph| count_brute(&g, &ListAssignment::full(n, h.vertex_count()), h);
            let (prod, a, b) = (c(&direct_product(&h1, &h2))?, c(&h1)?, c(&h2)?);
            ensure(prod == &a * &b, || format!("product instance {i}: {prod} vs {a} * {b}"))?;
        }
        Ok(format!("{total} instances for each pipeline and the product identity"))
    })
}

/// `K_{3,3}` plus one pendant vertex attached to vertex 0.
pub fn k33_with_pendant() -> Graph {
    let mut h = Graph::complete_bipartite(3, 3);
    let p = h.add_vertex();
    h.add_edge(0, p).expect("in range");
    h
}

pub fn criterion_9(seed: u64, scale: Scale) -> Outcome {
    timed(9, None, || {
        let h = k33_with_pendant();
        let base = irr(&h)?.value;
        let bound = base.pow(5);
        let naive = h.vertex_count().pow(5);
        ensure(bound < naive, || format!("irr^5 = {bound} is not below |V(H)|^5 = {naive}"))?;
        let mut r = random::rng(seed);
        let total = scale.n(40);
        let mut largest = 0;
        for i in 0..total {
            let n = r.gen_range(5..=8);
            let (g, td) = random::partial_ktree(&mut r, n, 4, 0.9);
            // bipartite instances only; the others count zero without building tables
            let colors: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
            let kept: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| colors[u] != colors[v]).collect();
            let g = Graph::from_edges(n, &kept)?;
            ensure(td.width() == 4, || "decomposition width is not 4".into())?;
            let l = ListAssignment::full(n, h.vertex_count());
            let (count, stats) = count_dp_with(&g, &l, &td, &h, DpOptions::default())?;
            let brute = count_brute(&g, &l, &h)?;
            ensure(count == brute, || format!("instance {i}: dp {count}, brute {brute}"))?;
            ensure(stats.max_table <= bound, || format!("instance {i}: table of {} states", stats.max_table))?;
            largest = largest.max(stats.max_table);
        }
        ensure(largest > 0, || "no instance built a table".into())?;
        Ok(format!("irr = {base}; largest table {largest} <= {bound} < {naive} over {total} instances"))
    })
}

pub fn criterion_10(seed: u64, scale: Scale) -> Outcome {
    timed(10, None, || {
        let mut r = random::rng(seed);
        let total = scale.n(100);
        for i in 0..total {
            let n = r.gen_range(2..=6);
            let mut g = random::graph(&mut r, n, 0.4, 0.1);
            if (0..n).all(|v| g.neighbors(v).iter().all(|&w| w == v)) {
                g.add_edge(0, 1)?;
            }
            let hn = r.gen_range(2..=4);
            // an isolated target vertex cannot host the attached biclique
            let h = loop {
                let h = random::graph(&mut r, hn, 0.6, 0.3);
                if (0..hn).all(|v| h.degree(v) > 0) {
                    break h;
                }
            };
            let l = random::lists(&mut r, n, hn, 0.8);
            let td = random::random_path_td(&mut r, &g);
            let pad = pad_pathwidth(&g, &l, &td, &h)?;
            let (got, want) = (pad.recombine(&h)?, count_brute(&g, &l, &h)?);
            ensure(got == want, || format!("padding instance {i}: {got} vs {want}"))?;
            let report = validate(&pad.graph, &pad.decomposition)?;
            ensure(report.is_valid(), || format!("padding instance {i}: invalid decomposition"))?;
            ensure(pad.decomposition.is_path() && pad.decomposition.width() == pad.width && pad.width == td.width(), || {
                format!("padding instance {i}: width {} declared {}", pad.decomposition.width(), pad.width)
            })?;
            let t = pad.width;
            let biclique = pad.side_a.len() == t
                && pad.side_b.len() == t
                && pad.side_a.iter().all(|&a| pad.side_b.iter().all(|&b| pad.graph.has_edge(a, b)));
            ensure(biclique, || format!("padding instance {i}: no K_{{{t},{t}}}"))?;
        }
        Ok(format!("{total} padded instances"))
    })
}

/// Every criterion with its own seed derived from `seed`.
pub fn run_all(seed: u64, scale: Scale) -> Vec<Outcome> {
    let checks: [fn(u64, Scale) -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    checks.iter().enumerate().map(|(i, c)| c(seed.wrapping_add(i as u64), scale)).collect()
}

