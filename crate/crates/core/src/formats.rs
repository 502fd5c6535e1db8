//! Text formats. Every label in a file is 1-based; everything in memory is 0-based.
//!
//! | file      | lines |
//! |-----------|-------|
//! | graph     | `p graph n m`, `e u v` (`e v v` is a loop) |
//! | td        | `s td bags maxbag n`, `b id v...`, `i j` |
//! | lists     | `l v h...`; a missing line is a full list, `l v` alone is empty |
//! | structure | `u size`, `s sym arity`, `t sym e...`, `l e h...`, `i e...` (gadget interface) |
//! | relation  | `r arity`, `t h...` |
//! | csp       | `p csp n q`, `k arity scope...`, `a v...` lines, `end` |
//! | cnf       | DIMACS `p cnf N M` and 0-terminated clauses |
//!
//! Lines starting with `c` are comments everywhere, blank lines are skipped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homcount::ListAssignment;
use crate::reductions::CnfFormula;
use crate::structures::{CspInstance, Relation, Structure};

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

impl<'a> Token<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col, msg)
    }

    fn int(&self) -> Result<i64> {
        self.text.parse().map_err(|_| self.err(format!("expected an integer, found {:?}", self.text)))
    }

    fn count(&self) -> Result<usize> {
        self.text.parse().map_err(|_| self.err(format!("expected a non-negative integer, found {:?}", self.text)))
    }

    /// A 1-based label below or equal to `bound`, returned 0-based.
    fn label(&self, bound: usize, what: &str) -> Result<usize> {
        let v = self.count()?;
        if v == 0 || v > bound {
            return Err(self.err(format!("{what} {v} outside 1..={bound}")));
        }
        Ok(v - 1)
    }
}

/// Non-comment lines split into tokens with 1-based positions.
fn lines(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut toks = Vec::new();
        let mut start = None;
        for (j, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    toks.push(Token { text: &line[s..j], line: i + 1, col: line[..s].chars().count() + 1 });
                    start = None;
                }
                (false, None) => start = Some(j),
                _ => {}
            }
        }
        if toks.is_empty() || toks[0].text == "c" {
            continue;
        }
        out.push(toks);
    }
    out
}

fn expect_len(toks: &[Token], n: usize, what: &str) -> Result<()> {
    if toks.len() != n {
        let at = toks.get(n).unwrap_or(&toks[toks.len() - 1]);
        return Err(at.err(format!("{what} line takes {} fields, found {}", n, toks.len())));
    }
    Ok(())
}

fn end_of(text: &str) -> Error {
    Error::parse(text.lines().count().max(1), 1, "unexpected end of input")
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut g: Option<(Graph, usize)> = None;
    let mut edges = 0;
    for toks in lines(text) {
        match toks[0].text {
            "p" => {
                if g.is_some() {
                    return Err(toks[0].err("duplicate header"));
                }
                expect_len(&toks, 4, "header")?;
                if toks[1].text != "graph" {
                    return Err(toks[1].err("expected \"graph\""));
                }
                g = Some((Graph::new(toks[2].count()?), toks[3].count()?));
            }
            "e" => {
                let (graph, _) = g.as_mut().ok_or_else(|| toks[0].err("edge before header"))?;
                expect_len(&toks, 3, "edge")?;
                let n = graph.vertex_count();
                let u = toks[1].label(n, "vertex")?;
                let v = toks[2].label(n, "vertex")?;
                graph.add_edge(u, v)?;
                edges += 1;
            }
            _ => return Err(toks[0].err(format!("unknown line type {:?}", toks[0].text))),
        }
    }
    let (graph, m) = g.ok_or_else(|| Error::parse(1, 1, "missing header"))?;
    if edges != m {
        return Err(Error::input(format!("header declares {m} edges, file has {edges}")));
    }
    Ok(graph)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p graph {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Returns the decomposition and the vertex count from its header.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for toks in lines(text) {
        match toks[0].text {
            "s" => {
                if header.is_some() {
                    return Err(toks[0].err("duplicate header"));
                }
                expect_len(&toks, 5, "header")?;
                if toks[1].text != "td" {
                    return Err(toks[1].err("expected \"td\""));
                }
                let h = (toks[2].count()?, toks[3].count()?, toks[4].count()?);
                bags = vec![None; h.0];
                header = Some(h);
            }
            "b" => {
                let (nb, _, n) = header.ok_or_else(|| toks[0].err("bag before header"))?;
                if toks.len() < 2 {
                    return Err(toks[0].err("bag line without id"));
                }
                let id = toks[1].label(nb, "bag")?;
                if bags[id].is_some() {
                    return Err(toks[1].err(format!("bag {} listed twice", id + 1)));
                }
                let vs = toks[2..].iter().map(|t| t.label(n, "vertex")).collect::<Result<Vec<_>>>()?;
                bags[id] = Some(vs);
            }
            _ => {
                let (nb, _, _) = header.ok_or_else(|| toks[0].err("tree edge before header"))?;
                expect_len(&toks, 2, "tree edge")?;
                edges.push((toks[0].label(nb, "bag")?, toks[1].label(nb, "bag")?));
            }
        }
    }
    let (_, maxbag, n) = header.ok_or_else(|| Error::parse(1, 1, "missing header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::input(format!("bag {} is never listed", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let td = TreeDecomposition::new(bags, edges);
    if td.max_bag_size() != maxbag {
        return Err(Error::input(format!("header declares bag size {maxbag}, largest bag has {}", td.max_bag_size())));
    }
    Ok((td, n))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.bags.len(), td.max_bag_size(), n);
    for (i, bag) in td.bags.iter().enumerate() {
        let mut bag = bag.clone();
        bag.sort_unstable();
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(i, j) in &td.tree_edges {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}

/// `l` lines as a sparse map from element to list.
fn list_line(toks: &[Token], n: usize, hn: usize, lists: &mut BTreeMap<usize, Vec<usize>>) -> Result<()> {
    if toks.len() < 2 {
        return Err(toks[0].err("list line without a vertex"));
    }
    let v = toks[1].label(n, "vertex")?;
    if lists.contains_key(&v) {
        return Err(toks[1].err(format!("second list for vertex {}", v + 1)));
    }
    let l = toks[2..].iter().map(|t| t.label(hn, "target vertex")).collect::<Result<Vec<_>>>()?;
    lists.insert(v, l);
    Ok(())
}

/// Lists for an instance on `n` vertices and a target on `hn` vertices.
pub fn parse_lists(text: &str, n: usize, hn: usize) -> Result<ListAssignment> {
    let mut lists = BTreeMap::new();
    for toks in lines(text) {
        if toks[0].text != "l" {
            return Err(toks[0].err(format!("unknown line type {:?}", toks[0].text)));
        }
        list_line(&toks, n, hn, &mut lists)?;
    }
    let mut out = ListAssignment::full(n, hn);
    for (v, l) in lists {
        out.set(v, l);
    }
    Ok(out)
}

/// Writes only the lists that are not full.
pub fn write_lists(l: &ListAssignment, hn: usize) -> String {
    let mut out = String::new();
    for (v, list) in l.lists().iter().enumerate() {
        if list.len() == hn {
            continue;
        }
        let _ = write!(out, "l {}", v + 1);
        for h in list {
            let _ = write!(out, " {}", h + 1);
        }
        out.push('\n');
    }
    out
}

/// A structure with an optional interface tuple (`i` line).
#[derive(Clone, Debug)]
pub struct ParsedStructure {
    pub structure: Structure,
    pub interface: Option<Vec<usize>>,
}

/// Structure file; list entries are checked against `target_size` when given.
pub fn parse_structure(text: &str, target_size: Option<usize>) -> Result<ParsedStructure> {
    let mut s: Option<Structure> = None;
    let mut interface = None;
    let mut lists = BTreeMap::new();
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    for toks in lines(text) {
        if toks[0].text == "u" {
            if s.is_some() {
                return Err(toks[0].err("duplicate universe line"));
            }
            expect_len(&toks, 2, "universe")?;
            s = Some(Structure::new(toks[1].count()?));
            continue;
        }
        let st = s.as_mut().ok_or_else(|| toks[0].err("line before the universe line"))?;
        let n = st.universe();
        match toks[0].text {
            "s" => {
                expect_len(&toks, 3, "symbol")?;
                let arity = toks[2].count()?;
                if arities.insert(toks[1].text.to_string(), arity).is_some() {
                    return Err(toks[1].err(format!("symbol {} declared twice", toks[1].text)));
                }
                st.declare(toks[1].text, arity)?;
            }
            "t" => {
                if toks.len() < 2 {
                    return Err(toks[0].err("tuple line without a symbol"));
                }
                let arity = *arities.get(toks[1].text).ok_or_else(|| toks[1].err(format!("undeclared symbol {}", toks[1].text)))?;
                if toks.len() != arity + 2 {
                    return Err(toks[0].err(format!("symbol {} has arity {arity}", toks[1].text)));
                }
                let t = toks[2..].iter().map(|t| t.label(n, "element")).collect::<Result<Vec<_>>>()?;
                st.add_tuple(toks[1].text, t)?;
            }
            "l" => list_line(&toks, n, target_size.unwrap_or(usize::MAX), &mut lists)?,
            "i" => {
                if interface.is_some() {
                    return Err(toks[0].err("duplicate interface line"));
                }
                interface = Some(toks[1..].iter().map(|t| t.label(n, "element")).collect::<Result<Vec<_>>>()?);
            }
            _ => return Err(toks[0].err(format!("unknown line type {:?}", toks[0].text))),
        }
    }
    let mut structure = s.ok_or_else(|| Error::parse(1, 1, "missing universe line"))?;
    for (e, l) in lists {
        structure.restrict(e, l);
    }
    Ok(ParsedStructure { structure, interface })
}

pub fn write_structure(s: &Structure, interface: Option<&[usize]>) -> String {
    let mut out = format!("u {}\n", s.universe());
    for (sym, r) in s.relations() {
        let _ = writeln!(out, "s {sym} {}", r.arity);
    }
    for (sym, r) in s.relations() {
        for t in &r.tuples {
            let _ = write!(out, "t {sym}");
            for e in t {
                let _ = write!(out, " {}", e + 1);
            }
            out.push('\n');
        }
    }
    for (e, l) in s.lists() {
        let _ = write!(out, "l {}", e + 1);
        for h in l {
            let _ = write!(out, " {}", h + 1);
        }
        out.push('\n');
    }
    if let Some(x) = interface {
        out.push('i');
        for e in x {
            let _ = write!(out, " {}", e + 1);
        }
        out.push('\n');
    }
    out
}

/// Relation over a target on `target_size` elements.
pub fn parse_relation(text: &str, target_size: usize) -> Result<Relation> {
    let mut r: Option<Relation> = None;
    for toks in lines(text) {
        match toks[0].text {
            "r" => {
                if r.is_some() {
                    return Err(toks[0].err("duplicate header"));
                }
                expect_len(&toks, 2, "header")?;
                r = Some(Relation::new(toks[1].count()?));
            }
            "t" => {
                let rel = r.as_mut().ok_or_else(|| toks[0].err("tuple before header"))?;
                expect_len(&toks, rel.arity + 1, "tuple")?;
                let t = toks[1..].iter().map(|t| t.label(target_size, "target vertex")).collect::<Result<Vec<_>>>()?;
                rel.tuples.insert(t);
            }
            _ => return Err(toks[0].err(format!("unknown line type {:?}", toks[0].text))),
        }
    }
    r.ok_or_else(|| Error::parse(1, 1, "missing header"))
}

pub fn write_relation(r: &Relation) -> String {
    let mut out = format!("r {}\n", r.arity);
    for t in &r.tuples {
        out.push('t');
        for h in t {
            let _ = write!(out, " {}", h + 1);
        }
        out.push('\n');
    }
    out
}

pub fn parse_csp(text: &str) -> Result<CspInstance> {
    let mut csp: Option<CspInstance> = None;
    let mut open: Option<(Token, Vec<usize>, BTreeSet<Vec<usize>>)> = None;
    for toks in lines(text) {
        if let Some((_, scope, allowed)) = open.as_mut() {
            let c = csp.as_ref().expect("header precedes constraints");
            match toks[0].text {
                "a" => {
                    expect_len(&toks, scope.len() + 1, "allowed-tuple")?;
                    allowed.insert(toks[1..].iter().map(|t| t.label(c.domain, "value")).collect::<Result<Vec<_>>>()?);
                }
                "end" => {
                    expect_len(&toks, 1, "end")?;
                    let (at, scope, allowed) = open.take().expect("open constraint");
                    csp.as_mut()
                        .expect("header")
                        .add_constraint(scope, allowed)
                        .map_err(|e| at.err(e.to_string()))?;
                }
                _ => return Err(toks[0].err("expected \"a\" or \"end\" inside a constraint")),
            }
            continue;
        }
        match toks[0].text {
            "p" => {
                if csp.is_some() {
                    return Err(toks[0].err("duplicate header"));
                }
                expect_len(&toks, 4, "header")?;
                if toks[1].text != "csp" {
                    return Err(toks[1].err("expected \"csp\""));
                }
                csp = Some(CspInstance::new(toks[2].count()?, toks[3].count()?));
            }
            "k" => {
                let c = csp.as_ref().ok_or_else(|| toks[0].err("constraint before header"))?;
                if toks.len() < 2 {
                    return Err(toks[0].err("constraint line without arity"));
                }
                let arity = toks[1].count()?;
                expect_len(&toks, arity + 2, "constraint")?;
                let scope = toks[2..].iter().map(|t| t.label(c.variables, "variable")).collect::<Result<Vec<_>>>()?;
                open = Some((toks[0], scope, BTreeSet::new()));
            }
            _ => return Err(toks[0].err(format!("unknown line type {:?}", toks[0].text))),
        }
    }
    if open.is_some() {
        return Err(end_of(text));
    }
    csp.ok_or_else(|| Error::parse(1, 1, "missing header"))
}

pub fn write_csp(c: &CspInstance) -> String {
    let mut out = format!("p csp {} {}\n", c.variables, c.domain);
    for k in &c.constraints {
        let _ = write!(out, "k {}", k.scope.len());
        for v in &k.scope {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
        for t in &k.allowed {
            out.push('a');
            for x in t {
                let _ = write!(out, " {}", x + 1);
            }
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}

pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last = None;
    for toks in lines(text) {
        if toks[0].text == "p" {
            if header.is_some() {
                return Err(toks[0].err("duplicate header"));
            }
            expect_len(&toks, 4, "header")?;
            if toks[1].text != "cnf" {
                return Err(toks[1].err("expected \"cnf\""));
            }
            header = Some((toks[2].count()?, toks[3].count()?));
            continue;
        }
        let (n, _) = header.ok_or_else(|| toks[0].err("clause before header"))?;
        for t in &toks {
            let l = t.int()?;
            if l == 0 {
                if current.is_empty() {
                    return Err(t.err("empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > n {
                return Err(t.err(format!("literal {l} names a variable above {n}")));
            } else {
                current.push(l);
            }
            last = Some(*t);
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(1, 1, "missing header"))?;
    if !current.is_empty() {
        return Err(last.map_or_else(|| end_of(text), |t| t.err("clause not terminated by 0")));
    }
    if clauses.len() != m {
        return Err(Error::input(format!("header declares {m} clauses, file has {}", clauses.len())));
    }
    CnfFormula::new(n, clauses)
}

pub fn write_cnf(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.variables, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = parse_graph("c a path with a loop\np graph 3 3\ne 1 2\ne 2 3\ne 3 3\n").unwrap();
        assert!(g.has_loop(2) && g.has_edge(0, 1) && !g.has_edge(0, 2));
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_errors_carry_positions() {
        assert_eq!(parse_graph("p graph 2 1\np graph 2 1\n"), Err(Error::parse(2, 1, "duplicate header")));
        match parse_graph("p graph 2 1\ne 1  3\n") {
            Err(Error::Parse { line: 2, col: 6, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_graph("p graph 2 2\ne 1 2\n"), Err(Error::Input(_))));
    }

    #[test]
    fn td_is_bit_exact() {
        let text = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let (td, n) = parse_td(text).unwrap();
        assert_eq!(n, 3);
        assert_eq!(write_td(&td, n), text);
        let (td, _) = parse_td("s td 1 3 3\nb 1 3 1 2\n").unwrap();
        assert_eq!(write_td(&td, 3), "s td 1 3 3\nb 1 1 2 3\n");
        assert!(parse_td("s td 1 2 3\nb 1 1 2 3\n").is_err());
    }

    #[test]
    fn lists_default_to_full() {
        let l = parse_lists("l 2 1 3\nl 3\n", 3, 4).unwrap();
        assert_eq!(l.get(0), &[0, 1, 2, 3]);
        assert_eq!(l.get(1), &[0, 2]);
        assert!(l.get(2).is_empty());
        assert_eq!(write_lists(&l, 4), "l 2 1 3\nl 3\n");
    }

    #[test]
    fn structure_and_relation() {
        let text = "u 3\ns E 2\ns T 3\nt E 1 2\nt E 2 1\nt T 1 2 3\nl 3 2\ni 1 3\n";
        let p = parse_structure(text, Some(4)).unwrap();
        assert_eq!(p.interface, Some(vec![0, 2]));
        assert_eq!(p.structure.list(2), Some(&[1][..]));
        assert_eq!(write_structure(&p.structure, p.interface.as_deref()), text);
        let r = parse_relation("r 2\nt 1 3\nt 3 1\n", 4).unwrap();
        assert_eq!(r.tuples, BTreeSet::from([vec![0, 2], vec![2, 0]]));
        assert_eq!(parse_relation(&write_relation(&r), 4).unwrap(), r);
        assert!(parse_structure("u 2\nt E 1 2\n", None).is_err());
    }

    #[test]
    fn csp_round_trip() {
        let text = "p csp 3 2\nk 2 1 3\na 1 2\na 2 1\nend\n";
        let c = parse_csp(text).unwrap();
        assert_eq!(c.constraints[0].scope, vec![0, 2]);
        assert_eq!(write_csp(&c), text);
        assert!(parse_csp("p csp 2 2\nk 1 1\na 1\n").is_err());
    }

    #[test]
    fn cnf_round_trip() {
        let f = parse_cnf("c x\np cnf 3 2\n1 -2\n 0 3 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![3]]);
        assert_eq!(parse_cnf(&write_cnf(&f)).unwrap(), f);
        assert!(parse_cnf("p cnf 2 1\n1 2\n").is_err());
        assert!(parse_cnf("p cnf 2 1\n0\n").is_err());
    }
}
