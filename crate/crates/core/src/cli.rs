//! Command-line front end. Vertex labels on the command line and in files are 1-based.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;

use crate::analysis::{analyze, irr};
use crate::checks::{run_all, Scale};
use crate::decomposition::{Splice, TreeDecomposition};
use crate::error::{Error, Result};
use crate::formats;
use crate::gadgets::{build_forcer, build_indicator, build_partitioner, is_forcer, is_indicator, is_partitioner, P4Anchor};
use crate::graph::Graph;
use crate::homcount::{count_brute_with_guard, count_dp_with, DpOptions, ListAssignment, DEFAULT_BRUTE_GUARD};
use crate::realization::{answer_with_relation, certify_gadget, explicit_count, symbol_of, Lab};
use crate::reductions::{csp_to_lhom, lhom_p4_to_independent_sets, list_coloring_to_coloring, sat_to_csp, GroupingParameters};
use crate::structures::{graph_as_structure, lookup, Structure};

#[derive(Parser, Debug)]
#[command(name = "lhom", version, about = "Exact list-homomorphism counting and gadget reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads; never changes the output.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Instance {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    lists: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Forcer,
    Partitioner,
    Indicator,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// irr(H) and a witness set.
    Irr {
        #[arg(long)]
        target: PathBuf,
    },
    /// Count list homomorphisms with the decomposition dynamic program.
    Count {
        #[command(flatten)]
        inst: Instance,
        /// Tree decomposition; a single bag when absent.
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Count by enumeration, refusing search spaces above --max-brute.
    CountBrute {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, default_value_t = DEFAULT_BRUTE_GUARD)]
        max_brute: u128,
    },
    /// Components, irr, the doubled graph and the P4 structure, as JSON.
    Analyze {
        #[arg(long)]
        target: PathBuf,
    },
    /// Extension counts of a gadget (structure file with an `i` line) against a relation.
    VerifyGadget {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Build a forcer, partitioner or indicator and check it.
    Realize {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        x: Option<usize>,
        #[arg(long)]
        y: Option<usize>,
        /// Comma-separated vertex set S.
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        xs: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        ys: Vec<usize>,
        /// Induced path a,b,c,d; the least one when absent.
        #[arg(long, value_delimiter = ',')]
        anchor: Vec<usize>,
    },
    /// Model count of a DIMACS formula through CSP and list homomorphisms to --target.
    ReduceSat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value = "1/2")]
        epsilon: String,
    },
    /// List homomorphisms to P4 counted through independent sets.
    ReduceIndSet {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
    },
    /// List q-colorings counted through plain q-colorings.
    ReduceColoring {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        td: Option<PathBuf>,
        /// Attach a biclique so the width becomes exactly tw + q.
        #[arg(long)]
        pad: bool,
    },
    /// Seeded acceptance checks, one line per criterion.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Documented sizes instead of the reduced ones.
        #[arg(long)]
        full: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

/// Parse errors gain the file name.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, col, msg } => Error::Parse { line, col, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    in_file(path, formats::parse_graph(&read(path)?))
}

fn load_lists(path: Option<&Path>, n: usize, hn: usize) -> Result<ListAssignment> {
    match path {
        Some(p) => in_file(p, formats::parse_lists(&read(p)?, n, hn)),
        None => Ok(ListAssignment::full(n, hn)),
    }
}

fn load_td(path: Option<&Path>, n: usize) -> Result<TreeDecomposition> {
    match path {
        Some(p) => {
            let (td, m) = in_file(p, formats::parse_td(&read(p)?))?;
            if m != n {
                return Err(Error::input(format!("decomposition is for {m} vertices, the graph has {n}")));
            }
            Ok(td)
        }
        None => Ok(TreeDecomposition::single_bag(n)),
    }
}

fn zero_based(vs: &[usize], n: usize, what: &str) -> Result<Vec<usize>> {
    vs.iter()
        .map(|&v| {
            if v == 0 || v > n {
                Err(Error::input(format!("{what} vertex {v} outside 1..={n}")))
            } else {
                Ok(v - 1)
            }
        })
        .collect()
}

fn one_based(vs: &[usize]) -> String {
    vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn set_text(values: &BTreeSet<BigUint>) -> String {
    let v: Vec<String> = values.iter().map(BigUint::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

/// Every tuple of length `k` over `0..n`.
fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

fn verify_gadget(gadget: &Path, relation: &Path, target: &Path) -> Result<String> {
    let h = load_graph(target)?;
    let n = h.vertex_count();
    let parsed = in_file(gadget, formats::parse_structure(&read(gadget)?, Some(n)))?;
    let x = parsed.interface.ok_or_else(|| Error::input("the gadget file has no interface line"))?;
    let rel = in_file(relation, formats::parse_relation(&read(relation)?, n))?;
    let cert = certify_gadget(&parsed.structure, &x, &graph_as_structure(&h), &rel)?;
    let ins: BTreeSet<BigUint> = cert.in_counts.keys().cloned().collect();
    let outs: BTreeSet<BigUint> =
        all_tuples(n, rel.arity).into_iter().filter(|t| !rel.contains(t)).map(|t| lookup(&cert.counts, &t)).collect();
    let mode = match &cert.mode {
        crate::realization::Mode::Simple { factor } => format!("simple, factor {factor}"),
        crate::realization::Mode::Interpolation => "interpolation".into(),
    };
    Ok(format!("certificate\nmode {mode}\nin-counts {}\nout-counts {}\n", set_text(&ins), set_text(&outs)))
}

/// Single-tuple instances of `id`, alone and with an edge, checked one level deep.
fn oracle_check(lab: &Lab, id: usize, threads: usize) -> Result<usize> {
    let k = lab.relation(id).arity;
    let sym = symbol_of(id);
    let mut checked = 0;
    for with_edge in [false, true] {
        let mut inst = Structure::new(k + 1);
        inst.declare(&sym, k)?;
        inst.declare("E", 2)?;
        inst.add_tuple(&sym, (0..k).collect())?;
        if with_edge {
            inst.add_tuple("E", vec![0, k])?;
            inst.add_tuple("E", vec![k, 0])?;
        }
        let td = TreeDecomposition::single_bag(k + 1);
        let oracle = |s: &Structure, _: &TreeDecomposition| explicit_count(lab, s);
        let got = answer_with_relation(lab, &inst, &td, id, &oracle, threads, Splice::Pendant)?;
        let want = explicit_count(lab, &inst)?;
        if got != want {
            return Err(Error::internal(format!("oracle check: realized {got}, direct {want}")));
        }
        checked += 1;
    }
    Ok(checked)
}

#[allow(clippy::too_many_arguments)]
fn realize(
    target: &Path,
    kind: Kind,
    x: Option<usize>,
    y: Option<usize>,
    set: &[usize],
    xs: &[usize],
    ys: &[usize],
    anchor: &[usize],
    threads: usize,
) -> Result<String> {
    let h = load_graph(target)?;
    let n = h.vertex_count();
    let an = match anchor.len() {
        0 => P4Anchor::first(&h)?,
        4 => {
            let a = zero_based(anchor, n, "anchor")?;
            P4Anchor::new(&h, [a[0], a[1], a[2], a[3]])?
        }
        _ => return Err(Error::input("--anchor takes four vertices")),
    };
    let mut lab = Lab::new(h.clone());
    let (id, spec_ok, label) = match kind {
        Kind::Forcer => {
            let (x, y) = match (x, y) {
                (Some(x), Some(y)) => (zero_based(&[x], n, "x")?[0], zero_based(&[y], n, "y")?[0]),
                _ => return Err(Error::input("a forcer needs --x and --y")),
            };
            let s = zero_based(set, n, "S")?;
            let id = build_forcer(&mut lab, &an, x, y, &s)?;
            (id, is_forcer(lab.relation(id), x, y, &s, an.a, an.c), "forcer")
        }
        Kind::Partitioner => {
            let (xv, yv) = (zero_based(xs, n, "X")?, zero_based(ys, n, "Y")?);
            let id = build_partitioner(&mut lab, &an, &xv, &yv)?;
            (id, is_partitioner(lab.relation(id), &xv, &yv, an.a, an.c), "partitioner")
        }
        Kind::Indicator => {
            let s = zero_based(set, n, "S")?;
            let ind = build_indicator(&mut lab, &an, &s)?;
            (ind.id, is_indicator(lab.relation(ind.id), &ind.set, &ind.ids), "indicator")
        }
    };
    if !spec_ok {
        return Err(Error::internal(format!("the built relation is not a {label}")));
    }
    let checked = oracle_check(&lab, id, threads)?;
    let mut out = String::new();
    let _ = writeln!(out, "kind {label}");
    let _ = writeln!(out, "anchor {}", one_based(&an.vertices()));
    let _ = writeln!(out, "relations realized {}", lab.len());
    out.push_str(&lab.get(id).describe());
    let _ = writeln!(out, "spec check ok");
    let _ = writeln!(out, "oracle check ok ({checked} instances)");
    Ok(out)
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let threads = cli.threads.max(1);
    let out = match &cli.command {
        Command::Irr { target } => {
            let cert = irr(&load_graph(target)?)?;
            format!("{}\nwitness {}\n", cert.value, one_based(&cert.witness))
        }
        Command::Count { inst, td } => {
            let (g, h) = (load_graph(&inst.graph)?, load_graph(&inst.target)?);
            let l = load_lists(inst.lists.as_deref(), g.vertex_count(), h.vertex_count())?;
            let td = load_td(td.as_deref(), g.vertex_count())?;
            let (count, _) = count_dp_with(&g, &l, &td, &h, DpOptions { threads })?;
            format!("{count}\n")
        }
        Command::CountBrute { inst, max_brute } => {
            let (g, h) = (load_graph(&inst.graph)?, load_graph(&inst.target)?);
            let l = load_lists(inst.lists.as_deref(), g.vertex_count(), h.vertex_count())?;
            format!("{}\n", count_brute_with_guard(&g, &l, &h, *max_brute)?)
        }
        Command::Analyze { target } => {
            let report = analyze(&load_graph(target)?)?;
            serde_json::to_string_pretty(&report).map_err(|e| Error::internal(e.to_string()))? + "\n"
        }
        Command::VerifyGadget { gadget, relation, target } => verify_gadget(gadget, relation, target)?,
        Command::Realize { target, kind, x, y, set, xs, ys, anchor } => {
            realize(target, *kind, *x, *y, set, xs, ys, anchor, threads)?
        }
        Command::ReduceSat { cnf, target, q, epsilon } => {
            let f = in_file(cnf, formats::parse_cnf(&read(cnf)?))?;
            let h = load_graph(target)?;
            let eps: BigRational = epsilon.parse().map_err(|_| Error::input(format!("epsilon {epsilon:?} is not a rational")))?;
            let params = GroupingParameters::search(*q, &eps)?;
            let sat = sat_to_csp(&f, &params)?;
            let res = csp_to_lhom(&sat.csp, &h, None, None, threads)?;
            let count: BigUint = res.count.parse().map_err(|_| Error::internal("count is not an integer"))?;
            format!("{}\n", count * sat.multiplier)
        }
        Command::ReduceIndSet { graph, lists } => {
            let g = load_graph(graph)?;
            let l = load_lists(lists.as_deref(), g.vertex_count(), 4)?;
            format!("{}\n", lhom_p4_to_independent_sets(&g, &l)?.count)
        }
        Command::ReduceColoring { graph, lists, q, td, pad } => {
            let g = load_graph(graph)?;
            let l = load_lists(lists.as_deref(), g.vertex_count(), *q)?;
            let td = match td {
                Some(p) => Some(load_td(Some(p), g.vertex_count())?),
                None => None,
            };
            let red = list_coloring_to_coloring(&g, &l, *q, td.as_ref(), *pad)?;
            format!("{}\n", red.list_count(*q)?)
        }
        Command::Selftest { seed, full } => {
            let outcomes = run_all(*seed, if *full { Scale::Full } else { Scale::Quick });
            let mut out = String::new();
            for o in &outcomes {
                let _ = writeln!(out, "{}", o.line());
            }
            let code = if outcomes.iter().all(|o| o.passed) { 0 } else { 3 };
            return Ok((out, code));
        }
    };
    Ok((out, 0))
}

/// Runs the tool and returns its exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|(text, code)| {
        match &cli.output {
            Some(p) => std::fs::write(p, &text).map_err(|e| Error::input(format!("{}: {e}", p.display())))?,
            None => print!("{text}"),
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
