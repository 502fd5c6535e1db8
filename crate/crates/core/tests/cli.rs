use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("lhom-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.0.join(name);
        fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn lhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhom")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const P4: &str = "c path on four vertices\np graph 4 3\ne 1 2\ne 2 3\ne 3 4\n";
const K3: &str = "p graph 3 3\ne 1 2\ne 2 3\ne 1 3\n";

#[test]
fn irr_and_counts() {
    let s = Scratch::new("counts");
    let p4 = s.file("p4.gr", P4);
    let k3 = s.file("k3.gr", K3);
    let k2 = s.file("k2.gr", "p graph 2 1\ne 1 2\n");

    let o = lhom(&["irr", "--target", &p4]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\nwitness 1 3\n");

    let o = lhom(&["count", "--graph", &k2, "--target", &k3]);
    assert_eq!(stdout(&o).trim(), "6");
    let o = lhom(&["count-brute", "--graph", &k2, "--target", &k3]);
    assert_eq!(stdout(&o).trim(), "6");
    let o = lhom(&["count", "--graph", &k3, "--target", &p4]);
    assert_eq!(stdout(&o).trim(), "0");

    let lists = s.file("l.txt", "l 1 1\nl 2 2 3\n");
    let o = lhom(&["count", "--graph", &k2, "--target", &k3, "--lists", &lists, "--threads", "2"]);
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn neq_gadget_certificate() {
    let s = Scratch::new("neq");
    let p4 = s.file("p4.gr", P4);
    let mut gadget = String::from("u 5\ns E 2\n");
    for i in 1..5 {
        gadget += &format!("t E {i} {}\nt E {} {i}\n", i + 1, i + 1);
    }
    gadget += "l 1 1 3\nl 2 2 4\nl 3 1 3\nl 4 2 4\nl 5 1 3\ni 1 5\n";
    let gadget = s.file("neq.st", &gadget);
    let rel = s.file("neq.rel", "r 2\nt 1 3\nt 3 1\n");
    let o = lhom(&["verify-gadget", "--gadget", &gadget, "--relation", &rel, "--target", &p4]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("in-counts {3}"), "{out}");
    assert!(out.contains("out-counts {0, 2, 5}"), "{out}");

    let half = s.file("half.rel", "r 2\nt 1 3\n");
    let o = lhom(&["verify-gadget", "--gadget", &gadget, "--relation", &half, "--target", &p4]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reductions_report_counts() {
    let s = Scratch::new("reduce");
    let p4 = s.file("p4.gr", P4);
    let k3 = s.file("k3.gr", K3);
    let cnf = s.file("f.cnf", "c two clauses\np cnf 3 2\n1 -2 0\n2 3 0\n");
    let o = lhom(&["reduce-sat", "--cnf", &cnf, "--target", &p4]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("4"));

    let o = lhom(&["reduce-coloring", "--graph", &k3, "--q", "3"]);
    assert_eq!(stdout(&o).lines().next(), Some("6"));
    let o = lhom(&["reduce-ind-set", "--graph", &k3]);
    assert_eq!(stdout(&o).lines().next(), Some("0"));

    let o = lhom(&["realize", "--target", &p4, "--kind", "forcer", "--x", "1", "--y", "3", "--set", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle check ok"));
}

#[test]
fn exit_codes() {
    let s = Scratch::new("exit");
    let k3 = s.file("k3.gr", K3);
    let p4 = s.file("p4.gr", P4);
    let bad = s.file("bad.gr", "p graph 2 1\ne 1 5\n");
    assert_eq!(lhom(&["irr", "--target", &bad]).status.code(), Some(1));
    assert_eq!(lhom(&["irr", "--target", "/nonexistent/graph"]).status.code(), Some(1));
    assert_eq!(lhom(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(lhom(&["--help"]).status.code(), Some(0));
    assert_eq!(lhom(&["reduce-coloring", "--graph", &k3, "--q", "2"]).status.code(), Some(2));
    let o = lhom(&["count-brute", "--graph", &k3, "--target", &p4, "--max-brute", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn output_flag_writes_file() {
    let s = Scratch::new("output");
    let p4 = s.file("p4.gr", P4);
    let out = s.0.join("irr.txt");
    let o = lhom(&["irr", "--target", &p4, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out).unwrap(), "2\nwitness 1 3\n");
}
