use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cyclarith::builders::induction_schema_proof;
use cyclarith::calculus::{parse_proof, render_proof};
use cyclarith::syntax::{parse_formula, Var};
use cyclarith::uncycle::InductionCertificate;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclarith"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn with_corpus() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["examples", "corpus", "--size", "12"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

#[test]
fn check_exit_codes() {
    let dir = with_corpus();
    let ok = run(dir.path(), &["check", "corpus/ind_schema_pi1.cyc", "--system", "sn", "--level", "0"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("verdict: valid"));

    let text = fs::read_to_string(dir.path().join("corpus/ind_schema_pi1.cyc")).unwrap();
    let corrupted = text.replacen("(back r)", "(back e)", 1);
    assert_ne!(text, corrupted);
    fs::write(dir.path().join("bad.cyc"), corrupted).unwrap();
    let bad = run(dir.path(), &["check", "bad.cyc", "--format", "sexpr"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("(verdict invalid)"));
    assert!(stdout(&bad).contains("(violation"));

    assert_eq!(code(&run(dir.path(), &["check", "missing.cyc"])), 2);
    fs::write(dir.path().join("junk.cyc"), "(node :id").unwrap();
    assert_eq!(code(&run(dir.path(), &["check", "junk.cyc"])), 2);
}

#[test]
fn every_corpus_file_checks_in_its_mode() {
    let dir = with_corpus();
    let index = fs::read_to_string(dir.path().join("corpus/index.txt")).unwrap();
    let mut n = 0;
    for line in index.lines().filter(|l| !l.starts_with(';')) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let file = format!("corpus/{}", parts[0]);
        let o = run(dir.path(), &["check", &file, "--system", parts[1], "--level", parts[2]]);
        assert_eq!(code(&o), 0, "{line}: {}", stdout(&o));
        n += 1;
    }
    assert!(n >= 12);
}

#[test]
fn annotate_matches_golden() {
    let dir = with_corpus();
    let o = run(dir.path(), &["annotate", "corpus/ind_schema_pi1.plain", "--root-vars", "x", "-o", "out.cyc"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let phi = parse_formula("(all y (eq (add x y) (add y x)))").unwrap();
    let golden = render_proof(&induction_schema_proof(&phi, &Var::new("x"), 0).unwrap().tree);
    assert_eq!(fs::read_to_string(dir.path().join("out.cyc")).unwrap(), golden);

    let again = run(dir.path(), &["annotate", "out.cyc"]);
    assert_eq!(code(&again), 2);
    assert!(String::from_utf8_lossy(&again.stderr).contains("input already annotated"));

    // A bound variable of the root sequent is accepted.
    let bound = run(dir.path(), &["annotate", "corpus/ind_schema_pi1.plain", "--root-vars", "x,y"]);
    assert_eq!(code(&bound), 0);
}

#[test]
fn uncycle_emits_certificate() {
    let dir = with_corpus();
    let o = run(
        dir.path(),
        &["uncycle", "corpus/ind_schema_pi1.cyc", "--format", "sexpr", "-o", "cert.sexp"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("cert.sexp")).unwrap();
    let cert = InductionCertificate::parse(&text).unwrap();
    assert_eq!(cert.render(), text);
    let zeta = parse_formula("(all<= x z0 (or (neq x z0) (all y (eq (add x y) (add y x)))))").unwrap();
    assert_eq!(cert.zeta, zeta);
    assert_eq!(cert.root, "r");
}

#[test]
fn unravel_and_ravel() {
    let dir = with_corpus();
    let u = run(dir.path(), &["unravel", "corpus/ind_schema_pi1.cyc", "--depth", "7"]);
    assert_eq!(code(&u), 0);
    let tree = parse_proof(&stdout(&u)).unwrap();
    assert!(!tree.has_back_links());

    assert_eq!(code(&run(dir.path(), &["unravel", "corpus/ind_schema_pi1.cyc"])), 2);

    let r = run(dir.path(), &["ravel", "corpus/ind_schema_pi1.graph", "-o", "back.cyc"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(code(&run(dir.path(), &["check", "back.cyc"])), 0);
}

#[test]
fn eval_and_prove_ground() {
    let dir = tempfile::tempdir().unwrap();
    let e = run(dir.path(), &["eval", "(ex y (eq (add y y) (s (s 0))))", "--cutoff", "8"]);
    assert_eq!(code(&e), 0);
    assert_eq!(stdout(&e).trim(), "True");
    let a = run(dir.path(), &["eval", "(eq (mul x x) 9)", "--assign", "x=3"]);
    assert_eq!(stdout(&a).trim(), "True");
    assert_eq!(code(&run(dir.path(), &["eval", "(eq x", "--assign", "x=3"])), 2);

    let p = run(dir.path(), &["prove-ground", "(eq (add (s 0) (s 0)) (s (s 0)))", "-o", "g.cyc"]);
    assert_eq!(code(&p), 0);
    assert_eq!(code(&run(dir.path(), &["check", "g.cyc"])), 0);
    assert_eq!(code(&run(dir.path(), &["prove-ground", "(eq (s 0) 0)"])), 1);
    assert_eq!(code(&run(dir.path(), &["prove-ground", "(eq x 0)"])), 2);
}

#[test]
fn assumption_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.sexp"), "(eq 0 0)\n(all y (eq y y))\n").unwrap();
    fs::write(dir.path().join("a.cyc"), "(node :id a (aseq (seq (eq 0 0)) (vars)) (assume (eq 0 0)))").unwrap();
    let o = run(dir.path(), &["check", "a.cyc", "--assume", "t.sexp"]);
    let no = run(dir.path(), &["check", "a.cyc"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&no), 1, "{}", stdout(&no));
    assert_eq!(code(&run(dir.path(), &["check", "a.cyc", "--assume", "nope.sexp"])), 2);
}
