//! The `finmorita` binary end to end: exit codes, written files and
//! byte-identical reruns.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use finmorita::conjugation::ConjugateCategory;
use finmorita::format::{parse_conjugate, parse_diagram, parse_factorization};
use finmorita::pairs::{gen_gamma, gen_idem, gen_induction, gen_poset, gen_sigma, subset_lattice};
use tempfile::TempDir;

const BROKEN: &str = include_str!("fixtures/coverage_broken.fact");

/// `F` over the idempotent's `B` with dims (2, 3) and injective `F(i*)`;
/// morphism 1 is `i`, 2 is `i*` and 4 is `i ∘ i*`.
const SPLIT: &str = "\
diagram F over idem.B
space 0 2
space 1 3
matrix 1 2 3
1 0 0
-2 1 0
matrix 2 3 2
1 0
2 1
0 -1
matrix 4 3 3
1 0 0
0 1 0
2 -1 0
end
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finmorita")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &TempDir, kind: &str, extra: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{kind}.fact"));
    let mut args = vec!["gen-example", kind, "-o", s(&path)];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn generated_examples_reparse_to_the_same_factorization() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("idem", vec![], gen_idem()),
        ("gamma", vec!["--n", "3"], gen_gamma(3).unwrap()),
        ("sigma", vec!["--n", "2"], gen_sigma(2).unwrap()),
        ("poset", vec!["--poset", "a<b, a<c"], gen_poset("a<b, a<c").unwrap()),
        ("induction", vec![], gen_induction(subset_lattice(2))),
    ];
    for (kind, extra, expected) in cases {
        let path = generate(&dir, kind, &extra);
        let parsed = parse_factorization(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed, expected, "{kind}");
    }
}

#[test]
fn check_conjugation_passes_and_fails_with_exit_codes() {
    let dir = TempDir::new().unwrap();
    let idem = generate(&dir, "idem", &[]);
    let o = run(&["check-conjugation", s(&idem)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));

    let broken = write(&dir, "broken.fact", BROKEN);
    let o = run(&["check-conjugation", s(&broken)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("FAIL coverage") && l.contains('3')), "{out}");
}

#[test]
fn unparseable_input_exits_2_with_a_line_number() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.cat", "category x\nobjects 1\nmorphism 0 0 0\nidentity 0 0\nfrobnicate\n");
    let o = run(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));

    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["check-conjugation", "/nonexistent/file.fact"]).status.code(), Some(2));
}

#[test]
fn validate_reports_axiom_failures_with_ids() {
    let dir = TempDir::new().unwrap();
    // Both composites through the non-identity loop are wrong: f ∘ f = id.
    let cat = write(
        &dir,
        "loop.cat",
        "category loop\nobjects 1\nmorphism 0 0 0\nmorphism 1 0 0\nidentity 0 0\n\
         compose 0 0 0\ncompose 0 1 1\ncompose 1 0 0\ncompose 1 1 0\nend\n",
    );
    let o = run(&["validate", s(&cat)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL category"));

    let idem = generate(&dir, "idem", &[]);
    let o = run(&["validate", s(&idem)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn build_b_and_factorize() {
    let dir = TempDir::new().unwrap();
    let idem = generate(&dir, "idem", &[]);
    let b_file = dir.path().join("idem.b");
    assert_eq!(run(&["build-b", s(&idem), "-o", s(&b_file)]).status.code(), Some(0));
    let (b, provenance) = parse_conjugate(&std::fs::read_to_string(&b_file).unwrap()).unwrap();
    let cc = ConjugateCategory::build(&gen_idem()).unwrap();
    assert_eq!(&b, cc.b());
    assert_eq!(provenance, cc.provenance());

    let o = run(&["factorize", s(&idem), "--morphism", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "morphism 4 1 -> 1 = img 2 . mid 0 . cok 2* singular\n");
    assert_eq!(run(&["factorize", s(&idem), "--morphism", "99"]).status.code(), Some(2));
}

#[test]
fn apply_l_then_r_recovers_the_dimensions() {
    let dir = TempDir::new().unwrap();
    let idem = generate(&dir, "idem", &[]);
    let f = write(&dir, "f.diag", SPLIT);
    assert_eq!(run(&["validate", s(&f), "--pair", s(&idem)]).status.code(), Some(0));

    let lf = dir.path().join("lf.diag");
    assert_eq!(run(&["apply-l", s(&idem), s(&f), "-o", s(&lf)]).status.code(), Some(0));
    let raw = parse_diagram(&std::fs::read_to_string(&lf).unwrap()).unwrap();
    assert_eq!(raw.over, "idem.A");
    let dims: Vec<usize> = raw.spaces.iter().map(|s| s.1).collect();
    assert_eq!(dims, [2, 1]);

    let o = run(&["apply-r", s(&idem), s(&lf)]);
    assert_eq!(o.status.code(), Some(0));
    let raw = parse_diagram(&stdout(&o)).unwrap();
    assert_eq!(raw.over, "idem.B");
    let dims: Vec<usize> = raw.spaces.iter().map(|s| s.1).collect();
    assert_eq!(dims, [2, 3]);

    // A diagram over the wrong category is an input error.
    assert_eq!(run(&["apply-r", s(&idem), s(&f)]).status.code(), Some(2));
}

#[test]
fn bimodule_and_unit_check_pass() {
    let dir = TempDir::new().unwrap();
    let gamma = generate(&dir, "gamma", &["--n", "2"]);
    let o = run(&["bimodule", s(&gamma)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS free-natural-B"));
    for dim in ["1", "2"] {
        let o = run(&["unit-check", s(&gamma), "--dim", dim]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert_eq!(stdout(&o).lines().count(), 9);
    }
}

#[test]
fn check_equivalence_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let sigma = generate(&dir, "sigma", &["--n", "2"]);
    let args = ["check-equivalence", s(&sigma), "--trials", "12", "--seed", "7", "--max-dim", "3"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let out = stdout(&first);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS equivalence")).count(), 12);
}
