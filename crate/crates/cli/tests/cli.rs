use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use topoforce::syntax::{parse_context, parse_formula, parse_opens};
use topoforce::Semantics;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_topoforce"));
    c.env_remove("TOPOFORCE_CTX");
    c
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let put = |name: &str, text: &str| std::fs::write(dir.path().join(name), text).unwrap();
    put("ctx.sx", "(def G (generic 0 1))\n(context (terms) (grid 0 1))\n");
    put("loc.sx", "(or (mem (hat (ratq 0)) G) (not (mem (hat (ratq 1)) G)))\n");
    put("G.sx", "(generic 0 1)\n");
    put("in.sx", "(mem (hat (ratq 0)) G)\n");
    dir
}

#[test]
fn locatedness_value_is_the_real_line() {
    let dir = workspace();
    let o = run(&["value", "--sem", "std", "--ctx", "ctx.sx", "--formula", "loc.sx"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(opens (iv -inf +inf))\n");
}

#[test]
fn context_from_environment() {
    let dir = workspace();
    let o = bin()
        .args(["value", "--sem", "settle", "--formula", "in.sx"])
        .env("TOPOFORCE_CTX", "ctx.sx")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(opens (iv 0 +inf))\n");
}

#[test]
fn settle_generic_gives_ground_cut() {
    let dir = workspace();
    let o = run(&["settle", "--term", "G.sx", "--at", "1/2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(hat (set (ratq 0)))\n");
    let o = run(&["settle", "--term", "G.sx", "--at", "-3"], dir.path());
    assert_eq!(stdout(&o), "(hat (set))\n");
}

#[test]
fn forces_exit_codes() {
    let dir = workspace();
    let inside = run(&["forces", "--ctx", "ctx.sx", "--formula", "in.sx", "--open", "(opens (iv 0 1))"], dir.path());
    assert_eq!(inside.status.code(), Some(0));
    assert_eq!(stdout(&inside), "forced\n");
    let across = run(&["forces", "--ctx", "ctx.sx", "--formula", "in.sx", "--open", "(opens (iv -1 1))"], dir.path());
    assert_eq!(across.status.code(), Some(1));
    assert_eq!(stdout(&across), "not forced\n");
}

#[test]
fn partition_tsv_rows() {
    let dir = workspace();
    let o = run(&["partition", "--term", "G.sx", "--format", "tsv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "kind\tlo\thi\trep\tsettled");
    assert_eq!(rows.len(), 1 + 3 + 2);
    assert!(rows.contains(&"cell\t0\t1\t1/2\t(hat (set (ratq 0)))"));
}

#[test]
fn equality_axioms_settle_passes() {
    let dir = workspace();
    let o = run(
        &["check", "equality-axioms", "--sem", "settle", "--seed", "7", "--rank", "3", "--count", "200"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS equality-axioms"));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = workspace();
    std::fs::write(dir.path().join("bad.sx"), "(and (bot)\n  (eq (var x) G))\n").unwrap();
    let o = run(&["value", "--ctx", "ctx.sx", "--formula", "bad.sx"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("2:7"), "{err}");
    std::fs::write(dir.path().join("open.sx"), "(mem (hat (set)\n").unwrap();
    let o = run(&["value", "--formula", "open.sx"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["check", "heyting", "--rank", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["settle", "--term", "G.sx", "--at", "1/0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["value", "--formula", "missing.sx"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let dir = workspace();
    for args in [
        &["check", "helpful-lemma", "--sem", "settle", "--seed", "3", "--count", "40", "--verbose"][..],
        &["check", "witnesses", "--verbose"][..],
        &["demo", "--grid", "0,1/2,1", "--at", "1/3"][..],
    ] {
        let a = run(args, dir.path());
        let b = run(args, dir.path());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` line in {text}"))
}

#[test]
fn counterexample_replays() {
    let dir = workspace();
    let o = run(&["check", "generic", "--seed", "1", "--grid-points", "3"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("FAIL generic"), "{text}");
    let sem: Semantics = field(&text, "sem: ").parse().unwrap();
    let (symbols, ctx) = parse_context(field(&text, "context: ")).unwrap();
    let phi = parse_formula(field(&text, "formula: "), &symbols).unwrap();
    let region = parse_opens(field(&text, "region: ")).unwrap();
    assert_eq!(sem.value(&phi, &ctx), region);
    assert!(!region.is_empty());

    std::fs::write(dir.path().join("replay-ctx.sx"), field(&text, "context: ")).unwrap();
    std::fs::write(dir.path().join("replay.sx"), field(&text, "formula: ")).unwrap();
    let o = run(
        &["value", "--sem", &sem.to_string(), "--ctx", "replay-ctx.sx", "--formula", "replay.sx"],
        dir.path(),
    );
    assert_eq!(stdout(&o).trim_end(), field(&text, "region: "));
}

#[test]
fn demo_shows_both_constructions() {
    let dir = workspace();
    let o = run(&["demo", "--at", "0"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("D at 0 settles to (hat (set))"));
    assert!(text.contains("D at 1/2 settles to (hat (set (set)))"));
    assert!(!text.contains("MISMATCH"));
}
