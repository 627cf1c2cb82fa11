//! One golden file per subcommand. `UPDATE_GOLDEN=1` rewrites them.

use std::path::PathBuf;

use codfkit::cli::run;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str, args: &[&str]) {
    let out = run(std::iter::once("codfkit").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "{name}: {}", out.stderr);
    let path = dir().join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(out.stdout, want, "{name}");
}

fn data(file: &str) -> String {
    dir().join("data/groups").join(file).to_string_lossy().into_owned()
}

#[test]
fn normalize() {
    golden("normalize", &["normalize", "~(x > 0 & (y = 0 | x' < y))"]);
}

#[test]
fn star() {
    golden("star", &["star", "D(x)=0"]);
}

#[test]
fn triangulate() {
    golden("triangulate", &["triangulate", "x*y - 1, y^2 - x", "--var", "y"]);
}

#[test]
fn cells() {
    golden("cells", &["--var-order", "x,y", "cells", "x^2 + y^2 - 1"]);
}

#[test]
fn dim() {
    golden("dim", &["dim", "x^2 + y^2 = 1"]);
}

#[test]
fn tdim() {
    golden("tdim", &["tdim", "x' = x & x > 0"]);
}

#[test]
fn qe() {
    golden("qe", &["qe", "E y. x*y^2 = 1"]);
}

#[test]
fn qe_diff() {
    golden("qe_diff", &["qe-diff", "E y. y' = 0 & x*y = 1"]);
}

#[test]
fn uf_bound() {
    golden("uf_bound", &["uf-bound", "x^2 = y", "--var", "x"]);
}

#[test]
fn dl_lift() {
    golden("dl_lift", &["dl-lift", "--f", "x' - x", "--jet", "1,1", "--order", "5"]);
}

#[test]
fn carve_group() {
    golden("carve_group", &["carve-group", &data("multiplicative.json")]);
}

#[test]
fn check_group() {
    golden("check_group", &["check-group", &data("additive.json")]);
}
