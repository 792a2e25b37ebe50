//! Shared harness for the integration suites: small-model enumeration,
//! binary invocation, and golden-file comparison.
#![allow(dead_code)]

pub mod schema;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bk::{BeliefStructure, Predicate, PredicateFamily, Relation};

/// A two-sorted structure `A`, `B` with `Ra : A -> B` and `Rb : B -> A`
/// decoded from bit masks (row-major, bit `x * cols + y`).
pub fn two_sorted(na: usize, nb: usize, ra_mask: u64, rb_mask: u64) -> BeliefStructure {
    let mut m = BeliefStructure::new();
    m.insert_sort("A", na).unwrap();
    m.insert_sort("B", nb).unwrap();
    m.insert_relation(
        "Ra",
        Relation::from_fn("A", na, "B", nb, |x, y| ra_mask >> (x * nb + y) & 1 == 1),
    )
    .unwrap();
    m.insert_relation(
        "Rb",
        Relation::from_fn("B", nb, "A", na, |y, x| rb_mask >> (y * na + x) & 1 == 1),
    )
    .unwrap();
    m
}

pub fn endo_relation(n: usize, mask: u64) -> Relation {
    Relation::from_fn("A", n, "A", n, |x, y| mask >> (x * n + y) & 1 == 1)
}

pub fn predicate_from_mask(sort: &str, n: usize, mask: u64) -> Predicate {
    Predicate::from_fn(sort, n, |x| mask >> x & 1 == 1)
}

/// All predicates on a carrier, in ascending bit-mask order.
pub fn all_predicates(sort: &str, n: usize) -> Vec<Predicate> {
    (0u64..(1 << n))
        .map(|mask| predicate_from_mask(sort, n, mask))
        .collect()
}

/// All families assembled from the given predicates with sizes in
/// `0..=max_size`, members in ascending mask order within each family.
pub fn families_up_to(
    sort: &str,
    width: usize,
    predicates: &[Predicate],
    max_size: usize,
    nonempty: bool,
) -> Vec<PredicateFamily> {
    let mut out = Vec::new();
    let mut indices: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        out: &mut Vec<PredicateFamily>,
        indices: &mut Vec<usize>,
        start: usize,
        predicates: &[Predicate],
        sort: &str,
        width: usize,
        max_size: usize,
        nonempty: bool,
    ) {
        let members: Vec<Predicate> = indices.iter().map(|&i| predicates[i].clone()).collect();
        out.push(PredicateFamily::from_predicates(sort, width, members, nonempty).unwrap());
        if indices.len() == max_size {
            return;
        }
        for i in start..predicates.len() {
            indices.push(i);
            rec(
                out,
                indices,
                i + 1,
                predicates,
                sort,
                width,
                max_size,
                nonempty,
            );
            indices.pop();
        }
    }
    rec(
        &mut out,
        &mut indices,
        0,
        predicates,
        sort,
        width,
        max_size,
        nonempty,
    );
    out
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Runs the `bk` binary with plain-output settings and captures the
/// result.
pub fn run_bk(args: &[&str], cwd: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bk"));
    cmd.args(args).env("BK_COLOR", "0");
    if let Some(dir) = cwd {
        cmd.current_dir(dir);
    }
    cmd.output().expect("spawn bk binary")
}

pub fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

pub fn stderr_str(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

/// Compares stdout against a golden file; set `BK_UPDATE_GOLDEN=1` to
/// rewrite the goldens instead.
pub fn assert_golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var("BK_UPDATE_GOLDEN").as_deref() == Ok("1") {
        std::fs::write(&path, actual).expect("write golden");
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden {}: {e}", path.display()));
    assert_eq!(
        actual,
        expected,
        "output differs from golden {}",
        path.display()
    );
}

/// Loads the published report schema.
pub fn report_schema() -> serde_json::Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("read schema"))
        .expect("schema parses")
}

/// Validates a JSON report against the published schema, panicking with
/// the violation on failure.
pub fn assert_valid_report(value: &serde_json::Value) {
    let schema = report_schema();
    if let Err(violation) = schema::validate(value, &schema, &schema) {
        panic!("report fails schema validation: {violation}\nreport: {value:#}");
    }
}
