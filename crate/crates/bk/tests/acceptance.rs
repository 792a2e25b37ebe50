//! Acceptance suite: every criterion is one test that prints a pass line
//! (visible with `--nocapture`) and enforces its runtime budget.
//!
//! The suite is exhaustive where stated and seeded-random elsewhere, so
//! every run checks the same instances.

mod common;

use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use bk::coalgebra::{
    check_retraction, extract_belief_model, terminal_sequence, StrategyProfile, DEFAULT_CAP,
};
use bk::completeness::{is_assumption_complete, is_belief_complete, is_vwps, is_wps};
use bk::composition::{belief_incompleteness_counterexample, composition_lemma_check};
use bk::fixpoint::{
    basic_lemma_verify, check_bk_assumptions, diagonal_certificate, generalized_assumptions_check,
    generalized_basic_lemma_verify,
};
use bk::{BeliefCycle, BeliefStructure, Predicate, PredicateFamily, Relation};

/// Criteria run one at a time so the per-criterion budgets measure real
/// work, not scheduler contention.
static SERIAL: Mutex<()> = Mutex::new(());

fn finish(criterion: usize, description: &str, detail: String, start: Instant, budget_secs: u64) {
    let elapsed = start.elapsed();
    println!("[criterion {criterion}] PASS - {description} ({detail}; {elapsed:.2?})");
    assert!(
        elapsed < Duration::from_secs(budget_secs),
        "criterion {criterion} exceeded its {budget_secs}s budget: {elapsed:?}"
    );
}

fn random_mask(rng: &mut StdRng, bits: usize) -> u64 {
    let density: f64 = rng.random_range(0.05..0.95);
    let mut mask = 0u64;
    for i in 0..bits {
        if rng.random_bool(density) {
            mask |= 1 << i;
        }
    }
    mask
}

/// Basic fixpoint equivalence: p(c) <=> q(c) wherever the
/// believes-assumes assumptions hold, over every structure with both
/// carriers at most 3.
#[test]
fn criterion_1_basic_lemma() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut verified = 0u64;
    for na in 0usize..=3 {
        let preds: Vec<Predicate> = (0u64..(1 << na))
            .map(|mask| common::predicate_from_mask("A", na, mask))
            .collect();
        for nb in 0usize..=3 {
            for ra_mask in 0u64..(1 << (na * nb)) {
                for rb_mask in 0u64..(1 << (nb * na)) {
                    let m = common::two_sorted(na, nb, ra_mask, rb_mask);
                    for p in &preds {
                        for c in 0..na {
                            let check = check_bk_assumptions(&m, "Ra", "Rb", p, c).unwrap();
                            if check.all() {
                                let report = basic_lemma_verify(&m, "Ra", "Rb", p, c).unwrap();
                                assert!(
                                    report.holds(),
                                    "equivalence violated: na={na} nb={nb} \
                                     ra={ra_mask:#b} rb={rb_mask:#b} p={p} c={c}"
                                );
                                verified += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(verified > 0, "no instance satisfied the assumptions");
    finish(
        1,
        "basic fixpoint equivalence holds under the assumptions",
        format!("{verified} satisfied instances, zero violations"),
        start,
        30,
    );
}

/// The diagonal certificate finds no witness: exhaustively on carriers
/// up to 3 and on 10,000 random structures with carriers up to 6.
#[test]
fn criterion_2_impossibility() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut exhaustive = 0u64;
    for na in 0usize..=3 {
        for nb in 0usize..=3 {
            for ra_mask in 0u64..(1 << (na * nb)) {
                for rb_mask in 0u64..(1 << (nb * na)) {
                    let m = common::two_sorted(na, nb, ra_mask, rb_mask);
                    let cert = diagonal_certificate(&m, "Ra", "Rb", None).unwrap();
                    assert!(
                        !cert.witness_found(),
                        "witness at na={na} nb={nb} ra={ra_mask:#b} rb={rb_mask:#b}"
                    );
                    exhaustive += 1;
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0xd1a6);
    for _ in 0..10_000 {
        let na = rng.random_range(1..=6);
        let nb = rng.random_range(1..=6);
        let m = common::two_sorted(
            na,
            nb,
            random_mask(&mut rng, na * nb),
            random_mask(&mut rng, nb * na),
        );
        let cert = diagonal_certificate(&m, "Ra", "Rb", None).unwrap();
        assert!(
            !cert.witness_found(),
            "witness on random structure {}",
            m.to_json()
        );
    }
    finish(
        2,
        "no structure admits a believes-assumes witness for its diagonal",
        format!("{exhaustive} exhaustive + 10000 random structures"),
        start,
        60,
    );
}

/// wps implies vwps, and wps coincides with assumption-completeness on
/// endogenous relations: exhaustive over carriers up to 4 and families
/// of size up to 3.
#[test]
fn criterion_3_wps_vwps_assumption() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut checked = 0u64;
    for n in 0usize..=4 {
        let preds = common::all_predicates("A", n);
        let families = common::families_up_to("A", n, &preds, 3, false);
        for mask in 0u64..(1 << (n * n)) {
            let r = common::endo_relation(n, mask);
            for family in &families {
                let wps = is_wps(&r, family).unwrap();
                let ac = is_assumption_complete(&r, family).unwrap();
                assert_eq!(
                    wps, ac,
                    "wps and assumption-completeness disagree: n={n} mask={mask:#b}"
                );
                if wps.holds() {
                    assert!(
                        is_vwps(&r, family).unwrap().holds(),
                        "wps holds but vwps fails: n={n} mask={mask:#b}"
                    );
                }
                checked += 1;
            }
        }
    }
    finish(
        3,
        "wps implies vwps and coincides with assumption-completeness",
        format!("{checked} (relation, family) pairs"),
        start,
        60,
    );
}

/// Cantor's instance: no endogenous relation is wps for the full
/// powerset of its carrier. Exhaustive to carrier 3, 5,000 samples at 4.
#[test]
fn criterion_4_cantor() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut checked = 0u64;
    for n in 0usize..=3 {
        let family =
            PredicateFamily::from_predicates("A", n, common::all_predicates("A", n), false)
                .unwrap();
        for mask in 0u64..(1 << (n * n)) {
            let r = common::endo_relation(n, mask);
            assert!(
                !is_wps(&r, &family).unwrap().holds(),
                "wps for the full powerset: n={n} mask={mask:#b}"
            );
            checked += 1;
        }
    }
    let n = 4usize;
    let family =
        PredicateFamily::from_predicates("A", n, common::all_predicates("A", n), false).unwrap();
    let mut rng = StdRng::seed_from_u64(0xca_f0);
    for _ in 0..5_000 {
        let mask = random_mask(&mut rng, n * n);
        let r = common::endo_relation(n, mask);
        assert!(
            !is_wps(&r, &family).unwrap().holds(),
            "wps for the full powerset: n=4 mask={mask:#b}"
        );
        checked += 1;
    }
    finish(
        4,
        "no relation represents its full powerset",
        format!("{checked} relations"),
        start,
        60,
    );
}

/// Composition lemma: hypotheses imply the conclusion over every chain
/// with carriers up to 2 and nonempty families of size up to 2.
#[test]
fn criterion_5_composition_lemma() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut checked = 0u64;
    let mut hypotheses_held = 0u64;
    for a in 0usize..=2 {
        for b in 0usize..=2 {
            for c in 0usize..=2 {
                let preds_b: Vec<Predicate> = common::all_predicates("B", b)
                    .into_iter()
                    .filter(|p| !p.is_empty())
                    .collect();
                let preds_c: Vec<Predicate> = common::all_predicates("C", c)
                    .into_iter()
                    .filter(|p| !p.is_empty())
                    .collect();
                let families_b: Vec<PredicateFamily> =
                    common::families_up_to("B", b, &preds_b, 2, true)
                        .into_iter()
                        .filter(|f| !f.is_empty())
                        .collect();
                let families_c: Vec<PredicateFamily> =
                    common::families_up_to("C", c, &preds_c, 2, true)
                        .into_iter()
                        .filter(|f| !f.is_empty())
                        .collect();
                for ab_mask in 0u64..(1 << (a * b)) {
                    let r_ab =
                        Relation::from_fn("A", a, "B", b, |x, y| ab_mask >> (x * b + y) & 1 == 1);
                    for bc_mask in 0u64..(1 << (b * c)) {
                        let r_bc = Relation::from_fn("B", b, "C", c, |x, y| {
                            bc_mask >> (x * c + y) & 1 == 1
                        });
                        for fb in &families_b {
                            for fc in &families_c {
                                // An Err here would be the checker's own
                                // lemma-violation signal.
                                let report = composition_lemma_check(&r_ab, &r_bc, fb, fc).unwrap();
                                assert!(report.consistent);
                                if report.hypotheses_hold() {
                                    assert!(report.conclusion.holds());
                                    hypotheses_held += 1;
                                }
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(hypotheses_held > 0, "hypotheses never held");
    finish(
        5,
        "composition lemma hypotheses imply the conclusion",
        format!("{checked} instances, {hypotheses_held} with hypotheses satisfied"),
        start,
        120,
    );
}

/// The characteristic-function counterexample verifies for every
/// belief-incomplete (relation, predicate) pair with carriers up to 3.
#[test]
fn criterion_6_counterexample_construction() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut constructed = 0u64;
    for a in 0usize..=3 {
        for b in 0usize..=3 {
            for mask in 0u64..(1 << (a * b)) {
                let r = Relation::from_fn("A", a, "B", b, |x, y| mask >> (x * b + y) & 1 == 1);
                for p_mask in 1u64..(1 << b) {
                    let p = common::predicate_from_mask("B", b, p_mask);
                    let singleton =
                        PredicateFamily::from_predicates("B", b, vec![p.clone()], true).unwrap();
                    if is_belief_complete(&r, &singleton).unwrap().holds() {
                        continue;
                    }
                    let ce = belief_incompleteness_counterexample(&r, &p).unwrap();
                    // Independent re-verification through the
                    // completeness checks.
                    let one = Predicate::from_members(ce.char_relation.to_sort(), 2, &[1]).unwrap();
                    let fc = PredicateFamily::from_predicates(
                        ce.char_relation.to_sort(),
                        2,
                        vec![one],
                        true,
                    )
                    .unwrap();
                    assert!(is_assumption_complete(&ce.char_relation, &fc)
                        .unwrap()
                        .holds());
                    assert!(!is_assumption_complete(&ce.composite, &fc).unwrap().holds());
                    assert_eq!(ce.composite, r.compose(&ce.char_relation).unwrap());
                    assert_eq!(ce.failure_evidence.len(), a);
                    constructed += 1;
                }
            }
        }
    }
    assert!(constructed > 0);
    finish(
        6,
        "belief-incompleteness counterexamples verify",
        format!("{constructed} counterexamples"),
        start,
        60,
    );
}

fn cycle_structure(sizes: &[usize], masks: &[u64]) -> (BeliefStructure, BeliefCycle) {
    let len = sizes.len();
    let mut m = BeliefStructure::new();
    for (i, &size) in sizes.iter().enumerate() {
        m.insert_sort(format!("S{i}"), size).unwrap();
    }
    let mut names = Vec::with_capacity(len);
    for i in 0..len {
        let from_size = sizes[i];
        let to_size = sizes[(i + 1) % len];
        let mask = masks[i];
        let rel = Relation::from_fn(
            format!("S{i}"),
            from_size,
            format!("S{}", (i + 1) % len),
            to_size,
            |x, y| mask >> (x * to_size + y) & 1 == 1,
        );
        let name = format!("R{i}");
        m.insert_relation(name.clone(), rel).unwrap();
        names.push(name);
    }
    (m, BeliefCycle::new(names).unwrap())
}

/// Generalized lemma over belief cycles: wherever the generalized
/// assumptions hold, the composite agrees with p on the diagonal; and
/// the 2-cycle checker agrees with the three-conjunct checker on all
/// inputs. Exhaustive for cycle lengths up to 3 over carriers up to 2.
#[test]
fn criterion_7_generalized_cycles() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut verified = 0u64;
    for len in 1usize..=3 {
        let mut sizes = vec![0usize; len];
        loop {
            // Every tuple of relation masks for this size assignment.
            let bit_counts: Vec<usize> =
                (0..len).map(|i| sizes[i] * sizes[(i + 1) % len]).collect();
            let total: u64 = bit_counts.iter().map(|&b| 1u64 << b).product();
            for combo in 0..total {
                let mut rest = combo;
                let masks: Vec<u64> = bit_counts
                    .iter()
                    .map(|&bits| {
                        let m = rest & ((1u64 << bits) - 1);
                        rest >>= bits;
                        m
                    })
                    .collect();
                let (m, cycle) = cycle_structure(&sizes, &masks);
                let base = sizes[0];
                for p_mask in 0u64..(1 << base) {
                    let p = common::predicate_from_mask("S0", base, p_mask);
                    for c in 0..base {
                        let check = generalized_assumptions_check(&m, &cycle, &p, c).unwrap();
                        if check.all() {
                            let report = generalized_basic_lemma_verify(&m, &cycle, &p, c).unwrap();
                            assert!(
                                report.holds(),
                                "vwps equation violated: sizes={sizes:?} masks={masks:?} p={p} c={c}"
                            );
                            verified += 1;
                        }
                    }
                }
            }
            // Odometer over size tuples with entries 0..=2.
            let mut i = 0;
            loop {
                if i == len {
                    break;
                }
                sizes[i] += 1;
                if sizes[i] <= 2 {
                    break;
                }
                sizes[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    assert!(verified > 0);

    // Two-cycle consistency with the A1-A3 checker, on all inputs.
    let mut compared = 0u64;
    for na in 0usize..=2 {
        for nb in 0usize..=2 {
            for ra_mask in 0u64..(1 << (na * nb)) {
                for rb_mask in 0u64..(1 << (nb * na)) {
                    let mut m = common::two_sorted(na, nb, ra_mask, rb_mask);
                    m.insert_cycle(
                        "loop",
                        BeliefCycle::new(vec!["Ra".into(), "Rb".into()]).unwrap(),
                    )
                    .unwrap();
                    let cycle = m.cycle("loop").unwrap().clone();
                    for p_mask in 0u64..(1 << na) {
                        let p = common::predicate_from_mask("A", na, p_mask);
                        for c in 0..na {
                            let pair = check_bk_assumptions(&m, "Ra", "Rb", &p, c).unwrap();
                            let gen = generalized_assumptions_check(&m, &cycle, &p, c).unwrap();
                            assert_eq!(
                                pair.all(),
                                gen.all(),
                                "checkers disagree: na={na} nb={nb} ra={ra_mask:#b} rb={rb_mask:#b} p={p} c={c}"
                            );
                            compared += 1;
                        }
                    }
                }
            }
        }
    }
    finish(
        7,
        "generalized cycle lemma holds and matches the 2-agent checker",
        format!("{verified} verified cycle instances, {compared} consistency comparisons"),
        start,
        120,
    );
}

/// Coalgebra: exact cardinalities for the unit profile, extraction is
/// assumption-complete with a valid retraction for all small profiles,
/// and the bound-1 tower converges at level 1.
#[test]
fn criterion_8_coalgebra() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();

    let seq = terminal_sequence(&StrategyProfile::new(1, 1, 2).unwrap(), 4, DEFAULT_CAP).unwrap();
    let sizes: Vec<(usize, usize)> = seq
        .stages()
        .iter()
        .map(|s| (s.x_size(), s.y_size()))
        .collect();
    assert_eq!(sizes, vec![(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]);

    let mut profiles_checked = 0usize;
    for sa in 1usize..=2 {
        for sb in 1usize..=2 {
            for m in 1usize..=3 {
                let profile = StrategyProfile::new(sa, sb, m).unwrap();
                let seq = terminal_sequence(&profile, 2, 1_000_000).unwrap();
                let model = extract_belief_model(&seq, 1).unwrap();
                let s = model.structure();
                for (rel, fam) in [("Ra", "PUb"), ("Rb", "PUa")] {
                    assert!(
                        is_assumption_complete(s.relation(rel).unwrap(), s.family(fam).unwrap())
                            .unwrap()
                            .holds(),
                        "profile ({sa},{sb},{m}) fails assumption-completeness on {fam}"
                    );
                }
                assert!(
                    check_retraction(&seq, 1).unwrap().holds(),
                    "profile ({sa},{sb},{m}) fails the retraction check"
                );
                profiles_checked += 1;
            }
        }
    }

    for sa in 1usize..=2 {
        for sb in 1usize..=2 {
            let seq = terminal_sequence(&StrategyProfile::new(sa, sb, 1).unwrap(), 3, DEFAULT_CAP)
                .unwrap();
            assert_eq!(
                seq.converged_at(),
                Some(1),
                "bound-1 profile ({sa},{sb}) did not converge at level 1"
            );
        }
    }

    finish(
        8,
        "tower cardinalities, extraction completeness, retraction, and Lambek convergence",
        format!("{profiles_checked} profiles extracted and verified"),
        start,
        60,
    );
}

/// CLI contract: golden stdout per subcommand on the fixtures, the
/// documented exit codes, and schema-valid JSON reports.
#[test]
fn criterion_9_cli_contract() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let m1_path = common::fixture("m1.json");
    let m1 = m1_path.to_str().unwrap();
    let point_path = common::fixture("point.json");
    let point = point_path.to_str().unwrap();

    let golden_cases: &[(&str, Vec<&str>, i32)] = &[
        (
            "eval_true.txt",
            vec![
                "eval",
                "--model",
                m1,
                "--formula",
                "[Ra][[Rb]] p",
                "--state",
                "1",
            ],
            0,
        ),
        (
            "complete_assumption.txt",
            vec![
                "complete",
                "--model",
                m1,
                "--relation",
                "Rb",
                "--family",
                "singletons_a",
                "--kind",
                "assumption",
            ],
            0,
        ),
        (
            "fixpoint_basic.txt",
            vec![
                "fixpoint", "--model", m1, "--ra", "Ra", "--rb", "Rb", "--pred", "p", "--state",
                "1",
            ],
            0,
        ),
        (
            "cycle_holds.txt",
            vec![
                "cycle", "--model", m1, "--cycle", "loop", "--pred", "p", "--state", "1",
            ],
            0,
        ),
        (
            "compose_m1.txt",
            vec![
                "compose",
                "--model",
                m1,
                "--rab",
                "Ra",
                "--rbc",
                "Rb",
                "--family-b",
                "singletons_b",
                "--family-c",
                "singletons_a",
            ],
            1,
        ),
        (
            "compose_point.txt",
            vec![
                "compose",
                "--model",
                point,
                "--rab",
                "Ra",
                "--rbc",
                "Rb",
                "--family-b",
                "su_b",
                "--family-c",
                "su_a",
            ],
            0,
        ),
        (
            "counterexample_found.txt",
            vec![
                "counterexample",
                "--model",
                m1,
                "--relation",
                "Ra",
                "--pred",
                "qb",
            ],
            0,
        ),
        (
            "coalgebra_run.txt",
            vec![
                "coalgebra",
                "--sa",
                "1",
                "--sb",
                "1",
                "--m",
                "2",
                "--depth",
                "4",
            ],
            0,
        ),
        (
            "certify_m1.txt",
            vec!["certify", "--model", m1, "--ra", "Ra", "--rb", "Rb"],
            0,
        ),
    ];
    for (golden, args, want) in golden_cases {
        let out = common::run_bk(args, None);
        assert_eq!(
            out.status.code(),
            Some(*want),
            "{args:?}\nstdout: {}\nstderr: {}",
            common::stdout_str(&out),
            common::stderr_str(&out)
        );
        common::assert_golden(golden, &common::stdout_str(&out));
    }

    // Exit code 1: a false evaluation. Exit code 2: a missing model and
    // a malformed formula.
    let out = common::run_bk(
        &[
            "eval",
            "--model",
            m1,
            "--formula",
            "[Ra][[Rb]] p0",
            "--state",
            "0",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let out = common::run_bk(
        &[
            "eval",
            "--model",
            "no-such-file.json",
            "--formula",
            "p",
            "--state",
            "0",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!common::stderr_str(&out).is_empty());
    let out = common::run_bk(
        &["eval", "--model", m1, "--formula", "[Ra", "--state", "0"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));

    // JSON reports validate against the published schema, one per
    // subcommand.
    let json_cases: &[(&str, Vec<&str>)] = &[
        (
            "eval_true.json",
            vec![
                "eval",
                "--json",
                "--model",
                m1,
                "--formula",
                "[Ra][[Rb]] p",
                "--state",
                "1",
            ],
        ),
        (
            "complete_assumption.json",
            vec![
                "complete",
                "--json",
                "--model",
                m1,
                "--relation",
                "Rb",
                "--family",
                "singletons_a",
                "--kind",
                "assumption",
            ],
        ),
        (
            "fixpoint_basic.json",
            vec![
                "fixpoint", "--json", "--model", m1, "--ra", "Ra", "--rb", "Rb", "--pred", "p",
                "--state", "1",
            ],
        ),
        (
            "cycle_holds.json",
            vec![
                "cycle", "--json", "--model", m1, "--cycle", "loop", "--pred", "p", "--state", "1",
            ],
        ),
        (
            "compose_m1.json",
            vec![
                "compose",
                "--json",
                "--model",
                m1,
                "--rab",
                "Ra",
                "--rbc",
                "Rb",
                "--family-b",
                "singletons_b",
                "--family-c",
                "singletons_a",
            ],
        ),
        (
            "counterexample_found.json",
            vec![
                "counterexample",
                "--json",
                "--model",
                m1,
                "--relation",
                "Ra",
                "--pred",
                "qb",
            ],
        ),
        (
            "coalgebra_run.json",
            vec![
                "coalgebra",
                "--json",
                "--sa",
                "1",
                "--sb",
                "1",
                "--m",
                "2",
                "--depth",
                "4",
            ],
        ),
        (
            "certify_m1.json",
            vec![
                "certify", "--json", "--model", m1, "--ra", "Ra", "--rb", "Rb",
            ],
        ),
    ];
    for (golden, args) in json_cases {
        let out = common::run_bk(args, None);
        let text = common::stdout_str(&out);
        let value: serde_json::Value = serde_json::from_str(&text)
            .unwrap_or_else(|e| panic!("{args:?} produced invalid JSON: {e}\n{text}"));
        common::assert_valid_report(&value);
        common::assert_golden(golden, &text);
    }

    finish(
        9,
        "CLI golden files, exit codes and JSON schema",
        format!(
            "{} golden cases, {} JSON reports validated",
            golden_cases.len(),
            json_cases.len()
        ),
        start,
        10,
    );
}
