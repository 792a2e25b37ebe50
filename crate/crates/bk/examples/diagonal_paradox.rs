//! The diagonal predicate, operator fixpoints, and the impossibility
//! certificate: the Brandenburger-Keisler paradox at finite scale.
//!
//! ```bash
//! cargo run -p bk --example diagonal_paradox
//! ```

use bk::fixpoint::{
    basic_lemma_verify, check_bk_assumptions, diagonal_certificate, operator_fixpoint, q_predicate,
    PropOperator,
};
use bk::{BeliefStructure, Error, Predicate};

const M1: &str = r#"{
    "sorts": {"Ua": 2, "Ub": 2},
    "relations": {
        "Ra": {"from": "Ua", "to": "Ub", "pairs": [[0,0],[0,1],[1,1]]},
        "Rb": {"from": "Ub", "to": "Ua", "pairs": [[0,0],[1,1]]}
    }
}"#;

const POINT: &str = r#"{
    "sorts": {"A": 1, "B": 1},
    "relations": {
        "Ra": {"from": "A", "to": "B", "pairs": [[0,0]]},
        "Rb": {"from": "B", "to": "A", "pairs": [[0,0]]}
    }
}"#;

fn main() -> bk::Result<()> {
    let m = BeliefStructure::from_json(M1)?;

    // q(x) holds when some y has Ra(x, y) and Rb(y, x).
    let q = q_predicate(&m, "Ra", "Rb")?;
    println!("q = {q}, diagonal D = not q = {}", q.complement());

    // The believes-assumes assumptions at c = 1 for p = {1}; under them
    // p(c) and q(c) must agree.
    let p = Predicate::from_members("Ua", 2, &[1])?;
    let check = check_bk_assumptions(&m, "Ra", "Rb", &p, 1)?;
    println!(
        "assumptions for p = {p} at c = 1: A1 {} A2 {} A3 {}",
        check.a1, check.a2, check.a3
    );
    let report = basic_lemma_verify(&m, "Ra", "Rb", &p, 1)?;
    println!(
        "p(c) = {}, q(c) = {}, equivalence holds: {}",
        report.p_at_c,
        report.q_at_c,
        report.holds()
    );

    // Truth-value operators: wherever the assumptions admit p = O(q),
    // q(c) is a fixed point of O. On the one-point structure the
    // identity and const-true succeed; negation never can.
    let point = BeliefStructure::from_json(POINT)?;
    for op in PropOperator::ALL {
        match operator_fixpoint(&point, "Ra", "Rb", op, 0) {
            Ok(fp) => println!("{:<12} fixpoint value {}", op.name(), fp.value),
            Err(Error::PreconditionFailed(why)) => {
                println!("{:<12} inadmissible: {why}", op.name())
            }
            Err(e) => return Err(e),
        }
    }

    // The certificate exhausts all candidates for the diagonal predicate
    // and reports the failing conjunct for each; no witness can exist.
    for (name, text) in [("M1", M1), ("one-point", POINT)] {
        let m = BeliefStructure::from_json(text)?;
        let cert = diagonal_certificate(&m, "Ra", "Rb", None)?;
        println!(
            "{name}: searched {} candidates, witness found: {}",
            cert.searched(),
            cert.witness_found()
        );
        for (state, conjunct) in cert.per_state_failure() {
            println!("  candidate {state} fails {conjunct}");
        }
    }
    Ok(())
}
