//! Multi-agent belief cycles: chains of believes ending in assumes.
//!
//! Over a cycle r_1, ..., r_{n+1} the generalized assumptions are one
//! believes*-assumes chain plus n seriality chains; when they hold at c,
//! the cycle's composite agrees with p on the diagonal there.
//!
//! ```bash
//! cargo run -p bk --example belief_cycles
//! ```

use bk::fixpoint::{compose_cycle, generalized_assumptions_check, generalized_basic_lemma_verify};
use bk::{BeliefCycle, BeliefStructure, Predicate, Relation};

const M1: &str = r#"{
    "sorts": {"Ua": 2, "Ub": 2},
    "relations": {
        "Ra": {"from": "Ua", "to": "Ub", "pairs": [[0,0],[0,1],[1,1]]},
        "Rb": {"from": "Ub", "to": "Ua", "pairs": [[0,0],[1,1]]}
    },
    "cycles": {"loop": ["Ra", "Rb"]}
}"#;

fn main() -> bk::Result<()> {
    let m = BeliefStructure::from_json(M1)?;
    let two_cycle = m.cycle("loop")?.clone();
    let p = Predicate::from_members("Ua", 2, &[1])?;

    println!("two-agent cycle Ra ; Rb with p = {p} at c = 1:");
    let check = generalized_assumptions_check(&m, &two_cycle, &p, 1)?;
    for conjunct in check.conjuncts() {
        println!("  {} : {}", conjunct.label, conjunct.holds);
    }
    let report = generalized_basic_lemma_verify(&m, &two_cycle, &p, 1)?;
    println!(
        "  composite(1,1) = {}, p(1) = {}, witness equation holds: {}",
        report.composite_at_c,
        report.p_at_c,
        report.holds()
    );

    // A degenerate cycle of length one: plain assumption.
    let mut single = BeliefStructure::new();
    single.insert_sort("A", 3)?;
    single.insert_relation("R", Relation::identity("A", 3))?;
    let one_cycle = BeliefCycle::new(vec!["R".into()])?;
    let p = Predicate::from_members("A", 3, &[2])?;
    let check = generalized_assumptions_check(&single, &one_cycle, &p, 2)?;
    println!("one-relation cycle at c = 2:");
    for conjunct in check.conjuncts() {
        println!("  {} : {}", conjunct.label, conjunct.holds);
    }

    // A three-agent cycle. The composite returns to the base sort.
    let mut three = BeliefStructure::new();
    for (name, size) in [("A", 2), ("B", 2), ("C", 2)] {
        three.insert_sort(name, size)?;
    }
    three.insert_relation(
        "R1",
        Relation::from_pairs("A", 2, "B", 2, &[(0, 0), (1, 1)])?,
    )?;
    three.insert_relation(
        "R2",
        Relation::from_pairs("B", 2, "C", 2, &[(0, 1), (1, 0)])?,
    )?;
    three.insert_relation(
        "R3",
        Relation::from_pairs("C", 2, "A", 2, &[(0, 1), (1, 0)])?,
    )?;
    let cycle = BeliefCycle::new(vec!["R1".into(), "R2".into(), "R3".into()])?;
    let composite = compose_cycle(&three, &cycle)?;
    println!("three-agent composite R1 ; R2 ; R3 = {composite}");
    for c in 0..2 {
        let p = composite.image(c)?;
        let check = generalized_assumptions_check(&three, &cycle, &p, c)?;
        println!(
            "  candidate {c} with p = {p}: assumptions hold: {}",
            check.all()
        );
        if check.all() {
            let v = generalized_basic_lemma_verify(&three, &cycle, &p, c)?;
            println!("    witness equation holds: {}", v.holds());
        }
    }
    Ok(())
}
