//! The composition lemma and its constructive converse.
//!
//! ```bash
//! cargo run -p bk --example composition_gluing
//! ```

use bk::composition::{
    belief_incompleteness_counterexample, characterize_belief_completeness,
    composition_lemma_check, Characterization, FailureEvidence,
};
use bk::{Predicate, PredicateFamily, Relation};

fn singletons(sort: &str, width: usize) -> bk::Result<PredicateFamily> {
    let preds = (0..width)
        .map(|x| Predicate::from_members(sort, width, &[x]))
        .collect::<bk::Result<Vec<_>>>()?;
    PredicateFamily::from_predicates(sort, width, preds, true)
}

fn main() -> bk::Result<()> {
    // A chain where all three hypotheses hold, so the composite is
    // assumption-complete.
    let r_ab = Relation::identity("B", 2);
    let r_bc = Relation::from_pairs("B", 2, "C", 2, &[(0, 0), (1, 1)])?;
    let report = composition_lemma_check(&r_ab, &r_bc, &singletons("B", 2)?, &singletons("C", 2)?)?;
    println!("identity ; identity-like chain:");
    println!(
        "  hypothesis 1 (belief-complete): {}",
        report.hypothesis_1.holds()
    );
    println!(
        "  hypothesis 2 (assumption-complete): {}",
        report.hypothesis_2.holds()
    );
    println!(
        "  hypothesis 3 (comprehensions in family): {}",
        report.hypothesis_3.iter().all(|e| e.in_family)
    );
    println!("  conclusion: {}", report.conclusion.holds());

    // A first leg that fails belief-completeness breaks the chain.
    let ra = Relation::from_pairs("Ua", 2, "Ub", 2, &[(0, 0), (0, 1), (1, 1)])?;
    let rb = Relation::from_pairs("Ub", 2, "Ua", 2, &[(0, 0), (1, 1)])?;
    let report = composition_lemma_check(&ra, &rb, &singletons("Ub", 2)?, &singletons("Ua", 2)?)?;
    println!("M1 chain Ra ; Rb:");
    println!(
        "  hypothesis 1 fails at {}",
        report.hypothesis_1.failing_predicate().expect("fails")
    );
    println!("  conclusion: {}", report.conclusion.holds());

    // The converse: belief-incompleteness yields a concrete two-point
    // counterexample. Ra never believes {0} (state 0 also sees 1).
    let p = Predicate::from_members("Ub", 2, &[0])?;
    let ce = belief_incompleteness_counterexample(&ra, &p)?;
    println!("counterexample for Ra not belief-complete at {p}:");
    println!("  characteristic relation: {}", ce.char_relation);
    println!("  composite: {}", ce.composite);
    for (x, evidence) in ce.failure_evidence.iter().enumerate() {
        match evidence {
            FailureEvidence::EmptyImage => println!("  state {x}: image empty"),
            FailureEvidence::EscapingY(y) => println!("  state {x}: escapes through {y}"),
        }
    }

    // The packaged decision: complete with witnesses, or incomplete with
    // the verified counterexample.
    for family in [
        PredicateFamily::from_predicates(
            "Ub",
            2,
            vec![Predicate::from_members("Ub", 2, &[1])?],
            true,
        )?,
        PredicateFamily::from_predicates("Ub", 2, vec![p.clone()], true)?,
    ] {
        match characterize_belief_completeness(&ra, &family)? {
            Characterization::Complete(report) => {
                println!("complete; witness state {}", report.witnesses()[0].1)
            }
            Characterization::Incomplete {
                failing_predicate, ..
            } => println!("incomplete at {failing_predicate}"),
        }
    }
    Ok(())
}
