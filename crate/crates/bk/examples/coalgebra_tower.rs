//! Terminal sequences for the bounded-powerset pair functor, and the
//! assumption-complete models extracted from them.
//!
//! ```bash
//! cargo run -p bk --example coalgebra_tower
//! ```

use bk::coalgebra::{
    bounded_powerset, check_retraction, extract_belief_model, terminal_sequence, verify_closure,
    ClosureStatus, StrategyProfile, DEFAULT_CAP,
};
use bk::completeness::is_assumption_complete;

fn main() -> bk::Result<()> {
    // Subsets of {0, 1, 2} with fewer than 3 elements, lexicographically.
    println!("bounded powerset of 3 below 3:");
    for s in bounded_powerset(3, 3) {
        println!("  {s:?}");
    }

    // The unit profile grows one element per level and never converges.
    let profile = StrategyProfile::new(1, 1, 2)?;
    let seq = terminal_sequence(&profile, 4, DEFAULT_CAP)?;
    println!("tower for sa=1 sb=1 m=2:");
    println!("  level  |X_k|  |Y_k|  first terms");
    for stage in seq.stages() {
        let terms = seq.x_terms(stage.level());
        println!(
            "  {:>5}  {:>5}  {:>5}  {}",
            stage.level(),
            stage.x_size(),
            stage.y_size(),
            terms.iter().take(3).cloned().collect::<Vec<_>>().join(" ")
        );
    }
    println!("  converged: {:?}", seq.converged_at());

    // With bound 1 every carrier is a point and Lambek fires at level 1.
    let trivial = terminal_sequence(&StrategyProfile::new(2, 2, 1)?, 3, DEFAULT_CAP)?;
    println!("bound 1 converges at level {:?}", trivial.converged_at());

    // Extract a belief model at depth 1 and verify it is
    // assumption-complete for its pulled-back families.
    let model = extract_belief_model(&seq, 1)?;
    let s = model.structure();
    println!(
        "extracted model: |Ua| = {}, |Ub| = {}, PUb has {} members",
        s.sort_size("Ua").unwrap(),
        s.sort_size("Ub").unwrap(),
        s.family("PUb")?.len()
    );
    let report = is_assumption_complete(s.relation("Ra")?, s.family("PUb")?)?;
    println!("assumption-complete for PUb: {}", report.holds());
    for (member, witness) in s
        .family("PUb")?
        .members()
        .iter()
        .zip(model.witnesses_for_ub())
    {
        println!("  {member} assumed by states {:?}", witness.states);
    }

    // The retraction: type -> assumed predicate -> type is the identity.
    let retraction = check_retraction(&seq, 1)?;
    println!(
        "retraction holds: {} ({} checks)",
        retraction.holds(),
        retraction.checks_on_ub + retraction.checks_on_ua
    );

    // Closure analysis is honest about what finite depth loses: unions
    // can outgrow the bound, and modal images need not be measurable.
    let closure = verify_closure(&model)?;
    for entry in &closure.on_ub.unions {
        let status = match entry.status {
            ClosureStatus::InFamily => "in family",
            ClosureStatus::Empty => "empty",
            ClosureStatus::NotMeasurable => "not measurable",
        };
        println!(
            "union of PUb[{}] and PUb[{}]: {status}",
            entry.left, entry.right
        );
    }
    Ok(())
}
