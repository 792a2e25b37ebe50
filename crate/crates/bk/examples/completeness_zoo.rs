//! The four completeness notions side by side, with witness reports.
//!
//! ```bash
//! cargo run -p bk --example completeness_zoo
//! ```

use bk::completeness::{
    boxplus_set, is_assumption_complete, is_belief_complete, is_vwps, is_wps, WitnessReport,
};
use bk::{BeliefStructure, Predicate, PredicateFamily};

const M1: &str = r#"{
    "sorts": {"Ua": 2, "Ub": 2},
    "relations": {
        "Ra": {"from": "Ua", "to": "Ub", "pairs": [[0,0],[0,1],[1,1]]},
        "Rb": {"from": "Ub", "to": "Ua", "pairs": [[0,0],[1,1]]}
    }
}"#;

fn show(name: &str, report: &WitnessReport) {
    if report.holds() {
        print!("{name}: holds;");
        for (p, x) in report.witnesses() {
            print!(" {p} by {x}");
        }
        println!();
    } else {
        println!(
            "{name}: fails at {}",
            report.failing_predicate().expect("failing report")
        );
    }
}

fn main() -> bk::Result<()> {
    let m = BeliefStructure::from_json(M1)?;
    let ra = m.relation("Ra")?;
    let rb = m.relation("Rb")?;

    // Comprehension: which states assume a given predicate exactly.
    let p0 = Predicate::from_members("Ua", 2, &[0])?;
    println!("states assuming {p0} under Rb: {}", boxplus_set(rb, &p0)?);

    let singletons_a = PredicateFamily::from_predicates(
        "Ua",
        2,
        vec![
            Predicate::from_members("Ua", 2, &[0])?,
            Predicate::from_members("Ua", 2, &[1])?,
        ],
        true,
    )?;
    show(
        "Rb assumption-complete for singletons",
        &is_assumption_complete(rb, &singletons_a)?,
    );

    let ones = PredicateFamily::from_predicates(
        "Ub",
        2,
        vec![Predicate::from_members("Ub", 2, &[1])?],
        true,
    )?;
    show(
        "Ra belief-complete for {{1}}",
        &is_belief_complete(ra, &ones)?,
    );

    // wps and vwps live on endogenous relations; compose the two legs.
    let comp = ra.compose(rb)?;
    let top = PredicateFamily::from_predicates("Ua", 2, vec![Predicate::full("Ua", 2)], true)?;
    show("Ra;Rb wps for {{0,1}}", &is_wps(&comp, &top)?);
    show("Ra;Rb vwps for {{0,1}}", &is_vwps(&comp, &top)?);

    // Cantor in miniature: nothing is wps for the whole powerset.
    let n = comp.from_size();
    let all: Vec<Predicate> = (0u32..(1 << n))
        .map(|mask| Predicate::from_fn("Ua", n, |x| mask >> x & 1 == 1))
        .collect();
    let powerset = PredicateFamily::from_predicates("Ua", n, all, false)?;
    show(
        "Ra;Rb wps for the full powerset",
        &is_wps(&comp, &powerset)?,
    );
    Ok(())
}
