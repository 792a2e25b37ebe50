//! Carriers, relations, images, composition and diagonals.
//!
//! ```bash
//! cargo run -p bk --example model_basics
//! ```

use bk::{BeliefStructure, Relation};

const M1: &str = r#"{
    "sorts": {"Ua": 2, "Ub": 2},
    "relations": {
        "Ra": {"from": "Ua", "to": "Ub", "pairs": [[0,0],[0,1],[1,1]]},
        "Rb": {"from": "Ub", "to": "Ua", "pairs": [[0,0],[1,1]]}
    }
}"#;

fn main() -> bk::Result<()> {
    let m = BeliefStructure::from_json(M1)?;
    println!("loaded a structure with sorts:");
    for sort in m.sorts() {
        println!("  {} has {} states", sort.name, sort.size);
    }

    let ra = m.relation("Ra")?;
    let rb = m.relation("Rb")?;
    println!("Ra = {ra}");
    println!("Rb = {rb}");

    // The image of a state is everything the agent considers possible.
    for x in 0..ra.from_size() {
        println!("Ra({x}) = {}", ra.image(x)?);
    }

    // Relational composition chains the two agents' perspectives.
    let comp = ra.compose(rb)?;
    println!("Ra ; Rb = {comp}");
    println!("diagonal(Ra ; Rb) = {}", comp.diagonal()?);

    // Identities behave as units.
    let id = Relation::identity("Ub", 2);
    assert_eq!(ra.compose(&id)?, *ra);

    // Round-trip through the document format.
    let text = m.to_json();
    let again = BeliefStructure::from_json(&text)?;
    assert_eq!(m, again);
    println!("document round-trip: ok ({} bytes)", text.len());
    Ok(())
}
