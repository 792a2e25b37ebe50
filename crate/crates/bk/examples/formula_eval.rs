//! Parsing, sort checking and evaluating modal formulas.
//!
//! `[R] f` reads "believes f", `<R> f` "considers f possible", and
//! `[[R]] f` "assumes f": the image equals f's extension exactly.
//!
//! ```bash
//! cargo run -p bk --example formula_eval
//! ```

use bk::formula::{eval, extension, parse_formula, sort_check};
use bk::BeliefStructure;

const M1: &str = r#"{
    "sorts": {"Ua": 2, "Ub": 2},
    "relations": {
        "Ra": {"from": "Ua", "to": "Ub", "pairs": [[0,0],[0,1],[1,1]]},
        "Rb": {"from": "Ub", "to": "Ua", "pairs": [[0,0],[1,1]]}
    },
    "predicates": {
        "p":  {"sort": "Ua", "members": [1]},
        "p0": {"sort": "Ua", "members": [0]}
    }
}"#;

fn main() -> bk::Result<()> {
    let m = BeliefStructure::from_json(M1)?;

    for text in ["[Ra][[Rb]] p", "[Ra][[Rb]] p0", "<Ra> true", "not p or p"] {
        let f = parse_formula(text)?;
        let sorted = sort_check(&f, &m, None)?;
        println!("{text}");
        println!("  parsed: {}  (sort {})", sorted.formula(), sorted.sort());
        for x in 0..m.sort_size(sorted.sort()).unwrap() {
            println!("  at {x}: {}", eval(&sorted, &m, x)?);
        }
        println!("  extension: {}", extension(&sorted, &m)?);
    }

    // Sort inference needs a hint only for pure boolean formulas.
    let bare = parse_formula("true and not false")?;
    let sorted = sort_check(&bare, &m, Some("Ub"))?;
    println!("bare boolean pinned to sort {}", sorted.sort());

    // The regular fragment: true, atoms, conjunction, possibility.
    for text in ["<Ra> (p and true)", "[Ra] p", "not p"] {
        println!("{text} is regular: {}", parse_formula(text)?.is_regular());
    }
    Ok(())
}
