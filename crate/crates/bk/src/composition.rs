//! Compositional gluing of belief relations.
//!
//! The composition lemma: if `R_ab : A -> B` is belief-complete for
//! `P(B)`, `S_bc : B -> C` is assumption-complete for `P(C)`, and every
//! comprehension `boxplus(S_bc, p)` with `p` in `P(C)` lies in `P(B)`,
//! then the composite `R_ab ; S_bc` is assumption-complete for `P(C)`.
//!
//! Its converse characterizes belief-completeness: when `R` is not
//! belief-complete for some nonempty `p`, composing with the
//! characteristic function of `p` into a fresh two-point carrier yields
//! an assumption-complete second leg whose composite fails to assume
//! `{1}`. [`belief_incompleteness_counterexample`] builds that witness
//! and verifies it; [`characterize_belief_completeness`] packages the
//! two directions into a single decision.
//!
//! Predicates in families here follow the nonempty convention; an empty
//! member is rejected.

use serde_json::{json, Value};

use crate::completeness::{boxplus_set, is_assumption_complete, is_belief_complete, WitnessReport};
use crate::error::{Error, Result};
use crate::model::{Predicate, PredicateFamily, Relation};

/// One comprehension row of the composition lemma's third hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComprehensionEntry {
    /// The predicate from `P(C)`.
    pub predicate: Predicate,
    /// Its comprehension under the second leg, a predicate on `B`.
    pub boxplus: Predicate,
    /// Whether the comprehension is a member of `P(B)`.
    pub in_family: bool,
}

/// The three hypotheses and the conclusion of the composition lemma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionReport {
    /// Belief-completeness of the first leg for `P(B)`.
    pub hypothesis_1: WitnessReport,
    /// Assumption-completeness of the second leg for `P(C)`.
    pub hypothesis_2: WitnessReport,
    /// Comprehension rows for every predicate of `P(C)`.
    pub hypothesis_3: Vec<ComprehensionEntry>,
    /// Assumption-completeness of the composite for `P(C)`.
    pub conclusion: WitnessReport,
    /// True unless all hypotheses hold and the conclusion fails, which
    /// the lemma rules out; a report can therefore never carry `false`.
    pub consistent: bool,
}

impl CompositionReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypothesis_1.holds()
            && self.hypothesis_2.holds()
            && self.hypothesis_3.iter().all(|e| e.in_family)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "hypothesis_1": self.hypothesis_1.to_json(),
            "hypothesis_2": self.hypothesis_2.to_json(),
            "hypothesis_3": self.hypothesis_3.iter().map(|e| json!({
                "predicate": e.predicate.members(),
                "boxplus": e.boxplus.members(),
                "in_family": e.in_family,
            })).collect::<Vec<_>>(),
            "conclusion": self.conclusion.to_json(),
            "consistent": self.consistent,
        })
    }
}

fn require_nonempty_members(family: &PredicateFamily, which: &str) -> Result<()> {
    if !family.all_nonempty() {
        return Err(Error::EmptyPredicateInFamily(which.to_string()));
    }
    Ok(())
}

/// Evaluates the composition lemma's hypotheses and conclusion for a
/// chain `r_ab : A -> B`, `r_bc : B -> C` with families on `B` and `C`.
pub fn composition_lemma_check(
    r_ab: &Relation,
    r_bc: &Relation,
    family_b: &PredicateFamily,
    family_c: &PredicateFamily,
) -> Result<CompositionReport> {
    if r_ab.to_sort() != r_bc.from_sort() {
        return Err(Error::SortMismatch {
            context: "composition chain".into(),
            expected: r_ab.to_sort().to_string(),
            found: r_bc.from_sort().to_string(),
        });
    }
    require_nonempty_members(family_b, "family on the middle sort")?;
    require_nonempty_members(family_c, "family on the final sort")?;

    let hypothesis_1 = is_belief_complete(r_ab, family_b)?;
    let hypothesis_2 = is_assumption_complete(r_bc, family_c)?;
    let mut hypothesis_3 = Vec::with_capacity(family_c.len());
    for p in family_c.members() {
        let bp = boxplus_set(r_bc, p)?;
        let in_family = family_b.contains(&bp);
        hypothesis_3.push(ComprehensionEntry {
            predicate: p.clone(),
            boxplus: bp,
            in_family,
        });
    }
    let composite = r_ab.compose(r_bc)?;
    let conclusion = is_assumption_complete(&composite, family_c)?;

    let report = CompositionReport {
        hypothesis_1,
        hypothesis_2,
        hypothesis_3,
        conclusion,
        consistent: true,
    };
    if report.hypotheses_hold() && !report.conclusion.holds() {
        return Err(Error::Internal(
            "composition lemma violated: hypotheses hold but the composite is not assumption-complete"
                .into(),
        ));
    }
    Ok(report)
}

/// Why one source state fails to assume `{1}` through the composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureEvidence {
    /// The state's image under the first leg is empty, so the composite
    /// image is empty too.
    EmptyImage,
    /// The first leg reaches this target state outside `p`, forcing the
    /// composite to hit `0`.
    EscapingY(usize),
}

impl FailureEvidence {
    fn to_json(self) -> Value {
        match self {
            FailureEvidence::EmptyImage => json!("empty_image"),
            FailureEvidence::EscapingY(y) => json!({ "escaping_y": y }),
        }
    }
}

/// The constructed witness that a relation is not belief-complete for a
/// predicate: a two-point carrier, the characteristic function of `p`,
/// the singleton family `{{1}}`, and per-state failure evidence for the
/// composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The characteristic function of `p` as a relation `B -> C` with
    /// `C = {0, 1}`; state `1` means "in `p`".
    pub char_relation: Relation,
    /// The family `{{1}}` on the two-point carrier.
    pub family_c: PredicateFamily,
    /// The composite `r ; S`.
    pub composite: Relation,
    /// For each state of `A`, why it does not assume `{1}`.
    pub failure_evidence: Vec<FailureEvidence>,
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        json!({
            "c_sort": self.char_relation.to_sort(),
            "char_relation": {
                "from": self.char_relation.from_sort(),
                "to": self.char_relation.to_sort(),
                "pairs": self.char_relation.pairs(),
            },
            "family_c": self.family_c.members().iter().map(|p| p.members()).collect::<Vec<_>>(),
            "composite": {
                "from": self.composite.from_sort(),
                "to": self.composite.to_sort(),
                "pairs": self.composite.pairs(),
            },
            "failure_evidence": self.failure_evidence
                .iter()
                .map(|e| e.to_json())
                .collect::<Vec<_>>(),
        })
    }
}

/// The characteristic function of `p` as a relation into a fresh
/// two-point sort: each `y` in `p` maps to `1`, each `y` outside to `0`.
pub fn characteristic_relation(p: &Predicate, c_sort: &str) -> Relation {
    Relation::from_fn(p.sort(), p.width(), c_sort, 2, |y, z| {
        if p.contains(y) {
            z == 1
        } else {
            z == 0
        }
    })
}

fn fresh_c_sort(r: &Relation) -> String {
    let mut name = "C".to_string();
    while name == r.from_sort() || name == r.to_sort() {
        name.push('_');
    }
    name
}

/// Builds and verifies the counterexample for a relation that is not
/// belief-complete for a nonempty `p` on its target sort.
pub fn belief_incompleteness_counterexample(r: &Relation, p: &Predicate) -> Result<Counterexample> {
    if p.sort() != r.to_sort() {
        return Err(Error::SortMismatch {
            context: "counterexample predicate".into(),
            expected: r.to_sort().to_string(),
            found: p.sort().to_string(),
        });
    }
    if p.width() != r.to_size() {
        return Err(Error::WidthMismatch {
            context: "counterexample predicate".into(),
            expected: r.to_size(),
            found: p.width(),
        });
    }
    if p.is_empty() {
        return Err(Error::EmptyPredicateInFamily(
            "counterexample predicate must be nonempty".into(),
        ));
    }
    let singleton = PredicateFamily::from_predicates(p.sort(), p.width(), vec![p.clone()], true)?;
    if is_belief_complete(r, &singleton)?.holds() {
        return Err(Error::PreconditionFailed(format!(
            "relation is belief-complete for {p}; no counterexample exists"
        )));
    }

    let c_sort = fresh_c_sort(r);
    let char_relation = characteristic_relation(p, &c_sort);
    let one = Predicate::from_members(&c_sort, 2, &[1])?;
    let family_c = PredicateFamily::from_predicates(&c_sort, 2, vec![one], true)?;

    // Any element of p assumes {1}, so the second leg is
    // assumption-complete; this can only fail through a bug.
    if !is_assumption_complete(&char_relation, &family_c)?.holds() {
        return Err(Error::Internal(
            "characteristic relation failed to assume {1}".into(),
        ));
    }

    let composite = r.compose(&char_relation)?;
    if is_assumption_complete(&composite, &family_c)?.holds() {
        return Err(Error::Internal(
            "composite assumes {1} despite belief-incompleteness".into(),
        ));
    }

    let mut failure_evidence = Vec::with_capacity(r.from_size());
    for x in 0..r.from_size() {
        let image = r.image(x)?;
        if image.is_empty() {
            failure_evidence.push(FailureEvidence::EmptyImage);
        } else {
            let escaping = image
                .members()
                .into_iter()
                .find(|&y| !p.contains(y))
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "state {x} believes {p} although the relation is not belief-complete"
                    ))
                })?;
            failure_evidence.push(FailureEvidence::EscapingY(escaping));
        }
    }

    Ok(Counterexample {
        char_relation,
        family_c,
        composite,
        failure_evidence,
    })
}

/// The decision form of the characterization: complete with witnesses,
/// or incomplete with a verified counterexample for the first failing
/// predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Characterization {
    Complete(WitnessReport),
    Incomplete {
        failing_predicate: Predicate,
        counterexample: Counterexample,
    },
}

impl Characterization {
    pub fn is_complete(&self) -> bool {
        matches!(self, Characterization::Complete(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Characterization::Complete(report) => json!({
                "verdict": "complete",
                "report": report.to_json(),
            }),
            Characterization::Incomplete {
                failing_predicate,
                counterexample,
            } => json!({
                "verdict": "incomplete",
                "failing_predicate": failing_predicate.members(),
                "counterexample": counterexample.to_json(),
            }),
        }
    }
}

/// Decides belief-completeness of `r` for a family of nonempty
/// predicates, producing a finite certificate either way.
pub fn characterize_belief_completeness(
    r: &Relation,
    family_b: &PredicateFamily,
) -> Result<Characterization> {
    require_nonempty_members(family_b, "characterization family")?;
    let report = is_belief_complete(r, family_b)?;
    if report.holds() {
        return Ok(Characterization::Complete(report));
    }
    let failing = report
        .failing_predicate()
        .expect("failing report names a predicate")
        .clone();
    let counterexample = belief_incompleteness_counterexample(r, &failing)?;
    Ok(Characterization::Incomplete {
        failing_predicate: failing,
        counterexample,
    })
}
