//! Comprehension and the four completeness notions.
//!
//! For a relation `R : A -> B` and a family of predicates, these checks
//! ask whether every family member is realized by some state:
//!
//! - assumption-complete: some `x` has image exactly `p` (`x` assumes `p`);
//! - belief-complete: some `x` has a nonempty image inside `p`
//!   (`x` believes `p` and considers something possible);
//! - wps, on endogenous relations: some `x` represents `p` pointwise,
//!   `R(x, y) <=> p(y)` for all `y` (the same condition as assuming `p`);
//! - vwps, on endogenous relations: some `x` agrees with `p` on the
//!   diagonal point only, `R(x, x) <=> p(x)`.
//!
//! Each check returns a [`WitnessReport`] with least witnesses per
//! predicate, or the first predicate (in family order) with no witness.
//! Empty member predicates are permitted here; modules that need the
//! nonempty convention enforce it themselves.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{Predicate, PredicateFamily, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

/// Outcome of a completeness check over a predicate family.
///
/// Exactly one side is populated: witnesses (in family order, least state
/// per predicate) when the property holds, the first failing predicate
/// otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    verdict: Verdict,
    witnesses: Vec<(Predicate, usize)>,
    failing_predicate: Option<Predicate>,
}

impl WitnessReport {
    fn holds_with(witnesses: Vec<(Predicate, usize)>) -> Self {
        WitnessReport {
            verdict: Verdict::Holds,
            witnesses,
            failing_predicate: None,
        }
    }

    fn fails_at(p: Predicate) -> Self {
        WitnessReport {
            verdict: Verdict::Fails,
            witnesses: Vec::new(),
            failing_predicate: Some(p),
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn witnesses(&self) -> &[(Predicate, usize)] {
        &self.witnesses
    }

    pub fn failing_predicate(&self) -> Option<&Predicate> {
        self.failing_predicate.as_ref()
    }

    pub fn to_json(&self) -> Value {
        let witnesses: serde_json::Map<String, Value> = self
            .witnesses
            .iter()
            .map(|(p, x)| (p.to_string(), json!(x)))
            .collect();
        json!({
            "verdict": if self.holds() { "holds" } else { "fails" },
            "witnesses": witnesses,
            "failing_predicate": self.failing_predicate.as_ref().map(|p| p.members()),
        })
    }
}

fn check_family_on(r: &Relation, family: &PredicateFamily, context: &str) -> Result<()> {
    if family.sort() != r.to_sort() {
        return Err(Error::SortMismatch {
            context: context.into(),
            expected: r.to_sort().to_string(),
            found: family.sort().to_string(),
        });
    }
    if family.width() != r.to_size() {
        return Err(Error::WidthMismatch {
            context: context.into(),
            expected: r.to_size(),
            found: family.width(),
        });
    }
    Ok(())
}

fn check_endogenous(r: &Relation) -> Result<()> {
    if !r.is_endogenous() {
        return Err(Error::NotEndogenous {
            from: r.from_sort().to_string(),
            to: r.to_sort().to_string(),
        });
    }
    Ok(())
}

/// The comprehension `{x | image(R, x) = p}`, a predicate on the source
/// sort: the states that assume `p`.
pub fn boxplus_set(r: &Relation, p: &Predicate) -> Result<Predicate> {
    if p.sort() != r.to_sort() {
        return Err(Error::SortMismatch {
            context: "boxplus comprehension".into(),
            expected: r.to_sort().to_string(),
            found: p.sort().to_string(),
        });
    }
    if p.width() != r.to_size() {
        return Err(Error::WidthMismatch {
            context: "boxplus comprehension".into(),
            expected: r.to_size(),
            found: p.width(),
        });
    }
    let mut hits = Vec::with_capacity(r.from_size());
    for x in 0..r.from_size() {
        hits.push(r.image(x)? == *p);
    }
    Ok(Predicate::from_fn(r.from_sort(), r.from_size(), |x| {
        hits[x]
    }))
}

/// Every family member is assumed by some state: `image(R, x) = p`.
pub fn is_assumption_complete(r: &Relation, family: &PredicateFamily) -> Result<WitnessReport> {
    check_family_on(r, family, "assumption-completeness")?;
    let mut witnesses = Vec::with_capacity(family.len());
    for p in family.members() {
        match boxplus_set(r, p)?.first() {
            Some(x) => witnesses.push((p.clone(), x)),
            None => return Ok(WitnessReport::fails_at(p.clone())),
        }
    }
    Ok(WitnessReport::holds_with(witnesses))
}

/// Every family member is believed by some state with a nonempty image:
/// `{} != image(R, x) <= p`.
pub fn is_belief_complete(r: &Relation, family: &PredicateFamily) -> Result<WitnessReport> {
    check_family_on(r, family, "belief-completeness")?;
    let mut witnesses = Vec::with_capacity(family.len());
    'preds: for p in family.members() {
        for x in 0..r.from_size() {
            let image = r.image(x)?;
            if !image.is_empty() && image.is_subset_of(p)? {
                witnesses.push((p.clone(), x));
                continue 'preds;
            }
        }
        return Ok(WitnessReport::fails_at(p.clone()));
    }
    Ok(WitnessReport::holds_with(witnesses))
}

/// Weak point surjectivity of an endogenous relation: every family
/// member `p` has a representing state, `R(x, y) <=> p(y)` for all `y`.
///
/// This is checked pointwise, while [`is_assumption_complete`] compares
/// whole images; on endogenous relations the two must agree.
pub fn is_wps(r: &Relation, family: &PredicateFamily) -> Result<WitnessReport> {
    check_endogenous(r)?;
    check_family_on(r, family, "weak point surjectivity")?;
    let n = r.from_size();
    let mut witnesses = Vec::with_capacity(family.len());
    'preds: for p in family.members() {
        for x in 0..n {
            if (0..n).all(|y| r.contains(x, y) == p.contains(y)) {
                witnesses.push((p.clone(), x));
                continue 'preds;
            }
        }
        return Ok(WitnessReport::fails_at(p.clone()));
    }
    Ok(WitnessReport::holds_with(witnesses))
}

/// Very weak point surjectivity: every family member `p` has a state
/// agreeing with it on the diagonal, `R(x, x) <=> p(x)`.
pub fn is_vwps(r: &Relation, family: &PredicateFamily) -> Result<WitnessReport> {
    check_endogenous(r)?;
    check_family_on(r, family, "very weak point surjectivity")?;
    let n = r.from_size();
    let mut witnesses = Vec::with_capacity(family.len());
    'preds: for p in family.members() {
        for x in 0..n {
            if r.contains(x, x) == p.contains(x) {
                witnesses.push((p.clone(), x));
                continue 'preds;
            }
        }
        return Ok(WitnessReport::fails_at(p.clone()));
    }
    Ok(WitnessReport::holds_with(witnesses))
}
