//! Diagonal fixpoint machinery over belief structures.
//!
//! For relations `Ra : A -> B` and `Rb : B -> A`, the believes-assumes
//! assumptions at a candidate state `c` for a predicate `p` on `A` are
//! the three sequents
//!
//! ```text
//! (A1)  Ra(c, y) and Rb(y, x)  entails  p(x)
//! (A2)  Ra(c, y) and p(x)      entails  Rb(y, x)
//! (A3)  some y has Ra(c, y)
//! ```
//!
//! equivalently `c |= [Ra][[Rb]] p and <Ra> true`. Under them the basic
//! fixpoint equivalence holds: `p(c) <=> q(c)` where
//! `q(x) = exists y. Ra(x, y) and Rb(y, x)` is the diagonal of the
//! composite. Instantiating `p` as a truth-value operator applied to `q`
//! turns `q(c)` into a fixpoint of the operator; instantiating the
//! operator as negation (so `p` is the diagonal predicate `D = not q`)
//! makes the assumptions unsatisfiable, which is the Brandenburger-Keisler
//! paradox. [`diagonal_certificate`] proves that unsatisfiability by
//! exhaustion and reports the failing conjunct per candidate state.
//!
//! The multi-agent generalization replaces the pair `(Ra, Rb)` by a
//! belief cycle `r_1, ..., r_{n+1}`; the assumptions become one
//! believes*-assumes chain plus `n` seriality chains, and the conclusion
//! is the very-weak-point-surjectivity equation for the composite
//! relation at `c`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::{eval, sort_check, Formula};
use crate::model::{BeliefCycle, BeliefStructure, Predicate, PredicateFamily, Relation};

/// A unary operator on truth values, as a two-entry table.
///
/// Over a fixed finite model every sentence denotes a truth value, so
/// definable propositional operators collapse to these four tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropOperator {
    name: &'static str,
    on_false: bool,
    on_true: bool,
}

impl PropOperator {
    pub const IDENTITY: PropOperator = PropOperator {
        name: "id",
        on_false: false,
        on_true: true,
    };
    pub const CONST_FALSE: PropOperator = PropOperator {
        name: "const-false",
        on_false: false,
        on_true: false,
    };
    pub const CONST_TRUE: PropOperator = PropOperator {
        name: "const-true",
        on_false: true,
        on_true: true,
    };
    pub const NEGATION: PropOperator = PropOperator {
        name: "not",
        on_false: true,
        on_true: false,
    };

    pub const ALL: [PropOperator; 4] = [
        PropOperator::IDENTITY,
        PropOperator::CONST_FALSE,
        PropOperator::CONST_TRUE,
        PropOperator::NEGATION,
    ];

    pub fn from_name(name: &str) -> Option<PropOperator> {
        PropOperator::ALL.into_iter().find(|op| op.name == name)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn apply(&self, v: bool) -> bool {
        if v {
            self.on_true
        } else {
            self.on_false
        }
    }

    /// The fixed points of the table.
    pub fn fixpoints(&self) -> Vec<bool> {
        [false, true]
            .into_iter()
            .filter(|&v| self.apply(v) == v)
            .collect()
    }

    pub fn has_fixpoint(&self) -> bool {
        !self.fixpoints().is_empty()
    }

    /// Monotone with respect to false <= true.
    pub fn is_monotone(&self) -> bool {
        !self.on_false || self.on_true
    }
}

/// Per-conjunct outcome of the believes-assumes assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssumptionCheck {
    pub a1: bool,
    pub a2: bool,
    pub a3: bool,
}

impl AssumptionCheck {
    pub fn all(&self) -> bool {
        self.a1 && self.a2 && self.a3
    }

    /// The first failing conjunct, in A1, A2, A3 order.
    pub fn first_failing(&self) -> Option<&'static str> {
        if !self.a1 {
            Some("A1")
        } else if !self.a2 {
            Some("A2")
        } else if !self.a3 {
            Some("A3")
        } else {
            None
        }
    }
}

/// Resolves a believes-assumes relation pair `ra : A -> B`, `rb : B -> A`.
fn resolve_pair<'m>(
    m: &'m BeliefStructure,
    ra: &str,
    rb: &str,
) -> Result<(&'m Relation, &'m Relation)> {
    let ra = m.relation(ra)?;
    let rb = m.relation(rb)?;
    if ra.to_sort() != rb.from_sort() {
        return Err(Error::SortMismatch {
            context: "believes-assumes pair (middle sort)".into(),
            expected: ra.to_sort().to_string(),
            found: rb.from_sort().to_string(),
        });
    }
    if rb.to_sort() != ra.from_sort() {
        return Err(Error::SortMismatch {
            context: "believes-assumes pair (base sort)".into(),
            expected: ra.from_sort().to_string(),
            found: rb.to_sort().to_string(),
        });
    }
    Ok((ra, rb))
}

fn check_base_predicate(ra: &Relation, p: &Predicate, context: &str) -> Result<()> {
    if p.sort() != ra.from_sort() {
        return Err(Error::SortMismatch {
            context: context.into(),
            expected: ra.from_sort().to_string(),
            found: p.sort().to_string(),
        });
    }
    if p.width() != ra.from_size() {
        return Err(Error::WidthMismatch {
            context: context.into(),
            expected: ra.from_size(),
            found: p.width(),
        });
    }
    Ok(())
}

fn check_base_state(ra: &Relation, c: usize, context: &str) -> Result<()> {
    if c >= ra.from_size() {
        return Err(Error::StateOutOfRange {
            sort: ra.from_sort().to_string(),
            size: ra.from_size(),
            state: c,
            context: context.into(),
        });
    }
    Ok(())
}

/// The diagonal of the composite: `q(x) = exists y. Ra(x, y) and Rb(y, x)`.
pub fn q_predicate(m: &BeliefStructure, ra: &str, rb: &str) -> Result<Predicate> {
    let (ra, rb) = resolve_pair(m, ra, rb)?;
    ra.compose(rb)?.diagonal()
}

/// Checks the three believes-assumes conjuncts at `c` for `p`, by
/// exhaustive quantification over the carriers.
pub fn check_bk_assumptions(
    m: &BeliefStructure,
    ra: &str,
    rb: &str,
    p: &Predicate,
    c: usize,
) -> Result<AssumptionCheck> {
    let (ra, rb) = resolve_pair(m, ra, rb)?;
    check_base_predicate(ra, p, "believes-assumes predicate")?;
    check_base_state(ra, c, "believes-assumes candidate")?;

    let nb = ra.to_size();
    let na = ra.from_size();

    let mut a1 = true;
    let mut a2 = true;
    for y in 0..nb {
        if !ra.contains(c, y) {
            continue;
        }
        for x in 0..na {
            if rb.contains(y, x) && !p.contains(x) {
                a1 = false;
            }
            if p.contains(x) && !rb.contains(y, x) {
                a2 = false;
            }
        }
    }
    let a3 = (0..nb).any(|y| ra.contains(c, y));
    Ok(AssumptionCheck { a1, a2, a3 })
}

/// Both sides of the basic fixpoint equivalence at `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicLemmaReport {
    pub p_at_c: bool,
    pub q_at_c: bool,
}

impl BasicLemmaReport {
    /// The equivalence `p(c) <=> q(c)`. A `false` here would signal an
    /// implementation bug, never a property of the input.
    pub fn holds(&self) -> bool {
        self.p_at_c == self.q_at_c
    }
}

/// Verifies `p(c) <=> q(c)` under the believes-assumes assumptions.
/// Fails with a precondition error when the assumptions do not hold.
pub fn basic_lemma_verify(
    m: &BeliefStructure,
    ra: &str,
    rb: &str,
    p: &Predicate,
    c: usize,
) -> Result<BasicLemmaReport> {
    let check = check_bk_assumptions(m, ra, rb, p, c)?;
    if let Some(label) = check.first_failing() {
        return Err(Error::PreconditionFailed(format!(
            "assumption {label} fails at candidate {c}"
        )));
    }
    let q = q_predicate(m, ra, rb)?;
    Ok(BasicLemmaReport {
        p_at_c: p.contains(c),
        q_at_c: q.contains(c),
    })
}

/// A truth value certified to be fixed by the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorFixpoint {
    pub operator: PropOperator,
    pub value: bool,
}

impl OperatorFixpoint {
    pub fn is_fixed(&self) -> bool {
        self.operator.apply(self.value) == self.value
    }
}

/// The fixpoint construction for a truth-value operator: with
/// `p = O(q(.))`, if the assumptions hold at `c` then `v = q(c)`
/// satisfies `O(v) = v`.
pub fn operator_fixpoint(
    m: &BeliefStructure,
    ra: &str,
    rb: &str,
    op: PropOperator,
    c: usize,
) -> Result<OperatorFixpoint> {
    let q = q_predicate(m, ra, rb)?;
    let p = Predicate::from_fn(q.sort(), q.width(), |x| op.apply(q.contains(x)));
    let check = check_bk_assumptions(m, ra, rb, &p, c)?;
    if let Some(label) = check.first_failing() {
        return Err(Error::PreconditionFailed(format!(
            "assumption {label} fails at candidate {c} for p = {}(q)",
            op.name()
        )));
    }
    let fp = OperatorFixpoint {
        operator: op,
        value: q.contains(c),
    };
    if !fp.is_fixed() {
        return Err(Error::Internal(format!(
            "operator {} not fixed at certified value {}",
            op.name(),
            fp.value
        )));
    }
    Ok(fp)
}

/// Exhaustion certificate that the diagonal predicate `D = not q` admits
/// no state satisfying the believes-assumes assumptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalCertificate {
    q: Predicate,
    diagonal: Predicate,
    diagonal_in_class: bool,
    searched: usize,
    witness: Option<usize>,
    per_state_failure: Vec<(usize, &'static str)>,
}

impl DiagonalCertificate {
    pub fn q(&self) -> &Predicate {
        &self.q
    }

    /// The diagonal predicate `D = not q`.
    pub fn diagonal(&self) -> &Predicate {
        &self.diagonal
    }

    /// False when a predicate class was supplied and `D` is not in it,
    /// in which case the impossibility argument does not apply and no
    /// search was run.
    pub fn diagonal_in_class(&self) -> bool {
        self.diagonal_in_class
    }

    /// Number of (predicate, candidate) combinations examined. The only
    /// predicate searched is the diagonal, so this is the carrier size
    /// when the diagonal is in the class.
    pub fn searched(&self) -> usize {
        self.searched
    }

    pub fn witness_found(&self) -> bool {
        self.witness.is_some()
    }

    pub fn witness(&self) -> Option<usize> {
        self.witness
    }

    /// Per candidate state, the first assumption conjunct that fails.
    pub fn per_state_failure(&self) -> &[(usize, &'static str)] {
        &self.per_state_failure
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q.members(),
            "diagonal": self.diagonal.members(),
            "diagonal_in_class": self.diagonal_in_class,
            "searched": self.searched,
            "witness_found": self.witness_found(),
            "witness": self.witness,
            "per_state_failure": self.per_state_failure
                .iter()
                .map(|(c, label)| json!({"state": c, "fails": label}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Builds the impossibility certificate for a relation pair. With no
/// class, the definable class is taken to be all predicates on the base
/// sort, which always contains the diagonal.
pub fn diagonal_certificate(
    m: &BeliefStructure,
    ra: &str,
    rb: &str,
    class: Option<&PredicateFamily>,
) -> Result<DiagonalCertificate> {
    let q = q_predicate(m, ra, rb)?;
    let diagonal = q.complement();

    if let Some(class) = class {
        let (ra_rel, _) = resolve_pair(m, ra, rb)?;
        if class.sort() != ra_rel.from_sort() {
            return Err(Error::SortMismatch {
                context: "certificate predicate class".into(),
                expected: ra_rel.from_sort().to_string(),
                found: class.sort().to_string(),
            });
        }
        if !class.contains(&diagonal) {
            return Ok(DiagonalCertificate {
                q,
                diagonal,
                diagonal_in_class: false,
                searched: 0,
                witness: None,
                per_state_failure: Vec::new(),
            });
        }
    }

    let mut witness = None;
    let mut per_state_failure = Vec::new();
    let mut searched = 0;
    for c in 0..diagonal.width() {
        searched += 1;
        let check = check_bk_assumptions(m, ra, rb, &diagonal, c)?;
        match check.first_failing() {
            Some(label) => per_state_failure.push((c, label)),
            None => {
                witness = Some(c);
                break;
            }
        }
    }
    Ok(DiagonalCertificate {
        q,
        diagonal,
        diagonal_in_class: true,
        searched,
        witness,
        per_state_failure,
    })
}

/// One conjunct of the generalized assumptions, labelled by its surface
/// syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleConjunct {
    pub label: String,
    pub holds: bool,
}

/// Outcome of the generalized believes*-assumes assumptions over a
/// belief cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    conjuncts: Vec<CycleConjunct>,
}

impl CycleCheck {
    pub fn conjuncts(&self) -> &[CycleConjunct] {
        &self.conjuncts
    }

    pub fn all(&self) -> bool {
        self.conjuncts.iter().all(|c| c.holds)
    }

    pub fn first_failing(&self) -> Option<&CycleConjunct> {
        self.conjuncts.iter().find(|c| !c.holds)
    }
}

fn resolve_cycle_base<'m>(
    m: &'m BeliefStructure,
    cycle: &BeliefCycle,
) -> Result<Vec<&'m Relation>> {
    m.resolve_cycle(cycle)
}

/// Checks the `n + 1` generalized conjuncts at `c` for a cycle
/// `r_1, ..., r_{n+1}`: the chain `[r_1]...[r_n][[r_{n+1}]] p` plus the
/// seriality chains `[r_1]...[r_{k-1}]<r_k> true` for `k = 1..n`. The
/// conjuncts are evaluated through the formula module. For `n = 0` the
/// check degenerates to `c |= [[r_1]] p`.
pub fn generalized_assumptions_check(
    m: &BeliefStructure,
    cycle: &BeliefCycle,
    p: &Predicate,
    c: usize,
) -> Result<CycleCheck> {
    let rels = resolve_cycle_base(m, cycle)?;
    let base = rels[0];
    check_base_predicate(base, p, "generalized assumptions predicate")?;
    check_base_state(base, c, "generalized assumptions candidate")?;

    let atom = m.fresh_predicate_name("__p");
    let m = m.with_predicate(atom.clone(), p.clone())?;
    let names = cycle.relation_names();
    let n = names.len() - 1;

    // Each conjunct is built twice: once with the internal atom for
    // evaluation, once with the plain name `p` for its label.
    let chain = |leaf: Formula, boxes: &[String]| {
        let mut f = leaf;
        for name in boxes.iter().rev() {
            f = Formula::Box(name.clone(), Box::new(f));
        }
        f
    };

    // [r_1] ... [r_n] [[r_{n+1}]] p
    let main = |leaf_atom: &str| {
        chain(
            Formula::BoxPlus(names[n].clone(), Box::new(Formula::Atom(leaf_atom.into()))),
            &names[..n],
        )
    };
    let mut formulas = vec![(main(&atom), main("p").to_string())];

    // [r_1] ... [r_{k-1}] <r_k> true, for k = 1..n
    for k in 0..n {
        let ser = chain(
            Formula::Diamond(names[k].clone(), Box::new(Formula::True)),
            &names[..k],
        );
        let label = ser.to_string();
        formulas.push((ser, label));
    }

    let mut conjuncts = Vec::with_capacity(formulas.len());
    for (f, label) in formulas {
        let sorted = sort_check(&f, &m, Some(base.from_sort()))?;
        let holds = eval(&sorted, &m, c)?;
        conjuncts.push(CycleConjunct { label, holds });
    }
    Ok(CycleCheck { conjuncts })
}

/// The composite relation `r_1 ; ... ; r_{n+1}` of a cycle, an
/// endogenous relation on the base sort.
pub fn compose_cycle(m: &BeliefStructure, cycle: &BeliefCycle) -> Result<Relation> {
    let rels = resolve_cycle_base(m, cycle)?;
    let mut acc = rels[0].clone();
    for r in &rels[1..] {
        acc = acc.compose(r)?;
    }
    Ok(acc)
}

/// The very-weak-point-surjectivity witness equation at `c` for the
/// cycle's composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleLemmaReport {
    /// Whether the composite relates `c` to itself.
    pub composite_at_c: bool,
    pub p_at_c: bool,
}

impl CycleLemmaReport {
    pub fn holds(&self) -> bool {
        self.composite_at_c == self.p_at_c
    }
}

/// Under the generalized assumptions, the composite agrees with `p` on
/// the diagonal at `c`. Fails with a precondition error when the
/// assumptions do not hold.
pub fn generalized_basic_lemma_verify(
    m: &BeliefStructure,
    cycle: &BeliefCycle,
    p: &Predicate,
    c: usize,
) -> Result<CycleLemmaReport> {
    let check = generalized_assumptions_check(m, cycle, p, c)?;
    if let Some(conjunct) = check.first_failing() {
        return Err(Error::PreconditionFailed(format!(
            "generalized assumption `{}` fails at candidate {c}",
            conjunct.label
        )));
    }
    let composite = compose_cycle(m, cycle)?;
    Ok(CycleLemmaReport {
        composite_at_c: composite.contains(c, c),
        p_at_c: p.contains(c),
    })
}
