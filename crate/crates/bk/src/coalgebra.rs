//! Terminal sequences for the twisted bounded-powerset pair functor, and
//! extraction of assumption-complete belief models at finite depth.
//!
//! Fix strategy carriers `S_a`, `S_b` and a bound `m`. The pair functor
//! sends `(X, Y)` to `(P_<m(S_b x Y), P_<m(S_a x X))`, where `P_<m`
//! collects the subsets of cardinality strictly below `m`. Iterating it
//! from the one-point pair yields the terminal sequence
//!
//! ```text
//! (X_0, Y_0) <- (X_1, Y_1) <- (X_2, Y_2) <- ...
//! ```
//!
//! with connecting maps computed by direct image. When a connecting map
//! pair becomes bijective the sequence has converged and, by Lambek's
//! lemma, the carrier is a fixed point of the functor; for `m = 1` this
//! happens at level 1, while for `m >= 2` and nonempty strategy sets the
//! carriers grow strictly and no finite level converges.
//!
//! At any depth `d >= 1` a belief model can still be extracted: states
//! are `U_a = S_a x X_{d+1}` and `U_b = S_b x Y_{d+1}`, a state `(s, t)`
//! relates to `(s', t')` when `(s', pi(t'))` is a pair of `t`, and the
//! predicate families are the pullbacks along the connecting maps of the
//! nonempty subsets of size below `m` one level down. Every such subset
//! is itself a type one level up, and the states carrying that type
//! assume its pullback, so the extracted model is assumption-complete
//! for its families; the retraction check verifies exactly this.

use serde_json::{json, Value};

use crate::completeness::boxplus_set;
use crate::error::{Error, Result};
use crate::model::{BeliefStructure, Predicate, PredicateFamily, Relation};

/// Default cap on carrier elements per stage.
pub const DEFAULT_CAP: usize = 20_000;

/// Strategy carrier sizes and the powerset bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyProfile {
    s_a: usize,
    s_b: usize,
    bound: usize,
}

impl StrategyProfile {
    /// Carrier sizes must be at least 1 and the bound at least 1.
    pub fn new(s_a: usize, s_b: usize, bound: usize) -> Result<Self> {
        if s_a == 0 || s_b == 0 {
            return Err(Error::InvalidProfile(
                "strategy carriers must be nonempty".into(),
            ));
        }
        if bound == 0 {
            return Err(Error::InvalidProfile(
                "powerset bound must be at least 1".into(),
            ));
        }
        Ok(StrategyProfile { s_a, s_b, bound })
    }

    pub fn s_a(&self) -> usize {
        self.s_a
    }

    pub fn s_b(&self) -> usize {
        self.s_b
    }

    /// Subsets of cardinality strictly below this bound are admitted.
    pub fn bound(&self) -> usize {
        self.bound
    }
}

/// All subsets of `{0..n-1}` of size strictly below `m`, as sorted index
/// vectors in lexicographic order.
pub fn bounded_powerset(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(out: &mut Vec<Vec<usize>>, current: &mut Vec<usize>, start: usize, n: usize, m: usize) {
        out.push(current.clone());
        if current.len() + 1 >= m {
            return;
        }
        for i in start..n {
            current.push(i);
            rec(out, current, i + 1, n, m);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), 0, n, m);
    out
}

/// The size of [`bounded_powerset`] without enumerating it: the sum of
/// the binomials `C(n, i)` for `i < m`. Saturates on overflow.
pub fn bounded_powerset_len(n: usize, m: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..m {
        total = total.saturating_add(binom);
        if i >= n {
            break;
        }
        binom = binom.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    total
}

/// One carrier of a stage: canonical elements plus the connecting map
/// into the previous level.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Carrier {
    /// Sorted pair-index sets; the level-0 carrier is the single point,
    /// stored as one empty set.
    elems: Vec<Vec<usize>>,
    /// Size of the second pair component's carrier, for decoding a pair
    /// index `p` as `(p / stride, p % stride)`. Zero at level 0.
    stride: usize,
    /// Connecting map into the previous level; `None` at level 0.
    proj: Option<Vec<usize>>,
}

impl Carrier {
    fn point() -> Self {
        Carrier {
            elems: vec![Vec::new()],
            stride: 0,
            proj: None,
        }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }
}

/// Carriers `X_k`, `Y_k` at one level of the terminal sequence, with the
/// connecting maps from this level into the previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    level: usize,
    x: Carrier,
    y: Carrier,
}

impl Stage {
    /// Level 0: both carriers are the one-point terminal object.
    pub fn initial() -> Self {
        Stage {
            level: 0,
            x: Carrier::point(),
            y: Carrier::point(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn x_size(&self) -> usize {
        self.x.len()
    }

    pub fn y_size(&self) -> usize {
        self.y.len()
    }

    /// The pairs of one `X`-element, as `(strategy, lower-level index)`.
    pub fn x_elem(&self, i: usize) -> Vec<(usize, usize)> {
        decode(&self.x, i)
    }

    pub fn y_elem(&self, i: usize) -> Vec<(usize, usize)> {
        decode(&self.y, i)
    }

    /// Connecting map `X_k -> X_{k-1}`; `None` at level 0.
    pub fn proj_x(&self) -> Option<&[usize]> {
        self.x.proj.as_deref()
    }

    pub fn proj_y(&self) -> Option<&[usize]> {
        self.y.proj.as_deref()
    }
}

fn decode(carrier: &Carrier, i: usize) -> Vec<(usize, usize)> {
    carrier.elems[i]
        .iter()
        .map(|&p| (p / carrier.stride.max(1), p % carrier.stride.max(1)))
        .collect()
}

/// Applies the pair functor once: builds level `k + 1` from level `k`.
/// Fails when either carrier would exceed the cap.
pub fn functor_apply(prev: &Stage, profile: &StrategyProfile, cap: usize) -> Result<Stage> {
    let level = prev.level + 1;
    let x_pairs = profile.s_b * prev.y_size();
    let y_pairs = profile.s_a * prev.x_size();
    for pairs in [x_pairs, y_pairs] {
        let attempted = bounded_powerset_len(pairs, profile.bound);
        if attempted > cap as u128 {
            return Err(Error::ResourceCap {
                level,
                attempted,
                cap,
            });
        }
    }

    let x = build_carrier(x_pairs, profile.bound, &prev.y, &prev.x, prev.level);
    let y = build_carrier(y_pairs, profile.bound, &prev.x, &prev.y, prev.level);
    Ok(Stage { level, x, y })
}

/// Builds one side of the next stage. The new elements are subsets of
/// `S x lower`, where `lower` is the previous level's opposite carrier;
/// the connecting map sends a set to its direct image one level down and
/// looks the image up among the previous elements of the same side.
fn build_carrier(
    pairs: usize,
    bound: usize,
    lower: &Carrier,
    same_side_prev: &Carrier,
    prev_level: usize,
) -> Carrier {
    let elems = bounded_powerset(pairs, bound);
    debug_assert_eq!(elems.len() as u128, bounded_powerset_len(pairs, bound));
    let stride = lower.len();
    let proj = if prev_level == 0 {
        vec![0; elems.len()]
    } else {
        let lower_proj = lower.proj.as_ref().expect("level >= 1 has a map");
        elems
            .iter()
            .map(|elem| {
                let mut image: Vec<usize> = elem
                    .iter()
                    .map(|&p| {
                        let s = p / stride;
                        let t = p % stride;
                        s * same_side_prev.stride + lower_proj[t]
                    })
                    .collect();
                image.sort_unstable();
                image.dedup();
                same_side_prev
                    .elems
                    .binary_search(&image)
                    .expect("direct image is a previous-level element")
            })
            .collect()
    };
    Carrier {
        elems,
        stride,
        proj: Some(proj),
    }
}

/// The tower of stages with convergence bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalSequence {
    profile: StrategyProfile,
    stages: Vec<Stage>,
    converged_at: Option<usize>,
}

impl TerminalSequence {
    pub fn profile(&self) -> &StrategyProfile {
        &self.profile
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage(&self, level: usize) -> Option<&Stage> {
        self.stages.get(level)
    }

    /// The least `k >= 1` whose connecting maps from level `k + 1` are
    /// both bijections, if any level built so far qualifies.
    pub fn converged_at(&self) -> Option<usize> {
        self.converged_at
    }

    /// Canonical term strings for the `X` carrier at one level. The
    /// level-0 point is `*`; higher elements list their pairs.
    pub fn x_terms(&self, level: usize) -> Vec<String> {
        self.terms(level, true)
    }

    pub fn y_terms(&self, level: usize) -> Vec<String> {
        self.terms(level, false)
    }

    fn terms(&self, level: usize, x_side: bool) -> Vec<String> {
        let mut x = vec!["*".to_string()];
        let mut y = vec!["*".to_string()];
        for k in 1..=level {
            let stage = &self.stages[k];
            let next_x = render_terms(&stage.x, &y);
            let next_y = render_terms(&stage.y, &x);
            x = next_x;
            y = next_y;
        }
        if x_side {
            x
        } else {
            y
        }
    }
}

fn render_terms(carrier: &Carrier, lower_terms: &[String]) -> Vec<String> {
    (0..carrier.len())
        .map(|i| {
            let pairs = decode(carrier, i)
                .into_iter()
                .map(|(s, t)| format!("({s},{})", lower_terms[t]))
                .collect::<Vec<_>>()
                .join(",");
            format!("{{{pairs}}}")
        })
        .collect()
}

fn is_bijection(proj: &[usize], codomain: usize) -> bool {
    if proj.len() != codomain {
        return false;
    }
    let mut hit = vec![false; codomain];
    for &t in proj {
        if hit[t] {
            return false;
        }
        hit[t] = true;
    }
    true
}

/// Builds stages `0..=depth`. On a cap overflow the error carries the
/// stages completed so far.
pub fn terminal_sequence(
    profile: &StrategyProfile,
    depth: usize,
    cap: usize,
) -> Result<TerminalSequence> {
    let mut seq = TerminalSequence {
        profile: *profile,
        stages: vec![Stage::initial()],
        converged_at: None,
    };
    for _ in 0..depth {
        let next = match functor_apply(seq.stages.last().expect("nonempty"), profile, cap) {
            Ok(stage) => stage,
            Err(Error::ResourceCap {
                level,
                attempted,
                cap,
            }) => {
                return Err(Error::SequenceCapped {
                    level,
                    attempted,
                    cap,
                    partial: Box::new(seq),
                })
            }
            Err(e) => return Err(e),
        };
        // Lambek detection starts with the maps from level 2 into level
        // 1; the level-1 maps to the point are the seed of the tower.
        if next.level >= 2 && seq.converged_at.is_none() {
            let prev_stage = seq.stages.last().expect("nonempty");
            let x_bij = is_bijection(next.proj_x().expect("level >= 1"), prev_stage.x_size());
            let y_bij = is_bijection(next.proj_y().expect("level >= 1"), prev_stage.y_size());
            if x_bij && y_bij {
                seq.converged_at = Some(next.level - 1);
            }
        }
        seq.stages.push(next);
    }
    Ok(seq)
}

/// Data needed to classify predicates on one extracted sort: the sort is
/// `S x upper` and the family is pulled back from subsets of `S x lower`
/// along the connecting map.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FamilyBase {
    strategies: usize,
    upper_size: usize,
    lower_size: usize,
    proj: Vec<usize>,
    /// The nonempty admitted subsets of `S x lower`, in enumeration
    /// order; index `i` matches family member `i`.
    subsets: Vec<Vec<usize>>,
}

impl FamilyBase {
    /// The pair of `S x lower` a state projects onto.
    fn project_state(&self, u: usize) -> usize {
        let s = u / self.upper_size;
        let t = u % self.upper_size;
        s * self.lower_size + self.proj[t]
    }

    fn pullback(&self, sort: &str, subset: &[usize]) -> Predicate {
        Predicate::from_fn(sort, self.strategies * self.upper_size, |u| {
            subset.binary_search(&self.project_state(u)).is_ok()
        })
    }

    /// Direct image of a state set in `S x lower`, sorted.
    fn direct_image(&self, q: &Predicate) -> Vec<usize> {
        let mut image: Vec<usize> = q
            .members()
            .into_iter()
            .map(|u| self.project_state(u))
            .collect();
        image.sort_unstable();
        image.dedup();
        image
    }
}

/// How a predicate on an extracted sort relates to the extracted family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    /// The predicate is a member: the pullback of a nonempty measurable
    /// subset.
    InFamily,
    /// The predicate is empty; the family keeps only nonempty members.
    Empty,
    /// Not the pullback of any subset of size below the bound, either
    /// because its base image is too large or because it does not
    /// saturate the connecting map's fibers.
    NotMeasurable,
}

fn classify(q: &Predicate, base: &FamilyBase, bound: usize) -> ClosureStatus {
    if q.is_empty() {
        return ClosureStatus::Empty;
    }
    let image = base.direct_image(q);
    if image.len() >= bound {
        return ClosureStatus::NotMeasurable;
    }
    if base.pullback(q.sort(), &image) != *q {
        return ClosureStatus::NotMeasurable;
    }
    ClosureStatus::InFamily
}

/// Designated witnesses for one extracted family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractWitness {
    /// The base subset the member was pulled back from, as pair indices.
    pub base_subset: Vec<usize>,
    /// The opposite-sort states `(s, subset-as-type)`, each of which
    /// assumes the member.
    pub states: Vec<usize>,
}

/// A belief model extracted from the tower at one depth, with its
/// predicate families and witness maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedModel {
    structure: BeliefStructure,
    depth: usize,
    bound: usize,
    base_a: FamilyBase,
    base_b: FamilyBase,
    witnesses_for_ub: Vec<ExtractWitness>,
    witnesses_for_ua: Vec<ExtractWitness>,
}

impl ExtractedModel {
    /// The extracted structure: sorts `Ua`, `Ub`, relations `Ra`, `Rb`,
    /// families `PUa`, `PUb`.
    pub fn structure(&self) -> &BeliefStructure {
        &self.structure
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Witnesses in `Ua` for the members of `PUb`, in family order.
    pub fn witnesses_for_ub(&self) -> &[ExtractWitness] {
        &self.witnesses_for_ub
    }

    pub fn witnesses_for_ua(&self) -> &[ExtractWitness] {
        &self.witnesses_for_ua
    }
}

/// Extracts the belief model at depth `d >= 1` from a sequence holding
/// stages through `d + 1`.
pub fn extract_belief_model(seq: &TerminalSequence, d: usize) -> Result<ExtractedModel> {
    if d == 0 {
        return Err(Error::PreconditionFailed(
            "extraction depth must be at least 1".into(),
        ));
    }
    if seq.stages.len() < d + 2 {
        return Err(Error::InsufficientDepth {
            needed: d + 1,
            have: seq.stages.len().saturating_sub(1),
        });
    }
    let profile = seq.profile;
    let upper = &seq.stages[d + 1];
    let lower = &seq.stages[d];

    let base_a = FamilyBase {
        strategies: profile.s_a,
        upper_size: upper.x_size(),
        lower_size: lower.x_size(),
        proj: upper.proj_x().expect("level >= 1").to_vec(),
        subsets: bounded_powerset(profile.s_a * lower.x_size(), profile.bound)
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect(),
    };
    let base_b = FamilyBase {
        strategies: profile.s_b,
        upper_size: upper.y_size(),
        lower_size: lower.y_size(),
        proj: upper.proj_y().expect("level >= 1").to_vec(),
        subsets: bounded_powerset(profile.s_b * lower.y_size(), profile.bound)
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect(),
    };

    let ua_size = profile.s_a * upper.x_size();
    let ub_size = profile.s_b * upper.y_size();

    let mut structure = BeliefStructure::new();
    structure.insert_sort("Ua", ua_size)?;
    structure.insert_sort("Ub", ub_size)?;

    // (s, t) relates to (s', t') when the pair (s', proj(t')) is in t.
    let x_elems = &upper.x.elems;
    let ra = Relation::from_fn("Ua", ua_size, "Ub", ub_size, |u, v| {
        let t = u % upper.x_size();
        x_elems[t].binary_search(&base_b.project_state(v)).is_ok()
    });
    let y_elems = &upper.y.elems;
    let rb = Relation::from_fn("Ub", ub_size, "Ua", ua_size, |u, v| {
        let t = u % upper.y_size();
        y_elems[t].binary_search(&base_a.project_state(v)).is_ok()
    });
    structure.insert_relation("Ra", ra)?;
    structure.insert_relation("Rb", rb)?;

    let pub_members: Vec<Predicate> = base_b
        .subsets
        .iter()
        .map(|s| base_b.pullback("Ub", s))
        .collect();
    let pua_members: Vec<Predicate> = base_a
        .subsets
        .iter()
        .map(|s| base_a.pullback("Ua", s))
        .collect();
    structure.insert_family(
        "PUb",
        PredicateFamily::from_predicates("Ub", ub_size, pub_members, true)?,
    )?;
    structure.insert_family(
        "PUa",
        PredicateFamily::from_predicates("Ua", ua_size, pua_members, true)?,
    )?;

    // A subset of S_b x Y_d is itself an X_{d+1} type; the states
    // carrying it assume its pullback.
    let witnesses_for_ub = base_b
        .subsets
        .iter()
        .map(|subset| {
            let t = x_elems
                .binary_search(subset)
                .map_err(|_| Error::Internal("family subset is not a type".into()))?;
            Ok(ExtractWitness {
                base_subset: subset.clone(),
                states: (0..profile.s_a).map(|s| s * upper.x_size() + t).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let witnesses_for_ua = base_a
        .subsets
        .iter()
        .map(|subset| {
            let t = y_elems
                .binary_search(subset)
                .map_err(|_| Error::Internal("family subset is not a type".into()))?;
            Ok(ExtractWitness {
                base_subset: subset.clone(),
                states: (0..profile.s_b).map(|s| s * upper.y_size() + t).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExtractedModel {
        structure,
        depth: d,
        bound: profile.bound,
        base_a,
        base_b,
        witnesses_for_ub,
        witnesses_for_ua,
    })
}

/// Outcome of the retraction check at one depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractionReport {
    /// (family member, carrier state) pairs checked on each side.
    pub checks_on_ub: usize,
    pub checks_on_ua: usize,
    /// Mismatch descriptions; always empty for a correct extraction.
    pub failures: Vec<String>,
}

impl RetractionReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies that sending a type to the predicate it assumes, composed
/// with sending a family subset to its type, is the identity on the
/// extracted families.
pub fn check_retraction(seq: &TerminalSequence, d: usize) -> Result<RetractionReport> {
    let model = extract_belief_model(seq, d)?;
    let mut report = RetractionReport {
        checks_on_ub: 0,
        checks_on_ua: 0,
        failures: Vec::new(),
    };
    let structure = model.structure();
    for (family_name, rel_name, witnesses, checks) in [
        (
            "PUb",
            "Ra",
            &model.witnesses_for_ub,
            &mut report.checks_on_ub,
        ),
        (
            "PUa",
            "Rb",
            &model.witnesses_for_ua,
            &mut report.checks_on_ua,
        ),
    ] {
        let family = structure.family(family_name)?;
        let rel = structure.relation(rel_name)?;
        for (i, (member, witness)) in family.members().iter().zip(witnesses).enumerate() {
            for &state in &witness.states {
                *checks += 1;
                if rel.image(state)? != *member {
                    report.failures.push(format!(
                        "{family_name}[{i}] not recovered from state {state} via {rel_name}"
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Closure outcome for one binary operation on two family members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinOpClosure {
    pub left: usize,
    pub right: usize,
    pub status: ClosureStatus,
}

/// Closure outcome for the modal images of one family member: the set
/// of opposite states assuming it, and the set believing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModalClosure {
    pub member: usize,
    pub assumes: ClosureStatus,
    pub believes: ClosureStatus,
}

/// Closure table for one side's family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideClosure {
    pub family: &'static str,
    pub family_size: usize,
    pub intersections: Vec<BinOpClosure>,
    pub unions: Vec<BinOpClosure>,
    /// Modal images land in the opposite side's family (or fail to).
    pub modalities: Vec<ModalClosure>,
}

/// The closure tables for both extracted families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub on_ub: SideClosure,
    pub on_ua: SideClosure,
}

impl ClosureReport {
    pub fn to_json(&self) -> Value {
        fn side(s: &SideClosure) -> Value {
            fn status(st: ClosureStatus) -> &'static str {
                match st {
                    ClosureStatus::InFamily => "in_family",
                    ClosureStatus::Empty => "empty",
                    ClosureStatus::NotMeasurable => "not_measurable",
                }
            }
            json!({
                "family": s.family,
                "family_size": s.family_size,
                "intersections": s.intersections.iter().map(|e| json!({
                    "left": e.left, "right": e.right, "status": status(e.status)
                })).collect::<Vec<_>>(),
                "unions": s.unions.iter().map(|e| json!({
                    "left": e.left, "right": e.right, "status": status(e.status)
                })).collect::<Vec<_>>(),
                "modalities": s.modalities.iter().map(|e| json!({
                    "member": e.member,
                    "assumes": status(e.assumes),
                    "believes": status(e.believes),
                })).collect::<Vec<_>>(),
            })
        }
        json!({ "on_ub": side(&self.on_ub), "on_ua": side(&self.on_ua) })
    }
}

/// States whose image under the relation stays inside `p`: the believes
/// image of `p`.
fn believes_set(r: &Relation, p: &Predicate) -> Result<Predicate> {
    let mut hits = Vec::with_capacity(r.from_size());
    for x in 0..r.from_size() {
        hits.push(r.image(x)?.is_subset_of(p)?);
    }
    Ok(Predicate::from_fn(r.from_sort(), r.from_size(), |x| {
        hits[x]
    }))
}

/// Reports which intersections, unions and modal images of family
/// members land back in the extracted families at this `(m, d)`.
pub fn verify_closure(model: &ExtractedModel) -> Result<ClosureReport> {
    let structure = model.structure();
    let mut sides = Vec::with_capacity(2);
    for (family_name, rel_name, own_base, opposite_base) in [
        ("PUb", "Ra", &model.base_b, &model.base_a),
        ("PUa", "Rb", &model.base_a, &model.base_b),
    ] {
        let family = structure.family(family_name)?;
        let rel = structure.relation(rel_name)?;
        let members = family.members();
        let mut intersections = Vec::new();
        let mut unions = Vec::new();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                intersections.push(BinOpClosure {
                    left: i,
                    right: j,
                    status: classify(&members[i].intersect(&members[j])?, own_base, model.bound),
                });
                unions.push(BinOpClosure {
                    left: i,
                    right: j,
                    status: classify(&members[i].union(&members[j])?, own_base, model.bound),
                });
            }
        }
        let mut modalities = Vec::new();
        for (i, member) in members.iter().enumerate() {
            let assumes = classify(&boxplus_set(rel, member)?, opposite_base, model.bound);
            let believes = classify(&believes_set(rel, member)?, opposite_base, model.bound);
            modalities.push(ModalClosure {
                member: i,
                assumes,
                believes,
            });
        }
        sides.push(SideClosure {
            family: family_name,
            family_size: members.len(),
            intersections,
            unions,
            modalities,
        });
    }
    let on_ua = sides.pop().expect("two sides");
    let on_ub = sides.pop().expect("two sides");
    Ok(ClosureReport { on_ub, on_ua })
}
