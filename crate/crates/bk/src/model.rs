//! Finite multi-sorted belief structures and their relational algebra.
//!
//! A [`BeliefStructure`] owns named sorts (finite carriers), typed binary
//! relations between them, and named predicates, predicate families and
//! belief cycles. States are dense indices `0..n` per sort; names exist
//! only at the document level. Everything is immutable after construction
//! and every operation is pure, so shared structures can be used from any
//! number of threads.
//!
//! The on-disk format is a JSON object:
//!
//! ```json
//! {
//!   "sorts": { "Ua": 2, "Ub": 2 },
//!   "relations": { "Ra": { "from": "Ua", "to": "Ub", "pairs": [[0, 0], [0, 1]] } },
//!   "predicates": { "p": { "sort": "Ua", "members": [1] } },
//!   "families": { "F": { "sort": "Ua", "nonempty": true, "predicates": [[0], [1]] } },
//!   "cycles": { "loop": ["Ra", "Rb"] }
//! }
//! ```
//!
//! Unknown keys are rejected, indices must be exact integers, and the
//! encoding is UTF-8. `relations`, `predicates`, `families` and `cycles`
//! may be omitted when empty.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named finite carrier. States are `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sort {
    pub name: String,
    pub size: usize,
}

/// A subset of one sort's carrier, stored as a bit vector.
///
/// Equality, ordering and hashing are bit-vector equality, so predicates
/// can be deduplicated and reported deterministically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate {
    sort: String,
    bits: Vec<bool>,
}

impl Predicate {
    pub fn empty(sort: impl Into<String>, width: usize) -> Self {
        Predicate {
            sort: sort.into(),
            bits: vec![false; width],
        }
    }

    pub fn full(sort: impl Into<String>, width: usize) -> Self {
        Predicate {
            sort: sort.into(),
            bits: vec![true; width],
        }
    }

    pub fn from_members(sort: impl Into<String>, width: usize, members: &[usize]) -> Result<Self> {
        let sort = sort.into();
        let mut bits = vec![false; width];
        for &x in members {
            if x >= width {
                return Err(Error::StateOutOfRange {
                    sort,
                    size: width,
                    state: x,
                    context: "predicate member list".into(),
                });
            }
            bits[x] = true;
        }
        Ok(Predicate { sort, bits })
    }

    pub fn from_fn(sort: impl Into<String>, width: usize, f: impl FnMut(usize) -> bool) -> Self {
        Predicate {
            sort: sort.into(),
            bits: (0..width).map(f).collect(),
        }
    }

    pub fn sort(&self) -> &str {
        &self.sort
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.bits.len() && self.bits[x]
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&x| self.bits[x]).collect()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    /// Least member, if any.
    pub fn first(&self) -> Option<usize> {
        self.bits.iter().position(|&b| b)
    }

    pub fn complement(&self) -> Predicate {
        Predicate {
            sort: self.sort.clone(),
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn intersect(&self, other: &Predicate) -> Result<Predicate> {
        self.check_compatible(other, "predicate intersection")?;
        Ok(Predicate {
            sort: self.sort.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        })
    }

    pub fn union(&self, other: &Predicate) -> Result<Predicate> {
        self.check_compatible(other, "predicate union")?;
        Ok(Predicate {
            sort: self.sort.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        })
    }

    pub fn is_subset_of(&self, other: &Predicate) -> Result<bool> {
        self.check_compatible(other, "predicate inclusion")?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b))
    }

    fn check_compatible(&self, other: &Predicate, context: &str) -> Result<()> {
        if self.sort != other.sort {
            return Err(Error::SortMismatch {
                context: context.into(),
                expected: self.sort.clone(),
                found: other.sort.clone(),
            });
        }
        if self.bits.len() != other.bits.len() {
            return Err(Error::WidthMismatch {
                context: context.into(),
                expected: self.bits.len(),
                found: other.bits.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for x in 0..self.bits.len() {
            if self.bits[x] {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

/// A typed binary relation, stored as one bit row per source state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    from_sort: String,
    to_sort: String,
    from_size: usize,
    to_size: usize,
    rows: Vec<Vec<bool>>,
}

impl Relation {
    /// The relation with no pairs.
    pub fn empty(
        from_sort: impl Into<String>,
        from_size: usize,
        to_sort: impl Into<String>,
        to_size: usize,
    ) -> Self {
        Relation {
            from_sort: from_sort.into(),
            to_sort: to_sort.into(),
            from_size,
            to_size,
            rows: vec![vec![false; to_size]; from_size],
        }
    }

    pub fn from_pairs(
        from_sort: impl Into<String>,
        from_size: usize,
        to_sort: impl Into<String>,
        to_size: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let mut rel = Relation::empty(from_sort, from_size, to_sort, to_size);
        for &(x, y) in pairs {
            if x >= from_size {
                return Err(Error::StateOutOfRange {
                    sort: rel.from_sort,
                    size: from_size,
                    state: x,
                    context: "relation pair (source)".into(),
                });
            }
            if y >= to_size {
                return Err(Error::StateOutOfRange {
                    sort: rel.to_sort,
                    size: to_size,
                    state: y,
                    context: "relation pair (target)".into(),
                });
            }
            rel.rows[x][y] = true;
        }
        Ok(rel)
    }

    pub fn from_fn(
        from_sort: impl Into<String>,
        from_size: usize,
        to_sort: impl Into<String>,
        to_size: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        Relation {
            from_sort: from_sort.into(),
            to_sort: to_sort.into(),
            from_size,
            to_size,
            rows: (0..from_size)
                .map(|x| (0..to_size).map(|y| f(x, y)).collect())
                .collect(),
        }
    }

    pub fn identity(sort: impl Into<String>, size: usize) -> Self {
        let sort = sort.into();
        Relation::from_fn(sort.clone(), size, sort, size, |x, y| x == y)
    }

    pub fn full(
        from_sort: impl Into<String>,
        from_size: usize,
        to_sort: impl Into<String>,
        to_size: usize,
    ) -> Self {
        Relation::from_fn(from_sort, from_size, to_sort, to_size, |_, _| true)
    }

    pub fn from_sort(&self) -> &str {
        &self.from_sort
    }

    pub fn to_sort(&self) -> &str {
        &self.to_sort
    }

    pub fn from_size(&self) -> usize {
        self.from_size
    }

    pub fn to_size(&self) -> usize {
        self.to_size
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.from_size && y < self.to_size && self.rows[x][y]
    }

    /// All related pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (x, row) in self.rows.iter().enumerate() {
            for (y, &b) in row.iter().enumerate() {
                if b {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().flatten().filter(|&&b| b).count()
    }

    pub fn is_endogenous(&self) -> bool {
        self.from_sort == self.to_sort && self.from_size == self.to_size
    }

    /// The set `{y | R(x, y)}`, a predicate on the target sort.
    pub fn image(&self, x: usize) -> Result<Predicate> {
        if x >= self.from_size {
            return Err(Error::StateOutOfRange {
                sort: self.from_sort.clone(),
                size: self.from_size,
                state: x,
                context: "relation image".into(),
            });
        }
        Ok(Predicate {
            sort: self.to_sort.clone(),
            bits: self.rows[x].clone(),
        })
    }

    /// Relational composition: `(x, z)` is in the result iff some `y`
    /// satisfies `R(x, y)` and `S(y, z)`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        if self.to_sort != other.from_sort {
            return Err(Error::SortMismatch {
                context: "relation composition".into(),
                expected: self.to_sort.clone(),
                found: other.from_sort.clone(),
            });
        }
        if self.to_size != other.from_size {
            return Err(Error::WidthMismatch {
                context: "relation composition".into(),
                expected: self.to_size,
                found: other.from_size,
            });
        }
        let mut rows = vec![vec![false; other.to_size]; self.from_size];
        for (row, out_row) in self.rows.iter().zip(rows.iter_mut()) {
            for (y, &related) in row.iter().enumerate() {
                if related {
                    for (out, &hit) in out_row.iter_mut().zip(&other.rows[y]) {
                        *out = *out || hit;
                    }
                }
            }
        }
        Ok(Relation {
            from_sort: self.from_sort.clone(),
            to_sort: other.to_sort.clone(),
            from_size: self.from_size,
            to_size: other.to_size,
            rows,
        })
    }

    /// The set `{x | R(x, x)}` of an endogenous relation.
    pub fn diagonal(&self) -> Result<Predicate> {
        if self.from_sort != self.to_sort {
            return Err(Error::NotEndogenous {
                from: self.from_sort.clone(),
                to: self.to_sort.clone(),
            });
        }
        if self.from_size != self.to_size {
            return Err(Error::WidthMismatch {
                context: "relation diagonal".into(),
                expected: self.from_size,
                found: self.to_size,
            });
        }
        Ok(Predicate {
            sort: self.from_sort.clone(),
            bits: (0..self.from_size).map(|x| self.rows[x][x]).collect(),
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (x, y) in self.pairs() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "({x},{y})")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// An ordered, duplicate-free collection of predicates on one sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateFamily {
    sort: String,
    width: usize,
    predicates: Vec<Predicate>,
    require_nonempty: bool,
}

impl PredicateFamily {
    /// Builds a family, deduplicating while preserving first occurrence.
    /// With `require_nonempty`, an empty member predicate is an error.
    pub fn from_predicates(
        sort: impl Into<String>,
        width: usize,
        predicates: Vec<Predicate>,
        require_nonempty: bool,
    ) -> Result<Self> {
        let sort = sort.into();
        let mut seen = Vec::new();
        for p in predicates {
            if p.sort() != sort {
                return Err(Error::SortMismatch {
                    context: "predicate family member".into(),
                    expected: sort,
                    found: p.sort().to_string(),
                });
            }
            if p.width() != width {
                return Err(Error::WidthMismatch {
                    context: "predicate family member".into(),
                    expected: width,
                    found: p.width(),
                });
            }
            if require_nonempty && p.is_empty() {
                return Err(Error::EmptyPredicateInFamily(format!(
                    "family on sort `{sort}` declares nonempty members"
                )));
            }
            if !seen.contains(&p) {
                seen.push(p);
            }
        }
        Ok(PredicateFamily {
            sort,
            width,
            predicates: seen,
            require_nonempty,
        })
    }

    pub fn sort(&self) -> &str {
        &self.sort
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn members(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    pub fn require_nonempty(&self) -> bool {
        self.require_nonempty
    }

    pub fn contains(&self, p: &Predicate) -> bool {
        self.predicates.contains(p)
    }

    /// True when no member predicate is empty, regardless of the flag.
    pub fn all_nonempty(&self) -> bool {
        self.predicates.iter().all(|p| !p.is_empty())
    }
}

/// A chain of relation names `r_1, ..., r_{n+1}` that is cyclic once
/// resolved against a structure: consecutive relations compose and the
/// last returns to the first's source sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefCycle {
    relation_names: Vec<String>,
}

impl BeliefCycle {
    pub fn new(relation_names: Vec<String>) -> Result<Self> {
        if relation_names.is_empty() {
            return Err(Error::IllTypedCycle(
                "a cycle needs at least one relation".into(),
            ));
        }
        Ok(BeliefCycle { relation_names })
    }

    pub fn relation_names(&self) -> &[String] {
        &self.relation_names
    }

    pub fn len(&self) -> usize {
        self.relation_names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A finite multi-sorted belief structure.
///
/// Sorts are kept in canonical name order; relations, predicates,
/// families and cycles are name-keyed maps. All lookups are by name and
/// all iteration orders are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BeliefStructure {
    sorts: Vec<Sort>,
    relations: BTreeMap<String, Relation>,
    predicates: BTreeMap<String, Predicate>,
    families: BTreeMap<String, PredicateFamily>,
    cycles: BTreeMap<String, BeliefCycle>,
}

impl BeliefStructure {
    pub fn new() -> Self {
        BeliefStructure::default()
    }

    /// Parses and validates a model document. See the module docs for the
    /// format.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| Error::ModelParse(e.to_string()))?;
        let mut m = BeliefStructure::new();
        for (name, size) in doc.sorts {
            let size = usize::try_from(size).map_err(|_| {
                Error::ModelParse(format!("sort `{name}`: size does not fit in usize"))
            })?;
            m.insert_sort(name, size)?;
        }
        for (name, rel) in doc.relations {
            let pairs: Vec<(usize, usize)> = rel
                .pairs
                .iter()
                .map(|&(x, y)| (x as usize, y as usize))
                .collect();
            let from_size = m.sort_size_or_err(&rel.from, &format!("relation `{name}`"))?;
            let to_size = m.sort_size_or_err(&rel.to, &format!("relation `{name}`"))?;
            let rel = Relation::from_pairs(rel.from, from_size, rel.to, to_size, &pairs)?;
            m.insert_relation(name, rel)?;
        }
        for (name, pred) in doc.predicates {
            let width = m.sort_size_or_err(&pred.sort, &format!("predicate `{name}`"))?;
            let members: Vec<usize> = pred.members.iter().map(|&x| x as usize).collect();
            let p = Predicate::from_members(pred.sort, width, &members)?;
            m.insert_predicate(name, p)?;
        }
        for (name, fam) in doc.families {
            let width = m.sort_size_or_err(&fam.sort, &format!("family `{name}`"))?;
            let mut preds = Vec::new();
            for members in &fam.predicates {
                let members: Vec<usize> = members.iter().map(|&x| x as usize).collect();
                preds.push(Predicate::from_members(fam.sort.clone(), width, &members)?);
            }
            let f = PredicateFamily::from_predicates(fam.sort, width, preds, fam.nonempty)?;
            m.insert_family(name, f)?;
        }
        for (name, rels) in doc.cycles {
            m.insert_cycle(name, BeliefCycle::new(rels)?)?;
        }
        Ok(m)
    }

    /// Canonical document rendering. `from_json(to_json(m)) == m`.
    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            sorts: self
                .sorts
                .iter()
                .map(|s| (s.name.clone(), s.size as u64))
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|(name, r)| {
                    (
                        name.clone(),
                        RelationDoc {
                            from: r.from_sort.clone(),
                            to: r.to_sort.clone(),
                            pairs: r
                                .pairs()
                                .iter()
                                .map(|&(x, y)| (x as u64, y as u64))
                                .collect(),
                        },
                    )
                })
                .collect(),
            predicates: self
                .predicates
                .iter()
                .map(|(name, p)| {
                    (
                        name.clone(),
                        PredicateDoc {
                            sort: p.sort().to_string(),
                            members: p.members().iter().map(|&x| x as u64).collect(),
                        },
                    )
                })
                .collect(),
            families: self
                .families
                .iter()
                .map(|(name, f)| {
                    (
                        name.clone(),
                        FamilyDoc {
                            sort: f.sort().to_string(),
                            nonempty: f.require_nonempty(),
                            predicates: f
                                .members()
                                .iter()
                                .map(|p| p.members().iter().map(|&x| x as u64).collect())
                                .collect(),
                        },
                    )
                })
                .collect(),
            cycles: self
                .cycles
                .iter()
                .map(|(name, c)| (name.clone(), c.relation_names().to_vec()))
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("document serialization");
        out.push('\n');
        out
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn sort_size(&self, name: &str) -> Option<usize> {
        self.sorts.iter().find(|s| s.name == name).map(|s| s.size)
    }

    fn sort_size_or_err(&self, name: &str, context: &str) -> Result<usize> {
        self.sort_size(name).ok_or_else(|| Error::UnknownSort {
            name: name.to_string(),
            context: context.to_string(),
        })
    }

    pub fn relation(&self, name: &str) -> Result<&Relation> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn predicate(&self, name: &str) -> Result<&Predicate> {
        self.predicates
            .get(name)
            .ok_or_else(|| Error::UnknownPredicate(name.to_string()))
    }

    pub fn family(&self, name: &str) -> Result<&PredicateFamily> {
        self.families
            .get(name)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn cycle(&self, name: &str) -> Result<&BeliefCycle> {
        self.cycles
            .get(name)
            .ok_or_else(|| Error::UnknownCycle(name.to_string()))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, &Predicate)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn families(&self) -> impl Iterator<Item = (&str, &PredicateFamily)> {
        self.families.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn cycles(&self) -> impl Iterator<Item = (&str, &BeliefCycle)> {
        self.cycles.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn insert_sort(&mut self, name: impl Into<String>, size: usize) -> Result<()> {
        let name = name.into();
        if self.sort_size(&name).is_some() {
            return Err(Error::DuplicateName(name));
        }
        let at = self
            .sorts
            .binary_search_by(|s| s.name.as_str().cmp(name.as_str()))
            .unwrap_err();
        self.sorts.insert(at, Sort { name, size });
        Ok(())
    }

    pub fn insert_relation(&mut self, name: impl Into<String>, rel: Relation) -> Result<()> {
        let name = name.into();
        if self.relations.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        let context = format!("relation `{name}`");
        let from = self.sort_size_or_err(rel.from_sort(), &context)?;
        let to = self.sort_size_or_err(rel.to_sort(), &context)?;
        if rel.from_size() != from {
            return Err(Error::WidthMismatch {
                context,
                expected: from,
                found: rel.from_size(),
            });
        }
        if rel.to_size() != to {
            return Err(Error::WidthMismatch {
                context,
                expected: to,
                found: rel.to_size(),
            });
        }
        self.relations.insert(name, rel);
        Ok(())
    }

    pub fn insert_predicate(&mut self, name: impl Into<String>, p: Predicate) -> Result<()> {
        let name = name.into();
        if self.predicates.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        let context = format!("predicate `{name}`");
        let width = self.sort_size_or_err(p.sort(), &context)?;
        if p.width() != width {
            return Err(Error::WidthMismatch {
                context,
                expected: width,
                found: p.width(),
            });
        }
        self.predicates.insert(name, p);
        Ok(())
    }

    pub fn insert_family(&mut self, name: impl Into<String>, f: PredicateFamily) -> Result<()> {
        let name = name.into();
        if self.families.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        let context = format!("family `{name}`");
        let width = self.sort_size_or_err(f.sort(), &context)?;
        if f.width() != width {
            return Err(Error::WidthMismatch {
                context,
                expected: width,
                found: f.width(),
            });
        }
        self.families.insert(name, f);
        Ok(())
    }

    pub fn insert_cycle(&mut self, name: impl Into<String>, cycle: BeliefCycle) -> Result<()> {
        let name = name.into();
        if self.cycles.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        self.resolve_cycle(&cycle)?;
        self.cycles.insert(name, cycle);
        Ok(())
    }

    /// Resolves a cycle's relation names and checks the chain typing:
    /// `to(r_k) = from(r_{k+1})` and `from(r_1) = to(r_last)`.
    pub fn resolve_cycle(&self, cycle: &BeliefCycle) -> Result<Vec<&Relation>> {
        let mut rels = Vec::with_capacity(cycle.len());
        for name in cycle.relation_names() {
            rels.push(self.relation(name)?);
        }
        for window in rels.windows(2) {
            if window[0].to_sort() != window[1].from_sort() {
                return Err(Error::IllTypedCycle(format!(
                    "`{}` ends at sort `{}` but the next relation starts at `{}`",
                    cycle.relation_names()[0],
                    window[0].to_sort(),
                    window[1].from_sort()
                )));
            }
        }
        let first = rels.first().expect("cycle is nonempty");
        let last = rels.last().expect("cycle is nonempty");
        if first.from_sort() != last.to_sort() {
            return Err(Error::IllTypedCycle(format!(
                "chain starts at sort `{}` but ends at `{}`",
                first.from_sort(),
                last.to_sort()
            )));
        }
        Ok(rels)
    }

    /// A copy of this structure with one extra named predicate.
    pub fn with_predicate(&self, name: impl Into<String>, p: Predicate) -> Result<BeliefStructure> {
        let mut m = self.clone();
        m.insert_predicate(name, p)?;
        Ok(m)
    }

    /// A predicate name not already used by this structure.
    pub(crate) fn fresh_predicate_name(&self, stem: &str) -> String {
        if !self.predicates.contains_key(stem) {
            return stem.to_string();
        }
        for i in 0.. {
            let candidate = format!("{stem}{i}");
            if !self.predicates.contains_key(&candidate) {
                return candidate;
            }
        }
        unreachable!()
    }

    /// Re-checks every structural invariant. Loading and the insert
    /// methods establish these; this is for tests and debugging.
    pub fn validate(&self) -> Result<()> {
        for window in self.sorts.windows(2) {
            if window[0].name >= window[1].name {
                return Err(Error::Internal("sorts out of canonical order".into()));
            }
        }
        for (name, r) in &self.relations {
            let context = format!("relation `{name}`");
            let from = self.sort_size_or_err(r.from_sort(), &context)?;
            let to = self.sort_size_or_err(r.to_sort(), &context)?;
            if r.from_size() != from || r.to_size() != to {
                return Err(Error::Internal(format!(
                    "{context} has stale carrier sizes"
                )));
            }
            if r.rows.len() != r.from_size || r.rows.iter().any(|row| row.len() != r.to_size) {
                return Err(Error::Internal(format!("{context} has ragged rows")));
            }
        }
        for (name, p) in &self.predicates {
            let context = format!("predicate `{name}`");
            let width = self.sort_size_or_err(p.sort(), &context)?;
            if p.width() != width {
                return Err(Error::Internal(format!("{context} has a stale width")));
            }
        }
        for (name, f) in &self.families {
            let context = format!("family `{name}`");
            let width = self.sort_size_or_err(f.sort(), &context)?;
            if f.width() != width {
                return Err(Error::Internal(format!("{context} has a stale width")));
            }
            for p in f.members() {
                if p.sort() != f.sort() || p.width() != f.width() {
                    return Err(Error::Internal(format!("{context} has a foreign member")));
                }
                if f.require_nonempty() && p.is_empty() {
                    return Err(Error::EmptyPredicateInFamily(context));
                }
            }
        }
        for cycle in self.cycles.values() {
            self.resolve_cycle(cycle)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    sorts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    relations: BTreeMap<String, RelationDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    predicates: BTreeMap<String, PredicateDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    families: BTreeMap<String, FamilyDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    cycles: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    from: String,
    to: String,
    pairs: Vec<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredicateDoc {
    sort: String,
    members: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    sort: String,
    #[serde(default)]
    nonempty: bool,
    predicates: Vec<Vec<u64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn m1() -> BeliefStructure {
        BeliefStructure::from_json(
            r#"{
                "sorts": {"Ua": 2, "Ub": 2},
                "relations": {
                    "Ra": {"from": "Ua", "to": "Ub", "pairs": [[0,0],[0,1],[1,1]]},
                    "Rb": {"from": "Ub", "to": "Ua", "pairs": [[0,0],[1,1]]}
                }
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn load_m1_and_round_trip() {
        let m = m1();
        assert_eq!(m.relations().count(), 2);
        assert_eq!(m.sort_size("Ua"), Some(2));
        assert_eq!(m.sort_size("Ub"), Some(2));
        let again = BeliefStructure::from_json(&m.to_json()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn load_empty_document() {
        let m = BeliefStructure::from_json(r#"{"sorts": {}, "relations": {}}"#).unwrap();
        assert!(m.sorts().is_empty());
        assert_eq!(m.relations().count(), 0);
        let m2 = BeliefStructure::from_json(r#"{"sorts": {}}"#).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn load_rejects_out_of_range_pair() {
        let err = BeliefStructure::from_json(
            r#"{
                "sorts": {"A": 2},
                "relations": {"R": {"from": "A", "to": "A", "pairs": [[0,5]]}}
            }"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::StateOutOfRange { state: 5, .. }));
    }

    #[test]
    fn load_rejects_unknown_sort_and_unknown_keys() {
        let err = BeliefStructure::from_json(
            r#"{"sorts": {"A": 1}, "relations": {"R": {"from": "A", "to": "B", "pairs": []}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownSort { .. }));

        let err = BeliefStructure::from_json(r#"{"sorts": {}, "colour": "blue"}"#).unwrap_err();
        assert!(matches!(err, Error::ModelParse(_)));

        let err = BeliefStructure::from_json(r#"{"sorts": {"A": 1.5}}"#).unwrap_err();
        assert!(matches!(err, Error::ModelParse(_)));
    }

    #[test]
    fn load_rejects_empty_predicate_in_nonempty_family() {
        let err = BeliefStructure::from_json(
            r#"{
                "sorts": {"A": 2},
                "families": {"F": {"sort": "A", "nonempty": true, "predicates": [[]]}}
            }"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyPredicateInFamily(_)));
    }

    #[test]
    fn families_deduplicate_preserving_first_occurrence() {
        let m = BeliefStructure::from_json(
            r#"{
                "sorts": {"A": 2},
                "families": {"F": {"sort": "A", "nonempty": false, "predicates": [[1],[0],[1]]}}
            }"#,
        )
        .unwrap();
        let f = m.family("F").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.members()[0].members(), vec![1]);
        assert_eq!(f.members()[1].members(), vec![0]);
    }

    #[test]
    fn image_examples() {
        let m = m1();
        assert_eq!(
            m.relation("Ra").unwrap().image(0).unwrap().members(),
            vec![0, 1]
        );
        assert_eq!(
            m.relation("Rb").unwrap().image(1).unwrap().members(),
            vec![1]
        );
        let empty = Relation::empty("A", 3, "B", 2);
        for x in 0..3 {
            assert!(empty.image(x).unwrap().is_empty());
        }
        assert!(matches!(
            m.relation("Ra").unwrap().image(7),
            Err(Error::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let m = m1();
        let ra = m.relation("Ra").unwrap();
        let rb = m.relation("Rb").unwrap();
        let comp = ra.compose(rb).unwrap();
        assert_eq!(comp.pairs(), vec![(0, 0), (0, 1), (1, 1)]);

        let id = Relation::identity("Ub", 2);
        assert_eq!(ra.compose(&id).unwrap().pairs(), ra.pairs());

        let zero = Relation::empty("Ub", 2, "Ua", 2);
        assert_eq!(ra.compose(&zero).unwrap().pair_count(), 0);

        assert!(matches!(ra.compose(ra), Err(Error::SortMismatch { .. })));
    }

    #[test]
    fn diagonal_examples() {
        let m = m1();
        let comp = m
            .relation("Ra")
            .unwrap()
            .compose(m.relation("Rb").unwrap())
            .unwrap();
        assert_eq!(comp.diagonal().unwrap().members(), vec![0, 1]);

        assert_eq!(Relation::identity("A", 3).diagonal().unwrap().count(), 3);
        assert!(Relation::empty("A", 3, "A", 3)
            .diagonal()
            .unwrap()
            .is_empty());
        assert!(matches!(
            m.relation("Ra").unwrap().diagonal(),
            Err(Error::NotEndogenous { .. })
        ));
    }

    #[test]
    fn cycle_typing_is_checked() {
        let mut m = m1();
        m.insert_cycle(
            "loop",
            BeliefCycle::new(vec!["Ra".into(), "Rb".into()]).unwrap(),
        )
        .unwrap();
        let err = m
            .insert_cycle(
                "bad",
                BeliefCycle::new(vec!["Ra".into(), "Ra".into()]).unwrap(),
            )
            .unwrap_err();
        assert!(matches!(err, Error::IllTypedCycle(_)));
        let err = m
            .insert_cycle("open", BeliefCycle::new(vec!["Ra".into()]).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::IllTypedCycle(_)));
    }

    #[test]
    fn empty_carriers_are_legal() {
        let m = BeliefStructure::from_json(
            r#"{
                "sorts": {"A": 0, "B": 2},
                "relations": {"R": {"from": "A", "to": "B", "pairs": []}}
            }"#,
        )
        .unwrap();
        let r = m.relation("R").unwrap();
        assert_eq!(r.pair_count(), 0);
        let s = Relation::empty("B", 2, "A", 0);
        let comp = r.compose(&s).unwrap();
        assert!(comp.is_endogenous());
        assert_eq!(comp.pair_count(), 0);
        assert!(comp.diagonal().unwrap().is_empty());
    }

    prop_compose! {
        fn small_relation(from_sort: &'static str, to_sort: &'static str)
            (from_size in 0usize..=4, to_size in 0usize..=4)
            (bits in proptest::collection::vec(any::<bool>(), from_size * to_size),
             from_size in Just(from_size), to_size in Just(to_size))
            -> Relation
        {
            Relation::from_fn(from_sort, from_size, to_sort, to_size, |x, y| bits[x * to_size + y])
        }
    }

    /// Exhaustive associativity over every chained triple on carriers
    /// up to 2; larger carriers are covered by the property test below.
    #[test]
    fn compose_is_associative_exhaustive_small() {
        for a in 0usize..=2 {
            for b in 0usize..=2 {
                for c in 0usize..=2 {
                    for d in 0usize..=2 {
                        for r_mask in 0u64..(1 << (a * b)) {
                            let r = Relation::from_fn("A", a, "B", b, |x, y| {
                                r_mask >> (x * b + y) & 1 == 1
                            });
                            for s_mask in 0u64..(1 << (b * c)) {
                                let s = Relation::from_fn("B", b, "C", c, |x, y| {
                                    s_mask >> (x * c + y) & 1 == 1
                                });
                                let rs = r.compose(&s).unwrap();
                                for t_mask in 0u64..(1 << (c * d)) {
                                    let t = Relation::from_fn("C", c, "D", d, |x, y| {
                                        t_mask >> (x * d + y) & 1 == 1
                                    });
                                    let left = rs.compose(&t).unwrap();
                                    let right = r.compose(&s.compose(&t).unwrap()).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn chained_relations() -> impl Strategy<Value = (Relation, Relation, Relation)> {
        (0usize..=4, 0usize..=4, 0usize..=4, 0usize..=4).prop_flat_map(|(a, b, c, d)| {
            (
                proptest::collection::vec(any::<bool>(), a * b),
                proptest::collection::vec(any::<bool>(), b * c),
                proptest::collection::vec(any::<bool>(), c * d),
            )
                .prop_map(move |(rb, sb, tb)| {
                    (
                        Relation::from_fn("A", a, "B", b, |x, y| rb[x * b + y]),
                        Relation::from_fn("B", b, "C", c, |x, y| sb[x * c + y]),
                        Relation::from_fn("C", c, "D", d, |x, y| tb[x * d + y]),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn compose_is_associative((r, s, t) in chained_relations()) {
            let left = r.compose(&s).unwrap().compose(&t).unwrap();
            let right = r.compose(&s.compose(&t).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn image_of_composition_is_union_of_images(r in small_relation("A", "B"),
                                                   bits in proptest::collection::vec(any::<bool>(), 16)) {
            let b = r.to_size();
            let s = Relation::from_fn("B", b, "C", 3, |y, z| bits[y * 3 + z]);
            let comp = r.compose(&s).unwrap();
            for x in 0..r.from_size() {
                let mut expect = Predicate::empty("C", 3);
                for y in r.image(x).unwrap().members() {
                    expect = expect.union(&s.image(y).unwrap()).unwrap();
                }
                prop_assert_eq!(comp.image(x).unwrap(), expect);
            }
        }

        #[test]
        fn json_round_trip(r in small_relation("A", "B"),
                           members in proptest::collection::vec(0usize..4, 0..4)) {
            let mut m = BeliefStructure::new();
            m.insert_sort("A", r.from_size()).unwrap();
            m.insert_sort("B", r.to_size()).unwrap();
            let p = Predicate::from_fn("B", r.to_size(), |x| members.contains(&x));
            m.insert_relation("R", r).unwrap();
            m.insert_predicate("p", p.clone()).unwrap();
            m.insert_family(
                "F",
                PredicateFamily::from_predicates("B", p.width(), vec![p], false).unwrap(),
            )
            .unwrap();
            let again = BeliefStructure::from_json(&m.to_json()).unwrap();
            prop_assert_eq!(m, again);
        }
    }
}
