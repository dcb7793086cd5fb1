//! Finite possible-world models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::class::{slug, ClassExpr};
use crate::vocab::RelationType;

pub type Pair = (String, String);

/// Worlds with an accessibility relation over a constant domain. Class
/// extensions are keyed by slugged label, relation extensions by relation
/// type, and `context_of` holds pairs `(a, b)` meaning "a is in the context of b".
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteModel {
    pub worlds: BTreeSet<String>,
    pub accessibility: BTreeSet<Pair>,
    pub actual: String,
    pub domain: BTreeSet<String>,
    pub class_ext: BTreeMap<(String, String), BTreeSet<String>>,
    pub rel_ext: BTreeMap<(String, RelationType), BTreeSet<Pair>>,
    pub context_of: BTreeMap<String, BTreeSet<Pair>>,
    /// Require `(w, w)` in the accessibility relation for every world.
    pub reflexive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    NoWorlds,
    UnknownActualWorld(String),
    AccessibilityUnknownWorld(String),
    NonReflexive(String),
    UnknownWorld { section: &'static str, world: String },
    OutsideDomain { section: String, world: String, individual: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoWorlds => write!(f, "model has no worlds"),
            Violation::UnknownActualWorld(w) => write!(f, "unknown actual world `{w}`"),
            Violation::AccessibilityUnknownWorld(w) => {
                write!(f, "accessibility mentions unknown world `{w}`")
            }
            Violation::NonReflexive(w) => write!(f, "non-reflexive: `{w}` does not access itself"),
            Violation::UnknownWorld { section, world } => {
                write!(f, "{section} extension for unknown world `{world}`")
            }
            Violation::OutsideDomain { section, world, individual } => {
                write!(f, "{section} in world `{world}` mentions `{individual}` outside the domain")
            }
        }
    }
}

impl FiniteModel {
    /// Single-world model with reflexive accessibility.
    pub fn new(actual: impl Into<String>) -> Self {
        let actual = actual.into();
        let mut m = FiniteModel { reflexive: true, ..Default::default() };
        m.add_world(actual.clone());
        m.actual = actual;
        m
    }

    pub fn add_world(&mut self, w: impl Into<String>) -> &mut Self {
        let w = w.into();
        if self.reflexive {
            self.accessibility.insert((w.clone(), w.clone()));
        }
        self.worlds.insert(w);
        self
    }

    pub fn add_access(&mut self, from: impl Into<String>, to: impl Into<String>) -> &mut Self {
        self.accessibility.insert((from.into(), to.into()));
        self
    }

    pub fn add_individual(&mut self, a: impl Into<String>) -> &mut Self {
        self.domain.insert(a.into());
        self
    }

    pub fn add_class_member(&mut self, w: &str, label: &str, a: impl Into<String>) -> &mut Self {
        self.class_ext.entry((w.to_string(), slug(label))).or_default().insert(a.into());
        self
    }

    pub fn add_relation_pair(
        &mut self,
        w: &str,
        r: RelationType,
        a: impl Into<String>,
        b: impl Into<String>,
    ) -> &mut Self {
        self.rel_ext.entry((w.to_string(), r)).or_default().insert((a.into(), b.into()));
        self
    }

    /// Record that `a` is in the context of `b` at world `w`.
    pub fn add_context_pair(&mut self, w: &str, a: impl Into<String>, b: impl Into<String>) -> &mut Self {
        self.context_of.entry(w.to_string()).or_default().insert((a.into(), b.into()));
        self
    }

    /// Insert `(w, w)` for every world.
    pub fn make_reflexive(&mut self) -> &mut Self {
        for w in &self.worlds {
            self.accessibility.insert((w.clone(), w.clone()));
        }
        self
    }

    /// Add every sub-relation pair to its group head, world by world, so the
    /// extensions respect the relation taxonomy.
    pub fn close_under_taxonomy(&mut self) -> &mut Self {
        let additions: Vec<_> = self
            .rel_ext
            .iter()
            .filter(|((_, r), _)| !r.is_group_head())
            .map(|((w, r), pairs)| ((w.clone(), r.head()), pairs.clone()))
            .collect();
        for (key, pairs) in additions {
            self.rel_ext.entry(key).or_default().extend(pairs);
        }
        self
    }

    /// True when every head relation's extension contains its sub-relations'.
    pub fn respects_taxonomy(&self) -> bool {
        self.rel_ext.iter().filter(|((_, r), _)| !r.is_group_head()).all(|((w, r), pairs)| {
            let head = self.rel_ext.get(&(w.clone(), r.head()));
            pairs.iter().all(|p| head.is_some_and(|h| h.contains(p)))
        })
    }

    pub fn accessible_from<'a>(&'a self, w: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.accessibility.iter().filter(move |(a, _)| a == w).map(|(_, b)| b.as_str())
    }

    pub fn class_members(&self, w: &str, label: &str) -> Option<&BTreeSet<String>> {
        self.class_ext.get(&(w.to_string(), slug(label)))
    }

    pub fn relation_pairs(&self, w: &str, r: RelationType) -> Option<&BTreeSet<Pair>> {
        self.rel_ext.get(&(w.to_string(), r))
    }

    pub fn context_pairs(&self, w: &str) -> Option<&BTreeSet<Pair>> {
        self.context_of.get(w)
    }
}

/// All invariant violations of `m`; empty when the model is valid.
pub fn validate_model(m: &FiniteModel) -> Vec<Violation> {
    let mut out = BTreeSet::new();
    if m.worlds.is_empty() {
        out.insert(Violation::NoWorlds);
    }
    if !m.worlds.contains(&m.actual) {
        out.insert(Violation::UnknownActualWorld(m.actual.clone()));
    }
    for (a, b) in &m.accessibility {
        for w in [a, b] {
            if !m.worlds.contains(w) {
                out.insert(Violation::AccessibilityUnknownWorld(w.clone()));
            }
        }
    }
    if m.reflexive {
        for w in &m.worlds {
            if !m.accessibility.contains(&(w.clone(), w.clone())) {
                out.insert(Violation::NonReflexive(w.clone()));
            }
        }
    }
    let mut check = |section: &'static str, label: String, w: &String, members: Vec<&String>| {
        if !m.worlds.contains(w) {
            out.insert(Violation::UnknownWorld { section, world: w.clone() });
        }
        for a in members {
            if !m.domain.contains(a) {
                out.insert(Violation::OutsideDomain {
                    section: label.clone(),
                    world: w.clone(),
                    individual: a.clone(),
                });
            }
        }
    };
    for ((w, class), members) in &m.class_ext {
        check("class", format!("class `{class}`"), w, members.iter().collect());
    }
    for ((w, r), pairs) in &m.rel_ext {
        check(
            "relation",
            format!("relation `{}`", r.id()),
            w,
            pairs.iter().flat_map(|(a, b)| [a, b]).collect(),
        );
    }
    for (w, pairs) in &m.context_of {
        check("context", "context".to_string(), w, pairs.iter().flat_map(|(a, b)| [a, b]).collect());
    }
    out.into_iter().collect()
}

/// Individuals in class `c` at world `w`. Unknown labels are empty;
/// intersections intersect their parts.
pub fn class_extension(m: &FiniteModel, w: &str, c: &ClassExpr) -> BTreeSet<String> {
    match c {
        ClassExpr::Atomic { label, .. } => m.class_members(w, label).cloned().unwrap_or_default(),
        ClassExpr::Intersection(parts) => {
            let mut iter = parts.iter();
            let Some(first) = iter.next() else {
                return BTreeSet::new();
            };
            iter.fold(class_extension(m, w, first), |acc, p| {
                let ext = class_extension(m, w, p);
                acc.intersection(&ext).cloned().collect()
            })
        }
    }
}
