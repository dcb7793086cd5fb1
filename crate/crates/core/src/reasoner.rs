//! Pairwise entailment and contradiction between pattern instances.
//!
//! Verdicts are sound with respect to [`crate::eval::evaluate`] on every
//! model that satisfies the verdict's listed assumptions.

use std::collections::{BTreeSet, HashSet};

use crate::claim::SuperPatternInstance;
use crate::error::ReasonError;
use crate::vocab::{qualifier_params, relation_subsumes, Comparison, Qualifier, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assumption {
    /// The condition set of both claims is non-empty.
    NonEmptyCondition,
    /// Every world accesses itself.
    ReflexiveAccessibility,
    /// Each group head's extension contains its sub-relations' extensions.
    TaxonomyClosedRelations,
}

impl Assumption {
    pub fn as_str(self) -> &'static str {
        match self {
            Assumption::NonEmptyCondition => "non-empty-condition",
            Assumption::ReflexiveAccessibility => "reflexive-accessibility",
            Assumption::TaxonomyClosedRelations => "taxonomy-closed-relations",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Entails,
    Contradicts,
    Independent,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Entails => "entails",
            VerdictKind::Contradicts => "contradicts",
            VerdictKind::Independent => "independent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReasoningVerdict {
    pub kind: VerdictKind,
    pub assumptions: BTreeSet<Assumption>,
    pub rule_trace: Vec<&'static str>,
}

impl ReasoningVerdict {
    fn independent() -> Self {
        ReasoningVerdict { kind: VerdictKind::Independent, assumptions: BTreeSet::new(), rule_trace: vec![] }
    }
}

/// A qualifier's satisfying ratio range, as a closed interval.
fn interval(q: Qualifier) -> (Rational, Rational) {
    let p = qualifier_params(q);
    let zero = Rational::from(0);
    let one = Rational::from(1);
    match p.comparison {
        Comparison::Equal => (p.threshold, p.threshold),
        Comparison::AtLeast => (p.threshold, one),
        Comparison::AtMost => (zero, p.threshold),
    }
}

/// Upward-closed qualifiers: satisfaction survives a larger event count.
fn upward(q: Qualifier) -> bool {
    let (_, hi) = interval(q);
    hi == Rational::from(1)
}

fn downward(q: Qualifier) -> bool {
    let (lo, _) = interval(q);
    lo == Rational::from(0)
}

/// Whether `a` forces `b`, and under which assumptions. Within one modality
/// this is interval containment. Across modalities, with reflexive
/// accessibility the "can" ratio is never below the plain one, so a plain
/// upward qualifier forces a "can" upward one and a "can" downward
/// qualifier forces a plain downward one.
pub fn qualifier_entailment(a: Qualifier, b: Qualifier) -> Option<BTreeSet<Assumption>> {
    let (alo, ahi) = interval(a);
    let (blo, bhi) = interval(b);
    let contained = blo <= alo && ahi <= bhi;
    if !contained {
        return None;
    }
    match (a.modal, b.modal) {
        (x, y) if x == y => Some(BTreeSet::new()),
        (false, true) if upward(a) && upward(b) => Some(BTreeSet::from([Assumption::ReflexiveAccessibility])),
        (true, false) if downward(a) && downward(b) => Some(BTreeSet::from([Assumption::ReflexiveAccessibility])),
        _ => None,
    }
}

pub fn qualifier_entails(a: Qualifier, b: Qualifier) -> bool {
    qualifier_entailment(a, b).is_some()
}

/// True iff no ratio satisfies both qualifiers. Only meaningful within one
/// modality; callers compare modalities first.
pub fn qualifiers_conflict(a: Qualifier, b: Qualifier) -> bool {
    let (alo, ahi) = interval(a);
    let (blo, bhi) = interval(b);
    alo.max(blo) > ahi.min(bhi)
}

fn same_slots(a: &SuperPatternInstance, b: &SuperPatternInstance) -> bool {
    let ctx = match (&a.context, &b.context) {
        (None, None) => true,
        (Some(x), Some(y)) => x.same_class(y),
        _ => false,
    };
    ctx && a.subject.same_class(&b.subject) && a.object.same_class(&b.object)
}

/// Does `a` entail or contradict `b`?
pub fn check_pair(a: &SuperPatternInstance, b: &SuperPatternInstance) -> ReasoningVerdict {
    if !same_slots(a, b) {
        return ReasoningVerdict::independent();
    }
    if a.relation == b.relation {
        if let Some(assumptions) = qualifier_entailment(a.qualifier, b.qualifier) {
            let rule = if a.qualifier == b.qualifier {
                "identity"
            } else if assumptions.contains(&Assumption::ReflexiveAccessibility) {
                "modal-weakening"
            } else {
                "qualifier-weakening"
            };
            return ReasoningVerdict { kind: VerdictKind::Entails, assumptions, rule_trace: vec![rule] };
        }
        if a.qualifier.modal == b.qualifier.modal && qualifiers_conflict(a.qualifier, b.qualifier) {
            return ReasoningVerdict {
                kind: VerdictKind::Contradicts,
                assumptions: BTreeSet::from([Assumption::NonEmptyCondition]),
                rule_trace: vec!["disjoint-thresholds"],
            };
        }
        return ReasoningVerdict::independent();
    }
    if a.qualifier == b.qualifier {
        let q = a.qualifier;
        let rule = if upward(q) && relation_subsumes(b.relation, a.relation) {
            Some("relation-generalization")
        } else if downward(q) && relation_subsumes(a.relation, b.relation) {
            Some("relation-specialization")
        } else {
            None
        };
        if let Some(rule) = rule {
            return ReasoningVerdict {
                kind: VerdictKind::Entails,
                assumptions: BTreeSet::from([Assumption::TaxonomyClosedRelations]),
                rule_trace: vec![rule],
            };
        }
    }
    ReasoningVerdict::independent()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFinding {
    /// Premise first for entailments; lexicographic order for contradictions.
    pub ids: (String, String),
    pub verdict: ReasoningVerdict,
}

/// Every unordered pair whose verdict is not independent, ordered by sorted
/// id pair. Each pair is checked in id order first, then reversed.
pub fn corpus_consistency(claims: &[SuperPatternInstance]) -> Result<Vec<PairFinding>, ReasonError> {
    let mut seen = HashSet::new();
    for c in claims {
        if !seen.insert(c.id()) {
            return Err(ReasonError::DuplicateId(c.id().to_string()));
        }
    }
    let mut sorted: Vec<&SuperPatternInstance> = claims.iter().collect();
    sorted.sort_by(|a, b| a.id().cmp(b.id()));
    let mut out = Vec::new();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            let forward = check_pair(a, b);
            let finding = if forward.kind != VerdictKind::Independent {
                Some(PairFinding { ids: (a.id().into(), b.id().into()), verdict: forward })
            } else {
                let backward = check_pair(b, a);
                (backward.kind != VerdictKind::Independent)
                    .then(|| PairFinding { ids: (b.id().into(), a.id().into()), verdict: backward })
            };
            out.extend(finding);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::ClassExpr;
    use crate::vocab::{parse_qualifier, RelationType};

    fn q(t: &str) -> Qualifier {
        parse_qualifier(t).unwrap()
    }

    fn inst(id: &str, qual: &str, rel: RelationType) -> SuperPatternInstance {
        SuperPatternInstance::new(
            id,
            Some(ClassExpr::atomic("person").unwrap()),
            ClassExpr::atomic("smoking").unwrap(),
            q(qual),
            rel,
            ClassExpr::atomic("lung cancer").unwrap(),
        )
    }

    #[test]
    fn entailment_examples() {
        assert!(qualifier_entails(q("always"), q("mostly")));
        assert!(!qualifier_entails(q("frequently"), q("generally")));
        assert!(qualifier_entails(q("never"), q("sometimes not")));
        assert!(qualifier_entails(q("generally"), q("can mostly")));
        assert!(!qualifier_entails(q("can generally"), q("mostly")));
        assert!(qualifier_entails(q("can never"), q("mostly not")));
        assert!(!qualifier_entails(q("never"), q("can mostly not")));
    }

    #[test]
    fn conflict_examples() {
        assert!(qualifiers_conflict(q("generally"), q("mostly not")));
        assert!(!qualifiers_conflict(q("frequently"), q("generally not")));
        assert!(qualifiers_conflict(q("always"), q("sometimes not")));
        assert!(qualifiers_conflict(q("always"), q("never")));
        assert!(!qualifiers_conflict(q("mostly"), q("mostly not")));
    }

    #[test]
    fn lattice_properties() {
        let all = Qualifier::all();
        for &a in &all {
            assert!(qualifier_entails(a, a));
            assert!(!qualifiers_conflict(a, a));
            for &b in &all {
                assert_eq!(qualifiers_conflict(a, b), qualifiers_conflict(b, a));
                for &c in &all {
                    if qualifier_entails(a, b) && qualifier_entails(b, c) {
                        assert!(qualifier_entails(a, c), "{a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn pair_examples() {
        let v = check_pair(&inst("a", "generally", RelationType::Causes), &inst("b", "generally", RelationType::HasCausalRelationshipWith));
        assert_eq!(v.kind, VerdictKind::Entails);
        assert_eq!(v.rule_trace, vec!["relation-generalization"]);

        let v = check_pair(&inst("a", "generally", RelationType::CoOccursWith), &inst("b", "mostly not", RelationType::CoOccursWith));
        assert_eq!(v.kind, VerdictKind::Contradicts);
        assert_eq!(v.assumptions, BTreeSet::from([Assumption::NonEmptyCondition]));

        let mut other = inst("b", "generally", RelationType::Causes);
        other.subject = ClassExpr::atomic("vaping").unwrap();
        assert_eq!(check_pair(&inst("a", "generally", RelationType::Causes), &other).kind, VerdictKind::Independent);
    }

    #[test]
    fn negative_specialization() {
        let v = check_pair(&inst("a", "never", RelationType::HasCausalRelationshipWith), &inst("b", "never", RelationType::Causes));
        assert_eq!((v.kind, v.rule_trace[0]), (VerdictKind::Entails, "relation-specialization"));
        let v = check_pair(&inst("a", "never", RelationType::Causes), &inst("b", "never", RelationType::HasCausalRelationshipWith));
        assert_eq!(v.kind, VerdictKind::Independent);
    }

    #[test]
    fn corpus_examples() {
        let pair = [inst("c1", "generally", RelationType::CoOccursWith), inst("c2", "mostly not", RelationType::CoOccursWith)];
        let found = corpus_consistency(&pair).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].verdict.kind, VerdictKind::Contradicts);
        assert!(corpus_consistency(&[]).unwrap().is_empty());

        let chain = [
            inst("m", "mostly", RelationType::Causes),
            inst("a", "always", RelationType::Causes),
            inst("g", "generally", RelationType::Causes),
        ];
        let found = corpus_consistency(&chain).unwrap();
        let ids: Vec<_> = found.iter().map(|f| (f.ids.0.as_str(), f.ids.1.as_str())).collect();
        assert_eq!(ids, vec![("a", "g"), ("a", "m"), ("g", "m")]);
        assert!(found.iter().all(|f| f.verdict.kind == VerdictKind::Entails));

        let dup = [inst("x", "always", RelationType::Causes), inst("x", "never", RelationType::Causes)];
        assert_eq!(corpus_consistency(&dup), Err(ReasonError::DuplicateId("x".into())));
    }
}
