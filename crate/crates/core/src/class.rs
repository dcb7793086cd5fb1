//! Class expressions filling the context, subject and object slots.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ClassError;

/// Namespace for identifiers minted for classes without an existing term.
pub const DEFAULT_MINTED_NAMESPACE: &str = "http://example.org/superclaim/class/";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermSource {
    Wikidata,
    Obo,
    Evs,
    Lov,
    Minted,
    Other,
}

impl TermSource {
    pub const ALL: [TermSource; 6] = [
        TermSource::Wikidata,
        TermSource::Obo,
        TermSource::Evs,
        TermSource::Lov,
        TermSource::Minted,
        TermSource::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TermSource::Wikidata => "wikidata",
            TermSource::Obo => "obo",
            TermSource::Evs => "evs",
            TermSource::Lov => "lov",
            TermSource::Minted => "minted",
            TermSource::Other => "other",
        }
    }

    pub fn parse(text: &str) -> Option<TermSource> {
        TermSource::ALL.into_iter().find(|s| s.as_str().eq_ignore_ascii_case(text.trim()))
    }

    /// Guess the source from well-known namespaces.
    pub fn infer(iri: &str, minted_namespace: &str) -> TermSource {
        if iri.starts_with(minted_namespace) {
            TermSource::Minted
        } else if iri.starts_with("http://www.wikidata.org/entity/")
            || iri.starts_with("https://www.wikidata.org/entity/")
            || iri.starts_with("https://www.wikidata.org/wiki/")
        {
            TermSource::Wikidata
        } else if iri.starts_with("http://purl.obolibrary.org/obo/") {
            TermSource::Obo
        } else if iri.starts_with("http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl") {
            TermSource::Evs
        } else {
            TermSource::Other
        }
    }
}

impl fmt::Display for TermSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifier bound to an atomic class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TermRef {
    pub iri: String,
    pub source: TermSource,
}

impl TermRef {
    pub fn new(iri: impl Into<String>, source: TermSource) -> Result<Self, ClassError> {
        let iri = iri.into();
        if !is_absolute_iri(&iri) {
            return Err(ClassError::InvalidIri(iri));
        }
        Ok(TermRef { iri, source })
    }

    /// Mint `namespace + slug(label)`.
    pub fn minted(namespace: &str, label: &str) -> Result<Self, ClassError> {
        TermRef::new(format!("{namespace}{}", slug(label)), TermSource::Minted)
    }
}

/// Syntactic check for an absolute IRI: a scheme, a colon, and a non-empty
/// remainder free of whitespace and the characters IRIREF forbids.
pub fn is_absolute_iri(text: &str) -> bool {
    let Some((scheme, rest)) = text.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    let scheme_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && !rest.is_empty()
        && !text
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

/// Lowercase kebab-case slug of a label.
pub fn slug(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut pending_dash = false;
    for c in label.chars() {
        if c.is_alphanumeric() {
            if pending_dash && !out.is_empty() {
                out.push('-');
            }
            pending_dash = false;
            out.extend(c.to_lowercase());
        } else {
            pending_dash = true;
        }
    }
    out
}

fn check_label(label: &str) -> Result<(), ClassError> {
    if label.trim().is_empty() {
        Err(ClassError::EmptyLabel)
    } else if label.chars().any(char::is_control) {
        Err(ClassError::ControlCharacter)
    } else {
        Ok(())
    }
}

/// An atomic named class or an intersection of classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassExpr {
    Atomic { label: String, term: Option<TermRef> },
    Intersection(Vec<ClassExpr>),
}

impl ClassExpr {
    pub fn atomic(label: impl Into<String>) -> Result<Self, ClassError> {
        let label = label.into().trim().to_string();
        check_label(&label)?;
        Ok(ClassExpr::Atomic { label, term: None })
    }

    pub fn atomic_with_term(label: impl Into<String>, term: TermRef) -> Result<Self, ClassError> {
        match ClassExpr::atomic(label)? {
            ClassExpr::Atomic { label, .. } => Ok(ClassExpr::Atomic { label, term: Some(term) }),
            ClassExpr::Intersection(_) => unreachable!(),
        }
    }

    pub fn intersection(parts: Vec<ClassExpr>) -> Result<Self, ClassError> {
        if parts.len() < 2 {
            return Err(ClassError::TooFewParts(parts.len()));
        }
        Ok(ClassExpr::Intersection(parts))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, ClassExpr::Atomic { .. })
    }

    pub fn term(&self) -> Option<&TermRef> {
        match self {
            ClassExpr::Atomic { term, .. } => term.as_ref(),
            ClassExpr::Intersection(_) => None,
        }
    }

    /// Checks the structural invariants; constructors already enforce them,
    /// but enum literals can bypass the constructors.
    pub fn validate(&self) -> Result<(), ClassError> {
        match self {
            ClassExpr::Atomic { label, term } => {
                check_label(label)?;
                if let Some(t) = term {
                    if !is_absolute_iri(&t.iri) {
                        return Err(ClassError::InvalidIri(t.iri.clone()));
                    }
                }
                Ok(())
            }
            ClassExpr::Intersection(parts) => {
                if parts.len() < 2 {
                    return Err(ClassError::TooFewParts(parts.len()));
                }
                parts.iter().try_for_each(ClassExpr::validate)
            }
        }
    }

    /// Human-readable label; intersections read "a together with b".
    pub fn display_label(&self) -> String {
        match self {
            ClassExpr::Atomic { label, .. } => label.clone(),
            ClassExpr::Intersection(parts) => parts
                .iter()
                .map(ClassExpr::display_label)
                .collect::<Vec<_>>()
                .join(" together with "),
        }
    }

    /// Flattened, sorted and de-duplicated form used for comparison.
    pub fn canonical(&self) -> ClassExpr {
        match self {
            ClassExpr::Atomic { .. } => self.clone(),
            ClassExpr::Intersection(_) => {
                let mut parts = Vec::new();
                self.collect_atoms(&mut parts);
                parts.sort_by_key(|p| p.identity_key());
                parts.dedup_by(|a, b| a.identity_key() == b.identity_key());
                if parts.len() == 1 {
                    parts.pop().unwrap()
                } else {
                    ClassExpr::Intersection(parts)
                }
            }
        }
    }

    fn collect_atoms(&self, out: &mut Vec<ClassExpr>) {
        match self {
            ClassExpr::Atomic { .. } => out.push(self.clone()),
            ClassExpr::Intersection(parts) => parts.iter().for_each(|p| p.collect_atoms(out)),
        }
    }

    /// Same class up to canonical ordering of intersection parts. Atomic
    /// classes compare by slugged label together with their bound IRI, if any.
    pub fn same_class(&self, other: &ClassExpr) -> bool {
        self.canonical().identity_key() == other.canonical().identity_key()
    }

    fn identity_key(&self) -> String {
        match self {
            ClassExpr::Atomic { label, term: None } => slug(label),
            ClassExpr::Atomic { label, term: Some(t) } => format!("{}<{}>", slug(label), t.iri),
            ClassExpr::Intersection(parts) => {
                parts.iter().map(ClassExpr::identity_key).collect::<Vec<_>>().join("+")
            }
        }
    }

    fn sort_key(&self) -> String {
        match self {
            ClassExpr::Atomic { label, .. } => slug(label),
            ClassExpr::Intersection(parts) => {
                parts.iter().map(ClassExpr::sort_key).collect::<Vec<_>>().join("+")
            }
        }
    }

    /// Predicate name used in rendered formulas: the label slug, or the
    /// sorted part slugs joined with `+` for intersections.
    pub fn predicate_name(&self) -> String {
        self.canonical().sort_key()
    }

    /// Intersection parts sorted by predicate name, recursively.
    pub fn sorted(&self) -> ClassExpr {
        match self {
            ClassExpr::Atomic { .. } => self.clone(),
            ClassExpr::Intersection(parts) => {
                let mut parts: Vec<ClassExpr> = parts.iter().map(ClassExpr::sorted).collect();
                parts.sort_by_key(|p| p.sort_key());
                ClassExpr::Intersection(parts)
            }
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(l: &str) -> ClassExpr {
        ClassExpr::atomic(l).unwrap()
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("Knee Osteoarthritis"), "knee-osteoarthritis");
        assert_eq!(slug("  obesity (BMI>30) "), "obesity-bmi-30");
        assert_eq!(slug("co-occurs with"), "co-occurs-with");
    }

    #[test]
    fn iri_check() {
        assert!(is_absolute_iri("http://www.wikidata.org/entity/Q1"));
        assert!(is_absolute_iri("urn:x"));
        assert!(is_absolute_iri("http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#C1"));
        assert!(!is_absolute_iri("Q1"));
        assert!(!is_absolute_iri("http://a b"));
        assert!(!is_absolute_iri("1http://x"));
        assert!(!is_absolute_iri("http:"));
        assert!(TermRef::new("relative/path", TermSource::Other).is_err());
    }

    #[test]
    fn constructors_enforce_invariants() {
        assert_eq!(ClassExpr::atomic("  "), Err(ClassError::EmptyLabel));
        assert_eq!(ClassExpr::atomic("a\tb"), Err(ClassError::ControlCharacter));
        assert_eq!(ClassExpr::intersection(vec![a("x")]), Err(ClassError::TooFewParts(1)));
        assert!(ClassExpr::Intersection(vec![]).validate().is_err());
    }

    #[test]
    fn canonical_equality_ignores_order() {
        let x = ClassExpr::intersection(vec![a("obesity"), a("metabolic abnormality")]).unwrap();
        let y = ClassExpr::intersection(vec![a("Metabolic Abnormality"), a("obesity")]).unwrap();
        assert!(x.same_class(&y));
        assert!(!x.same_class(&a("obesity")));
        assert_eq!(x.predicate_name(), "metabolic-abnormality+obesity");
        assert_eq!(x.display_label(), "obesity together with metabolic abnormality");
    }

    #[test]
    fn source_inference() {
        let ns = DEFAULT_MINTED_NAMESPACE;
        assert_eq!(TermSource::infer("http://www.wikidata.org/entity/Q5", ns), TermSource::Wikidata);
        assert_eq!(TermSource::infer("http://purl.obolibrary.org/obo/HP_1", ns), TermSource::Obo);
        assert_eq!(
            TermSource::infer("http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#C3", ns),
            TermSource::Evs
        );
        assert_eq!(TermSource::infer(&format!("{ns}person"), ns), TermSource::Minted);
        assert_eq!(TermSource::infer("http://xmlns.com/foaf/0.1/Person", ns), TermSource::Other);
        assert_eq!(TermRef::minted(ns, "Knee OA").unwrap().iri, format!("{ns}knee-oa"));
    }
}
