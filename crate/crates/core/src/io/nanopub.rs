//! Nanopublication output: assertion, provenance and publication-info
//! graphs, serialized as TriG.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::class::{is_absolute_iri, slug, ClassExpr, DEFAULT_MINTED_NAMESPACE};
use crate::claim::SuperPatternInstance;
use crate::error::NanopubError;

/// Default namespace for pattern predicates, qualifiers and relations.
pub const DEFAULT_ONTOLOGY_NAMESPACE: &str = "http://example.org/superpattern#";

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const PROV: &str = "http://www.w3.org/ns/prov#";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal { value: String, datatype: Option<String> },
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Term {
        Term::Iri(s.into())
    }

    pub fn literal(s: impl Into<String>) -> Term {
        Term::Literal { value: s.into(), datatype: None }
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: String,
    pub object: Term,
}

impl Triple {
    fn new(subject: Term, predicate: impl Into<String>, object: Term) -> Self {
        Triple { subject, predicate: predicate.into(), object }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NanopubConfig {
    pub base_iri: String,
    pub ontology_namespace: String,
    pub minted_namespace: String,
}

impl NanopubConfig {
    pub fn new(base_iri: impl Into<String>) -> Self {
        NanopubConfig {
            base_iri: base_iri.into(),
            ontology_namespace: DEFAULT_ONTOLOGY_NAMESPACE.to_string(),
            minted_namespace: DEFAULT_MINTED_NAMESPACE.to_string(),
        }
    }
}

/// Publication details supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProvenanceInfo {
    /// `xsd:dateTime` lexical form.
    pub created: String,
    /// IRI or free-text name.
    pub creator: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NanopubDocument {
    pub base_iri: String,
    pub ontology_namespace: String,
    pub assertion: Vec<Triple>,
    pub provenance: Vec<Triple>,
    pub pubinfo: Vec<Triple>,
}

impl NanopubDocument {
    pub fn nanopub_iri(&self) -> String {
        self.base_iri.clone()
    }

    pub fn assertion_iri(&self) -> String {
        format!("{}assertion", self.base_iri)
    }

    pub fn provenance_iri(&self) -> String {
        format!("{}provenance", self.base_iri)
    }

    pub fn pubinfo_iri(&self) -> String {
        format!("{}pubinfo", self.base_iri)
    }

    pub fn graphs(&self) -> [(String, &[Triple]); 3] {
        [
            (self.assertion_iri(), &self.assertion),
            (self.provenance_iri(), &self.provenance),
            (self.pubinfo_iri(), &self.pubinfo),
        ]
    }

    /// IRIs mentioned anywhere in the assertion graph.
    pub fn assertion_iris(&self) -> BTreeSet<&str> {
        self.assertion
            .iter()
            .flat_map(|t| [t.subject.as_iri(), Some(t.predicate.as_str()), t.object.as_iri()])
            .flatten()
            .collect()
    }
}

struct Builder<'a> {
    cfg: &'a NanopubConfig,
    triples: Vec<Triple>,
    blank: usize,
}

impl Builder<'_> {
    fn sp(&self, local: &str) -> String {
        format!("{}{local}", self.cfg.ontology_namespace)
    }

    fn push(&mut self, s: Term, p: String, o: Term) {
        self.triples.push(Triple::new(s, p, o));
    }

    fn fresh(&mut self) -> Term {
        self.blank += 1;
        Term::Blank(format!("b{}", self.blank))
    }

    /// Describe a class and return its node.
    fn class(&mut self, c: &ClassExpr) -> Term {
        match c {
            ClassExpr::Atomic { label, term } => {
                let node = match term {
                    Some(t) => Term::iri(&t.iri),
                    None => Term::iri(format!("{}{}", self.cfg.minted_namespace, slug(label))),
                };
                self.push(node.clone(), format!("{RDFS}label"), Term::literal(label));
                node
            }
            ClassExpr::Intersection(parts) => {
                let node = Term::iri(format!("{}{}", self.cfg.minted_namespace, c.predicate_name()));
                self.push(node.clone(), format!("{RDF}type"), Term::iri(format!("{OWL}Class")));
                self.push(node.clone(), format!("{RDFS}label"), Term::literal(c.display_label()));
                let members: Vec<Term> = parts.iter().map(|p| self.class(p)).collect();
                let mut head = Term::iri(format!("{RDF}nil"));
                for m in members.into_iter().rev() {
                    let cell = self.fresh();
                    self.push(cell.clone(), format!("{RDF}first"), m);
                    self.push(cell.clone(), format!("{RDF}rest"), head);
                    head = cell;
                }
                self.push(node.clone(), format!("{OWL}intersectionOf"), head);
                node
            }
        }
    }
}

fn normalized_base(base: &str) -> String {
    if base.ends_with('/') || base.ends_with('#') {
        base.to_string()
    } else {
        format!("{base}/")
    }
}

/// Wrap one instance as a nanopublication. Graph names are the base IRI
/// followed by `assertion`, `provenance` and `pubinfo`; a `/` is appended to
/// a base that does not already end in `/` or `#`.
pub fn to_nanopub(
    inst: &SuperPatternInstance,
    prov: &ProvenanceInfo,
    cfg: &NanopubConfig,
) -> Result<NanopubDocument, NanopubError> {
    if !is_absolute_iri(&cfg.base_iri) {
        return Err(NanopubError::InvalidBaseIri(cfg.base_iri.clone()));
    }
    let base = normalized_base(&cfg.base_iri);
    let mut doc = NanopubDocument {
        base_iri: base.clone(),
        ontology_namespace: cfg.ontology_namespace.clone(),
        assertion: Vec::new(),
        provenance: Vec::new(),
        pubinfo: Vec::new(),
    };

    let mut b = Builder { cfg, triples: Vec::new(), blank: 0 };
    let claim = Term::iri(format!("{base}claim"));
    b.push(claim.clone(), format!("{RDF}type"), Term::iri(b.sp("SuperPatternInstance")));
    if let Some(c) = &inst.context {
        let node = b.class(c);
        b.push(claim.clone(), b.sp("has-context-class"), node);
    }
    let node = b.class(&inst.subject);
    b.push(claim.clone(), b.sp("has-subject-class"), node);
    b.push(claim.clone(), b.sp("has-qualifier"), Term::iri(b.sp(&inst.qualifier.slug())));
    b.push(claim.clone(), b.sp("has-relation"), Term::iri(b.sp(&inst.relation.id())));
    let node = b.class(&inst.object);
    b.push(claim, b.sp("has-object-class"), node);
    doc.assertion = b.triples;

    let assertion = Term::iri(doc.assertion_iri());
    doc.provenance.push(Triple::new(assertion.clone(), format!("{DCTERMS}identifier"), Term::literal(&inst.meta.id)));
    if let Some(src) = &inst.meta.source {
        let t = if is_absolute_iri(src) {
            Triple::new(assertion.clone(), format!("{PROV}wasDerivedFrom"), Term::iri(src))
        } else {
            Triple::new(assertion.clone(), format!("{DCTERMS}source"), Term::literal(src))
        };
        doc.provenance.push(t);
    }
    if let Some(aida) = &inst.meta.aida {
        doc.provenance.push(Triple::new(assertion, format!("{}has-aida-sentence", cfg.ontology_namespace), Term::literal(aida)));
    }

    let np = Term::iri(doc.nanopub_iri());
    doc.pubinfo.push(Triple::new(
        np.clone(),
        format!("{DCTERMS}created"),
        Term::Literal { value: prov.created.clone(), datatype: Some(format!("{XSD}dateTime")) },
    ));
    let creator = if is_absolute_iri(&prov.creator) { Term::iri(&prov.creator) } else { Term::literal(&prov.creator) };
    doc.pubinfo.push(Triple::new(np, format!("{DCTERMS}creator"), creator));
    Ok(doc)
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn escape_iri(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c.is_control() || c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}

struct Prefixes(Vec<(&'static str, String)>);

impl Prefixes {
    fn local_ok(local: &str) -> bool {
        let mut chars = local.chars();
        match chars.next() {
            None => true,
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') && !local.ends_with('.')
            }
            _ => false,
        }
    }

    fn iri(&self, iri: &str) -> String {
        for (p, ns) in &self.0 {
            if let Some(local) = iri.strip_prefix(ns.as_str()) {
                if Self::local_ok(local) {
                    return format!("{p}:{local}");
                }
            }
        }
        format!("<{}>", escape_iri(iri))
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Iri(i) => self.iri(i),
            Term::Blank(b) => format!("_:{b}"),
            Term::Literal { value, datatype: None } => format!("\"{}\"", escape_literal(value)),
            Term::Literal { value, datatype: Some(dt) } => format!("\"{}\"^^{}", escape_literal(value), self.iri(dt)),
        }
    }
}

/// TriG text with one block per named graph.
pub fn to_trig(doc: &NanopubDocument) -> String {
    let prefixes = Prefixes(vec![
        ("this", doc.base_iri.clone()),
        ("sp", doc.ontology_namespace.clone()),
        ("rdf", RDF.into()),
        ("rdfs", RDFS.into()),
        ("owl", OWL.into()),
        ("xsd", XSD.into()),
        ("prov", PROV.into()),
        ("dcterms", DCTERMS.into()),
    ]);
    let mut out = String::new();
    for (p, ns) in &prefixes.0 {
        let _ = writeln!(out, "@prefix {p}: <{}> .", escape_iri(ns));
    }
    for (name, triples) in doc.graphs() {
        let _ = writeln!(out, "\n{} {{", prefixes.iri(&name));
        for t in triples {
            let _ = writeln!(
                out,
                "  {} {} {} .",
                prefixes.term(&t.subject),
                prefixes.iri(&t.predicate),
                prefixes.term(&t.object)
            );
        }
        out.push_str("}\n");
    }
    out
}
