//! JSON interchange form. Field names match the DSL slot names one to one.
//!
//! A class is a bare label string, an object `{"label", "iri", "source"}`,
//! or `{"intersection": [...]}`.

use serde::{Deserialize, Serialize};

use crate::class::{ClassExpr, TermRef, TermSource, DEFAULT_MINTED_NAMESPACE};
use crate::claim::{ClaimDocument, ClaimEntry, ClaimMeta, SuperPatternInstance};
use crate::error::ClaimsError;
use crate::vocab::{Qualifier, RelationType};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ClassJson {
    Label(String),
    Term {
        label: String,
        iri: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<TermSource>,
    },
    Intersection { intersection: Vec<ClassJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimJson {
    id: String,
    #[serde(default = "yes")]
    expressible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    context: Option<ClassJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subject: Option<ClassJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qualifier: Option<Qualifier>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    relation: Option<RelationType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    object: Option<ClassJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aida: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentJson {
    claims: Vec<ClaimJson>,
}

fn bad(msg: impl Into<String>) -> ClaimsError {
    ClaimsError::Interchange(msg.into())
}

fn class_to_json(c: &ClassExpr) -> ClassJson {
    match c {
        ClassExpr::Atomic { label, term: None } => ClassJson::Label(label.clone()),
        ClassExpr::Atomic { label, term: Some(t) } => ClassJson::Term {
            label: label.clone(),
            iri: t.iri.clone(),
            source: (TermSource::infer(&t.iri, DEFAULT_MINTED_NAMESPACE) != t.source).then_some(t.source),
        },
        ClassExpr::Intersection(parts) => ClassJson::Intersection { intersection: parts.iter().map(class_to_json).collect() },
    }
}

fn class_from_json(c: ClassJson, id: &str) -> Result<ClassExpr, ClaimsError> {
    let class_err = |e| bad(format!("claim `{id}`: {e}"));
    match c {
        ClassJson::Label(label) => ClassExpr::atomic(label).map_err(class_err),
        ClassJson::Term { label, iri, source } => {
            let source = source.unwrap_or_else(|| TermSource::infer(&iri, DEFAULT_MINTED_NAMESPACE));
            let term = TermRef::new(iri, source).map_err(class_err)?;
            ClassExpr::atomic_with_term(label, term).map_err(class_err)
        }
        ClassJson::Intersection { intersection } => {
            let parts = intersection.into_iter().map(|p| class_from_json(p, id)).collect::<Result<Vec<_>, _>>()?;
            ClassExpr::intersection(parts).map_err(class_err)
        }
    }
}

fn entry_to_json(e: &ClaimEntry) -> ClaimJson {
    let meta = e.meta();
    let mut out = ClaimJson {
        id: meta.id.clone(),
        expressible: e.expressible(),
        context: None,
        subject: None,
        qualifier: None,
        relation: None,
        object: None,
        aida: meta.aida.clone(),
        source: meta.source.clone(),
    };
    if let ClaimEntry::Expressible(i) = e {
        out.context = i.context.as_ref().map(class_to_json);
        out.subject = Some(class_to_json(&i.subject));
        out.qualifier = Some(i.qualifier);
        out.relation = Some(i.relation);
        out.object = Some(class_to_json(&i.object));
    }
    out
}

fn entry_from_json(c: ClaimJson) -> Result<ClaimEntry, ClaimsError> {
    let meta = ClaimMeta { id: c.id.clone(), aida: c.aida, source: c.source };
    if meta.id.trim().is_empty() {
        return Err(bad("claim with empty id"));
    }
    if !c.expressible {
        if c.context.is_some() || c.subject.is_some() || c.qualifier.is_some() || c.relation.is_some() || c.object.is_some() {
            return Err(bad(format!("claim `{}` is inexpressible but has pattern slots", c.id)));
        }
        return Ok(ClaimEntry::Inexpressible(meta));
    }
    let missing = |slot: &str| bad(format!("claim `{}` is missing `{slot}`", c.id));
    let subject = class_from_json(c.subject.ok_or_else(|| missing("subject"))?, &c.id)?;
    let object = class_from_json(c.object.ok_or_else(|| missing("object"))?, &c.id)?;
    let context = c.context.map(|x| class_from_json(x, &c.id)).transpose()?;
    Ok(ClaimEntry::Expressible(SuperPatternInstance {
        context,
        subject,
        qualifier: c.qualifier.ok_or_else(|| missing("qualifier"))?,
        relation: c.relation.ok_or_else(|| missing("relation"))?,
        object,
        meta,
    }))
}

pub fn to_json(doc: &ClaimDocument) -> String {
    let json = DocumentJson { claims: doc.entries.iter().map(entry_to_json).collect() };
    serde_json::to_string_pretty(&json).expect("claim JSON serializes") + "\n"
}

pub fn from_json(text: &str) -> Result<ClaimDocument, ClaimsError> {
    let json: DocumentJson = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let entries = json.claims.into_iter().map(entry_from_json).collect::<Result<Vec<_>, _>>()?;
    ClaimDocument::new(entries)
}
