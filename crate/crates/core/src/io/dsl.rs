//! Line-oriented claim format.
//!
//! ```text
//! # knee osteoarthritis example
//! ID: koa
//! CONTEXT: person
//! SUBJECT: obesity + metabolic abnormality
//! QUALIFIER: generally
//! RELATION: co-occurs with
//! OBJECT: knee osteoarthritis <http://www.wikidata.org/entity/Q...>
//! ```
//!
//! Blocks are separated by blank lines. Lines starting with `#` are
//! comments. A class term is a label optionally followed by `<iri>` and an
//! `@source` tag; `+` joins intersection parts, and `\` escapes `+`, `<`,
//! `>` and itself inside labels. `EXPRESSIBLE: no` marks a claim that was too
//! simple for the pattern; such a block carries no pattern slots.

use crate::class::{ClassExpr, TermRef, TermSource, DEFAULT_MINTED_NAMESPACE};
use crate::claim::{ClaimDocument, ClaimEntry, ClaimMeta, SuperPatternInstance};
use crate::error::{ClaimsError, ClassError};
use crate::vocab::{parse_qualifier, parse_relation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslOptions {
    /// Namespace that marks an IRI as minted when inferring its source.
    pub minted_namespace: String,
}

impl Default for DslOptions {
    fn default() -> Self {
        DslOptions { minted_namespace: DEFAULT_MINTED_NAMESPACE.to_string() }
    }
}

const KEYS: [&str; 9] = ["ID", "CONTEXT", "SUBJECT", "QUALIFIER", "RELATION", "OBJECT", "AIDA", "SOURCE", "EXPRESSIBLE"];

#[derive(Debug)]
struct Field {
    line: usize,
    /// 1-based column where the value starts.
    column: usize,
    value: String,
}

#[derive(Debug, Default)]
struct Block {
    first_line: usize,
    fields: Vec<(&'static str, Field)>,
}

impl Block {
    fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, f)| f)
    }
}

fn syntax(line: usize, column: usize, expected: impl Into<String>) -> ClaimsError {
    ClaimsError::Syntax { line, column, expected: expected.into() }
}

fn split_blocks(text: &str) -> Result<Vec<Block>, ClaimsError> {
    let mut blocks = Vec::new();
    let mut current: Option<Block> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            blocks.extend(current.take());
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let Some((key_part, value)) = raw.split_once(':') else {
            let col = raw.len() - raw.trim_start().len() + 1;
            return Err(syntax(line, col, format!("`KEY: value` with KEY one of {}", KEYS.join(", "))));
        };
        let key_upper = key_part.trim().to_ascii_uppercase();
        let Some(key) = KEYS.iter().find(|k| **k == key_upper) else {
            let col = raw.len() - raw.trim_start().len() + 1;
            return Err(syntax(line, col, format!("one of {}", KEYS.join(", "))));
        };
        let value_start = key_part.len() + 1 + (value.len() - value.trim_start().len());
        let block = current.get_or_insert_with(|| Block { first_line: line, fields: Vec::new() });
        if block.get(key).is_some() {
            return Err(syntax(line, 1, format!("a single {key} line per block")));
        }
        block.fields.push((key, Field { line, column: raw[..value_start].chars().count() + 1, value: value.trim().to_string() }));
    }
    blocks.extend(current);
    Ok(blocks)
}

/// Split on unescaped `+` outside angle brackets.
fn split_parts(value: &str) -> Vec<(usize, String)> {
    let mut parts = Vec::new();
    let mut start = 0;
    let mut buf = String::new();
    let mut in_iri = false;
    let mut chars = value.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' if !in_iri => {
                buf.push(c);
                if let Some((_, n)) = chars.next() {
                    buf.push(n);
                }
            }
            '<' if !in_iri => {
                in_iri = true;
                buf.push(c);
            }
            '>' if in_iri => {
                in_iri = false;
                buf.push(c);
            }
            '+' if !in_iri => {
                parts.push((start, std::mem::take(&mut buf)));
                start = i + 1;
            }
            _ => buf.push(c),
        }
    }
    parts.push((start, buf));
    parts
}

fn parse_atomic(part: &str, line: usize, column: usize, opts: &DslOptions) -> Result<ClassExpr, ClaimsError> {
    let mut label = String::new();
    let mut chars = part.char_indices();
    let mut iri_start = None;
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some((_, n @ ('+' | '<' | '>' | '\\'))) => label.push(n),
                _ => return Err(syntax(line, column + i, "`\\+`, `\\<`, `\\>` or `\\\\`")),
            },
            '<' => {
                iri_start = Some(i);
                break;
            }
            '>' => return Err(syntax(line, column + i, "`<` before `>`")),
            _ => label.push(c),
        }
    }
    let label = label.trim().to_string();
    if label.is_empty() {
        return Err(ClaimsError::Class { line, source: ClassError::EmptyLabel });
    }
    if label.chars().any(char::is_control) {
        return Err(ClaimsError::Class { line, source: ClassError::ControlCharacter });
    }
    let Some(open) = iri_start else {
        return Ok(ClassExpr::Atomic { label, term: None });
    };
    let rest = &part[open + 1..];
    let Some(close) = rest.find('>') else {
        return Err(syntax(line, column + part.len(), "`>` closing the IRI"));
    };
    let iri = &rest[..close];
    let tail = rest[close + 1..].trim();
    let source = if tail.is_empty() {
        TermSource::infer(iri, &opts.minted_namespace)
    } else {
        let tag_col = column + open + 1 + close + 1 + (rest[close + 1..].len() - rest[close + 1..].trim_start().len());
        tail.strip_prefix('@')
            .and_then(TermSource::parse)
            .ok_or_else(|| syntax(line, tag_col, "`@source` with source one of wikidata, obo, evs, lov, minted, other"))?
    };
    let term = TermRef::new(iri, source).map_err(|e| ClaimsError::Class { line, source: e })?;
    Ok(ClassExpr::Atomic { label, term: Some(term) })
}

fn parse_class(field: &Field, opts: &DslOptions) -> Result<ClassExpr, ClaimsError> {
    let parts = split_parts(&field.value);
    let mut exprs = Vec::with_capacity(parts.len());
    for (offset, part) in &parts {
        let lead = part.len() - part.trim_start().len();
        let column = field.column + field.value[..*offset].chars().count() + lead;
        exprs.push(parse_atomic(part.trim(), field.line, column, opts)?);
    }
    if exprs.len() == 1 {
        Ok(exprs.pop().unwrap())
    } else {
        Ok(ClassExpr::Intersection(exprs))
    }
}

fn parse_block(block: &Block, ordinal: usize, opts: &DslOptions) -> Result<ClaimEntry, ClaimsError> {
    let text = |k: &str| block.get(k).map(|f| f.value.clone()).filter(|v| !v.is_empty());
    let meta = ClaimMeta {
        id: text("ID").unwrap_or_else(|| format!("claim-{ordinal}")),
        aida: text("AIDA"),
        source: text("SOURCE"),
    };
    let expressible = match block.get("EXPRESSIBLE") {
        None => true,
        Some(f) => match f.value.to_ascii_lowercase().as_str() {
            "yes" | "true" => true,
            "no" | "false" => false,
            _ => return Err(syntax(f.line, f.column, "`yes` or `no`")),
        },
    };
    if !expressible {
        if let Some((key, f)) = block.fields.iter().find(|(k, _)| ["CONTEXT", "SUBJECT", "QUALIFIER", "RELATION", "OBJECT"].contains(k)) {
            return Err(syntax(f.line, 1, format!("no {key} line in an inexpressible claim")));
        }
        return Ok(ClaimEntry::Inexpressible(meta));
    }
    let required = |key: &str| {
        block
            .get(key)
            .filter(|f| !f.value.is_empty())
            .ok_or_else(|| syntax(block.get(key).map_or(block.first_line, |f| f.line), 1, format!("a non-empty {key} line")))
    };
    let subject = parse_class(required("SUBJECT")?, opts)?;
    let qf = required("QUALIFIER")?;
    let qualifier = parse_qualifier(&qf.value).map_err(|e| ClaimsError::Vocabulary { line: qf.line, source: e })?;
    let rf = required("RELATION")?;
    let relation = parse_relation(&rf.value).map_err(|e| ClaimsError::Vocabulary { line: rf.line, source: e })?;
    let object = parse_class(required("OBJECT")?, opts)?;
    let context = match block.get("CONTEXT") {
        Some(f) if !f.value.is_empty() => Some(parse_class(f, opts)?),
        Some(f) => return Err(syntax(f.line, f.column, "a class after CONTEXT:")),
        None => None,
    };
    Ok(ClaimEntry::Expressible(SuperPatternInstance { context, subject, qualifier, relation, object, meta }))
}

pub fn parse_claims(text: &str) -> Result<ClaimDocument, ClaimsError> {
    parse_claims_with(text, &DslOptions::default())
}

pub fn parse_claims_with(text: &str, opts: &DslOptions) -> Result<ClaimDocument, ClaimsError> {
    let blocks = split_blocks(text)?;
    let entries = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| parse_block(b, i + 1, opts))
        .collect::<Result<Vec<_>, _>>()?;
    ClaimDocument::new(entries)
}

fn escape_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        match c {
            '+' | '<' | '>' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            c if c.is_control() => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

fn single_line(text: &str) -> String {
    text.lines().map(str::trim).collect::<Vec<_>>().join(" ")
}

fn emit_atomic(label: &str, term: Option<&TermRef>, opts: &DslOptions) -> String {
    let mut out = escape_label(label);
    if let Some(t) = term {
        out.push_str(&format!(" <{}>", t.iri));
        if TermSource::infer(&t.iri, &opts.minted_namespace) != t.source {
            out.push_str(&format!(" @{}", t.source));
        }
    }
    out
}

fn emit_class(c: &ClassExpr, opts: &DslOptions) -> String {
    match c.canonical() {
        ClassExpr::Atomic { label, term } => emit_atomic(&label, term.as_ref(), opts),
        ClassExpr::Intersection(parts) => parts.iter().map(|p| emit_class(p, opts)).collect::<Vec<_>>().join(" + "),
    }
}

pub fn emit_claims(doc: &ClaimDocument) -> String {
    emit_claims_with(doc, &DslOptions::default())
}

/// Canonical text: fixed key order, sorted intersection parts, one blank
/// line between blocks.
pub fn emit_claims_with(doc: &ClaimDocument, opts: &DslOptions) -> String {
    let mut blocks = Vec::with_capacity(doc.entries.len());
    for entry in &doc.entries {
        let meta = entry.meta();
        let mut lines = vec![format!("ID: {}", single_line(&meta.id))];
        match entry {
            ClaimEntry::Inexpressible(_) => lines.push("EXPRESSIBLE: no".to_string()),
            ClaimEntry::Expressible(inst) => {
                if let Some(c) = &inst.context {
                    lines.push(format!("CONTEXT: {}", emit_class(c, opts)));
                }
                lines.push(format!("SUBJECT: {}", emit_class(&inst.subject, opts)));
                lines.push(format!("QUALIFIER: {}", inst.qualifier.phrase()));
                lines.push(format!("RELATION: {}", inst.relation.name()));
                lines.push(format!("OBJECT: {}", emit_class(&inst.object, opts)));
            }
        }
        if let Some(a) = &meta.aida {
            lines.push(format!("AIDA: {}", single_line(a)));
        }
        if let Some(s) = &meta.source {
            lines.push(format!("SOURCE: {}", single_line(s)));
        }
        blocks.push(lines.join("\n") + "\n");
    }
    blocks.join("\n")
}
