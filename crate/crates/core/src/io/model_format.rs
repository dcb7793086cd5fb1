//! Text format for finite models.
//!
//! ```text
//! WORLDS: w1 w2
//! ACTUAL: w1
//! ACCESSIBILITY: w1->w1 w1->w2 w2->w2
//! INDIVIDUALS: p1 o1 k1
//! REFLEXIVE: yes
//! CLASS w1 person: p1
//! REL w1 co-occurs with: o1->k1
//! CONTEXT w1: o1->p1 k1->p1
//! ```
//!
//! Identifiers are runs of non-whitespace without `:` or `->`. Extension
//! lines may repeat and are merged. When ACCESSIBILITY is omitted and the
//! model is reflexive, identity pairs are inserted.

use std::collections::BTreeSet;

use crate::class::slug;
use crate::error::ModelError;
use crate::model::{validate_model, FiniteModel, Pair};
use crate::vocab::parse_relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelOptions {
    /// Overrides the file's REFLEXIVE line when set.
    pub reflexive: Option<bool>,
}

fn syntax(line: usize, column: usize, expected: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, column, expected: expected.into() }
}

fn valid_id(tok: &str) -> bool {
    !tok.is_empty() && !tok.contains(':') && !tok.contains("->") && !tok.chars().any(char::is_whitespace)
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str, base_col: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((base_col + text[..s].chars().count(), &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((base_col + text[..s].chars().count(), &text[s..]));
    }
    out
}

fn ids(text: &str, line: usize, col: usize) -> Result<Vec<String>, ModelError> {
    tokens(text, col)
        .into_iter()
        .map(|(c, t)| if valid_id(t) { Ok(t.to_string()) } else { Err(syntax(line, c, "an identifier")) })
        .collect()
}

fn pairs(text: &str, line: usize, col: usize) -> Result<Vec<Pair>, ModelError> {
    tokens(text, col)
        .into_iter()
        .map(|(c, t)| {
            let (a, b) = t.split_once("->").ok_or_else(|| syntax(line, c, "a pair `a->b`"))?;
            if valid_id(a) && valid_id(b) {
                Ok((a.to_string(), b.to_string()))
            } else {
                Err(syntax(line, c, "a pair `a->b` of identifiers"))
            }
        })
        .collect()
}

pub fn parse_model(text: &str) -> Result<FiniteModel, ModelError> {
    parse_model_with(text, ModelOptions::default())
}

/// Parse and validate. Validation failures come back as [`ModelError::Invalid`].
pub fn parse_model_with(text: &str, opts: ModelOptions) -> Result<FiniteModel, ModelError> {
    let mut m = FiniteModel { reflexive: true, ..Default::default() };
    let mut seen_worlds = false;
    let mut actual: Option<String> = None;
    let mut access: Option<BTreeSet<Pair>> = None;
    let mut reflexive_line: Option<bool> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lead = raw.len() - raw.trim_start().len();
        let Some((head, rest)) = trimmed.split_once(':') else {
            return Err(syntax(line, lead + 1, "`SECTION: ...`"));
        };
        let rest_col = lead + head.chars().count() + 2;
        let mut head_toks = head.split_whitespace();
        let keyword = head_toks.next().unwrap_or("").to_ascii_uppercase();
        let head_rest: Vec<&str> = head_toks.collect();
        let simple = |name: &str| -> Result<(), ModelError> {
            if head_rest.is_empty() {
                Ok(())
            } else {
                Err(syntax(line, lead + 1, format!("`{name}:` with nothing before the colon")))
            }
        };
        match keyword.as_str() {
            "WORLDS" => {
                simple("WORLDS")?;
                if seen_worlds {
                    return Err(syntax(line, lead + 1, "a single WORLDS line"));
                }
                seen_worlds = true;
                m.worlds.extend(ids(rest, line, rest_col)?);
            }
            "ACTUAL" => {
                simple("ACTUAL")?;
                let list = ids(rest, line, rest_col)?;
                if list.len() != 1 || actual.is_some() {
                    return Err(syntax(line, rest_col, "exactly one actual world"));
                }
                actual = list.into_iter().next();
            }
            "ACCESSIBILITY" => {
                simple("ACCESSIBILITY")?;
                access.get_or_insert_with(BTreeSet::new).extend(pairs(rest, line, rest_col)?);
            }
            "INDIVIDUALS" => {
                simple("INDIVIDUALS")?;
                m.domain.extend(ids(rest, line, rest_col)?);
            }
            "REFLEXIVE" => {
                simple("REFLEXIVE")?;
                reflexive_line = Some(match rest.trim().to_ascii_lowercase().as_str() {
                    "yes" | "true" => true,
                    "no" | "false" => false,
                    _ => return Err(syntax(line, rest_col, "`yes` or `no`")),
                });
            }
            "CLASS" | "REL" => {
                let (Some(world), true) = (head_rest.first(), head_rest.len() >= 2) else {
                    return Err(syntax(line, lead + 1, format!("`{keyword} <world> <name>: ...`")));
                };
                if !valid_id(world) {
                    return Err(syntax(line, lead + keyword.len() + 2, "a world identifier"));
                }
                let name = head_rest[1..].join(" ");
                if keyword == "CLASS" && slug(&name).is_empty() {
                    return Err(syntax(line, lead + 1, "a class name with at least one letter or digit"));
                }
                if keyword == "CLASS" {
                    let members = ids(rest, line, rest_col)?;
                    m.class_ext.entry((world.to_string(), slug(&name))).or_default().extend(members);
                } else {
                    let r = parse_relation(&name).map_err(|e| syntax(line, lead + 1, format!("a known relation ({e})")))?;
                    let ps = pairs(rest, line, rest_col)?;
                    m.rel_ext.entry((world.to_string(), r)).or_default().extend(ps);
                }
            }
            "CONTEXT" => {
                let [world] = head_rest.as_slice() else {
                    return Err(syntax(line, lead + 1, "`CONTEXT <world>: ...`"));
                };
                if !valid_id(world) {
                    return Err(syntax(line, lead + keyword.len() + 2, "a world identifier"));
                }
                let ps = pairs(rest, line, rest_col)?;
                m.context_of.entry(world.to_string()).or_default().extend(ps);
            }
            _ => {
                return Err(syntax(
                    line,
                    lead + 1,
                    "one of WORLDS, ACTUAL, ACCESSIBILITY, INDIVIDUALS, REFLEXIVE, CLASS, REL, CONTEXT",
                ))
            }
        }
    }
    if !seen_worlds {
        return Err(syntax(last_line.max(1), 1, "a WORLDS line"));
    }
    m.actual = actual.ok_or_else(|| syntax(last_line.max(1), 1, "an ACTUAL line"))?;
    m.reflexive = opts.reflexive.or(reflexive_line).unwrap_or(true);
    match access {
        Some(a) => m.accessibility = a,
        None if m.reflexive => {
            m.make_reflexive();
        }
        None => {}
    }
    let violations = validate_model(&m);
    if violations.is_empty() {
        Ok(m)
    } else {
        Err(ModelError::Invalid(violations))
    }
}

fn join_pairs<'a>(ps: impl Iterator<Item = &'a Pair>) -> String {
    ps.map(|(a, b)| format!(" {a}->{b}")).collect()
}

/// Canonical text; `parse_model(&emit_model(m)) == m` for every valid model.
pub fn emit_model(m: &FiniteModel) -> String {
    let mut out = String::new();
    let list = |xs: &BTreeSet<String>| xs.iter().map(|x| format!(" {x}")).collect::<String>();
    out.push_str(&format!("WORLDS:{}\n", list(&m.worlds)));
    out.push_str(&format!("ACTUAL: {}\n", m.actual));
    out.push_str(&format!("REFLEXIVE: {}\n", if m.reflexive { "yes" } else { "no" }));
    out.push_str(&format!("ACCESSIBILITY:{}\n", join_pairs(m.accessibility.iter())));
    out.push_str(&format!("INDIVIDUALS:{}\n", list(&m.domain)));
    for ((w, class), members) in &m.class_ext {
        out.push_str(&format!("CLASS {w} {class}:{}\n", list(members)));
    }
    for ((w, r), ps) in &m.rel_ext {
        out.push_str(&format!("REL {w} {}:{}\n", r.id(), join_pairs(ps.iter())));
    }
    for (w, ps) in &m.context_of {
        out.push_str(&format!("CONTEXT {w}:{}\n", join_pairs(ps.iter())));
    }
    out
}
