//! Exact evaluation of a pattern instance on a finite model.
//!
//! The condition set is read at the actual world. The event is read at the
//! actual world, or for "can" qualifiers at any world accessible from it.
//! Without a context class, `x` is the universal context and the
//! context-of atoms are dropped.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::claim::SuperPatternInstance;
use crate::model::{class_extension, validate_model, FiniteModel, Violation};
use crate::vocab::{qualifier_params, Modality, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    /// The condition set is empty, so the ratio is undefined.
    Indeterminate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EvaluationResult {
    pub status: Status,
    pub ratio: Option<Rational>,
    pub condition_count: u64,
    pub event_count: u64,
}

impl EvaluationResult {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Violation>),
}

/// `x` in a condition pair: an individual, or the universal context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum ContextPoint<'a> {
    Universal,
    Individual(&'a str),
}

fn condition_pairs<'a>(m: &'a FiniteModel, inst: &SuperPatternInstance) -> Vec<(ContextPoint<'a>, &'a str)> {
    let w = m.actual.as_str();
    let subjects = class_extension(m, w, &inst.subject);
    let mut out = Vec::new();
    match &inst.context {
        None => {
            for y in m.domain.iter().filter(|y| subjects.contains(*y)) {
                out.push((ContextPoint::Universal, y.as_str()));
            }
        }
        Some(c) => {
            let contexts = class_extension(m, w, c);
            let Some(pairs) = m.context_pairs(w) else {
                return out;
            };
            for (y, x) in pairs {
                if subjects.contains(y) && contexts.contains(x) {
                    out.push((ContextPoint::Individual(x.as_str()), y.as_str()));
                }
            }
        }
    }
    out
}

fn event_at(m: &FiniteModel, w: &str, inst: &SuperPatternInstance, x: ContextPoint<'_>, y: &str, objects: &BTreeSet<String>) -> bool {
    let Some(rel) = m.relation_pairs(w, inst.relation) else {
        return false;
    };
    let ctx = m.context_pairs(w);
    objects.iter().any(|z| {
        let in_context = match x {
            ContextPoint::Universal => true,
            ContextPoint::Individual(x) => {
                ctx.is_some_and(|c| c.contains(&(z.clone(), x.to_string())))
            }
        };
        in_context && rel.contains(&(y.to_string(), z.clone()))
    })
}

/// Evaluate `inst` on `m`. Relation extensions are read under the instance's
/// relation only; taxonomy closure is the caller's concern.
pub fn evaluate(m: &FiniteModel, inst: &SuperPatternInstance) -> Result<EvaluationResult, EvalError> {
    let violations = validate_model(m);
    if !violations.is_empty() {
        return Err(EvalError::InvalidModel(violations));
    }
    let params = qualifier_params(inst.qualifier);
    let worlds: Vec<&str> = match params.modality {
        Modality::Actual => vec![m.actual.as_str()],
        Modality::Possible => m.accessible_from(&m.actual).collect(),
    };
    let objects: Vec<BTreeSet<String>> = worlds.iter().map(|w| class_extension(m, w, &inst.object)).collect();

    let condition = condition_pairs(m, inst);
    let event_count = condition
        .iter()
        .filter(|(x, y)| worlds.iter().zip(&objects).any(|(w, objs)| event_at(m, w, inst, *x, y, objs)))
        .count() as u64;
    let condition_count = condition.len() as u64;

    if condition_count == 0 {
        return Ok(EvaluationResult { status: Status::Indeterminate, ratio: None, condition_count, event_count });
    }
    let ratio = Rational::new(event_count, condition_count);
    let status = if params.comparison.test(ratio, params.threshold) { Status::Holds } else { Status::Fails };
    Ok(EvaluationResult { status, ratio: Some(ratio), condition_count, event_count })
}
