use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("unknown qualifier `{input}` (did you mean `{nearest}`?)")]
    UnknownQualifier { input: String, nearest: String },
    #[error("unknown relation `{input}`; relation groups are: {}", heads.join(", "))]
    UnknownRelation { input: String, heads: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("class label is empty")]
    EmptyLabel,
    #[error("class label contains a control character")]
    ControlCharacter,
    #[error("intersection needs at least two parts, got {0}")]
    TooFewParts(usize),
    #[error("`{0}` is not an absolute IRI")]
    InvalidIri(String),
}

/// Errors from the claim DSL and the JSON interchange form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClaimsError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("line {line}: {source}")]
    Vocabulary {
        line: usize,
        #[source]
        source: VocabError,
    },
    #[error("line {line}: {source}")]
    Class {
        line: usize,
        #[source]
        source: ClassError,
    },
    #[error("duplicate claim id `{0}`")]
    DuplicateId(String),
    #[error("interchange: {0}")]
    Interchange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error("duplicate claim id `{0}`")]
    DuplicateId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NanopubError {
    #[error("base IRI `{0}` is not absolute")]
    InvalidBaseIri(String),
}
