//! Five-slot patterns for scientific claims: a context, subject, qualifier,
//! relation and object, with a fixed probabilistic/modal reading.
//!
//! The crate covers the controlled vocabulary, class expressions, rendering
//! to logic, evaluation on finite possible-world models, qualifier-level
//! reasoning, file formats, corpus statistics, study agreement measures and
//! ontology term lookup.

pub mod agreement;
pub mod claim;
pub mod class;
pub mod decimal;
pub mod error;
pub mod eval;
pub mod io;
pub mod logic;
pub mod model;
pub mod reasoner;
pub mod resolver;
pub mod stats;
pub mod vocab;

pub use claim::{ClaimDocument, ClaimEntry, ClaimMeta, Slot, SuperPatternInstance};
pub use class::{ClassExpr, TermRef, TermSource};
pub use eval::{evaluate, EvaluationResult, Status};
pub use model::FiniteModel;
pub use reasoner::{check_pair, corpus_consistency, qualifier_entails, qualifiers_conflict, Assumption, ReasoningVerdict, VerdictKind};
pub use vocab::{parse_qualifier, parse_relation, Qualifier, Rational, RelationGroup, RelationType};
