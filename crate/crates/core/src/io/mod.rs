//! Readers and writers: the claim DSL, its JSON mirror, the model format,
//! and nanopublication TriG.

pub mod dsl;
pub mod json;
pub mod model_format;
pub mod nanopub;

pub use dsl::{emit_claims, parse_claims};
pub use json::{from_json, to_json};
pub use model_format::{emit_model, parse_model};
pub use nanopub::{to_nanopub, to_trig, NanopubConfig, NanopubDocument, ProvenanceInfo};
