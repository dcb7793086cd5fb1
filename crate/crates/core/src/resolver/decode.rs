//! Decoders for the JSON payloads of the supported search services.

use serde::Deserialize;
use thiserror::Error;

use super::{SearchSource, TermCandidate};
use crate::class::is_absolute_iri;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed {service} response: {message}")]
pub struct DecodeError {
    pub service: SearchSource,
    pub message: String,
}

fn malformed(source: SearchSource, e: impl ToString) -> DecodeError {
    DecodeError { service: source, message: e.to_string() }
}

/// Entries with a missing or relative IRI are skipped; ranks count the
/// entries that remain.
fn ranked(source: SearchSource, raw: impl Iterator<Item = (String, String, Option<String>)>) -> Vec<TermCandidate> {
    raw.filter(|(iri, _, _)| is_absolute_iri(iri))
        .enumerate()
        .map(|(i, (iri, label, description))| TermCandidate { iri, label, description, source, rank: i + 1 })
        .collect()
}

#[derive(Deserialize)]
struct WikidataResponse {
    search: Vec<WikidataHit>,
}

#[derive(Deserialize)]
struct WikidataHit {
    id: String,
    concepturi: Option<String>,
    label: Option<String>,
    description: Option<String>,
}

/// `wbsearchentities` action of the MediaWiki API.
pub fn decode_wikidata(body: &str) -> Result<Vec<TermCandidate>, DecodeError> {
    let r: WikidataResponse = serde_json::from_str(body).map_err(|e| malformed(SearchSource::Wikidata, e))?;
    Ok(ranked(
        SearchSource::Wikidata,
        r.search.into_iter().map(|h| {
            let iri = h.concepturi.unwrap_or_else(|| format!("http://www.wikidata.org/entity/{}", h.id));
            (iri, h.label.unwrap_or(h.id), h.description)
        }),
    ))
}

#[derive(Deserialize)]
struct BioPortalResponse {
    collection: Vec<BioPortalHit>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn first(self) -> Option<String> {
        match self {
            OneOrMany::One(s) => Some(s),
            OneOrMany::Many(v) => v.into_iter().next(),
        }
    }
}

#[derive(Deserialize)]
struct BioPortalHit {
    #[serde(rename = "@id")]
    id: String,
    #[serde(rename = "prefLabel")]
    pref_label: Option<String>,
    definition: Option<OneOrMany>,
}

/// BioPortal `/search`.
pub fn decode_bioportal(body: &str) -> Result<Vec<TermCandidate>, DecodeError> {
    let r: BioPortalResponse = serde_json::from_str(body).map_err(|e| malformed(SearchSource::BioPortal, e))?;
    Ok(ranked(
        SearchSource::BioPortal,
        r.collection.into_iter().map(|h| {
            let label = h.pref_label.unwrap_or_else(|| h.id.clone());
            (h.id, label, h.definition.and_then(OneOrMany::first))
        }),
    ))
}

#[derive(Deserialize)]
struct LovResponse {
    results: Vec<LovHit>,
}

#[derive(Deserialize)]
struct LovHit {
    uri: OneOrMany,
    #[serde(rename = "prefixedName")]
    prefixed_name: Option<OneOrMany>,
    #[serde(rename = "vocabulary.prefix")]
    vocabulary: Option<OneOrMany>,
}

/// Linked Open Vocabularies term search (v2).
pub fn decode_lov(body: &str) -> Result<Vec<TermCandidate>, DecodeError> {
    let r: LovResponse = serde_json::from_str(body).map_err(|e| malformed(SearchSource::Lov, e))?;
    Ok(ranked(
        SearchSource::Lov,
        r.results.into_iter().filter_map(|h| {
            let iri = h.uri.first()?;
            let label = h.prefixed_name.and_then(OneOrMany::first).unwrap_or_else(|| iri.clone());
            let description = h.vocabulary.and_then(OneOrMany::first).map(|v| format!("vocabulary {v}"));
            Some((iri, label, description))
        }),
    ))
}

pub fn decode(source: SearchSource, body: &str) -> Result<Vec<TermCandidate>, DecodeError> {
    match source {
        SearchSource::Wikidata => decode_wikidata(body),
        SearchSource::BioPortal => decode_bioportal(body),
        SearchSource::Lov => decode_lov(body),
    }
}
