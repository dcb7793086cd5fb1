//! Suggest existing ontology identifiers for class labels by querying
//! full-text search services, with a response cache and an offline mode.
//!
//! The library does no networking itself: HTTP goes through a [`Fetcher`]
//! supplied by the caller.

mod cache;
pub mod decode;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cache::{now_secs, CacheEntry, FileCache};
pub use decode::{decode, decode_bioportal, decode_lov, decode_wikidata, DecodeError};

use crate::claim::{Slot, SuperPatternInstance};
use crate::class::{ClassExpr, TermRef, TermSource, DEFAULT_MINTED_NAMESPACE};
use crate::error::ClassError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchSource {
    Wikidata,
    BioPortal,
    Lov,
}

impl SearchSource {
    pub const ALL: [SearchSource; 3] = [SearchSource::Wikidata, SearchSource::BioPortal, SearchSource::Lov];

    pub fn as_str(self) -> &'static str {
        match self {
            SearchSource::Wikidata => "wikidata",
            SearchSource::BioPortal => "bioportal",
            SearchSource::Lov => "lov",
        }
    }

    pub fn parse(text: &str) -> Option<SearchSource> {
        SearchSource::ALL.into_iter().find(|s| s.as_str().eq_ignore_ascii_case(text.trim()))
    }
}

impl fmt::Display for SearchSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCandidate {
    pub iri: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub source: SearchSource,
    /// 1-based position in the source's own result order.
    pub rank: usize,
}

impl TermCandidate {
    /// The identifier source recorded when this candidate is bound.
    pub fn term_source(&self) -> TermSource {
        match self.source {
            SearchSource::Wikidata => TermSource::Wikidata,
            SearchSource::Lov => TermSource::Lov,
            SearchSource::BioPortal => match TermSource::infer(&self.iri, DEFAULT_MINTED_NAMESPACE) {
                TermSource::Obo => TermSource::Obo,
                TermSource::Evs => TermSource::Evs,
                _ => TermSource::Other,
            },
        }
    }
}

/// Trim, lowercase and collapse internal whitespace.
pub fn normalize_label(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Endpoint and query-parameter names for one service.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SourceConfig {
    pub endpoint: String,
    pub query_param: String,
    pub limit_param: String,
    /// Fixed parameters sent with every request.
    pub extra_params: Vec<(String, String)>,
    pub api_key_param: Option<String>,
    pub api_key: Option<String>,
}

impl Default for SourceConfig {
    fn default() -> Self {
        SourceConfig::for_source(SearchSource::Wikidata)
    }
}

impl SourceConfig {
    pub fn for_source(source: SearchSource) -> Self {
        let pairs = |xs: &[(&str, &str)]| xs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        match source {
            SearchSource::Wikidata => SourceConfig {
                endpoint: "https://www.wikidata.org/w/api.php".into(),
                query_param: "search".into(),
                limit_param: "limit".into(),
                extra_params: pairs(&[("action", "wbsearchentities"), ("language", "en"), ("type", "item"), ("format", "json")]),
                api_key_param: None,
                api_key: None,
            },
            SearchSource::BioPortal => SourceConfig {
                endpoint: "https://data.bioontology.org/search".into(),
                query_param: "q".into(),
                limit_param: "pagesize".into(),
                extra_params: Vec::new(),
                api_key_param: Some("apikey".into()),
                api_key: None,
            },
            SearchSource::Lov => SourceConfig {
                endpoint: "https://lov.linkeddata.es/dataset/lov/api/v2/term/search".into(),
                query_param: "q".into(),
                limit_param: "page_size".into(),
                extra_params: pairs(&[("type", "class")]),
                api_key_param: None,
                api_key: None,
            },
        }
    }

    pub fn query(&self, label: &str, limit: usize) -> Vec<(String, String)> {
        let mut q = self.extra_params.clone();
        q.push((self.query_param.clone(), label.to_string()));
        q.push((self.limit_param.clone(), limit.to_string()));
        if let (Some(k), Some(v)) = (&self.api_key_param, &self.api_key) {
            q.push((k.clone(), v.clone()));
        }
        q
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolverConfig {
    pub sources: BTreeMap<SearchSource, SourceConfig>,
    pub user_agent: String,
    /// Minimum spacing between requests to one source.
    pub min_interval: Duration,
    pub ttl: Duration,
    pub offline: bool,
}

impl Default for ResolverConfig {
    fn default() -> Self {
        ResolverConfig {
            sources: SearchSource::ALL.into_iter().map(|s| (s, SourceConfig::for_source(s))).collect(),
            user_agent: concat!("superclaim/", env!("CARGO_PKG_VERSION")).into(),
            min_interval: Duration::from_secs(1),
            ttl: Duration::from_secs(30 * 24 * 3600),
            offline: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct FetchError(pub String);

/// Performs one HTTP GET and returns the response body.
pub trait Fetcher: Send + Sync {
    fn get(&self, endpoint: &str, query: &[(String, String)], user_agent: &str) -> Result<String, FetchError>;
}

/// Spaces requests to each source at least `interval` apart.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    last: Mutex<HashMap<SearchSource, Instant>>,
}

impl RateLimiter {
    pub fn new(interval: Duration) -> Self {
        RateLimiter { interval, last: Mutex::new(HashMap::new()) }
    }

    /// Block until a request to `source` is allowed; returns the time slept.
    pub fn acquire(&self, source: SearchSource) -> Duration {
        let mut last = self.last.lock().unwrap_or_else(|e| e.into_inner());
        let now = Instant::now();
        let wait = last.get(&source).map(|t| (*t + self.interval).saturating_duration_since(now)).unwrap_or_default();
        if !wait.is_zero() {
            thread::sleep(wait);
        }
        last.insert(source, now + wait);
        wait
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchWarning {
    /// Offline and nothing cached for this source.
    OfflineCacheMiss(SearchSource),
    Network { source: SearchSource, message: String },
    Decode { source: SearchSource, message: String },
    CacheWrite { source: SearchSource, message: String },
}

impl fmt::Display for SearchWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchWarning::OfflineCacheMiss(s) => write!(f, "{s}: offline and not cached"),
            SearchWarning::Network { source, message } => write!(f, "{source}: request failed: {message}"),
            SearchWarning::Decode { source, message } => write!(f, "{source}: {message}"),
            SearchWarning::CacheWrite { source, message } => write!(f, "{source}: cache write failed: {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchOutcome {
    pub candidates: Vec<TermCandidate>,
    pub warnings: Vec<SearchWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("label is empty")]
    EmptyLabel,
    #[error("limit must be at least 1")]
    ZeroLimit,
    #[error("no sources selected")]
    NoSources,
}

pub struct Resolver {
    config: ResolverConfig,
    fetcher: Option<Box<dyn Fetcher>>,
    cache: Option<FileCache>,
    limiter: RateLimiter,
}

impl Resolver {
    /// Without a fetcher every lookup behaves as if offline.
    pub fn new(config: ResolverConfig, fetcher: Option<Box<dyn Fetcher>>, cache: Option<FileCache>) -> Self {
        let limiter = RateLimiter::new(config.min_interval);
        Resolver { config, fetcher, cache, limiter }
    }

    pub fn config(&self) -> &ResolverConfig {
        &self.config
    }

    /// Query each source (cache first), keep the first `limit` hits per
    /// source, and merge round-robin by rank in source order. Failures of
    /// one source become warnings; the others are still returned.
    pub fn search(&self, label: &str, sources: &BTreeSet<SearchSource>, limit: usize) -> Result<SearchOutcome, SearchError> {
        let norm = normalize_label(label);
        if norm.is_empty() {
            return Err(SearchError::EmptyLabel);
        }
        if limit == 0 {
            return Err(SearchError::ZeroLimit);
        }
        if sources.is_empty() {
            return Err(SearchError::NoSources);
        }
        let mut outcome = SearchOutcome::default();
        let mut per_source = Vec::new();
        for &source in sources {
            if let Some(mut hits) = self.lookup(source, &norm, limit, &mut outcome.warnings) {
                hits.truncate(limit);
                per_source.push(hits);
            }
        }
        for rank in 1..=limit {
            for hits in &per_source {
                outcome.candidates.extend(hits.iter().filter(|c| c.rank == rank).cloned());
            }
        }
        Ok(outcome)
    }

    fn lookup(&self, source: SearchSource, label: &str, limit: usize, warnings: &mut Vec<SearchWarning>) -> Option<Vec<TermCandidate>> {
        let now = now_secs();
        let offline = self.config.offline || self.fetcher.is_none();
        if let Some(cache) = &self.cache {
            let hit = if offline { cache.load(source, label) } else { cache.fresh(source, label, now) };
            if let Some(entry) = hit {
                return Some(entry.candidates);
            }
        }
        if offline {
            warnings.push(SearchWarning::OfflineCacheMiss(source));
            return None;
        }
        let fetcher = self.fetcher.as_ref()?;
        let sc = self.config.sources.get(&source).cloned().unwrap_or_else(|| SourceConfig::for_source(source));
        self.limiter.acquire(source);
        let body = match fetcher.get(&sc.endpoint, &sc.query(label, limit), &self.config.user_agent) {
            Ok(b) => b,
            Err(e) => {
                warnings.push(SearchWarning::Network { source, message: e.0 });
                return None;
            }
        };
        let candidates = match decode(source, &body) {
            Ok(c) => c,
            Err(e) => {
                warnings.push(SearchWarning::Decode { source, message: e.to_string() });
                return None;
            }
        };
        if let Some(cache) = &self.cache {
            let entry = CacheEntry { source, label: label.to_string(), fetched_at: now, candidates: candidates.clone() };
            if let Err(e) = cache.store(&entry) {
                warnings.push(SearchWarning::CacheWrite { source, message: e.to_string() });
            }
        }
        Some(candidates)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindError {
    #[error("the {0} slot is empty")]
    EmptySlot(&'static str),
    #[error("the {0} slot holds an intersection; bind its parts instead")]
    NotAtomic(&'static str),
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// A copy of `inst` whose atomic `slot` carries the candidate's identifier,
/// replacing any earlier binding.
pub fn bind(inst: &SuperPatternInstance, slot: Slot, candidate: &TermCandidate) -> Result<SuperPatternInstance, BindError> {
    let term = TermRef::new(candidate.iri.clone(), candidate.term_source())?;
    let mut out = inst.clone();
    match out.slot_mut(slot) {
        None => Err(BindError::EmptySlot(slot.as_str())),
        Some(ClassExpr::Intersection(_)) => Err(BindError::NotAtomic(slot.as_str())),
        Some(ClassExpr::Atomic { term: t, .. }) => {
            *t = Some(term);
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::dsl::parse_claims;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    struct Canned {
        body: Result<String, FetchError>,
        calls: Arc<AtomicUsize>,
    }

    impl Fetcher for Canned {
        fn get(&self, _: &str, query: &[(String, String)], _: &str) -> Result<String, FetchError> {
            assert!(query.iter().any(|(k, _)| k == "search"));
            self.calls.fetch_add(1, Ordering::SeqCst);
            self.body.clone()
        }
    }

    const WD: &str = r#"{"search":[{"id":"Q1","concepturi":"http://www.wikidata.org/entity/Q1","label":"a"},
        {"id":"Q2","concepturi":"http://www.wikidata.org/entity/Q2","label":"b"}]}"#;

    fn cfg() -> ResolverConfig {
        ResolverConfig { min_interval: Duration::ZERO, ..Default::default() }
    }

    fn wikidata() -> BTreeSet<SearchSource> {
        BTreeSet::from([SearchSource::Wikidata])
    }

    #[test]
    fn preconditions() {
        let r = Resolver::new(cfg(), None, None);
        assert_eq!(r.search("  ", &wikidata(), 5), Err(SearchError::EmptyLabel));
        assert_eq!(r.search("x", &wikidata(), 0), Err(SearchError::ZeroLimit));
        assert_eq!(r.search("x", &BTreeSet::new(), 1), Err(SearchError::NoSources));
    }

    #[test]
    fn offline_miss_warns() {
        let r = Resolver::new(ResolverConfig { offline: true, ..cfg() }, None, None);
        let out = r.search("obesity", &wikidata(), 5).unwrap();
        assert!(out.candidates.is_empty());
        assert_eq!(out.warnings, vec![SearchWarning::OfflineCacheMiss(SearchSource::Wikidata)]);
    }

    #[test]
    fn fetch_then_cache() {
        let dir = tempfile::tempdir().unwrap();
        let calls = Arc::new(AtomicUsize::new(0));
        let fetch = Canned { body: Ok(WD.into()), calls: calls.clone() };
        let r = Resolver::new(cfg(), Some(Box::new(fetch)), Some(FileCache::new(dir.path(), Duration::from_secs(60))));
        let first = r.search("Obesity", &wikidata(), 1).unwrap();
        assert_eq!(first.candidates.len(), 1);
        let second = r.search("obesity ", &wikidata(), 1).unwrap();
        assert_eq!(first, second);
        assert_eq!(calls.load(Ordering::SeqCst), 1);

        let offline = Resolver::new(ResolverConfig { offline: true, ..cfg() }, None, Some(FileCache::new(dir.path(), Duration::ZERO)));
        assert_eq!(offline.search("obesity", &wikidata(), 2).unwrap().candidates.len(), 2);
    }

    #[test]
    fn network_failure_is_per_source() {
        let calls = Arc::new(AtomicUsize::new(0));
        let fetch = Canned { body: Err(FetchError("timeout".into())), calls };
        let r = Resolver::new(cfg(), Some(Box::new(fetch)), None);
        let out = r.search("obesity", &wikidata(), 3).unwrap();
        assert!(out.candidates.is_empty());
        assert!(matches!(&out.warnings[0], SearchWarning::Network { .. }));
    }

    #[test]
    fn rate_limiter_spaces_requests() {
        let l = RateLimiter::new(Duration::from_millis(30));
        let start = Instant::now();
        l.acquire(SearchSource::Lov);
        l.acquire(SearchSource::Wikidata);
        l.acquire(SearchSource::Lov);
        assert!(start.elapsed() >= Duration::from_millis(25));
    }

    #[test]
    fn binding() {
        let doc = parse_claims("SUBJECT: a + b\nQUALIFIER: always\nRELATION: causes\nOBJECT: o\n").unwrap();
        let inst = doc.instances().next().unwrap();
        let cand = TermCandidate {
            iri: "http://purl.obolibrary.org/obo/X_1".into(),
            label: "o".into(),
            description: None,
            source: SearchSource::BioPortal,
            rank: 1,
        };
        let bound = bind(inst, Slot::Object, &cand).unwrap();
        assert_eq!(bound.object.term().unwrap().source, TermSource::Obo);
        assert!(inst.object.term().is_none());
        assert_eq!(bind(inst, Slot::Subject, &cand), Err(BindError::NotAtomic("subject")));
        assert_eq!(bind(inst, Slot::Context, &cand), Err(BindError::EmptySlot("context")));
    }
}
