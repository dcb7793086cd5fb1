//! Optional TOML configuration; command-line flags take precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;
use superclaim::resolver::{ResolverConfig, SearchSource, SourceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    /// JSON.
    Structured,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub base_iri: Option<String>,
    pub reflexive: Option<bool>,
    pub format: Option<OutputFormat>,
    pub cache_dir: Option<PathBuf>,
    pub offline: Option<bool>,
    pub creator: Option<String>,
    #[serde(default)]
    pub resolver: ResolverSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolverSection {
    pub user_agent: Option<String>,
    pub min_interval_ms: Option<u64>,
    pub ttl_days: Option<u64>,
    pub sources: Option<Vec<String>>,
    pub limit: Option<usize>,
    #[serde(default)]
    pub endpoints: BTreeMap<String, EndpointOverride>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointOverride {
    pub endpoint: Option<String>,
    pub query_param: Option<String>,
    pub limit_param: Option<String>,
    pub api_key_param: Option<String>,
    pub api_key: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn resolver_config(&self, offline: bool) -> Result<ResolverConfig, String> {
        let mut rc = ResolverConfig { offline, ..Default::default() };
        let r = &self.resolver;
        if let Some(ua) = &r.user_agent {
            rc.user_agent = ua.clone();
        }
        if let Some(ms) = r.min_interval_ms {
            rc.min_interval = Duration::from_millis(ms);
        }
        if let Some(days) = r.ttl_days {
            rc.ttl = Duration::from_secs(days * 24 * 3600);
        }
        for (name, o) in &r.endpoints {
            let source = SearchSource::parse(name).ok_or_else(|| format!("unknown source `{name}` in [resolver.endpoints]"))?;
            let sc: &mut SourceConfig = rc.sources.entry(source).or_insert_with(|| SourceConfig::for_source(source));
            if let Some(v) = &o.endpoint {
                sc.endpoint = v.clone();
            }
            if let Some(v) = &o.query_param {
                sc.query_param = v.clone();
            }
            if let Some(v) = &o.limit_param {
                sc.limit_param = v.clone();
            }
            if o.api_key_param.is_some() {
                sc.api_key_param = o.api_key_param.clone();
            }
            if o.api_key.is_some() {
                sc.api_key = o.api_key.clone();
            }
        }
        if let Some(sc) = rc.sources.get_mut(&SearchSource::BioPortal) {
            if sc.api_key.is_none() {
                sc.api_key = std::env::var("BIOPORTAL_API_KEY").ok();
            }
        }
        Ok(rc)
    }
}
