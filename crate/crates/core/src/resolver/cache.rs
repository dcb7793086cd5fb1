//! On-disk response cache keyed by (source, normalized label).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{normalize_label, SearchSource, TermCandidate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub source: SearchSource,
    pub label: String,
    /// Seconds since the Unix epoch.
    pub fetched_at: u64,
    pub candidates: Vec<TermCandidate>,
}

/// One JSON file per key. Writes go through a temporary file and a rename,
/// and a lock serializes access within the process.
#[derive(Debug)]
pub struct FileCache {
    dir: PathBuf,
    ttl: Duration,
    lock: Mutex<()>,
}

pub fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl FileCache {
    pub fn new(dir: impl Into<PathBuf>, ttl: Duration) -> Self {
        FileCache { dir: dir.into(), ttl, lock: Mutex::new(()) }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, source: SearchSource, label: &str) -> PathBuf {
        let digest = Sha256::digest(normalize_label(label).as_bytes());
        let hex: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
        self.dir.join(source.as_str()).join(format!("{hex}.json"))
    }

    /// The stored entry, whatever its age.
    pub fn load(&self, source: SearchSource, label: &str) -> Option<CacheEntry> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let text = fs::read_to_string(self.path_for(source, label)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.source == source && entry.label == normalize_label(label)).then_some(entry)
    }

    /// The stored entry if younger than the time-to-live at `now`.
    pub fn fresh(&self, source: SearchSource, label: &str, now: u64) -> Option<CacheEntry> {
        self.load(source, label).filter(|e| now.saturating_sub(e.fetched_at) < self.ttl.as_secs())
    }

    pub fn store(&self, entry: &CacheEntry) -> io::Result<()> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let path = self.path_for(entry.source, &entry.label);
        let parent = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(".{}.tmp", std::process::id()));
        let text = serde_json::to_string_pretty(entry).map_err(io::Error::other)?;
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)
    }
}
