//! On-disk store for subgroup-lattice representatives.
//!
//! One JSON file per group, named by the SHA-256 of the group's canonical
//! element labels. The directory is `$ENTANGLE_CACHE_DIR` when set, else
//! `entangle/` under the platform cache directory.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::group::{Elem, FiniteGroup, LatticeStore};

pub const CACHE_SCHEMA_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "ENTANGLE_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    /// SHA-256 of the canonical element list.
    pub content_hash: String,
    pub order: usize,
    /// SHA-256 of the serialized representatives.
    pub payload_hash: String,
    pub representatives: Vec<Vec<Elem>>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the group's canonical element labels, one per line.
pub fn group_hash(group: &FiniteGroup) -> String {
    sha256_hex(group.canonical_labels().join("\n").as_bytes())
}

fn payload_hash(reps: &[Vec<Elem>]) -> String {
    sha256_hex(serde_json::to_string(reps).expect("serializable").as_bytes())
}

impl CacheEntry {
    pub fn new(group: &FiniteGroup, representatives: &[Vec<Elem>]) -> Self {
        CacheEntry {
            schema_version: CACHE_SCHEMA_VERSION,
            content_hash: group_hash(group),
            order: group.order(),
            payload_hash: payload_hash(representatives),
            representatives: representatives.to_vec(),
        }
    }

    /// Whether the entry is current and belongs to a group with this hash.
    pub fn is_valid_for(&self, hash: &str, order: usize) -> bool {
        self.schema_version == CACHE_SCHEMA_VERSION
            && self.content_hash == hash
            && self.order == order
            && self.payload_hash == payload_hash(&self.representatives)
            && self
                .representatives
                .iter()
                .all(|r| r.iter().all(|&x| (x as usize) < order))
    }
}

/// Directory-backed [`LatticeStore`]. Corrupt or stale entries are ignored
/// and overwritten on the next store.
#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: dir.into(),
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    /// The directory from the environment, or the platform default.
    pub fn default_dir() -> Option<PathBuf> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Some(PathBuf::from(d)),
            _ => dirs::cache_dir().map(|d| d.join("entangle")),
        }
    }

    pub fn from_env() -> Option<Self> {
        Self::default_dir().map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, group: &FiniteGroup) -> PathBuf {
        self.dir.join(format!("{}.json", group_hash(group)))
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    fn read(&self, group: &FiniteGroup) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path_for(group)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        entry
            .is_valid_for(&group_hash(group), group.order())
            .then_some(entry)
    }

    fn write(&self, entry: &CacheEntry) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let target = self.dir.join(format!("{}.json", entry.content_hash));
        let tmp = self
            .dir
            .join(format!(".{}.{}.tmp", entry.content_hash, std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(entry).expect("serializable").as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

impl LatticeStore for Cache {
    fn load(&self, group: &FiniteGroup) -> Option<Vec<Vec<Elem>>> {
        match self.read(group) {
            Some(entry) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(entry.representatives)
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    fn store(&self, group: &FiniteGroup, representatives: &[Vec<Elem>]) {
        // a failed write only costs a recomputation later
        let _ = self.write(&CacheEntry::new(group, representatives));
    }
}
