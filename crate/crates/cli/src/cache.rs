//! One JSON file per key, named by the SHA-256 of the canonical key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub pipeline: String,
    pub params: Value,
    pub artifact_version: String,
}

impl CacheKey {
    pub fn new(pipeline: &str, params: Value) -> Self {
        CacheKey {
            pipeline: pipeline.to_string(),
            params,
            artifact_version: ARTIFACT_VERSION.to_string(),
        }
    }

    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("keys serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    record: Value,
}

#[derive(Debug, Clone)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(ResultCache { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// The stored record, if present and written under the same key and version.
    pub fn get(&self, key: &CacheKey) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == *key).then_some(entry.record)
    }

    /// Stores `record` unless a valid entry already exists.
    pub fn put(&self, key: &CacheKey, record: &Value) -> std::io::Result<()> {
        if self.get(key).is_some() {
            return Ok(());
        }
        let entry = Entry {
            key: key.clone(),
            record: record.clone(),
        };
        write_atomic(&self.path(key), &serde_json::to_vec(&entry)?)
    }
}

/// Writes to a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn roundtrip_and_key_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path()).unwrap();
        let key = CacheKey::new("code-bound", json!({"n": 8}));
        assert_eq!(cache.get(&key), None);
        cache.put(&key, &json!({"mu": 4})).unwrap();
        assert_eq!(cache.get(&key), Some(json!({"mu": 4})));

        // An entry from another version at the same path is ignored.
        let mut stale = key.clone();
        stale.artifact_version = "0.0.0".into();
        let entry = Entry {
            key: stale,
            record: json!({"mu": 5}),
        };
        fs::write(cache.path(&key), serde_json::to_vec(&entry).unwrap()).unwrap();
        assert_eq!(cache.get(&key), None);
    }

    #[test]
    fn digest_depends_on_params() {
        let a = CacheKey::new("voa-bound", json!({"c": "8"}));
        let b = CacheKey::new("voa-bound", json!({"c": "24"}));
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }
}
