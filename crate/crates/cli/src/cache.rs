//! Persistent result cache: one JSON object mapping
//! `"quantity:m:n:method"` keys to exact decimal strings.
//!
//! Writes go through a temporary file in the same directory followed by a
//! rename, so concurrent writers may lose entries to each other but can
//! never leave a torn file behind. A file that fails to parse is reported
//! and treated as empty — a stale value is never silently reused.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

use anyhow::Context;

static WRITE_SEQ: AtomicU64 = AtomicU64::new(0);

pub struct Cache {
    path: PathBuf,
}

pub fn cache_key(quantity: &str, m: usize, n: u64, method: &str) -> String {
    format!("{quantity}:{m}:{n}:{method}")
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    fn load(&self) -> BTreeMap<String, String> {
        let bytes = match std::fs::read(&self.path) {
            Ok(b) => b,
            Err(_) => return BTreeMap::new(), // absent file: empty cache
        };
        match serde_json::from_slice(&bytes) {
            Ok(map) => map,
            Err(e) => {
                eprintln!(
                    "warning: cache file {} is corrupt ({e}); treating as empty",
                    self.path.display()
                );
                BTreeMap::new()
            }
        }
    }

    pub fn get(&self, key: &str) -> Option<String> {
        self.load().get(key).cloned()
    }

    pub fn put(&self, key: &str, value: &str) -> anyhow::Result<()> {
        let mut map = self.load();
        map.insert(key.to_string(), value.to_string());
        let tmp = self.path.with_extension(format!(
            "tmp.{}.{}",
            std::process::id(),
            WRITE_SEQ.fetch_add(1, Ordering::Relaxed)
        ));
        let body = serde_json::to_string_pretty(&map).expect("string map serializes");
        std::fs::write(&tmp, body.as_bytes())
            .with_context(|| format!("writing cache temp file {}", tmp.display()))?;
        std::fs::rename(&tmp, &self.path)
            .with_context(|| format!("renaming cache into place at {}", self.path.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_then_get_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("census.json"));
        assert_eq!(cache.get("K:3:5:oracle"), None);
        cache.put("K:3:5:oracle", "552").unwrap();
        assert_eq!(cache.get("K:3:5:oracle").as_deref(), Some("552"));
        cache.put("L:4:4:oracle", "576").unwrap();
        assert_eq!(cache.get("K:3:5:oracle").as_deref(), Some("552"));
    }

    #[test]
    fn corrupt_cache_is_treated_as_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.json");
        std::fs::write(&path, b"{ not json").unwrap();
        let cache = Cache::new(&path);
        assert_eq!(cache.get("K:2:2:oracle"), None);
        cache.put("K:2:2:oracle", "1").unwrap();
        assert_eq!(cache.get("K:2:2:oracle").as_deref(), Some("1"));
    }

    #[test]
    fn concurrent_writers_never_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.json");
        std::thread::scope(|scope| {
            for t in 0..8 {
                let path = path.clone();
                scope.spawn(move || {
                    let cache = Cache::new(path);
                    for i in 0..20 {
                        cache.put(&format!("K:{t}:{i}:oracle"), &i.to_string()).unwrap();
                    }
                });
            }
        });
        // Whatever interleaving happened, the file must parse.
        let cache = Cache::new(&path);
        let map = cache.load();
        assert!(!map.is_empty());
        for (k, v) in map {
            assert!(k.starts_with("K:"));
            v.parse::<u64>().unwrap();
        }
    }
}
