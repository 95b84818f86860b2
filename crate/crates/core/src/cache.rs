//! Content-addressed result cache: one JSON file per key.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV: &str = "NILCLEAN_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".nilclean-cache";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub content_hash: String,
    pub analysis: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(
        content_hash: impl Into<String>,
        analysis: impl Into<String>,
        version: impl Into<String>,
    ) -> Self {
        CacheKey {
            content_hash: content_hash.into(),
            analysis: analysis.into(),
            version: version.into(),
        }
    }

    fn file_name(&self) -> String {
        format!(
            "{}-{}-v{}.json",
            self.analysis, self.content_hash, self.version
        )
    }
}

#[derive(Debug, Clone)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ResultCache { dir })
    }

    /// `$NILCLEAN_CACHE` if set, else `.nilclean-cache` in the working directory.
    pub fn default_dir() -> PathBuf {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get_raw(&self, key: &CacheKey) -> Option<String> {
        fs::read_to_string(self.dir.join(key.file_name())).ok()
    }

    /// Unreadable or corrupt entries count as misses.
    pub fn get<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        serde_json::from_str(&self.get_raw(key)?).ok()
    }

    pub fn put_raw(&self, key: &CacheKey, json: &str) -> io::Result<()> {
        let path = self.dir.join(key.file_name());
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, json)?;
        fs::rename(tmp, path)
    }

    pub fn put<T: Serialize>(&self, key: &CacheKey, value: &T) -> io::Result<()> {
        let json = serde_json::to_string(value).map_err(io::Error::other)?;
        self.put_raw(key, &json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path()).unwrap();
        let key = CacheKey::new("abc", "index", "0.1.0");
        assert!(cache.get_raw(&key).is_none());
        cache.put(&key, &vec![1, 2, 3]).unwrap();
        assert_eq!(cache.get::<Vec<u32>>(&key), Some(vec![1, 2, 3]));
        assert_eq!(cache.get_raw(&key).unwrap(), "[1,2,3]");
        let other = CacheKey::new("abc", "index", "0.2.0");
        assert!(cache.get_raw(&other).is_none());
    }

    #[test]
    fn corrupt_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path()).unwrap();
        let key = CacheKey::new("x", "theorems", "1");
        cache.put_raw(&key, "{not json").unwrap();
        assert!(cache.get::<Vec<u32>>(&key).is_none());
    }
}
