//! JSON result cache on disk.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

/// Bumped whenever the layout of a cached document changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the cache root.
pub const CACHE_ENV: &str = "VERLINDE_CACHE_DIR";

/// What a cache entry describes. Each field is part of the file name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub kind: &'static str,
    pub lie_type: String,
    pub level: u32,
    pub length: Option<usize>,
    pub margin: Option<usize>,
}

impl CacheKey {
    fn file_name(&self, version: u32) -> String {
        let mut s = format!("{}-v{version}-{}-k{}", self.kind, self.lie_type, self.level);
        if let Some(l) = self.length {
            s.push_str(&format!("-L{l}"));
        }
        if let Some(m) = self.margin {
            s.push_str(&format!("-m{m}"));
        }
        s.push_str(".json");
        s
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
    version: u32,
}

impl Cache {
    /// A cache rooted at `dir`; `None` disables caching.
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache::with_version(dir, SCHEMA_VERSION)
    }

    pub fn with_version(dir: Option<PathBuf>, version: u32) -> Self {
        Cache { dir, version }
    }

    pub fn disabled() -> Self {
        Cache::new(None)
    }

    /// `flag`, else the environment variable, else the platform cache directory.
    pub fn locate(flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .or_else(|| dirs::cache_dir().map(|d| d.join("verlinde")))
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name(self.version)))
    }

    /// The cached text and its parsed form, if present and well formed.
    /// `valid` decides whether a parsed document is usable.
    pub fn load(&self, key: &CacheKey, valid: impl Fn(&Value) -> bool) -> Option<(String, Value)> {
        let path = self.path(key)?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                eprintln!("warning: ignoring unreadable cache entry {}: {e}", path.display());
                return None;
            }
        };
        match serde_json::from_str::<Value>(&text) {
            Ok(v) if valid(&v) && text.ends_with('\n') => Some((text, v)),
            _ => {
                eprintln!("warning: ignoring corrupt cache entry {}", path.display());
                None
            }
        }
    }

    /// Writes through a temporary file in the same directory, then renames.
    /// Failures only produce a warning.
    pub fn store(&self, key: &CacheKey, text: &str) {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else {
            return;
        };
        let result = fs::create_dir_all(dir).and_then(|_| {
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(&path).map_err(|e| e.error)?;
            Ok(())
        });
        if let Err(e) = result {
            eprintln!("warning: could not write cache entry {}: {e}", path.display());
        }
    }
}
