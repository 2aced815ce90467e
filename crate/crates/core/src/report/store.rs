use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever a cached result changes shape; older lines are ignored.
pub const CACHE_VERSION: u32 = 1;

pub const DEFAULT_CACHE_PATH: &str = ".liepi-cache.jsonl";

#[derive(Debug, Serialize, Deserialize)]
struct Line {
    version: u32,
    key: String,
    algebra: String,
    operation: String,
    parameters: Value,
    result: Value,
}

/// Append-only JSON-lines cache of results keyed by algebra fingerprint,
/// operation and parameters.
#[derive(Debug, Default)]
pub struct ResultStore {
    path: Option<PathBuf>,
    entries: HashMap<String, Value>,
    pub hits: usize,
    pub misses: usize,
}

impl ResultStore {
    /// A store that lives only as long as the process.
    pub fn in_memory() -> Self {
        ResultStore::default()
    }

    /// Loads `path` if it exists. Lines that do not parse or carry another
    /// version are skipped.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        match std::fs::File::open(&path) {
            Ok(f) => {
                for line in BufReader::new(f).lines() {
                    let line = line?;
                    if let Ok(l) = serde_json::from_str::<Line>(&line) {
                        if l.version == CACHE_VERSION {
                            entries.insert(l.key, l.result);
                        }
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(ResultStore {
            path: Some(path),
            entries,
            hits: 0,
            misses: 0,
        })
    }

    pub fn key(algebra: &str, operation: &str, parameters: &Value) -> String {
        let mut h = Sha256::new();
        h.update(CACHE_VERSION.to_le_bytes());
        for part in [algebra, operation, &parameters.to_string()] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn get(&mut self, key: &str) -> Option<Value> {
        let v = self.entries.get(key).cloned();
        if v.is_some() {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records a result and appends it to the backing file, if any.
    pub fn put(&mut self, algebra: &str, operation: &str, parameters: Value, result: Value) -> io::Result<()> {
        let key = Self::key(algebra, operation, &parameters);
        self.entries.insert(key.clone(), result.clone());
        let Some(path) = &self.path else {
            return Ok(());
        };
        let line = Line {
            version: CACHE_VERSION,
            key,
            algebra: algebra.to_string(),
            operation: operation.to_string(),
            parameters,
            result,
        };
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        let mut text = serde_json::to_string(&line).map_err(io::Error::other)?;
        text.push('\n');
        f.write_all(text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn persists_and_ignores_stale_versions() {
        let dir = std::env::temp_dir().join(format!("liepi-store-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.jsonl");
        let _ = std::fs::remove_file(&path);
        let params = json!({"n": 3});
        {
            let mut s = ResultStore::open(&path).unwrap();
            s.put("abc", "codim", params.clone(), json!({"value": 2})).unwrap();
        }
        let stale = json!({"version": CACHE_VERSION + 1, "key": "k", "algebra": "abc",
            "operation": "codim", "parameters": {}, "result": 0});
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        writeln!(f, "{stale}").unwrap();
        writeln!(f, "not json").unwrap();
        let mut s = ResultStore::open(&path).unwrap();
        assert_eq!(s.len(), 1);
        let k = ResultStore::key("abc", "codim", &params);
        assert_eq!(s.get(&k), Some(json!({"value": 2})));
        assert_eq!(s.get("k"), None);
        assert_eq!((s.hits, s.misses), (1, 1));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn keys_separate_fields() {
        let p = json!({});
        assert_ne!(ResultStore::key("ab", "c", &p), ResultStore::key("a", "bc", &p));
    }
}
