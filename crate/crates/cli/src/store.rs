//! On-disk cache: one file per entry, named by a hash of the schema version,
//! the group spec and the entry key.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use pdstring::algebra::Store;
use pdstring::builtin::GroupSpec;

/// Bumping this orphans every existing entry.
pub const SCHEMA_VERSION: &str = "pdstring-cache-v1";

#[derive(Debug)]
pub struct FileStore {
    dir: PathBuf,
    namespace: String,
    temp_counter: AtomicU64,
}

impl FileStore {
    pub fn new(dir: &Path, spec: &GroupSpec) -> Self {
        Self::with_schema(dir, spec, SCHEMA_VERSION)
    }

    pub fn with_schema(dir: &Path, spec: &GroupSpec, schema: &str) -> Self {
        let spec = serde_json::to_string(spec).expect("group specs serialize");
        FileStore { dir: dir.to_path_buf(), namespace: format!("{schema}\n{spec}\n"), temp_counter: AtomicU64::new(0) }
    }

    pub fn path(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(format!("{}{key}", self.namespace).as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }

    fn write(&self, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let n = self.temp_counter.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("tmp.{}.{n}", std::process::id()));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, path).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

impl Store for FileStore {
    fn load(&self, key: &str) -> Option<Vec<u8>> {
        fs::read(self.path(key)).ok()
    }

    /// Write failures only cost a recomputation later.
    fn save(&self, key: &str, bytes: &[u8]) {
        let path = self.path(key);
        if let Err(e) = self.write(&path, bytes) {
            eprintln!("warning: cache write failed for {}: {e}", path.display());
        }
    }

    fn corrupt(&self, key: &str) {
        let path = self.path(key);
        eprintln!("warning: ignoring corrupt cache entry {} ({key}); recomputing", path.display());
        let _ = fs::remove_file(path);
    }
}
