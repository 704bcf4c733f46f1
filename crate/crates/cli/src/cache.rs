//! On-disk dimension cache, addressed by the SHA-256 of the cache key.
//!
//! Entries are written to a temporary file and renamed into place under an
//! exclusive advisory lock, so concurrent processes never see a torn entry.
//! An entry that fails to parse or whose stored key differs from the
//! requested one is deleted. Any I/O failure turns the cache off for the
//! rest of the process with a single warning.

use std::fs::{self, File, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use jetcalc_core::groebner::{DimensionCache, DimensionResult};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    result: DimensionResult,
}

/// A stored value that disagreed with recomputation under `--verify`.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub hash: String,
    pub stored: DimensionResult,
    pub computed: DimensionResult,
}

pub struct FileCache {
    dir: PathBuf,
    verify: bool,
    disabled: AtomicBool,
    hits: AtomicU64,
    pending: Mutex<Vec<(String, DimensionResult)>>,
    mismatches: Mutex<Vec<Mismatch>>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl FileCache {
    /// With `verify`, lookups always miss and each stored value is compared
    /// with the recomputed one when it is written back.
    pub fn open(dir: &Path, verify: bool) -> Self {
        let cache = FileCache {
            dir: dir.to_path_buf(),
            verify,
            disabled: AtomicBool::new(false),
            hits: AtomicU64::new(0),
            pending: Mutex::new(Vec::new()),
            mismatches: Mutex::new(Vec::new()),
        };
        if let Err(e) = fs::create_dir_all(dir) {
            cache.disable(&e);
        }
        cache
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn mismatches(&self) -> Vec<Mismatch> {
        self.mismatches.lock().unwrap().clone()
    }

    fn disable(&self, e: &dyn std::fmt::Display) {
        if !self.disabled.swap(true, Ordering::SeqCst) {
            eprintln!("warning: cache at {} disabled: {e}", self.dir.display());
        }
    }

    fn entry_path(&self, hash: &str) -> PathBuf {
        self.dir.join(&hash[..2]).join(format!("{hash}.json"))
    }

    fn lock(&self, exclusive: bool) -> std::io::Result<File> {
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join(".lock"))?;
        if exclusive {
            f.lock()?;
        } else {
            f.lock_shared()?;
        }
        Ok(f)
    }

    fn read(&self, key: &str, hash: &str) -> std::io::Result<Option<DimensionResult>> {
        let path = self.entry_path(hash);
        let text = {
            let _guard = self.lock(false)?;
            match fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
                Err(e) if e.kind() == ErrorKind::InvalidData => String::new(),
                Err(e) => return Err(e),
            }
        };
        match serde_json::from_str::<Entry>(&text) {
            Ok(entry) if entry.key == key => Ok(Some(entry.result)),
            _ => {
                eprintln!("warning: evicting corrupt cache entry {}", path.display());
                let _guard = self.lock(true)?;
                match fs::remove_file(&path) {
                    Err(e) if e.kind() != ErrorKind::NotFound => Err(e),
                    _ => Ok(None),
                }
            }
        }
    }

    fn write(&self, key: &str, hash: &str, value: &DimensionResult) -> std::io::Result<()> {
        let path = self.entry_path(hash);
        let parent = path.parent().expect("entry paths have a parent");
        fs::create_dir_all(parent)?;
        let body = serde_json::to_vec(&Entry {
            key: key.to_string(),
            result: *value,
        })?;
        let tmp = parent.join(format!(".{hash}.{}.tmp", std::process::id()));
        let _guard = self.lock(true)?;
        let mut f = File::create(&tmp)?;
        f.write_all(&body)?;
        f.sync_all()?;
        fs::rename(&tmp, &path)
    }
}

impl DimensionCache for FileCache {
    fn get(&self, key: &str) -> Option<DimensionResult> {
        if self.disabled.load(Ordering::SeqCst) {
            return None;
        }
        let hash = sha256_hex(key.as_bytes());
        match self.read(key, &hash) {
            Ok(Some(v)) if self.verify => {
                self.pending.lock().unwrap().push((hash, v));
                None
            }
            Ok(Some(v)) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(v)
            }
            Ok(None) => None,
            Err(e) => {
                self.disable(&e);
                None
            }
        }
    }

    fn put(&self, key: &str, value: &DimensionResult) {
        if self.disabled.load(Ordering::SeqCst) {
            return;
        }
        let hash = sha256_hex(key.as_bytes());
        if self.verify {
            let mut pending = self.pending.lock().unwrap();
            if let Some(pos) = pending.iter().position(|(h, _)| *h == hash) {
                let (hash, stored) = pending.swap_remove(pos);
                if stored != *value {
                    self.mismatches.lock().unwrap().push(Mismatch {
                        hash,
                        stored,
                        computed: *value,
                    });
                }
                return;
            }
        }
        if let Err(e) = self.write(key, &hash, value) {
            self.disable(&e);
        }
    }
}
