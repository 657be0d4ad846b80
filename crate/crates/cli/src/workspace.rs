//! Content-addressed artifact cache under a workspace root.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct Workspace {
    root: Option<PathBuf>,
}

/// Hex SHA-256 of the concatenated parts, each length-prefixed.
pub fn content_key(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

impl Workspace {
    pub fn new(root: Option<PathBuf>) -> Self {
        Workspace { root }
    }

    fn path(&self, kind: &str, key: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(kind).join(format!("{key}.json")))
    }

    pub fn get(&self, kind: &str, key: &str) -> Option<String> {
        fs::read_to_string(self.path(kind, key)?).ok()
    }

    /// Stores an artifact; returns its path when a root is configured.
    pub fn put(&self, kind: &str, key: &str, contents: &str) -> Result<Option<PathBuf>> {
        let Some(p) = self.path(kind, key) else {
            return Ok(None);
        };
        write_atomic(&p, contents)?;
        Ok(Some(p))
    }

    /// Resolves an algebra argument: a file, or the key of a stored artifact.
    pub fn resolve_algebra(&self, arg: &str) -> Option<PathBuf> {
        let p = PathBuf::from(arg);
        if p.exists() {
            return Some(p);
        }
        self.path("algebras", arg).filter(|p| p.exists())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_separate_parts() {
        assert_ne!(content_key(&[b"ab", b"c"]), content_key(&[b"a", b"bc"]));
        assert_eq!(content_key(&[b"x"]).len(), 64);
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::new(Some(dir.path().to_path_buf()));
        ws.put("certificates", "k", "{}\n").unwrap();
        assert_eq!(ws.get("certificates", "k").as_deref(), Some("{}\n"));
        assert!(Workspace::new(None).put("certificates", "k", "{}").unwrap().is_none());
    }
}
