//! On-disk cache of matrices keyed by `(k, tag, p)`, in the `TMX1` format.
//!
//! Files are written to a temporary file in the cache directory and renamed
//! into place, so a crash never leaves a partial file under a final name.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::tropical::tmx::{self, MatrixHeader, MatrixTag};
use crate::tropical::TropicalMatrix;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixKey {
    pub k: u16,
    pub tag: MatrixTag,
    pub p: u32,
}

impl MatrixKey {
    pub fn new(k: u32, tag: MatrixTag, p: u32) -> Result<Self> {
        let k = u16::try_from(k)
            .map_err(|_| Error::input(format!("k = {k} does not fit the cache header")))?;
        Ok(MatrixKey { k, tag, p })
    }

    pub fn file_name(&self) -> String {
        format!("k{}-{}-p{}.tmx", self.k, self.tag.name(), self.p)
    }
}

/// A matrix cache. Without a directory it caches nothing and always
/// computes.
#[derive(Clone, Debug, Default)]
pub struct MatrixStore {
    dir: Option<PathBuf>,
}

/// Whether a lookup was served from disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Cache,
    Computed,
}

impl MatrixStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(MatrixStore { dir: Some(dir) })
    }

    pub fn ephemeral() -> Self {
        MatrixStore { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, key: &MatrixKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    /// The cached matrix, if present. A file that exists but does not
    /// decode, or whose header disagrees with the key, is an error.
    pub fn load(&self, key: &MatrixKey) -> Result<Option<TropicalMatrix>> {
        let Some(path) = self.path(key) else {
            return Ok(None);
        };
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: String| Error::Corrupt {
            path: path.clone(),
            reason,
        };
        let (header, m) = tmx::decode(&bytes).map_err(|e| corrupt(e.to_string()))?;
        if header.k != key.k || header.tag != key.tag || header.p != key.p {
            return Err(corrupt(format!(
                "header says k={} tag={} p={}",
                header.k, header.tag, header.p
            )));
        }
        Ok(Some(m))
    }

    pub fn save(&self, key: &MatrixKey, m: &TropicalMatrix) -> Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else {
            return Ok(());
        };
        let header = MatrixHeader {
            dim: u32::try_from(m.dim())
                .map_err(|_| Error::input("matrix too large for the cache format"))?,
            k: key.k,
            tag: key.tag,
            p: key.p,
        };
        let bytes = tmx::encode(&header, m)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Loads `key`, or computes, stores and returns it.
    pub fn get_or_compute<F>(&self, key: MatrixKey, compute: F) -> Result<(TropicalMatrix, Source)>
    where
        F: FnOnce() -> Result<TropicalMatrix>,
    {
        if let Some(m) = self.load(&key)? {
            log::info!("cache hit: {}", key.file_name());
            return Ok((m, Source::Cache));
        }
        log::info!("computing {}", key.file_name());
        let m = compute()?;
        self.save(&key, &m)?;
        Ok((m, Source::Computed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::INF;

    fn sample() -> TropicalMatrix {
        TropicalMatrix::from_rows(&[vec![0, INF], vec![4, 1]]).unwrap()
    }

    #[test]
    fn compute_once_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let store = MatrixStore::open(dir.path()).unwrap();
        let key = MatrixKey::new(2, MatrixTag::C, 4).unwrap();
        let mut calls = 0;
        let (a, src) = store
            .get_or_compute(key, || {
                calls += 1;
                Ok(sample())
            })
            .unwrap();
        assert_eq!(src, Source::Computed);
        let (b, src) = store
            .get_or_compute(key, || panic!("should hit the cache"))
            .unwrap();
        assert_eq!(src, Source::Cache);
        assert_eq!(a, b);
        assert_eq!(calls, 1);
        // Only the final file remains.
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names, vec![std::ffi::OsString::from("k2-C-p4.tmx")]);
    }

    #[test]
    fn corruption_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let store = MatrixStore::open(dir.path()).unwrap();
        let key = MatrixKey::new(1, MatrixTag::L, 0).unwrap();
        store.save(&key, &sample()).unwrap();
        let path = store.path(&key).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 2);
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(store.load(&key), Err(Error::Corrupt { .. })));

        // A well-formed file under the wrong name.
        let other = MatrixKey::new(1, MatrixTag::T, 0).unwrap();
        store.save(&other, &sample()).unwrap();
        fs::copy(store.path(&other).unwrap(), &path).unwrap();
        assert!(matches!(store.load(&key), Err(Error::Corrupt { .. })));
    }

    #[test]
    fn ephemeral_store_always_computes() {
        let store = MatrixStore::ephemeral();
        let key = MatrixKey::new(1, MatrixTag::L, 0).unwrap();
        let (_, src) = store.get_or_compute(key, || Ok(sample())).unwrap();
        assert_eq!(src, Source::Computed);
        assert_eq!(store.load(&key).unwrap(), None);
    }
}
