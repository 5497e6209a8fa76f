//! On-disk memo of [`PhiProfile`] records, one JSON file per class.
//!
//! Records are written to a temporary file in the cache directory and then
//! renamed into place, so concurrent readers never see a partial file.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::lattice::{phi_profile, PhiProfile};
use crate::lens::CanonicalLens;

/// Environment variable that overrides any configured cache directory.
pub const CACHE_ENV: &str = "LENSPEC_CACHE";

#[derive(Clone, Debug)]
pub struct ProfileCache {
    dir: Option<PathBuf>,
}

impl ProfileCache {
    /// No persistence; every lookup recomputes.
    pub fn disabled() -> Self {
        ProfileCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ProfileCache { dir: Some(dir) })
    }

    /// `$LENSPEC_CACHE` if set and nonempty, else `configured`, else disabled.
    pub fn from_env_or(configured: Option<&Path>) -> io::Result<Self> {
        match std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
            Some(dir) => Self::at(PathBuf::from(dir)),
            None => match configured {
                Some(dir) => Self::at(dir),
                None => Ok(Self::disabled()),
            },
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Stable file name for a class, e.g. `q11_1-2-4.json`.
    pub fn key(lens: &CanonicalLens) -> String {
        let s: Vec<String> = lens.s().iter().map(u64::to_string).collect();
        format!("q{}_{}.json", lens.q(), s.join("-"))
    }

    fn path(&self, lens: &CanonicalLens) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(Self::key(lens)))
    }

    /// A stored record, if present, readable and consistent with `lens`.
    pub fn load(&self, lens: &CanonicalLens) -> Option<PhiProfile> {
        let text = fs::read_to_string(self.path(lens)?).ok()?;
        let profile: PhiProfile = serde_json::from_str(&text).ok()?;
        (profile.q() == lens.q() && profile.n() == lens.n()).then_some(profile)
    }

    pub fn store(&self, lens: &CanonicalLens, profile: &PhiProfile) -> io::Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(lens)) else {
            return Ok(());
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, profile)?;
        tmp.write_all(b"\n")?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached profile, computing and storing it on a miss. A failed write
    /// is reported on stderr and does not affect the result.
    pub fn profile(&self, lens: &CanonicalLens) -> PhiProfile {
        if let Some(p) = self.load(lens) {
            return p;
        }
        let p = phi_profile(lens.params());
        if let Err(e) = self.store(lens, &p) {
            eprintln!("warning: cache write for {lens} failed: {e}");
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::LensParams;

    #[test]
    fn hit_equals_recomputation() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ProfileCache::at(dir.path()).unwrap();
        let lens = LensParams::new(11, &[3, 4, 5]).unwrap().canonical();
        assert!(cache.load(&lens).is_none());
        let first = cache.profile(&lens);
        let file = dir.path().join("q11_1-2-4.json");
        let bytes = fs::read(&file).unwrap();
        assert_eq!(cache.load(&lens).unwrap(), first);
        assert_eq!(cache.profile(&lens), phi_profile(lens.params()));
        cache.store(&lens, &first).unwrap();
        assert_eq!(fs::read(&file).unwrap(), bytes);
    }

    #[test]
    fn corrupt_record_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ProfileCache::at(dir.path()).unwrap();
        let lens = LensParams::new(7, &[1, 2]).unwrap().canonical();
        fs::write(dir.path().join(ProfileCache::key(&lens)), "{not json").unwrap();
        assert_eq!(cache.profile(&lens), phi_profile(lens.params()));
        assert!(cache.load(&lens).is_some());
    }
}
