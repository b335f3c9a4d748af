//! On-disk certificate cache.
//!
//! One JSON file per certificate, named by degree and tuple. A cached
//! certificate is only reused when its stored matrix hash matches the hash
//! of the freshly built matrix, so stale entries from an older code path
//! are recomputed instead of trusted.

use std::fs;
use std::path::{Path, PathBuf};

use super::{CertifyError, Status, TupleCertificate};
use crate::macaulay::Tuple;

fn cert_path(dir: &Path, n: u32, tuple: &Tuple) -> PathBuf {
    dir.join(format!("n{}_t{}.json", n, tuple.label()))
}

pub(super) fn load(
    dir: &Path,
    n: u32,
    tuple: &Tuple,
    expected_hash: &str,
) -> Result<Option<TupleCertificate>, CertifyError> {
    let path = cert_path(dir, n, tuple);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let cert: TupleCertificate = match serde_json::from_str(&text) {
        Ok(c) => c,
        // a corrupt entry is recomputed, not fatal
        Err(_) => return Ok(None),
    };
    if cert.degree == n && cert.tuple == tuple.0 && cert.matrix_hash == expected_hash {
        Ok(Some(cert))
    } else {
        Ok(None)
    }
}

pub(super) fn store(dir: &Path, cert: &TupleCertificate) -> Result<(), CertifyError> {
    fs::create_dir_all(dir)?;
    let tuple = Tuple(cert.tuple.clone());
    let path = cert_path(dir, cert.degree, &tuple);
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec_pretty(cert)?)?;
    fs::rename(&tmp, &path)?;
    Ok(())
}

/// A cache directory entry as shown by `cache list`.
#[derive(Clone, Debug)]
pub struct CacheEntry {
    pub file: PathBuf,
    pub degree: u32,
    pub tuple: Vec<u32>,
    pub status: Status,
}

pub fn list_cache(dir: &Path) -> Result<Vec<CacheEntry>, CertifyError> {
    let mut out = Vec::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    for entry in entries {
        let entry = entry?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(cert) = serde_json::from_str::<TupleCertificate>(&text) {
                out.push(CacheEntry {
                    file: path,
                    degree: cert.degree,
                    tuple: cert.tuple,
                    status: cert.status,
                });
            }
        }
    }
    out.sort_by(|a, b| (a.degree, &a.tuple).cmp(&(b.degree, &b.tuple)));
    Ok(out)
}

/// Removes all cached certificates; returns how many files were deleted.
pub fn clear_cache(dir: &Path) -> Result<usize, CertifyError> {
    let mut removed = 0usize;
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e.into()),
    };
    for entry in entries {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("json") {
            fs::remove_file(&path)?;
            removed += 1;
        }
    }
    Ok(removed)
}
