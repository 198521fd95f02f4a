//! On-disk cache of assembled operator matrices, `<dir>/L<k>_<source>.json`.
//!
//! Entries use the canonical field-element text, so a write followed by a read
//! is entrywise identical. A file is reused only when both the code version and
//! the SHA-256 of the basis text match.

use std::fs;
use std::path::{Path, PathBuf};

use lojacobi::exactla::Matrix;
use lojacobi::harmonic::{BasisFamily, Provenance};
use lojacobi::jacobiop::{self, OperatorMatrix};
use lojacobi::numfield::FieldElem;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "LOJACOBI_CACHE_DIR";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("cache"))
}

pub fn cache_path(dir: &Path, k: u32, source: Provenance) -> PathBuf {
    dir.join(format!("L{k}_{source}.json"))
}

pub fn basis_hash(basis: &BasisFamily) -> String {
    let mut h = Sha256::new();
    h.update(format!("k={}\n", basis.k));
    for (m, f) in basis.labelled() {
        h.update(format!("{m}:{f}\n"));
    }
    format!("{:x}", h.finalize())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheState {
    Hit,
    /// Built and written.
    Stored,
    /// Built; the file could not be written.
    Unwritable,
}

impl CacheState {
    pub fn name(self) -> &'static str {
        match self {
            CacheState::Hit => "hit",
            CacheState::Stored => "stored",
            CacheState::Unwritable => "unwritable",
        }
    }
}

pub fn encode(m: &OperatorMatrix, hash: &str) -> Value {
    let rows: Vec<Vec<String>> = m.entries.to_rows().iter().map(|r| r.iter().map(|e| e.to_canonical()).collect()).collect();
    json!({
        "code_version": CODE_VERSION,
        "basis_hash": hash,
        "k": m.k,
        "source": m.provenance.name(),
        "dimension": m.dimension(),
        "entries": rows,
    })
}

/// `None` when the document is stale, foreign or malformed.
pub fn decode(doc: &Value, k: u32, source: Provenance, hash: &str) -> Option<OperatorMatrix> {
    if doc["code_version"] != CODE_VERSION || doc["basis_hash"] != hash || doc["k"] != k || doc["source"] != source.name() {
        return None;
    }
    let n = doc["dimension"].as_u64()? as usize;
    let rows = doc["entries"].as_array()?;
    if rows.len() != n {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for r in rows {
        let r = r.as_array()?;
        if r.len() != n {
            return None;
        }
        out.push(r.iter().map(|e| e.as_str()?.parse::<FieldElem>().ok()).collect::<Option<Vec<_>>>()?);
    }
    Some(OperatorMatrix { k, provenance: source, entries: Matrix::from_rows(out) })
}

pub fn load_or_build(dir: &Path, k: u32, basis: &BasisFamily) -> Result<(OperatorMatrix, CacheState), jacobiop::JacobiError> {
    let source = basis.provenance;
    let path = cache_path(dir, k, source);
    let hash = basis_hash(basis);
    if let Some(m) = fs::read_to_string(&path).ok().and_then(|s| serde_json::from_str(&s).ok()).and_then(|d| decode(&d, k, source, &hash)) {
        return Ok((m, CacheState::Hit));
    }
    let m = jacobiop::assemble_matrix(k, basis)?;
    let text = serde_json::to_string(&encode(&m, &hash)).expect("json");
    let state = match fs::create_dir_all(dir).and_then(|_| fs::write(&path, text)) {
        Ok(()) => CacheState::Stored,
        Err(_) => CacheState::Unwritable,
    };
    Ok((m, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lojacobi::harmonic;

    #[test]
    fn round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        for (k, p) in [(1, Provenance::Paper), (2, Provenance::Generated)] {
            let b = harmonic::basis(k, p).unwrap();
            let (m, s) = load_or_build(dir.path(), k, &b).unwrap();
            assert_eq!(s, CacheState::Stored);
            let (again, s) = load_or_build(dir.path(), k, &b).unwrap();
            assert_eq!(s, CacheState::Hit);
            assert_eq!(again, m);
        }
    }

    #[test]
    fn stale_entries_are_rejected() {
        let b = harmonic::basis(1, Provenance::Paper).unwrap();
        let m = jacobiop::assemble_matrix(1, &b).unwrap();
        let hash = basis_hash(&b);
        let mut doc = encode(&m, &hash);
        assert!(decode(&doc, 1, Provenance::Paper, &hash).is_some());
        assert!(decode(&doc, 1, Provenance::Paper, "other").is_none());
        assert!(decode(&doc, 1, Provenance::Generated, &hash).is_none());
        doc["code_version"] = json!("0.0.0");
        assert!(decode(&doc, 1, Provenance::Paper, &hash).is_none());
    }

    #[test]
    fn hash_depends_on_basis() {
        let a = basis_hash(&harmonic::basis(2, Provenance::Paper).unwrap());
        let b = basis_hash(&harmonic::basis(2, Provenance::Generated).unwrap());
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }
}
