//! DTM signature serialization: a one-column CSV with header `dtm_sq` plus
//! a JSON metadata sidecar `{m, n, source_id}`.

use super::{DtmSignature, Mass};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize)]
struct SignatureMeta {
    m: f64,
    n: usize,
    source_id: Option<String>,
}

/// Sidecar path: the signature path with its extension replaced by `json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Write `sig` to `path` (CSV) and its metadata sidecar next to it.
pub fn write_signature_csv(sig: &DtmSignature, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut csv = String::from("dtm_sq\n");
    for v in &sig.values {
        let _ = writeln!(csv, "{v}");
    }
    crate::write_atomic(path, csv.as_bytes())?;
    let meta = SignatureMeta { m: sig.m.value(), n: sig.n, source_id: sig.source_id.clone() };
    let json = serde_json::to_string_pretty(&meta).expect("serializable");
    crate::write_atomic(&sidecar_path(path), json.as_bytes())
}

/// Read a signature CSV and its sidecar back.
pub fn read_signature_csv(path: impl AsRef<Path>) -> Result<DtmSignature> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || (lineno == 0 && line == "dtm_sq") {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("non-numeric signature value '{line}'"),
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let meta_text = std::fs::read_to_string(sidecar_path(path))?;
    let meta: SignatureMeta = serde_json::from_str(&meta_text).map_err(|e| Error::Parse {
        line: 0,
        message: format!("bad signature sidecar: {e}"),
    })?;
    if meta.n != values.len() {
        return Err(Error::Parse {
            line: 0,
            message: format!("sidecar n = {} but CSV has {} values", meta.n, values.len()),
        });
    }
    Ok(DtmSignature { values, m: Mass::new(meta.m)?, n: meta.n, source_id: meta.source_id })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let dir = std::env::temp_dir().join("dtm_core_sig_io");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sig.csv");
        let sig = DtmSignature {
            values: vec![0.5, 0.25, 1.0e-9],
            m: Mass::new(0.5).unwrap(),
            n: 3,
            source_id: Some("demo".into()),
        };
        write_signature_csv(&sig, &path).unwrap();
        let back = read_signature_csv(&path).unwrap();
        assert_eq!(back.values, sig.values);
        assert_eq!(back.n, 3);
        assert_eq!(back.source_id.as_deref(), Some("demo"));
    }
}
