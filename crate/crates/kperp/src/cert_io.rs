//! Certificate serialization: a line-oriented JSON format for scan output.
//!
//! Line 1 is a header (format version, engine, bounds, discriminant range,
//! timestamp); every following line is one certificate. Vectors are written
//! as arrays of half-coordinates on the fixed frames, so files are readable
//! and diffable. Apart from the header timestamp, output bytes depend only
//! on the certificates, never on scheduling.
//!
//! Reading is deliberately literal: stored root vectors are not
//! re-canonicalized, so a tampered sign or kind tag survives parsing and is
//! caught by verification instead of being silently repaired.

use crate::ambient::{AmbientVector, Frame};
use crate::lattice::{DiscClass, LatticeError};
use crate::roots::{Root, RootKind, RootSet};
use crate::search::{EmbeddingCertificate, SearchBounds};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CertIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("unsupported format version {0}")]
    Version(u32),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertFileHeader {
    pub format_version: u32,
    pub engine: String,
    pub bounds: SearchBounds,
    pub d_min: i64,
    pub d_max: i64,
    pub timestamp: String,
}

impl CertFileHeader {
    pub fn new(bounds: SearchBounds, d_min: i64, d_max: i64) -> CertFileHeader {
        CertFileHeader {
            format_version: FORMAT_VERSION,
            engine: format!("kperp {}", env!("CARGO_PKG_VERSION")),
            bounds,
            d_min,
            d_max,
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootRecord {
    /// Half-coordinates on the ten-dimensional search frame.
    pub half: Vec<i64>,
    pub kind: Option<RootKind>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertRecord {
    pub d: i64,
    pub m: i64,
    pub class: DiscClass,
    pub alpha: i64,
    pub beta: i64,
    /// Half-coordinates of v on the eight-dimensional frame (h1, h2, e1..e6).
    pub v: Vec<i64>,
    pub overlattice_p: Option<u8>,
    pub roots: Vec<RootRecord>,
    pub n: usize,
    pub weight: i64,
    pub primitive: bool,
    pub parity_ok: bool,
}

pub fn to_record(cert: &EmbeddingCertificate) -> CertRecord {
    CertRecord {
        d: cert.d,
        m: cert.m,
        class: cert.class,
        alpha: cert.alpha,
        beta: cert.beta,
        v: cert.v.half_coords().to_vec(),
        overlattice_p: cert.overlattice_p,
        roots: cert
            .roots
            .roots()
            .iter()
            .map(|r| RootRecord {
                half: r.vector.half_coords().to_vec(),
                kind: r.kind,
            })
            .collect(),
        n: cert.n,
        weight: cert.weight,
        primitive: cert.primitive,
        parity_ok: cert.parity_ok,
    }
}

pub fn from_record(rec: &CertRecord) -> Result<EmbeddingCertificate, LatticeError> {
    let v = AmbientVector::new(Frame::E8Frame8, rec.v.clone())?;
    let mut roots = Vec::with_capacity(rec.roots.len());
    for r in &rec.roots {
        roots.push(Root {
            vector: AmbientVector::new(Frame::Search10, r.half.clone())?,
            kind: r.kind,
        });
    }
    Ok(EmbeddingCertificate {
        d: rec.d,
        m: rec.m,
        class: rec.class,
        alpha: rec.alpha,
        beta: rec.beta,
        v,
        overlattice_p: rec.overlattice_p,
        roots: RootSet::from_raw(roots),
        n: rec.n,
        weight: rec.weight,
        primitive: rec.primitive,
        parity_ok: rec.parity_ok,
    })
}

pub fn write_certificate_file<W: Write>(
    mut out: W,
    header: &CertFileHeader,
    certs: &[EmbeddingCertificate],
) -> Result<(), CertIoError> {
    let mut line = serde_json::to_string(header).expect("header serializes");
    line.push('\n');
    out.write_all(line.as_bytes())?;
    for cert in certs {
        let mut line = serde_json::to_string(&to_record(cert)).expect("record serializes");
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_certificate_file<R: BufRead>(
    input: R,
) -> Result<(CertFileHeader, Vec<EmbeddingCertificate>), CertIoError> {
    let mut lines = input.lines();
    let first = lines
        .next()
        .ok_or(CertIoError::Malformed {
            line: 1,
            reason: "empty file".into(),
        })??;
    let header: CertFileHeader =
        serde_json::from_str(&first).map_err(|source| CertIoError::Json { line: 1, source })?;
    if header.format_version != FORMAT_VERSION {
        return Err(CertIoError::Version(header.format_version));
    }
    let mut certs = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 2;
        let rec: CertRecord = serde_json::from_str(&line)
            .map_err(|source| CertIoError::Json { line: lineno, source })?;
        let cert = from_record(&rec).map_err(|e| CertIoError::Malformed {
            line: lineno,
            reason: e.to_string(),
        })?;
        certs.push(cert);
    }
    Ok((header, certs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{construct_certificate, exhaustive_scan, verify_certificate, CheckCode};

    #[test]
    fn round_trip_preserves_certificates() {
        let certs = exhaustive_scan(8 * 15, &SearchBounds::default(), &[1, 3, 5, 7]).unwrap();
        assert!(!certs.is_empty());
        let header = CertFileHeader::new(SearchBounds::default(), 120, 120);
        let mut buf = Vec::new();
        write_certificate_file(&mut buf, &header, &certs).unwrap();
        let (h2, back) = read_certificate_file(buf.as_slice()).unwrap();
        assert_eq!(h2.format_version, FORMAT_VERSION);
        assert_eq!(back, certs);
        for c in &back {
            assert!(verify_certificate(c).all_passed());
        }
    }

    #[test]
    fn body_bytes_are_timestamp_independent() {
        let certs = exhaustive_scan(8 * 18 + 2, &SearchBounds::default(), &[1, 3, 5, 7]).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        let h1 = CertFileHeader::new(SearchBounds::default(), 146, 146);
        let h2 = CertFileHeader::new(SearchBounds::default(), 146, 146);
        write_certificate_file(&mut a, &h1, &certs).unwrap();
        write_certificate_file(&mut b, &h2, &certs).unwrap();
        let body = |v: &[u8]| {
            let s = String::from_utf8(v.to_vec()).unwrap();
            s.split_once('\n').unwrap().1.to_string()
        };
        assert_eq!(body(&a), body(&b));
    }

    #[test]
    fn sign_flip_survives_parsing_and_fails_verification() {
        let cert = construct_certificate(808, &[1, 3, 5, 7]).unwrap().unwrap();
        let header = CertFileHeader::new(SearchBounds::default(), 808, 808);
        let mut buf = Vec::new();
        write_certificate_file(&mut buf, &header, std::slice::from_ref(&cert)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        // negate every coordinate of the first stored root: still a root of
        // the same system, but no longer the canonical representative
        let mut lines: Vec<String> = text.lines().map(|s| s.to_string()).collect();
        let mut rec: CertRecord = serde_json::from_str(&lines[1]).unwrap();
        for h in rec.roots[0].half.iter_mut() {
            *h = -*h;
        }
        lines[1] = serde_json::to_string(&rec).unwrap();
        let patched = lines.join("\n");
        let (_, certs) = read_certificate_file(patched.as_bytes()).unwrap();
        assert_eq!(certs.len(), 1);
        let failed = verify_certificate(&certs[0]).failed();
        assert!(failed.contains(&CheckCode::RootRecount), "failed = {:?}", failed);
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(read_certificate_file("".as_bytes()).is_err());
        assert!(read_certificate_file("{\"nope\":1}\n".as_bytes()).is_err());
        let header = CertFileHeader::new(SearchBounds::default(), 0, 0);
        let mut buf = Vec::new();
        write_certificate_file(&mut buf, &header, &[]).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        text.push_str("{\"d\":8}\n");
        assert!(read_certificate_file(text.as_bytes()).is_err());
    }
}
