//! Discriminant classification: turn search results into the verdict table.
//!
//! The rules are layered. Nonemptiness is decided by congruence alone (with
//! the two degenerate exceptions). A certificate with N in {1, 3, 5} forces
//! general type through the low-weight cusp form it witnesses; N = 7 still
//! pushes the Kodaira dimension to be nonnegative. A short list of small
//! discriminants is unirational for external geometric reasons, and that
//! verdict overrides a fruitless search. Everything else stays Unknown,
//! relative to the recorded bounds.

use crate::lattice::{DiscClass, LatticeError};
use crate::search::{exhaustive_scan, find_certificate, EmbeddingCertificate, SearchBounds};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// No special fourfolds: d fails the congruence test, or d is 2 or 8.
    Empty,
    GeneralType,
    /// Kodaira dimension >= 0 certified, general type not decided here.
    KodairaNonNegative,
    /// Unirational, hence Kodaira dimension -infinity.
    NegativeUnirational,
    Unknown,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Empty => "empty",
            Verdict::GeneralType => "general type",
            Verdict::KodairaNonNegative => "kappa >= 0",
            Verdict::NegativeUnirational => "unirational",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Where a verdict comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Decided by this engine's search (certificate or bounded exhaustion).
    Search,
    /// Unirationality via the degree-2 K3 moduli description.
    ExternalK3,
    /// Unirationality via the cubic fourfold locus.
    ExternalCubic,
    /// Congruence-level nonemptiness rule.
    NonemptinessRule,
}

/// Discriminants unirational for external reasons; 44 comes from the cubic
/// fourfold side, the rest from degree-2 K3 geometry.
pub const UNIRATIONAL_DISCRIMINANTS: [i64; 6] = [4, 10, 20, 26, 34, 44];

/// One row of the classification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantRecord {
    pub d: i64,
    pub class: Option<DiscClass>,
    pub nonempty: bool,
    /// Irreducible components of the moduli space: 2 for nonempty d = 2
    /// mod 8, else 1.
    pub components: u8,
    pub verdict: Verdict,
    pub witness: Option<EmbeddingCertificate>,
    pub provenance: Provenance,
    /// Bounds the verdict is relative to; recorded when the search ran.
    pub bounds: Option<SearchBounds>,
    pub annotation: Option<String>,
}

/// Classify one discriminant given the certificates a search produced for
/// it. Certificates for other discriminants are ignored defensively.
pub fn classify_discriminant(
    d: i64,
    certs: &[EmbeddingCertificate],
    bounds: &SearchBounds,
) -> Result<DiscriminantRecord, LatticeError> {
    if d < 1 {
        return Err(LatticeError::InvalidParameter(format!(
            "discriminant must be positive, got {}",
            d
        )));
    }
    let class = DiscClass::from_d(d).map(|(c, _)| c);
    let nonempty = class.is_some() && d != 2 && d != 8;
    let components = if nonempty && class == Some(DiscClass::M8Plus2) {
        2
    } else {
        1
    };
    let annotation = if d == 10 {
        Some("only one of the two irreducible components is in the period image".to_string())
    } else {
        None
    };

    if !nonempty {
        return Ok(DiscriminantRecord {
            d,
            class,
            nonempty,
            components,
            verdict: Verdict::Empty,
            witness: None,
            provenance: Provenance::NonemptinessRule,
            bounds: None,
            annotation,
        });
    }

    let mine: Vec<&EmbeddingCertificate> = certs.iter().filter(|c| c.d == d).collect();
    if let Some(w) = mine.iter().find(|c| [1, 3, 5].contains(&c.n)) {
        return Ok(DiscriminantRecord {
            d,
            class,
            nonempty,
            components,
            verdict: Verdict::GeneralType,
            witness: Some((*w).clone()),
            provenance: Provenance::Search,
            bounds: Some(*bounds),
            annotation,
        });
    }
    if let Some(w) = mine.iter().find(|c| c.n == 7) {
        return Ok(DiscriminantRecord {
            d,
            class,
            nonempty,
            components,
            verdict: Verdict::KodairaNonNegative,
            witness: Some((*w).clone()),
            provenance: Provenance::Search,
            bounds: Some(*bounds),
            annotation,
        });
    }
    if UNIRATIONAL_DISCRIMINANTS.contains(&d) {
        return Ok(DiscriminantRecord {
            d,
            class,
            nonempty,
            components,
            verdict: Verdict::NegativeUnirational,
            witness: None,
            provenance: if d == 44 {
                Provenance::ExternalCubic
            } else {
                Provenance::ExternalK3
            },
            bounds: Some(*bounds),
            annotation,
        });
    }
    Ok(DiscriminantRecord {
        d,
        class,
        nonempty,
        components,
        verdict: Verdict::Unknown,
        witness: None,
        provenance: Provenance::Search,
        bounds: Some(*bounds),
        annotation,
    })
}

/// Build the table for every admissible d <= d_max. The search runs even
/// where an external verdict will override it, so Unknown rows are always
/// honest relative to the bounds. A general-type witness short-circuits the
/// rest of that discriminant's scan; this can never change a verdict, only
/// skip redundant work.
pub fn build_table(
    d_max: i64,
    bounds: &SearchBounds,
) -> Result<Vec<DiscriminantRecord>, LatticeError> {
    if d_max < 4 {
        return Err(LatticeError::InvalidParameter(format!(
            "table needs d_max >= 4, got {}",
            d_max
        )));
    }
    let mut rows = Vec::new();
    for d in 1..=d_max {
        if DiscClass::from_d(d).is_none() {
            continue;
        }
        let record = if let Some(cert) = find_certificate(d, bounds, &[1, 3, 5])? {
            classify_discriminant(d, &[cert], bounds)?
        } else {
            let sevens = exhaustive_scan(d, bounds, &[7])?;
            classify_discriminant(d, &sevens, bounds)?
        };
        rows.push(record);
    }
    Ok(rows)
}

/// Classify with certificates supplied from a file instead of a fresh scan.
/// Only certificates that pass full verification count.
pub fn classify_with_certificates(
    d_max: i64,
    certs: &[EmbeddingCertificate],
    bounds: &SearchBounds,
) -> Result<Vec<DiscriminantRecord>, LatticeError> {
    if d_max < 4 {
        return Err(LatticeError::InvalidParameter(format!(
            "table needs d_max >= 4, got {}",
            d_max
        )));
    }
    let verified: Vec<EmbeddingCertificate> = certs
        .iter()
        .filter(|c| crate::search::verify_certificate(c).all_passed())
        .cloned()
        .collect();
    let mut rows = Vec::new();
    for d in 1..=d_max {
        if DiscClass::from_d(d).is_none() {
            continue;
        }
        rows.push(classify_discriminant(d, &verified, bounds)?);
    }
    Ok(rows)
}
