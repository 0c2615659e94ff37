//! Integral lattices presented by exact Gram matrices, the named lattices the
//! engine works with, and structure-level operations: direct sums, twists,
//! Smith invariants, discriminant groups, signatures, and primitivity of
//! finite-index spans.

use crate::mat::{inertia_symmetric, IMat};
use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate lattice: {0}")]
    Degenerate(String),
    #[error("span rows do not fit the ambient (rank {ambient}, got width {got})")]
    SpanShape { ambient: usize, got: usize },
    #[error("span rows are linearly dependent")]
    DependentRows,
}

/// Discriminant residue class. Nonempty moduli spaces only occur for
/// d = 8m, 8m + 2, 8m + 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiscClass {
    #[serde(rename = "8m")]
    M8,
    #[serde(rename = "8m+2")]
    M8Plus2,
    #[serde(rename = "8m+4")]
    M8Plus4,
}

impl DiscClass {
    pub const ALL: [DiscClass; 3] = [DiscClass::M8, DiscClass::M8Plus2, DiscClass::M8Plus4];

    pub fn offset(self) -> i64 {
        match self {
            DiscClass::M8 => 0,
            DiscClass::M8Plus2 => 2,
            DiscClass::M8Plus4 => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DiscClass::M8 => "8m",
            DiscClass::M8Plus2 => "8m+2",
            DiscClass::M8Plus4 => "8m+4",
        }
    }

    /// Split d into (class, m); None when d is not 0, 2, 4 mod 8 or d <= 0.
    pub fn from_d(d: i64) -> Option<(DiscClass, i64)> {
        if d <= 0 {
            return None;
        }
        let class = match d % 8 {
            0 => DiscClass::M8,
            2 => DiscClass::M8Plus2,
            4 => DiscClass::M8Plus4,
            _ => return None,
        };
        let m = (d - class.offset()) / 8;
        if class == DiscClass::M8 && m < 1 {
            return None;
        }
        Some((class, m))
    }

    pub fn d(self, m: i64) -> i64 {
        8 * m + self.offset()
    }
}

impl std::fmt::Display for DiscClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Tokens accepted by [`make_named_lattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeName {
    /// Hyperbolic plane, Gram [[0,1],[1,0]].
    U,
    /// Root lattice A1 = <2>.
    A1,
    /// E8 with the sign twisted to negative definite.
    E8Neg,
    /// D6 with the sign twisted, presented on the standard root basis.
    D6Neg,
    /// The even unimodular lattice of signature (2, 26): U^2 + E8(-1)^3.
    L226,
    /// U^3 + E8(-1)^2 + <-2>, signature (3, 20).
    M,
    /// U^2 + E8(-1)^2 + <-2>^2, signature (2, 20).
    Lambda,
    /// The rank-3 lattice M_d determined by (class, m).
    Md(DiscClass, i64),
    /// Orthogonal complement of M_d: M_d + U + E8(-1)^2, signature (2, 19).
    KdPerp(DiscClass, i64),
    /// Rational coordinate frame for the search ambient U + E8(-1): ordered
    /// basis (e, f, h1, h2, e1..e6) with Gram U + <-2>^2 + <-1>^6. Not even;
    /// integral vectors of the ambient have half-integer coordinates here.
    SearchAmbient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    name: String,
    gram: IMat,
}

/// Finite abelian group presented by its invariant factors (all > 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub invariants: Vec<BigInt>,
    pub order: BigInt,
}

impl IntLattice {
    pub fn from_gram(name: &str, rows: &[Vec<i64>]) -> Self {
        let gram = IMat::from_rows(rows);
        assert!(gram.is_symmetric(), "Gram matrix must be symmetric");
        IntLattice { name: name.to_string(), gram }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IMat {
        &self.gram
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    /// True when the quadratic form is even: all diagonal entries are even.
    /// (Integrality of the Gram entries is inherent to the representation.)
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| (self.gram.at(i, i) % BigInt::from(2)).is_zero())
    }

    pub fn direct_sum(&self, other: &IntLattice) -> IntLattice {
        IntLattice {
            name: format!("{}+{}", self.name, other.name),
            gram: self.gram.block_diag(&other.gram),
        }
    }

    /// Rescale the form by a nonzero integer.
    pub fn twist(&self, k: i64) -> Result<IntLattice, LatticeError> {
        if k == 0 {
            return Err(LatticeError::InvalidParameter("twist by zero".into()));
        }
        Ok(IntLattice {
            name: if k == -1 { format!("{}(-1)", self.name) } else { format!("{}({})", self.name, k) },
            gram: self.gram.scale(k),
        })
    }

    pub fn smith_invariants(&self) -> Vec<BigInt> {
        self.gram.smith_invariants()
    }

    /// Discriminant group L^dual / L of a nondegenerate lattice.
    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, LatticeError> {
        let inv = self.gram.smith_invariants();
        if inv.iter().any(|x| x.is_zero()) {
            return Err(LatticeError::Degenerate(self.name.clone()));
        }
        let order: BigInt = inv.iter().product();
        let invariants: Vec<BigInt> = inv.into_iter().filter(|x| *x > BigInt::from(1)).collect();
        Ok(DiscriminantGroup { invariants, order })
    }

    /// Exact signature (positive, negative); degenerate lattices are an error.
    pub fn signature(&self) -> Result<(usize, usize), LatticeError> {
        let (p, n, z) = inertia_symmetric(&self.gram);
        if z > 0 {
            return Err(LatticeError::Degenerate(self.name.clone()));
        }
        Ok((p, n))
    }
}

// Printed Gram matrix for E8 (positive form); the engine always twists it.
const E8_GRAM: [[i64; 8]; 8] = [
    [2, 0, -2, -1, 0, 0, 0, 0],
    [0, 2, 0, -1, -1, 0, 0, 0],
    [-2, 0, 4, 0, 0, 0, 0, 1],
    [-1, -1, 0, 2, 0, 0, 0, 0],
    [0, -1, 0, 0, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 1, 0, 0, 0, 0, 2],
];

// D6 on the root basis e1-e2, e2-e3, e3-e4, e4-e5, e5-e6, e5+e6.
const D6_GRAM: [[i64; 6]; 6] = [
    [2, -1, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0],
    [0, -1, 2, -1, 0, 0],
    [0, 0, -1, 2, -1, -1],
    [0, 0, 0, -1, 2, 0],
    [0, 0, 0, -1, 0, 2],
];

fn gram_rows<const N: usize>(g: &[[i64; N]; N]) -> Vec<Vec<i64>> {
    g.iter().map(|r| r.to_vec()).collect()
}

fn u_lattice() -> IntLattice {
    IntLattice::from_gram("U", &[vec![0, 1], vec![1, 0]])
}

fn a1_lattice() -> IntLattice {
    IntLattice::from_gram("A1", &[vec![2]])
}

fn e8_neg() -> IntLattice {
    IntLattice::from_gram("E8", &gram_rows(&E8_GRAM)).twist(-1).unwrap()
}

fn d6_neg() -> IntLattice {
    IntLattice::from_gram("D6", &gram_rows(&D6_GRAM)).twist(-1).unwrap()
}

/// Gram matrix of M_d on the basis (a1, a2, l), exactly as printed.
fn md_gram(class: DiscClass, m: i64) -> Vec<Vec<i64>> {
    match class {
        DiscClass::M8 => vec![vec![-2, 0, 0], vec![0, -2, 0], vec![0, 0, 2 * m]],
        DiscClass::M8Plus2 => vec![vec![-2, 0, 0], vec![0, -2, 1], vec![0, 1, 2 * m]],
        DiscClass::M8Plus4 => vec![vec![-2, 0, 1], vec![0, -2, 1], vec![1, 1, 2 * m]],
    }
}

fn md_lattice(class: DiscClass, m: i64) -> Result<IntLattice, LatticeError> {
    let min_m = if class == DiscClass::M8 { 1 } else { 0 };
    if m < min_m {
        return Err(LatticeError::InvalidParameter(format!(
            "M_d with class {} requires m >= {}, got {}",
            class, min_m, m
        )));
    }
    let name = format!("M{}", class.d(m));
    Ok(IntLattice { name, gram: IMat::from_rows(&md_gram(class, m)) })
}

pub fn make_named_lattice(name: &LatticeName) -> Result<IntLattice, LatticeError> {
    Ok(match name {
        LatticeName::U => u_lattice(),
        LatticeName::A1 => a1_lattice(),
        LatticeName::E8Neg => e8_neg(),
        LatticeName::D6Neg => d6_neg(),
        LatticeName::L226 => {
            let u = u_lattice();
            let e = e8_neg();
            let mut l = u.direct_sum(&u);
            for _ in 0..3 {
                l = l.direct_sum(&e);
            }
            l.name = "L_{2,26}".into();
            l
        }
        LatticeName::M => {
            let u = u_lattice();
            let e = e8_neg();
            let neg2 = IntLattice::from_gram("<-2>", &[vec![-2]]);
            let mut l = u.direct_sum(&u).direct_sum(&u).direct_sum(&e).direct_sum(&e);
            l = l.direct_sum(&neg2);
            l.name = "M".into();
            l
        }
        LatticeName::Lambda => {
            let u = u_lattice();
            let e = e8_neg();
            let neg2 = IntLattice::from_gram("<-2>", &[vec![-2]]);
            let mut l = u.direct_sum(&u).direct_sum(&e).direct_sum(&e);
            l = l.direct_sum(&neg2).direct_sum(&neg2);
            l.name = "Lambda".into();
            l
        }
        LatticeName::Md(class, m) => md_lattice(*class, *m)?,
        LatticeName::KdPerp(class, m) => {
            let md = md_lattice(*class, *m)?;
            let u = u_lattice();
            let e = e8_neg();
            let mut l = md.direct_sum(&u).direct_sum(&e).direct_sum(&e);
            l.name = format!("K{}perp", class.d(*m));
            l
        }
        LatticeName::SearchAmbient => {
            let mut rows = vec![vec![0i64; 10]; 10];
            rows[0][1] = 1;
            rows[1][0] = 1;
            rows[2][2] = -2;
            rows[3][3] = -2;
            for i in 4..10 {
                rows[i][i] = -1;
            }
            IntLattice::from_gram("U+E8(-1) frame", &rows)
        }
    })
}

/// A finite-rank span inside an ambient lattice: rows are the integer
/// coordinates of the spanning vectors on a basis of the ambient.
#[derive(Clone, Debug)]
pub struct SublatticeSpan {
    pub ambient_rank: usize,
    pub rows: IMat,
}

impl SublatticeSpan {
    pub fn new(ambient_rank: usize, rows: IMat) -> Result<Self, LatticeError> {
        if rows.cols() != ambient_rank {
            return Err(LatticeError::SpanShape { ambient: ambient_rank, got: rows.cols() });
        }
        Ok(SublatticeSpan { ambient_rank, rows })
    }
}

/// A span is primitive (a direct summand up to torsion: the quotient is
/// torsion-free) exactly when every Smith invariant of its coordinate matrix
/// is 1. Rows must be linearly independent.
pub fn is_primitive_sublattice(span: &SublatticeSpan) -> Result<bool, LatticeError> {
    let inv = span.rows.smith_invariants();
    if inv.iter().any(|x| x.is_zero()) || inv.len() < span.rows.rows() {
        return Err(LatticeError::DependentRows);
    }
    Ok(inv.iter().all(|x| x.abs() == BigInt::from(1)))
}
