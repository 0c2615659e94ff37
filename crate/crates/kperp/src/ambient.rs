//! Vectors of the search ambient U + E8(-1) in a fixed rational frame.
//!
//! The frame is the ordered basis (e, f, h1, h2, e1..e6): a hyperbolic pair,
//! the two (-2)-vectors a1 = h1 and a2 = h2 spanning A1(-1)^2, and the
//! checkerboard coordinates of D6(-1). Every vector of U + E8(-1) has
//! coordinates in (1/2)Z here, so coordinates are stored as integers over a
//! global denominator of 2 and all inner products are exact.
//!
//! E8(-1) itself is realized as an overlattice L_p of A1(-1)^2 + D6(-1),
//! glued by b1 = e1 + (h1 + h2)/2 and b2p = (e1 + ... + e6)/2 + h_p/2 for
//! p in {1, 2}; the two choices are the two index-4 even unimodular
//! overlattices. Membership is tested by exact integrality of pairings with
//! the glue vectors, since L_p is self-dual.

use crate::lattice::LatticeError;
use crate::mat::{solve_exact, IMat};
use num::bigint::BigInt;
use num::rational::Ratio;
use num::ToPrimitive;
use std::sync::OnceLock;

/// Coordinate frames vectors can live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    /// Rank 10: (e, f, h1, h2, e1..e6).
    Search10,
    /// Rank 8: (h1, h2, e1..e6), the E8(-1) part only.
    E8Frame8,
}

impl Frame {
    pub fn rank(self) -> usize {
        match self {
            Frame::Search10 => 10,
            Frame::E8Frame8 => 8,
        }
    }

    /// Offset of the h1 slot within the frame.
    fn h_offset(self) -> usize {
        match self {
            Frame::Search10 => 2,
            Frame::E8Frame8 => 0,
        }
    }
}

/// A vector with coordinates stored as integers over denominator 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientVector {
    frame: Frame,
    half: Vec<i64>,
}

impl AmbientVector {
    pub fn new(frame: Frame, half: Vec<i64>) -> Result<Self, LatticeError> {
        if half.len() != frame.rank() {
            return Err(LatticeError::SpanShape { ambient: frame.rank(), got: half.len() });
        }
        Ok(AmbientVector { frame, half })
    }

    pub fn zero(frame: Frame) -> Self {
        AmbientVector { frame, half: vec![0; frame.rank()] }
    }

    /// Build from integer coordinates (each is doubled into the half store).
    pub fn from_integral(frame: Frame, coords: &[i64]) -> Result<Self, LatticeError> {
        let half = coords.iter().map(|&c| 2 * c).collect();
        AmbientVector::new(frame, half)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn half_coords(&self) -> &[i64] {
        &self.half
    }

    /// All coordinates integral (every half-coordinate even)?
    pub fn is_integral(&self) -> bool {
        self.half.iter().all(|h| h % 2 == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.half.iter().all(|&h| h == 0)
    }

    pub fn neg(&self) -> AmbientVector {
        AmbientVector { frame: self.frame, half: self.half.iter().map(|&h| -h).collect() }
    }

    pub fn add(&self, other: &AmbientVector) -> AmbientVector {
        assert_eq!(self.frame, other.frame);
        let half = self.half.iter().zip(&other.half).map(|(a, b)| a + b).collect();
        AmbientVector { frame: self.frame, half }
    }

    /// Lift an E8-frame vector into the search frame with zero U part.
    pub fn lift_to_search(&self) -> AmbientVector {
        match self.frame {
            Frame::Search10 => self.clone(),
            Frame::E8Frame8 => {
                let mut half = vec![0i64, 0];
                half.extend_from_slice(&self.half);
                AmbientVector { frame: Frame::Search10, half }
            }
        }
    }

    /// E8-frame part of a search-frame vector.
    pub fn e8_part(&self) -> AmbientVector {
        match self.frame {
            Frame::E8Frame8 => self.clone(),
            Frame::Search10 => {
                AmbientVector { frame: Frame::E8Frame8, half: self.half[2..].to_vec() }
            }
        }
    }

    /// Coefficients on e and f (must be integral for lattice vectors).
    pub fn u_part_doubled(&self) -> (i64, i64) {
        match self.frame {
            Frame::Search10 => (self.half[0], self.half[1]),
            Frame::E8Frame8 => (0, 0),
        }
    }
}

/// Integer Gram matrix of the frame itself (frame units, not halves).
pub fn frame_gram(frame: Frame) -> IMat {
    let n = frame.rank();
    let h = frame.h_offset();
    let mut g = IMat::zeros(n, n);
    if frame == Frame::Search10 {
        *g.at_mut(0, 1) = BigInt::from(1);
        *g.at_mut(1, 0) = BigInt::from(1);
    }
    *g.at_mut(h, h) = BigInt::from(-2);
    *g.at_mut(h + 1, h + 1) = BigInt::from(-2);
    for i in h + 2..h + 8 {
        *g.at_mut(i, i) = BigInt::from(-1);
    }
    g
}

/// Four times the inner product; exact in i64 at engine scales.
pub fn dot4(v: &AmbientVector, w: &AmbientVector) -> i64 {
    assert_eq!(v.frame, w.frame, "frame mismatch");
    let h = v.frame.h_offset();
    let (a, b) = (&v.half, &w.half);
    let mut acc = 0i64;
    if v.frame == Frame::Search10 {
        acc += a[0] * b[1] + a[1] * b[0];
    }
    acc -= 2 * (a[h] * b[h] + a[h + 1] * b[h + 1]);
    for i in h + 2..h + 8 {
        acc -= a[i] * b[i];
    }
    acc
}

/// Exact inner product as a rational (denominator divides 4).
pub fn inner_product(v: &AmbientVector, w: &AmbientVector) -> Result<Ratio<i64>, LatticeError> {
    if v.frame != w.frame {
        return Err(LatticeError::SpanShape { ambient: v.frame.rank(), got: w.frame.rank() });
    }
    Ok(Ratio::new(dot4(v, w), 4))
}

/// Four times the squared norm.
pub fn norm4(v: &AmbientVector) -> i64 {
    dot4(v, v)
}

// Glue vectors in E8-frame half-coordinates.
fn b1_vec() -> AmbientVector {
    AmbientVector { frame: Frame::E8Frame8, half: vec![1, 1, 2, 0, 0, 0, 0, 0] }
}

fn b2_vec(p: u8) -> AmbientVector {
    let mut half = vec![0i64, 0, 1, 1, 1, 1, 1, 1];
    half[(p - 1) as usize] = 1;
    AmbientVector { frame: Frame::E8Frame8, half }
}

/// The a-vectors of the search frame.
pub fn a_vector(i: u8) -> AmbientVector {
    let mut half = vec![0i64; 10];
    half[1 + i as usize] = 2; // h1 at slot 2, h2 at slot 3
    AmbientVector { frame: Frame::Search10, half }
}

pub fn u_e() -> AmbientVector {
    let mut half = vec![0i64; 10];
    half[0] = 2;
    AmbientVector { frame: Frame::Search10, half }
}

pub fn u_f() -> AmbientVector {
    let mut half = vec![0i64; 10];
    half[1] = 2;
    AmbientVector { frame: Frame::Search10, half }
}

/// Is an E8-frame vector a member of the overlattice L_p? With p = None the
/// vector must lie in both overlattices (the A1^2 + D6 dual-glue situation of
/// integral D6 parts).
pub fn in_e8_overlattice(v: &AmbientVector, p: Option<u8>) -> bool {
    assert_eq!(v.frame, Frame::E8Frame8);
    // e-part must sit in D6(-1)^dual: uniformly integral or uniformly half
    let parity = v.half[2] & 1;
    if v.half[2..].iter().any(|h| h & 1 != parity) {
        return false;
    }
    let pair_ok = |g: &AmbientVector| dot4(v, g) % 4 == 0;
    if !pair_ok(&b1_vec()) {
        return false;
    }
    match p {
        Some(p) => pair_ok(&b2_vec(p)),
        None => pair_ok(&b2_vec(1)) && pair_ok(&b2_vec(2)),
    }
}

/// Generators of U + L_p in search-frame half-units.
fn u_lp_generators(p: u8) -> Vec<Vec<i64>> {
    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut push = |v: Vec<i64>| gens.push(v);
    push(vec![2, 0, 0, 0, 0, 0, 0, 0, 0, 0]); // e
    push(vec![0, 2, 0, 0, 0, 0, 0, 0, 0, 0]); // f
    push(vec![0, 0, 2, 0, 0, 0, 0, 0, 0, 0]); // h1
    push(vec![0, 0, 0, 2, 0, 0, 0, 0, 0, 0]); // h2
    // checkerboard generators of D6
    for i in 0..5 {
        let mut v = vec![0i64; 10];
        v[4 + i] = 2;
        v[5 + i] = -2;
        push(v);
    }
    let mut v = vec![0i64; 10];
    v[8] = 2;
    v[9] = 2;
    push(v); // e5 + e6
    push(vec![0, 0, 1, 1, 2, 0, 0, 0, 0, 0]); // b1
    let mut b2 = vec![0i64; 10];
    b2[2 + (p - 1) as usize] = 1;
    for i in 4..10 {
        b2[i] = 1;
    }
    push(b2); // b2p
    gens
}

fn u_lp_basis_cell(p: u8) -> &'static IMat {
    static CELLS: [OnceLock<IMat>; 2] = [OnceLock::new(), OnceLock::new()];
    CELLS[(p - 1) as usize].get_or_init(|| {
        let gens = IMat::from_rows(&u_lp_generators(p));
        let basis = gens.row_basis();
        assert_eq!(basis.rows(), 10, "U+L_p basis must have rank 10");
        basis
    })
}

/// A Z-basis of U + L_p as rows of search-frame half-units.
pub fn u_lp_basis(p: u8) -> &'static IMat {
    u_lp_basis_cell(p)
}

/// Integer coordinates of a search-frame vector on the given half-unit basis;
/// None when the vector is not in the spanned lattice.
pub fn express_in_basis(v: &AmbientVector, basis: &IMat) -> Option<Vec<BigInt>> {
    assert_eq!(v.frame, Frame::Search10);
    assert_eq!(basis.rows(), 10);
    let bt = basis.transpose();
    let target: Vec<BigInt> = v.half.iter().map(|&h| BigInt::from(h)).collect();
    let sol = solve_exact(&bt, &target)?;
    let mut out = Vec::with_capacity(10);
    for c in sol {
        if c.is_integer() {
            out.push(c.to_integer());
        } else {
            return None;
        }
    }
    Some(out)
}

/// Convenience: i64 coordinates when they fit.
pub fn express_in_basis_i64(v: &AmbientVector, basis: &IMat) -> Option<Vec<i64>> {
    express_in_basis(v, basis)?.iter().map(|c| c.to_i64()).collect()
}
