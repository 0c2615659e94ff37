//! Root counting for embedded cells.
//!
//! A cell is the data (alpha, beta, v) describing the primitive vector
//! l = alpha e + beta f + v of U + L_p with l^2 = 2m. The root system that
//! controls the ramification weight is
//!
//!   R_l = { r in U + L_p : r^2 = -2, (r, a1) = (r, a2) = (r, l) = 0 },
//!
//! which is finite because the orthogonal complement of <a1, a2, l> is
//! negative definite whenever l^2 > 0. N is the number of +- pairs in R_l.
//!
//! Two counters are provided. The oracle enumerates R_l from scratch in the
//! orthogonal kernel and is correct for every cell. The fast counter only
//! answers inside a regime where all roots provably lie in the D6 part and
//! counting reduces to 60 exact pairings; outside that regime it declines.

use crate::ambient::{
    a_vector, dot4, frame_gram, in_e8_overlattice, norm4, u_lp_basis, AmbientVector, Frame,
};
use crate::lattice::LatticeError;
use crate::mat::IMat;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Taxonomy of roots by their hyperbolic coordinates (x, y) in r = xe + yf + w.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    /// x = y = 0: a D6 root orthogonal to v.
    TypeI,
    /// x != 0, y = 0: x = -(w, v) / beta.
    TypeII,
    /// x = 0, y != 0: y = -(w, v) / alpha.
    TypeIII,
}

/// One representative of a +- root pair, tagged with its kind when the
/// hyperbolic shape determines one (the degenerate pair +-(e - f) of the
/// alpha = beta locus has no kind).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub vector: AmbientVector,
    pub kind: Option<RootKind>,
}

/// The full root system of a cell, stored as canonical pair representatives.
/// The representative of {r, -r} is the lexicographically larger half-vector,
/// and representatives are sorted; two RootSets are equal iff the systems are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    /// Canonicalize an arbitrary collection of roots (closed under negation
    /// or not) into sorted pair representatives.
    pub fn from_vectors(vectors: Vec<AmbientVector>) -> RootSet {
        let mut reps: Vec<AmbientVector> = vectors
            .into_iter()
            .map(|r| {
                let n = r.neg();
                if n > r {
                    n
                } else {
                    r
                }
            })
            .collect();
        reps.sort();
        reps.dedup();
        let roots = reps
            .into_iter()
            .map(|vector| {
                let kind = kind_from_shape(&vector);
                Root { vector, kind }
            })
            .collect();
        RootSet { roots }
    }

    /// Rebuild a stored root system verbatim: order, signs, and kind tags
    /// are kept as given. Deliberately no canonicalization, so that
    /// verification compares against exactly what a file claims.
    pub fn from_raw(roots: Vec<Root>) -> RootSet {
        RootSet { roots }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// N: the number of +- pairs.
    pub fn n_pairs(&self) -> usize {
        self.roots.len()
    }

    /// Is a stored vector the canonical representative of its pair?
    pub fn is_canonical_rep(v: &AmbientVector) -> bool {
        *v >= v.neg()
    }
}

/// Kind by hyperbolic shape alone; None for mixed shapes.
fn kind_from_shape(r: &AmbientVector) -> Option<RootKind> {
    let (he, hf) = r.u_part_doubled();
    match (he != 0, hf != 0) {
        (false, false) => Some(RootKind::TypeI),
        (true, false) => Some(RootKind::TypeII),
        (false, true) => Some(RootKind::TypeIII),
        (true, true) => None,
    }
}

/// The 60 roots of the D6 part, in E8-frame half-coordinates.
pub fn d6_root_list() -> Vec<AmbientVector> {
    let mut out = Vec::with_capacity(60);
    for i in 0..6 {
        for j in i + 1..6 {
            for (si, sj) in [(2i64, 2i64), (2, -2), (-2, 2), (-2, -2)] {
                let mut half = vec![0i64; 8];
                half[2 + i] = si;
                half[2 + j] = sj;
                out.push(AmbientVector::new(Frame::E8Frame8, half).expect("shape"));
            }
        }
    }
    out
}

/// The hyperbolic part l = alpha e + beta f + v as a search-frame vector.
pub fn assemble_l(alpha: i64, beta: i64, v: &AmbientVector) -> AmbientVector {
    assert_eq!(v.frame(), Frame::E8Frame8);
    let mut half = vec![2 * alpha, 2 * beta];
    half.extend_from_slice(v.half_coords());
    AmbientVector::new(Frame::Search10, half).expect("shape")
}

/// m recovered from l^2 = 2m; error unless l^2 is a positive even integer.
pub fn cell_m(alpha: i64, beta: i64, v: &AmbientVector) -> Result<i64, LatticeError> {
    let l = assemble_l(alpha, beta, v);
    let n4 = norm4(&l);
    if n4 <= 0 {
        return Err(LatticeError::InvalidParameter(format!(
            "l^2 = {}/4 is not positive",
            n4
        )));
    }
    if n4 % 8 != 0 {
        return Err(LatticeError::InvalidParameter(format!(
            "l^2 = {}/4 is not an even integer",
            n4
        )));
    }
    Ok(n4 / 8)
}

/// Fast counter. Inside the gate
///
///   alpha != beta, alpha^2 > m, beta^2 > m, 4 alpha beta < 5m
///
/// every root of R_l is a D6 root orthogonal to v: the Cauchy-Schwarz bound
/// |(w, v)|^2 <= 4(alpha beta - m) < m kills Type II and III, the norm bound
/// on the D6 part kills mixed hyperbolic shapes, and alpha != beta kills the
/// degenerate pair. Outside the gate the counter declines with None.
pub fn count_roots_fast(alpha: i64, beta: i64, v: &AmbientVector, p: Option<u8>) -> Option<usize> {
    let m = cell_m(alpha, beta, v).ok()?;
    if !membership_ok(v, p) {
        return None;
    }
    if alpha == beta || alpha * alpha <= m || beta * beta <= m || 4 * alpha * beta >= 5 * m {
        return None;
    }
    let perp = d6_root_list()
        .iter()
        .filter(|w| dot4(w, v) == 0)
        .count();
    debug_assert_eq!(perp % 2, 0);
    Some(perp / 2)
}

fn membership_ok(v: &AmbientVector, p: Option<u8>) -> bool {
    in_e8_overlattice(v, p)
}

/// Oracle counter: enumerate R_l exactly.
///
/// The kernel of the pairing with (a1, a2, l) inside U + L_p is a saturated
/// rank 7 sublattice; its Gram matrix is negated and all vectors of norm 2
/// are enumerated with an exact rational LDL^T recursion. No floating point
/// is involved anywhere.
pub fn count_roots_oracle(
    alpha: i64,
    beta: i64,
    v: &AmbientVector,
    p: Option<u8>,
) -> Result<RootSet, LatticeError> {
    if v.frame() != Frame::E8Frame8 {
        return Err(LatticeError::InvalidParameter(
            "v must be an E8-frame vector".into(),
        ));
    }
    if !membership_ok(v, p) {
        return Err(LatticeError::InvalidParameter(format!(
            "v is not a member of the overlattice (p = {:?})",
            p
        )));
    }
    let _ = cell_m(alpha, beta, v)?;
    let l = assemble_l(alpha, beta, v);
    let basis = u_lp_basis(p.unwrap_or(1));

    // Pairings of the basis vectors with the three constraints.
    let targets = [a_vector(1), a_vector(2), l.clone()];
    let mut cons = IMat::zeros(10, 3);
    for i in 0..10 {
        let row: Vec<i64> = basis
            .row(i)
            .iter()
            .map(|x| x.to_i64().expect("basis entry"))
            .collect();
        let bi = AmbientVector::new(Frame::Search10, row).expect("shape");
        for (j, t) in targets.iter().enumerate() {
            *cons.at_mut(i, j) = BigInt::from(dot4(&bi, t));
        }
    }
    let kernel = cons.left_kernel();
    if kernel.rows() != 7 {
        return Err(LatticeError::Degenerate(format!(
            "orthogonal kernel has rank {}, expected 7",
            kernel.rows()
        )));
    }

    // Gram of the kernel basis: K (B G B^T / 4) K^T, integral because the
    // ambient lattice is integral.
    let bgb = basis.mul(&frame_gram(Frame::Search10)).mul(&basis.transpose());
    let mut gb = IMat::zeros(10, 10);
    for i in 0..10 {
        for j in 0..10 {
            let q = bgb.at(i, j);
            assert!((q % 4u8).is_zero(), "ambient Gram must be integral");
            *gb.at_mut(i, j) = q / 4;
        }
    }
    let gk = kernel.mul(&gb).mul(&kernel.transpose());
    let mut neg = IMat::zeros(7, 7);
    for i in 0..7 {
        for j in 0..7 {
            *neg.at_mut(i, j) = -gk.at(i, j);
        }
    }

    let sols = norm_two_vectors(&neg)?;
    debug_assert_eq!(sols.len() % 2, 0);

    // Map kernel coordinates back to search-frame half-coordinates.
    let kb = kernel.mul(basis);
    let mut vectors = Vec::with_capacity(sols.len());
    for x in &sols {
        let mut half = vec![0i64; 10];
        for (k, &xk) in x.iter().enumerate() {
            if xk == 0 {
                continue;
            }
            for (slot, h) in half.iter_mut().enumerate() {
                let c = kb.at(k, slot) * BigInt::from(xk);
                *h += c.to_i64().expect("root coordinate fits i64");
            }
        }
        vectors.push(AmbientVector::new(Frame::Search10, half).expect("shape"));
    }
    let set = RootSet::from_vectors(vectors);
    debug_assert_eq!(2 * set.n_pairs(), sols.len());
    Ok(set)
}

/// Complete root system for any cell in the taxonomy window m < alpha beta
/// < 2m, diagonal cells included. In the window the D6-part norm bound
/// S <= 2 alpha beta / m < 4 leaves only S = 0 (the degenerate pair, present
/// exactly when alpha = beta) and S = 2 (a D6 root w, extended by zero or by
/// the unique hyperbolic coefficient -(w, v)/beta or -(w, v)/alpha when the
/// division is exact). Returns None outside the window; the caller falls
/// back to the oracle.
pub fn count_roots_window(
    alpha: i64,
    beta: i64,
    v: &AmbientVector,
    p: Option<u8>,
) -> Option<RootSet> {
    let m = cell_m(alpha, beta, v).ok()?;
    if !membership_ok(v, p) {
        return None;
    }
    let ab = alpha * beta;
    if ab <= m || ab >= 2 * m {
        return None;
    }
    let mut vectors = Vec::new();
    if alpha == beta {
        let mut half = vec![2i64, -2];
        half.extend_from_slice(&[0; 8]);
        vectors.push(AmbientVector::new(Frame::Search10, half).expect("shape"));
    }
    for w in d6_root_list() {
        let t4 = dot4(&w, v);
        debug_assert_eq!(t4 % 4, 0, "uniform parity makes (w, v) integral");
        let t = t4 / 4;
        if t == 0 {
            vectors.push(w.lift_to_search());
            continue;
        }
        if t % beta == 0 {
            let mut half = vec![2 * (-t / beta), 0];
            half.extend_from_slice(w.half_coords());
            vectors.push(AmbientVector::new(Frame::Search10, half).expect("shape"));
        }
        if t % alpha == 0 {
            let mut half = vec![0, 2 * (-t / alpha)];
            half.extend_from_slice(w.half_coords());
            vectors.push(AmbientVector::new(Frame::Search10, half).expect("shape"));
        }
    }
    Some(RootSet::from_vectors(vectors))
}

/// Classify a root of R_l under the taxonomy hypotheses alpha != beta and
/// m < alpha beta < 2m. Outside the hypotheses classification is refused;
/// inside them a mixed hyperbolic shape contradicts the taxonomy and is
/// reported as an error rather than silently tagged.
pub fn classify_root(
    r: &AmbientVector,
    alpha: i64,
    beta: i64,
    v: &AmbientVector,
) -> Result<RootKind, LatticeError> {
    let m = cell_m(alpha, beta, v)?;
    if alpha == beta {
        return Err(LatticeError::InvalidParameter(
            "taxonomy needs alpha != beta".into(),
        ));
    }
    let ab = alpha * beta;
    if ab <= m || ab >= 2 * m {
        return Err(LatticeError::InvalidParameter(format!(
            "taxonomy needs m < alpha beta < 2m (alpha beta = {}, m = {})",
            ab, m
        )));
    }
    if r.frame() != Frame::Search10 || norm4(r) != -8 {
        return Err(LatticeError::InvalidParameter("not a (-2)-vector".into()));
    }
    let l = assemble_l(alpha, beta, v);
    for t in [a_vector(1), a_vector(2), l] {
        if dot4(r, &t) != 0 {
            return Err(LatticeError::InvalidParameter(
                "vector is not orthogonal to <a1, a2, l>".into(),
            ));
        }
    }
    match kind_from_shape(r) {
        Some(k) => Ok(k),
        None => Err(LatticeError::Degenerate(
            "mixed hyperbolic root contradicts the taxonomy hypotheses".into(),
        )),
    }
}

/// All x in Z^n with x^T g x = 2, for positive definite integral g.
/// Returns an error if g is not positive definite.
/// All integer coordinate vectors x with x G x^T = 2 for a positive
/// definite Gram matrix G, by exact rational LDL^T branch-and-bound.
pub fn norm_two_vectors(g: &IMat) -> Result<Vec<Vec<i64>>, LatticeError> {
    let n = g.rows();
    let (d, lmat) = ldl(g).ok_or_else(|| {
        LatticeError::Degenerate("root search region is not negative definite".into())
    })?;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate_level(
        n,
        &d,
        &lmat,
        &mut x,
        (n - 1) as isize,
        BigRational::zero(),
        &two,
        &mut out,
    );
    Ok(out)
}

/// LDL^T of a symmetric positive definite matrix; None when a pivot fails
/// to be positive (which certifies indefiniteness for symmetric input).
fn ldl(g: &IMat) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = g.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(g.at(i, j).clone()))
                .collect()
        })
        .collect();
    let mut d = vec![BigRational::zero(); n];
    let mut l: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for j in 0..n {
        let mut dj = a[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return None;
        }
        for i in j + 1..n {
            let mut s = a[i][j].clone();
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = s / &dj;
        }
        l[j][j] = BigRational::one();
        d[j] = dj;
        a[j][j] = BigRational::zero();
    }
    Some((d, l))
}

/// Depth-first search over x_level, ..., x_{n-1} with exact partial sums.
/// partial is the quadratic value contributed by the already-fixed tail;
/// acceptance requires the final sum to equal target exactly.
#[allow(clippy::too_many_arguments)]
fn enumerate_level(
    n: usize,
    d: &[BigRational],
    l: &[Vec<BigRational>],
    x: &mut Vec<i64>,
    level: isize,
    partial: BigRational,
    target: &BigRational,
    out: &mut Vec<Vec<i64>>,
) {
    if level < 0 {
        if &partial == target {
            out.push(x.clone());
        }
        return;
    }
    let j = level as usize;
    // center: y_j = x_j + sum_{k > j} L_kj x_k
    let mut c = BigRational::zero();
    for k in j + 1..n {
        if x[k] != 0 {
            c += &l[k][j] * BigRational::from_integer(BigInt::from(x[k]));
        }
    }
    let budget = target - &partial; // d_j (x_j + c)^2 <= budget
    let fits = |t: i64| -> Option<BigRational> {
        let y = BigRational::from_integer(BigInt::from(t)) + &c;
        let term = &d[j] * &y * &y;
        if term <= budget {
            Some(term)
        } else {
            None
        }
    };
    // floor(-c)
    let start = (-&c).floor().to_integer().to_i64().expect("range fits");
    let mut t = start;
    while let Some(term) = fits(t) {
        x[j] = t;
        enumerate_level(n, d, l, x, level - 1, &partial + &term, target, out);
        t -= 1;
    }
    t = start + 1;
    while let Some(term) = fits(t) {
        x[j] = t;
        enumerate_level(n, d, l, x, level - 1, &partial + &term, target, out);
        t += 1;
    }
    x[j] = 0;
}

/// Cells used across tests: l = alpha e + beta f with a pure D6 part given by
/// integer checkerboard coordinates.
pub fn d6_part(coords: &[i64; 6]) -> AmbientVector {
    let mut half = vec![0i64; 8];
    for (i, &c) in coords.iter().enumerate() {
        half[2 + i] = 2 * c;
    }
    AmbientVector::new(Frame::E8Frame8, half).expect("shape")
}
