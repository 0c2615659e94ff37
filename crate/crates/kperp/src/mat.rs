//! Exact dense integer matrices and the small amount of linear algebra the
//! lattice layer needs: Bareiss determinants, Hermite normal form with a
//! unimodular transform, Smith invariant factors, saturated integer kernels,
//! and the inertia (signature) of a symmetric matrix over the rationals.
//!
//! Everything here is arbitrary precision; no floating point is used anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IMat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }

    /// Direct sum: block-diagonal concatenation.
    pub fn block_diag(&self, other: &IMat) -> IMat {
        let mut out = IMat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(i, j) = self.at(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                *out.at_mut(self.rows + i, self.cols + j) = other.at(i, j).clone();
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> IMat {
        let k = BigInt::from(k);
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= &k;
        }
        out
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.at(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    *m.at_mut(i, j) = num / &prev;
                }
                *m.at_mut(i, k) = BigInt::zero();
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let c = self.cols;
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn sub_scaled_row(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.at(source, j) * q;
            *self.at_mut(target, j) -= s;
        }
    }

    /// Row Hermite normal form together with a unimodular U such that
    /// U * self = H. Zero rows of H sit at the bottom; the matching rows of U
    /// form a basis of the saturated left kernel.
    pub fn hnf_with_transform(&self) -> (IMat, IMat) {
        let mut h = self.clone();
        let mut u = IMat::identity(self.rows);
        let (r, c) = (h.rows, h.cols);
        let mut row = 0usize;
        for col in 0..c {
            if row == r {
                break;
            }
            // gcd-reduce the column below `row` until one nonzero entry remains
            loop {
                let mut best: Option<usize> = None;
                for i in row..r {
                    if !h.at(i, col).is_zero() {
                        let better = match best {
                            None => true,
                            Some(b) => h.at(i, col).abs() < h.at(b, col).abs(),
                        };
                        if better {
                            best = Some(i);
                        }
                    }
                }
                let Some(p) = best else { break };
                h.swap_rows(row, p);
                u.swap_rows(row, p);
                let mut finished = true;
                for i in row + 1..r {
                    if !h.at(i, col).is_zero() {
                        let q = h.at(i, col) / h.at(row, col);
                        h.sub_scaled_row(i, row, &q);
                        u.sub_scaled_row(i, row, &q);
                        if !h.at(i, col).is_zero() {
                            finished = false;
                        }
                    }
                }
                if finished {
                    break;
                }
            }
            if row < r && !h.at(row, col).is_zero() {
                if h.at(row, col).is_negative() {
                    h.negate_row(row);
                    u.negate_row(row);
                }
                // reduce the entries above the pivot into canonical range
                for i in 0..row {
                    let q = h.at(i, col).div_floor(h.at(row, col));
                    h.sub_scaled_row(i, row, &q);
                    u.sub_scaled_row(i, row, &q);
                }
                row += 1;
            }
        }
        (h, u)
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }

    pub fn rank(&self) -> usize {
        let (h, _) = self.hnf_with_transform();
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    /// Basis of { x in Z^rows : x * self = 0 }, as rows. Saturated by
    /// construction (it is the kernel of a homomorphism to Z^cols).
    pub fn left_kernel(&self) -> IMat {
        let (h, u) = self.hnf_with_transform();
        let mut rows = Vec::new();
        for i in 0..h.rows {
            if h.row(i).iter().all(|x| x.is_zero()) {
                rows.push(u.row(i).to_vec());
            }
        }
        let data = rows.iter().flatten().cloned().collect();
        IMat { rows: rows.len(), cols: self.rows, data }
    }

    /// HNF rows with zero rows dropped: a canonical basis of the row span.
    pub fn row_basis(&self) -> IMat {
        let (h, _) = self.hnf_with_transform();
        let mut rows = Vec::new();
        for i in 0..h.rows {
            if h.row(i).iter().any(|x| !x.is_zero()) {
                rows.push(h.row(i).to_vec());
            }
        }
        let data = rows.iter().flatten().cloned().collect();
        IMat { rows: rows.len(), cols: self.cols, data }
    }

    /// Smith invariant factors d_1 | d_2 | ... (nonnegative; zeros last when
    /// the rank is deficient). Arbitrary-precision throughout.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let n = m.rows.min(m.cols);
        let mut t = 0usize;
        while t < n {
            // locate a smallest-magnitude nonzero pivot in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    if !m.at(i, j).is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => m.at(i, j).abs() < m.at(bi, bj).abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap_rows(t, pi);
            m.swap_cols(t, pj);
            // clear row and column t; restart if a division leaves a remainder
            let mut clean = true;
            for i in t + 1..m.rows {
                if !m.at(i, t).is_zero() {
                    let q = m.at(i, t) / m.at(t, t);
                    m.sub_scaled_row(i, t, &q);
                    if !m.at(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..m.cols {
                if !m.at(t, j).is_zero() {
                    let q = (m.at(t, j) / m.at(t, t)).clone();
                    m.sub_scaled_col(j, t, &q);
                    if !m.at(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide every remaining entry; if not, fold the
            // offending row into row t and redo this step
            let mut offender = None;
            'scan: for i in t + 1..m.rows {
                for j in t + 1..m.cols {
                    if !(m.at(i, j) % m.at(t, t)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = offender {
                let one = BigInt::one();
                for j in 0..m.cols {
                    let add = m.at(i, j) * &one;
                    *m.at_mut(t, j) += add;
                }
                continue;
            }
            t += 1;
        }
        let mut inv: Vec<BigInt> = (0..n).map(|i| m.at(i, i).abs()).collect();
        // zeros last, then enforce the divisibility chain
        inv.sort_by(|a, b| match (a.is_zero(), b.is_zero()) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            (false, false) => a.cmp(b),
        });
        inv
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.data.swap(i * c + a, i * c + b);
        }
    }

    fn sub_scaled_col(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.at(i, source) * q;
            *self.at_mut(i, target) -= s;
        }
    }
}

trait DivFloor {
    fn div_floor(&self, other: &BigInt) -> BigInt;
}

impl DivFloor for BigInt {
    fn div_floor(&self, other: &BigInt) -> BigInt {
        num::Integer::div_floor(self, other)
    }
}

/// Inertia (p, n, z) of a symmetric matrix: the counts of positive, negative
/// and zero eigenvalues, computed exactly by congruence with 1x1 and
/// hyperbolic 2x2 pivots. No eigenvalue is ever approximated.
pub fn inertia_symmetric(gram: &IMat) -> (usize, usize, usize) {
    assert!(gram.is_symmetric(), "inertia of a non-symmetric matrix");
    let n = gram.rows;
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from(gram.at(i, j).clone())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    loop {
        let k = m.len();
        if k == 0 {
            break;
        }
        if let Some(p) = (0..k).find(|&i| !m[i][i].is_zero()) {
            let pivot = m[p][p].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let rest: Vec<usize> = (0..k).filter(|&i| i != p).collect();
            let mut next = vec![vec![BigRational::zero(); rest.len()]; rest.len()];
            for (a, &i) in rest.iter().enumerate() {
                for (b, &j) in rest.iter().enumerate() {
                    next[a][b] = &m[i][j] - &(&m[i][p] * &m[p][j]) / &pivot;
                }
            }
            m = next;
        } else {
            // zero diagonal: look for an off-diagonal coupling
            let mut found = None;
            'outer: for i in 0..k {
                for j in i + 1..k {
                    if !m[i][j].is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            match found {
                None => {
                    zero += k;
                    break;
                }
                Some((pi, pj)) => {
                    // [[0, a], [a, 0]] contributes signature (1, 1)
                    pos += 1;
                    neg += 1;
                    let a = m[pi][pj].clone();
                    let rest: Vec<usize> = (0..k).filter(|&i| i != pi && i != pj).collect();
                    let mut next = vec![vec![BigRational::zero(); rest.len()]; rest.len()];
                    for (r, &i) in rest.iter().enumerate() {
                        for (s, &j) in rest.iter().enumerate() {
                            let corr = (&m[i][pi] * &m[pj][j] + &m[i][pj] * &m[pi][j]) / &a;
                            next[r][s] = &m[i][j] - &corr;
                        }
                    }
                    m = next;
                }
            }
        }
    }
    (pos, neg, zero)
}

/// Solve A x = b exactly over Q for square invertible A; None if singular.
pub fn solve_exact(a: &IMat, b: &[BigInt]) -> Option<Vec<BigRational>> {
    assert!(a.is_square());
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..n).map(|j| BigRational::from(a.at(i, j).clone())).collect();
            row.push(BigRational::from(b[i].clone()));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    m[i][j] = &m[i][j] - &(&f * &m[col][j]);
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}
