//! Exact integer matrices with Hermite and Smith normal forms.
//!
//! Everything here runs over [`BigInt`]: the elimination steps used by both
//! normal forms can grow intermediate entries far beyond the input range, so
//! machine integers are not an option even for small matrices.
//!
//! Conventions:
//! * matrices act on *row* vectors — the lattice spanned by a matrix is the
//!   set of integer combinations of its rows;
//! * [`hnf`] returns the canonical row-style Hermite normal form with
//!   positive pivots, entries above a pivot reduced into `[0, pivot)`, and
//!   zero rows dropped, so two generating sets span the same lattice iff
//!   their HNFs are identical;
//! * [`snf`] returns `(u, d, v)` with `u * m * v = d`, `u`, `v` unimodular
//!   and `d` diagonal with non-negative entries forming a divisibility chain.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMat {
            rows: rows.len(),
            cols: ncols,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMat { rows: rows.len(), cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.at(dst, c) + factor * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// `(row_i, row_j) <- (m00*row_i + m01*row_j, m10*row_i + m11*row_j)`
    fn row_pair_transform(
        &mut self,
        i: usize,
        j: usize,
        m00: &BigInt,
        m01: &BigInt,
        m10: &BigInt,
        m11: &BigInt,
    ) {
        for c in 0..self.cols {
            let x = self.at(i, c).clone();
            let y = self.at(j, c).clone();
            self.set(i, c, m00 * &x + m01 * &y);
            self.set(j, c, m10 * &x + m11 * &y);
        }
    }

    /// Right multiplication on the column pair `(i, j)` by the 2x2 matrix
    /// `[m00 m01; m10 m11]`:
    /// `(col_i, col_j) <- (m00*col_i + m10*col_j, m01*col_i + m11*col_j)`.
    fn col_pair_transform(
        &mut self,
        i: usize,
        j: usize,
        m00: &BigInt,
        m01: &BigInt,
        m10: &BigInt,
        m11: &BigInt,
    ) {
        for r in 0..self.rows {
            let x = self.at(r, i).clone();
            let y = self.at(r, j).clone();
            self.set(r, i, m00 * &x + m10 * &y);
            self.set(r, j, m01 * &x + m11 * &y);
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.at(r, dst) + factor * self.at(r, src);
            self.set(r, dst, v);
        }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.at(r, c) + a * other.at(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (r, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                out[c] += coeff * self.at(r, c);
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.at(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Exact inverse of a unimodular matrix, via the adjugate.
    pub fn inverse_unimodular(&self) -> IntMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let det = self.det();
        assert!(det.abs().is_one(), "matrix is not unimodular");
        let mut inv = IntMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                // Cofactor expansion: inv[c][r] = (-1)^{r+c} * minor(r, c) / det.
                let mut minor = IntMat::zeros(n - 1, n - 1);
                for i in 0..n - 1 {
                    for j in 0..n - 1 {
                        let si = if i < r { i } else { i + 1 };
                        let sj = if j < c { j } else { j + 1 };
                        minor.set(i, j, self.at(si, sj).clone());
                    }
                }
                let mut cof = minor.det();
                if (r + c) % 2 == 1 {
                    cof = -cof;
                }
                inv.set(c, r, &cof * &det);
            }
        }
        inv
    }
}

/// Canonical row-style Hermite normal form; zero rows are dropped.
pub fn hnf(m: &IntMat) -> IntMat {
    let mut a = m.clone();
    let mut r = 0usize;
    for c in 0..a.ncols() {
        if r == a.nrows() {
            break;
        }
        // Euclidean elimination in column c among rows >= r.
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.nrows() {
                if !a.at(i, c).is_zero()
                    && best.map_or(true, |b| a.at(i, c).abs() < a.at(b, c).abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(r, b);
            let mut others = false;
            for i in r + 1..a.nrows() {
                if !a.at(i, c).is_zero() {
                    let q = a.at(i, c).div_floor(a.at(r, c));
                    a.add_row_multiple(i, r, &(-q));
                    if !a.at(i, c).is_zero() {
                        others = true;
                    }
                }
            }
            if !others {
                break;
            }
        }
        if a.at(r, c).is_zero() {
            continue;
        }
        if a.at(r, c).is_negative() {
            a.negate_row(r);
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = a.at(i, c).div_floor(a.at(r, c));
            a.add_row_multiple(i, r, &(-q));
        }
        r += 1;
    }
    let mut out = IntMat::zeros(r, a.ncols());
    for i in 0..r {
        for c in 0..a.ncols() {
            out.set(i, c, a.at(i, c).clone());
        }
    }
    out
}

/// Does the lattice spanned by the rows of `basis` (in HNF) contain `v`?
pub fn hnf_lattice_contains(basis: &IntMat, v: &[BigInt]) -> bool {
    assert_eq!(v.len(), basis.ncols());
    let mut rem: Vec<BigInt> = v.to_vec();
    for r in 0..basis.nrows() {
        let c = match (0..basis.ncols()).find(|&c| !basis.at(r, c).is_zero()) {
            Some(c) => c,
            None => continue,
        };
        let (q, rest) = rem[c].div_rem(basis.at(r, c));
        if !rest.is_zero() {
            return false;
        }
        if !q.is_zero() {
            for j in 0..basis.ncols() {
                let delta = &q * basis.at(r, j);
                rem[j] -= delta;
            }
        }
    }
    rem.iter().all(|x| x.is_zero())
}

#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithNormalForm {
    /// Diagonal entries of `d` (length `min(rows, cols)`).
    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols())).map(|i| self.d.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diag().iter().filter(|x| !x.is_zero()).count()
    }
}

/// In-place Hermite reduction by row operations, mirrored into `u`.  After
/// the call the matrix is in row echelon form with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`.
fn hermite_rows(a: &mut IntMat, u: &mut IntMat) {
    let mut pr = 0usize;
    for col in 0..a.ncols() {
        if pr == a.nrows() {
            break;
        }
        loop {
            // Euclid within the column: smallest nonzero entry up front.
            let mut best: Option<usize> = None;
            for r in pr..a.nrows() {
                if !a.at(r, col).is_zero()
                    && best.map_or(true, |b| a.at(r, col).abs() < a.at(b, col).abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pr, b);
            u.swap_rows(pr, b);
            let mut dirty = false;
            for r in pr + 1..a.nrows() {
                if !a.at(r, col).is_zero() {
                    let q = a.at(r, col).div_floor(a.at(pr, col));
                    a.add_row_multiple(r, pr, &(-&q));
                    u.add_row_multiple(r, pr, &(-q));
                    if !a.at(r, col).is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                if a.at(pr, col).is_negative() {
                    a.negate_row(pr);
                    u.negate_row(pr);
                }
                for r in 0..pr {
                    let q = a.at(r, col).div_floor(a.at(pr, col));
                    a.add_row_multiple(r, pr, &(-&q));
                    u.add_row_multiple(r, pr, &(-q));
                }
                pr += 1;
                break;
            }
        }
    }
}

/// Column-operation counterpart of [`hermite_rows`], mirrored into `v`.
fn hermite_cols(a: &mut IntMat, v: &mut IntMat) {
    let mut pc = 0usize;
    for row in 0..a.nrows() {
        if pc == a.ncols() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in pc..a.ncols() {
                if !a.at(row, c).is_zero()
                    && best.map_or(true, |b| a.at(row, c).abs() < a.at(row, b).abs())
                {
                    best = Some(c);
                }
            }
            let Some(b) = best else { break };
            a.swap_cols(pc, b);
            v.swap_cols(pc, b);
            let mut dirty = false;
            for c in pc + 1..a.ncols() {
                if !a.at(row, c).is_zero() {
                    let q = a.at(row, c).div_floor(a.at(row, pc));
                    a.add_col_multiple(c, pc, &(-&q));
                    v.add_col_multiple(c, pc, &(-q));
                    if !a.at(row, c).is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                if a.at(row, pc).is_negative() {
                    a.negate_col(pc);
                    v.negate_col(pc);
                }
                for c in 0..pc {
                    let q = a.at(row, c).div_floor(a.at(row, pc));
                    a.add_col_multiple(c, pc, &(-&q));
                    v.add_col_multiple(c, pc, &(-q));
                }
                pc += 1;
                break;
            }
        }
    }
}

fn is_diagonal(a: &IntMat) -> bool {
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            if r != c && !a.at(r, c).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Smith normal form with transform tracking: `u * m * v = d`.
///
/// Diagonalization alternates full row- and column-Hermite reductions.
/// Each half-pass produces the canonical echelon form of the current row
/// (resp. column) lattice, so entry sizes stay bounded by invariants of the
/// input instead of compounding across passes; the leading pivot weakly
/// decreases whenever a pass changes anything, which forces convergence.
/// A pairwise gcd/lcm transform then enforces the divisibility chain.
pub fn snf(m: &IntMat) -> SmithNormalForm {
    let mut a = m.clone();
    let mut u = IntMat::identity(m.nrows());
    let mut v = IntMat::identity(m.ncols());

    let mut rounds = 0usize;
    while !is_diagonal(&a) {
        hermite_rows(&mut a, &mut u);
        if is_diagonal(&a) {
            break;
        }
        hermite_cols(&mut a, &mut v);
        rounds += 1;
        assert!(rounds < 10_000, "Hermite alternation failed to converge");
    }

    // Move the nonzero diagonal entries to the front.
    let n = m.nrows().min(m.ncols());
    let mut front = 0usize;
    for i in 0..n {
        if !a.at(i, i).is_zero() {
            if i != front {
                a.swap_rows(front, i);
                u.swap_rows(front, i);
                a.swap_cols(front, i);
                v.swap_cols(front, i);
            }
            front += 1;
        }
    }

    // Divisibility chain: replace each offending pair (d_i, d_j) by
    // (gcd, lcm) with an explicit unimodular 2x2 transform.
    for i in 0..front {
        for j in i + 1..front {
            let di = a.at(i, i).clone();
            let dj = a.at(j, j).clone();
            if (&dj % &di).is_zero() {
                continue;
            }
            let e = di.extended_gcd(&dj);
            let (mut g, mut s, mut t) = (e.gcd, e.x, e.y); // s*di + t*dj = g
            if g.is_negative() {
                g = -g;
                s = -s;
                t = -t;
            }
            let di_g = &di / &g;
            let dj_g = &dj / &g;
            // rows: [s t; -dj/g di/g], cols: [1 -t*dj/g; 1 s*di/g];
            // both have determinant 1 and turn diag(di, dj) into
            // diag(g, di*dj/g).
            let neg_tdj = -(&t * &dj_g);
            let sdi = &s * &di_g;
            a.row_pair_transform(i, j, &s, &t, &(-&dj_g), &di_g);
            u.row_pair_transform(i, j, &s, &t, &(-dj_g), &di_g);
            a.col_pair_transform(i, j, &BigInt::one(), &neg_tdj, &BigInt::one(), &sdi);
            v.col_pair_transform(i, j, &BigInt::one(), &neg_tdj, &BigInt::one(), &sdi);
        }
    }

    for i in 0..front {
        if a.at(i, i).is_negative() {
            a.negate_row(i);
            u.negate_row(i);
        }
    }

    SmithNormalForm { u, d: a, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_i64(s: &SmithNormalForm) -> Vec<i64> {
        use num_traits::ToPrimitive;
        s.diag().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_hand_checked_examples() {
        // 2x2 with determinant -3: invariant factors 1, 3.
        let m = IntMat::from_rows(&[vec![1, -2], vec![-2, 1]]);
        let s = snf(&m);
        assert_eq!(diag_i64(&s), vec![1, 3]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());

        // Rank 1: invariant factors 1, 0.
        let m = IntMat::from_rows(&[vec![-1, -1], vec![-1, -1]]);
        let s = snf(&m);
        assert_eq!(diag_i64(&s), vec![1, 0]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);

        // Classic divisibility example: diag(2, 6) not diag(2, 2)*...
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 6]]);
        let s = snf(&m);
        assert_eq!(diag_i64(&s), vec![2, 6]);

        // Needs the chain fix-up: gcd of entries is 1.
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = snf(&m);
        assert_eq!(diag_i64(&s), vec![1, 6]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn snf_zero_and_empty() {
        let m = IntMat::zeros(2, 3);
        let s = snf(&m);
        assert_eq!(diag_i64(&s), vec![0, 0]);

        let m = IntMat::zeros(0, 3);
        let s = snf(&m);
        assert!(s.diag().is_empty());
        assert_eq!(s.d.ncols(), 3);
    }

    #[test]
    fn hnf_is_canonical() {
        // Two generating sets of the same lattice 2Z x Z + (1,1)Z... rows
        // (2,0),(1,1) and (1,1),(-1,1) both span {(a,b): a+b even}.
        let a = hnf(&IntMat::from_rows(&[vec![2, 0], vec![1, 1]]));
        let b = hnf(&IntMat::from_rows(&[vec![1, 1], vec![-1, 1]]));
        assert_eq!(a, b);
        assert_eq!(a.nrows(), 2);
        // Canonical form of this lattice: rows (1,1),(0,2).
        assert_eq!(a.at(0, 0), &BigInt::from(1));
        assert_eq!(a.at(0, 1), &BigInt::from(1));
        assert_eq!(a.at(1, 0), &BigInt::from(0));
        assert_eq!(a.at(1, 1), &BigInt::from(2));
    }

    #[test]
    fn hnf_membership() {
        let h = hnf(&IntMat::from_rows(&[vec![2, 0], vec![1, 1]]));
        let member = |x: i64, y: i64| {
            hnf_lattice_contains(&h, &[BigInt::from(x), BigInt::from(y)])
        };
        assert!(member(0, 0));
        assert!(member(1, 1));
        assert!(member(2, 0));
        assert!(member(-3, 5));
        assert!(!member(1, 0));
        assert!(!member(0, 1));
    }

    #[test]
    fn inverse_unimodular_roundtrip() {
        let m = IntMat::from_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![0, 0, 1]]);
        let inv = m.inverse_unimodular();
        assert_eq!(m.mul(&inv), IntMat::identity(3));
        assert_eq!(inv.mul(&m), IntMat::identity(3));
    }
}
