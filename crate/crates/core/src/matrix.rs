//! Dense integer matrices with exact arbitrary-precision entries, plus the
//! Smith and Hermite normal form computations everything else is built on.
//!
//! Matrices are row-major `Vec<BigInt>`. Sizes here are desk scale (a few
//! hundred rows/columns), so elementary-operation reduction with pivoting on
//! the least absolute value is entirely adequate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Convenience constructor from machine integers, mostly for tests.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn diagonal(entries: &[BigInt], rows: usize, cols: usize) -> Self {
        let mut m = IntMatrix::zero(rows, cols);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[BigInt]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i].clone();
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            m.set_column(j, col);
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = IntMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        m[(i, j)] += prod;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i += c * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.cols {
            if self[(j, k)].is_zero() {
                continue;
            }
            let t = &self[(j, k)] * c;
            self[(i, k)] += t;
        }
    }

    /// col_i += c * col_j
    fn add_col_multiple(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.rows {
            if self[(k, j)].is_zero() {
                continue;
            }
            let t = &self[(k, j)] * c;
            self[(k, i)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = -self[(i, k)].clone();
            self[(i, k)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for k in 0..self.rows {
            let v = -self[(k, j)].clone();
            self[(k, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal, `d_1 | d_2 | ...`, all diagonal entries nonnegative.
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Basis of the integer kernel lattice of the original matrix, one basis
    /// vector per column. The basis is saturated (the kernel is a direct
    /// summand), which the callers in homology rely on.
    pub fn kernel_basis(&self) -> IntMatrix {
        let n = self.d.nrows().min(self.d.ncols());
        let mut cols = Vec::new();
        for j in 0..self.d.ncols() {
            let zero_diag = j >= n || self.d[(j, j)].is_zero();
            if zero_diag {
                cols.push(self.v.column(j));
            }
        }
        IntMatrix::from_columns(self.v.nrows(), &cols)
    }

    /// Solve `M x = b` exactly over the integers; `None` when no integer
    /// solution exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let m = self.d.nrows();
        let c = self.d.ncols();
        assert_eq!(b.len(), m);
        let z = self.u.mul_vec(b);
        let n = m.min(c);
        let mut y = vec![BigInt::zero(); c];
        for i in 0..m {
            if i < n && !self.d[(i, i)].is_zero() {
                let (q, r) = z[i].div_rem(&self.d[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !z[i].is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&y))
    }

    /// Columnwise [`Snf::solve`]; `None` if any column fails.
    pub fn solve_matrix(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        let mut cols = Vec::with_capacity(rhs.ncols());
        for j in 0..rhs.ncols() {
            cols.push(self.solve(&rhs.column(j))?);
        }
        Some(IntMatrix::from_columns(self.d.ncols(), &cols))
    }
}

fn find_min_abs_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..m.nrows() {
        for j in k..m.ncols() {
            let e = &m[(i, j)];
            if e.is_zero() {
                continue;
            }
            let mag = e.magnitude();
            if mag.is_one() {
                return Some((i, j)); // cannot improve on a unit pivot
            }
            match best {
                None => best = Some((i, j)),
                Some(b) if mag < m[b].magnitude() => best = Some((i, j)),
                _ => {}
            }
        }
    }
    best
}

/// Smith normal form by elementary row/column operations with pivoting on
/// the least absolute value.
pub fn snf(m: &IntMatrix) -> Snf {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);

    for k in 0..steps {
        'pivot: loop {
            let Some((pi, pj)) = find_min_abs_pivot(&d, k) else {
                break 'pivot; // remaining block is zero
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            // Clear column k below the pivot with floor division; remainders
            // stay in [0, |pivot|) so the minimum shrinks strictly if any
            // remainder is nonzero.
            let mut dirty = false;
            for i in k + 1..rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = d[(i, k)].div_floor(&d[(k, k)]);
                let negq = -q;
                d.add_row_multiple(i, k, &negq);
                u.add_row_multiple(i, k, &negq);
                if !d[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = d[(k, j)].div_floor(&d[(k, k)]);
                let negq = -q;
                d.add_col_multiple(j, k, &negq);
                v.add_col_multiple(j, k, &negq);
                if !d[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }

            // Pivot now alone in its row and column. Enforce that it divides
            // every entry of the remaining block so the diagonal comes out in
            // divisibility order. A unit pivot divides everything.
            let p = d[(k, k)].clone();
            if p.magnitude().is_one() {
                break 'pivot;
            }
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if !d[(i, j)].mod_floor(&p).is_zero() {
                        d.add_row_multiple(k, i, &BigInt::one());
                        u.add_row_multiple(k, i, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break 'pivot;
            }
        }
    }

    for k in 0..steps {
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }

    Snf { u, d, v }
}

/// Canonical column-style Hermite normal form basis of the lattice spanned by
/// the columns of `m`. Zero columns are dropped; pivots are positive, pivot
/// rows strictly increase, and entries left of a pivot are reduced into
/// `[0, pivot)`. Two column lattices are equal iff their bases agree.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut w = m.clone();
    let mut pc = 0usize; // number of pivot columns fixed so far

    for row in 0..rows {
        if pc == cols {
            break;
        }
        // Reduce columns pc.. so at most one has a nonzero entry in this row.
        loop {
            let mut nonzero: Vec<usize> = (pc..cols).filter(|&j| !w[(row, j)].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by_key(|&j| w[(row, j)].abs());
            let j0 = nonzero[0];
            for &j in &nonzero[1..] {
                let q = w[(row, j)].div_floor(&w[(row, j0)]);
                let negq = -q;
                w.add_col_multiple(j, j0, &negq);
            }
        }
        let Some(j) = (pc..cols).find(|&j| !w[(row, j)].is_zero()) else {
            continue;
        };
        w.swap_cols(pc, j);
        if w[(row, pc)].is_negative() {
            w.negate_col(pc);
        }
        // Reduce the entries of earlier pivot columns in this row.
        let p = w[(row, pc)].clone();
        for j in 0..pc {
            let q = w[(row, j)].div_floor(&p);
            let negq = -q;
            w.add_col_multiple(j, pc, &negq);
        }
        pc += 1;
    }

    let cols_kept: Vec<Vec<BigInt>> = (0..pc).map(|j| w.column(j)).collect();
    IntMatrix::from_columns(rows, &cols_kept)
}

/// Whether `v` lies in the lattice spanned by the columns of a Hermite basis
/// produced by [`hnf_basis`].
pub fn hnf_contains(hnf: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(hnf.nrows(), v.len());
    let mut x = v.to_vec();
    let mut col = 0usize;
    for row in 0..hnf.nrows() {
        let pivot_here = col < hnf.ncols() && !hnf[(row, col)].is_zero() && {
            // col's pivot row is the first row with a nonzero entry
            (0..row).all(|r| hnf[(r, col)].is_zero())
        };
        if pivot_here {
            let (q, r) = x[row].div_rem(&hnf[(row, col)]);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for i in row..hnf.nrows() {
                    let t = &hnf[(i, col)] * &q;
                    x[i] -= t;
                }
            }
            col += 1;
        } else if !x[row].is_zero() {
            return false;
        }
    }
    x.iter().all(|e| e.is_zero())
}

/// Whether every column of `m` lies in the lattice of the Hermite basis.
pub fn hnf_contains_all(hnf: &IntMatrix, m: &IntMatrix) -> bool {
    (0..m.ncols()).all(|j| hnf_contains(hnf, &m.column(j)))
}

/// Solve `H x = v` for a Hermite basis `H` by forward substitution on the
/// pivot rows; `None` when `v` is outside the column lattice.
pub fn hnf_solve(hnf: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(hnf.nrows(), v.len());
    let mut x = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); hnf.ncols()];
    let mut col = 0usize;
    for row in 0..hnf.nrows() {
        let pivot_here = col < hnf.ncols()
            && !hnf[(row, col)].is_zero()
            && (0..row).all(|r| hnf[(r, col)].is_zero());
        if pivot_here {
            let (q, r) = x[row].div_rem(&hnf[(row, col)]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for i in row..hnf.nrows() {
                    if hnf[(i, col)].is_zero() {
                        continue;
                    }
                    let t = &hnf[(i, col)] * &q;
                    x[i] -= t;
                }
            }
            coeffs[col] = q;
            col += 1;
        } else if !x[row].is_zero() {
            return None;
        }
    }
    if x.iter().all(|e| e.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

/// Columnwise [`hnf_solve`].
pub fn hnf_solve_matrix(hnf: &IntMatrix, rhs: &IntMatrix) -> Option<IntMatrix> {
    let mut cols = Vec::with_capacity(rhs.ncols());
    for j in 0..rhs.ncols() {
        cols.push(hnf_solve(hnf, &rhs.column(j))?);
    }
    Some(IntMatrix::from_columns(hnf.ncols(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Fraction-free determinant (Bareiss), used as an independent oracle for
    /// unimodularity of the SNF transforms.
    fn bareiss_det(m: &IntMatrix) -> BigInt {
        assert_eq!(m.nrows(), m.ncols());
        let n = m.nrows();
        if n == 0 {
            return BigInt::one();
        }
        let mut a = m.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    let (q, r) = num.div_rem(&prev);
                    assert!(r.is_zero(), "bareiss division must be exact");
                    a[(i, j)] = q;
                }
            }
            for i in k + 1..n {
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn check_snf(m: &IntMatrix) -> Snf {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U*M*V != D");
        assert_eq!(bareiss_det(&s.u).abs(), BigInt::one(), "U not unimodular");
        assert_eq!(bareiss_det(&s.v).abs(), BigInt::one(), "V not unimodular");
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero on diagonal");
            }
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility chain broken");
            }
        }
        for d in &diag {
            assert!(!d.is_negative());
        }
        s
    }

    #[test]
    fn snf_diag_2_3_gives_1_6() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let s = check_snf(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(3, 2);
        let s = check_snf(&m);
        assert!(s.d.is_zero());
    }

    #[test]
    fn snf_single_entry() {
        let m = IntMatrix::from_rows(&[&[2]]);
        let s = check_snf(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(2)]);
    }

    #[test]
    fn snf_upper_triangular_2_1_0_2() {
        // determinant 4 and a unit somewhere: diag(1, 4)
        let m = IntMatrix::from_rows(&[&[2, 1], &[0, 2]]);
        let s = check_snf(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(4)]);
    }

    #[test]
    fn snf_known_4x4() {
        let m = IntMatrix::from_rows(&[
            &[-6, 111, -36, 6],
            &[5, -672, 210, 74],
            &[0, -255, 81, 24],
            &[-7, 255, -81, -10],
        ]);
        let s = check_snf(&m);
        assert_eq!(
            s.diagonal(),
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(21), BigInt::from(0)]
        );
    }

    #[test]
    fn kernel_basis_is_saturated_kernel() {
        let m = IntMatrix::from_rows(&[&[2, 4, 6], &[1, 2, 3]]);
        let s = check_snf(&m);
        let k = s.kernel_basis();
        assert_eq!(k.ncols(), 2);
        assert!(m.mul(&k).is_zero());
        // (1, 1, -1) is in the kernel and must be an integer combination
        let h = hnf_basis(&k);
        assert!(hnf_contains(&h, &[BigInt::from(1), BigInt::from(1), BigInt::from(-1)]));
    }

    #[test]
    fn solve_exact_and_unsolvable() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let s = snf(&m);
        let x = s.solve(&[BigInt::from(4), BigInt::from(9)]).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(s.solve(&[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn hnf_membership() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 4]]);
        let h = hnf_basis(&m);
        assert!(hnf_contains(&h, &[BigInt::from(2), BigInt::from(4)]));
        assert!(!hnf_contains(&h, &[BigInt::from(1), BigInt::from(0)]));
        assert!(!hnf_contains(&h, &[BigInt::from(0), BigInt::from(2)]));
    }

    #[test]
    fn hnf_canonical_under_column_moves() {
        let a = IntMatrix::from_rows(&[&[3, 1, 7], &[0, 2, 2], &[3, 3, 9]]);
        let b = IntMatrix::from_rows(&[&[1, 7, 3, 4], &[2, 2, 0, 2], &[3, 9, 3, 6]]);
        // b spans the same lattice: same columns plus a sum of two of them
        assert_eq!(hnf_basis(&a), hnf_basis(&b));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn snf_roundtrip_random(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-30i64..30, 25)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[i * 5 + j]));
            check_snf(&m);
        }

        #[test]
        fn hnf_spans_same_lattice(rows in 1usize..4, cols in 1usize..5, seed in proptest::collection::vec(-20i64..20, 20)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[i * 5 + j]));
            let h = hnf_basis(&m);
            // every original column is in the HNF lattice
            prop_assert!(hnf_contains_all(&h, &m));
            // and every HNF column is an integer combination of the originals
            let h2 = hnf_basis(&m.hstack(&h));
            prop_assert_eq!(h2, h);
        }
    }
}
